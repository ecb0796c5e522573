#include "ujel/ustat.hpp"

#include "ujel/errors.hpp"
#include "ujel/summation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ujel {

namespace {

double binomial(std::size_t n, std::size_t m) {
    if (m > n) return 0.0;
    m = std::min(m, n - m);
    double out = 1.0;
    for (std::size_t i = 1; i <= m; ++i) {
        out = out * static_cast<double>(n - m + i) / static_cast<double>(i);
    }
    return std::round(out);
}

bool counting_available(const KernelSpec& kernel) {
    if (kernel.order_form() == nullptr) return false;
    const auto& d = kernel.degrees();
    return std::all_of(d.begin(), d.end(), [](std::size_t m) { return m == 1; });
}

EvalPath resolve_path(const MultiSampleDataset& data, const KernelSpec& kernel, EvalPath requested) {
    const bool counting_ok = counting_available(kernel);
    switch (requested) {
        case EvalPath::Counting:
            if (!counting_ok) {
                throw InputError("kernel '" + kernel.name() +
                                 "' has no counting path; only the oracle path applies");
            }
            return EvalPath::Counting;
        case EvalPath::Oracle:
            return EvalPath::Oracle;
        case EvalPath::Auto:
            break;
    }
    if (counting_ok && combination_count(data, kernel) > kAutoOracleCombinations) {
        return EvalPath::Counting;
    }
    return EvalPath::Oracle;
}

/// All m-subsets of {0..n-1} in lexicographic order, flattened.
std::vector<std::size_t> subsets(std::size_t n, std::size_t m) {
    std::vector<std::size_t> out;
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    while (true) {
        out.insert(out.end(), idx.begin(), idx.end());
        std::size_t pos = m;
        while (pos > 0 && idx[pos - 1] == n - m + (pos - 1)) --pos;
        if (pos == 0) break;
        ++idx[pos - 1];
        for (std::size_t j = pos; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

struct EnumerationResult {
    double total = 0.0;
    std::vector<double> contributions;  // per pooled index, sum of h over combos containing it
    std::uint64_t calls = 0;
};

EnumerationResult enumerate(const MultiSampleDataset& data, const KernelSpec& kernel,
                            bool per_observation) {
    const std::size_t k = data.k();
    const auto& degrees = kernel.degrees();
    const auto& offsets = data.offsets();

    std::vector<std::vector<std::size_t>> combos(k);
    std::vector<std::size_t> combo_count(k);
    for (std::size_t g = 0; g < k; ++g) {
        combos[g] = subsets(data.size(g), degrees[g]);
        combo_count[g] = combos[g].size() / degrees[g];
    }
    std::vector<std::size_t> row_start(k, 0);
    for (std::size_t g = 1; g < k; ++g) row_start[g] = row_start[g - 1] + degrees[g - 1];

    KahanSum total;
    std::vector<KahanSum> contrib(per_observation ? data.total_size() : 0);
    std::vector<RowView> rows(kernel.total_degree());
    std::vector<std::size_t> odometer(k, 0);
    std::uint64_t calls = 0;

    while (true) {
        for (std::size_t g = 0; g < k; ++g) {
            const std::size_t* members = combos[g].data() + odometer[g] * degrees[g];
            for (std::size_t j = 0; j < degrees[g]; ++j) {
                rows[row_start[g] + j] = data.group(g).row(members[j]);
            }
        }
        const double h = kernel.evaluate_unchecked(rows);
        ++calls;
        total.add(h);
        if (per_observation) {
            for (std::size_t g = 0; g < k; ++g) {
                const std::size_t* members = combos[g].data() + odometer[g] * degrees[g];
                for (std::size_t j = 0; j < degrees[g]; ++j) contrib[offsets[g] + members[j]].add(h);
            }
        }
        bool exhausted = true;
        for (std::size_t g = k; g-- > 0;) {
            if (++odometer[g] < combo_count[g]) {
                exhausted = false;
                break;
            }
            odometer[g] = 0;
        }
        if (exhausted) break;
    }

    EnumerationResult out;
    out.total = total.value();
    out.calls = calls;
    if (per_observation) {
        out.contributions.resize(contrib.size());
        for (std::size_t l = 0; l < contrib.size(); ++l) out.contributions[l] = contrib[l].value();
    }
    return out;
}

/// Per chain term: total number of strictly increasing chains across groups, and the number
/// of chains passing through each pooled observation.
struct ChainCounts {
    double total = 0.0;
    std::vector<double> through;
};

ChainCounts count_chains(const MultiSampleDataset& data, std::size_t column, bool per_observation) {
    const std::size_t k = data.k();
    const auto& offsets = data.offsets();

    // Sorted values and the permutation that sorts each group.
    std::vector<std::vector<double>> sorted(k);
    std::vector<std::vector<std::size_t>> order(k);
    std::vector<std::vector<double>> values(k);
    for (std::size_t g = 0; g < k; ++g) {
        values[g] = data.group(g).column_values(column);
        order[g].resize(values[g].size());
        std::iota(order[g].begin(), order[g].end(), std::size_t{0});
        std::sort(order[g].begin(), order[g].end(),
                  [&](std::size_t a, std::size_t b) { return values[g][a] < values[g][b]; });
        sorted[g].resize(values[g].size());
        for (std::size_t i = 0; i < order[g].size(); ++i) sorted[g][i] = values[g][order[g][i]];
    }

    // forward[g][i]: chains over groups 0..g ending at observation i of group g.
    std::vector<std::vector<double>> forward(k);
    forward[0].assign(data.size(0), 1.0);
    for (std::size_t g = 1; g < k; ++g) {
        const std::size_t prev_n = data.size(g - 1);
        std::vector<double> prefix(prev_n + 1, 0.0);
        for (std::size_t i = 0; i < prev_n; ++i) {
            prefix[i + 1] = prefix[i] + forward[g - 1][order[g - 1][i]];
        }
        forward[g].resize(data.size(g));
        for (std::size_t i = 0; i < data.size(g); ++i) {
            auto pos = std::lower_bound(sorted[g - 1].begin(), sorted[g - 1].end(), values[g][i]);
            forward[g][i] = prefix[static_cast<std::size_t>(pos - sorted[g - 1].begin())];
        }
    }

    // backward[g][i]: chains over groups g..k-1 starting at observation i of group g.
    std::vector<std::vector<double>> backward(k);
    backward[k - 1].assign(data.size(k - 1), 1.0);
    for (std::size_t g = k - 1; g-- > 0;) {
        const std::size_t next_n = data.size(g + 1);
        std::vector<double> suffix(next_n + 1, 0.0);
        for (std::size_t i = next_n; i-- > 0;) {
            suffix[i] = suffix[i + 1] + backward[g + 1][order[g + 1][i]];
        }
        backward[g].resize(data.size(g));
        for (std::size_t i = 0; i < data.size(g); ++i) {
            auto pos = std::upper_bound(sorted[g + 1].begin(), sorted[g + 1].end(), values[g][i]);
            backward[g][i] = suffix[static_cast<std::size_t>(pos - sorted[g + 1].begin())];
        }
    }

    ChainCounts out;
    for (double b : backward[0]) out.total += b;
    if (per_observation) {
        out.through.resize(data.total_size());
        for (std::size_t g = 0; g < k; ++g) {
            for (std::size_t i = 0; i < data.size(g); ++i) {
                out.through[offsets[g] + i] = forward[g][i] * backward[g][i];
            }
        }
    }
    return out;
}

UStatResult evaluate(const MultiSampleDataset& data, const KernelSpec& kernel, EvalPath requested,
                     bool with_leave_one_out) {
    kernel.check_compatible(data);
    const auto& degrees = kernel.degrees();
    if (with_leave_one_out) {
        for (std::size_t g = 0; g < data.k(); ++g) {
            if (data.size(g) <= degrees[g]) {
                throw InputError("group " + std::to_string(g + 1) + " has n=" +
                                 std::to_string(data.size(g)) + " equal to its degree " +
                                 std::to_string(degrees[g]) + "; deletion impossible");
            }
        }
    }

    UStatResult result;
    result.group_offsets = data.offsets();
    result.stats.path = resolve_path(data, kernel, requested);
    const double combos = combination_count(data, kernel);
    const std::size_t n = data.total_size();

    if (result.stats.path == EvalPath::Oracle) {
        if (combos > kKernelCallWarning) {
            result.stats.warnings.push_back("enumerating " + std::to_string(combos) +
                                            " kernel combinations");
        }
        const EnumerationResult e = enumerate(data, kernel, with_leave_one_out);
        result.stats.kernel_calls = e.calls;
        result.value = e.total / combos;
        if (with_leave_one_out) {
            result.leave_one_out.resize(n);
            for (std::size_t l = 0; l < n; ++l) {
                const std::size_t g = data.group_of(l);
                const double ng = static_cast<double>(data.size(g));
                const double remaining = combos * (ng - static_cast<double>(degrees[g])) / ng;
                result.leave_one_out[l] = (e.total - e.contributions[l]) / remaining;
            }
        }
        return result;
    }

    const OrderIndicatorForm& form = *kernel.order_form();
    double total_count = 1.0;
    for (std::size_t g = 0; g < data.k(); ++g) total_count *= static_cast<double>(data.size(g));

    std::vector<ChainCounts> counts;
    counts.reserve(form.terms.size());
    for (const auto& term : form.terms) {
        counts.push_back(count_chains(data, term.column, with_leave_one_out));
    }

    result.value = form.offset;
    for (std::size_t t = 0; t < counts.size(); ++t) {
        result.value += form.terms[t].weight * (counts[t].total / total_count);
    }
    if (with_leave_one_out) {
        result.leave_one_out.resize(n);
        for (std::size_t l = 0; l < n; ++l) {
            const std::size_t g = data.group_of(l);
            const double ng = static_cast<double>(data.size(g));
            const double remaining = total_count / ng * (ng - 1.0);
            double v = form.offset;
            for (std::size_t t = 0; t < counts.size(); ++t) {
                v += form.terms[t].weight * ((counts[t].total - counts[t].through[l]) / remaining);
            }
            result.leave_one_out[l] = v;
        }
    }
    return result;
}

}  // namespace

std::string_view to_string(EvalPath path) {
    switch (path) {
        case EvalPath::Auto: return "auto";
        case EvalPath::Oracle: return "oracle";
        case EvalPath::Counting: return "counting";
    }
    return "unknown";
}

double combination_count(const MultiSampleDataset& data, const KernelSpec& kernel) {
    double out = 1.0;
    for (std::size_t g = 0; g < kernel.k() && g < data.k(); ++g) {
        out *= binomial(data.size(g), kernel.degrees()[g]);
    }
    return out;
}

double u_statistic(const MultiSampleDataset& data, const KernelSpec& kernel, EvalPath path) {
    return evaluate(data, kernel, path, false).value;
}

UStatResult leave_one_out(const MultiSampleDataset& data, const KernelSpec& kernel, EvalPath path) {
    return evaluate(data, kernel, path, true);
}

}  // namespace ujel
