#include "ujel/jackknife.hpp"

#include "ujel/errors.hpp"
#include "ujel/summation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ujel {

bool PseudoValueSet::unit_coefficients() const noexcept {
    return std::all_of(ev_coefficients.begin(), ev_coefficients.end(),
                       [](double c) { return c == 1.0; });
}

double JackknifeVariance::sigma_hat() const { return std::sqrt(std::max(sigma_hat_sq, 0.0)); }

std::vector<std::vector<double>> group_pseudo_values(const UStatResult& ustat,
                                                     const MultiSampleDataset& data,
                                                     const KernelSpec& kernel) {
    if (ustat.leave_one_out.size() != data.total_size() || ustat.group_offsets != data.offsets()) {
        throw InputError("leave-one-out result does not match the dataset (" +
                         std::to_string(ustat.leave_one_out.size()) + " values for n=" +
                         std::to_string(data.total_size()) + ")");
    }
    if (kernel.k() != data.k()) throw InputError("kernel and dataset disagree on k");

    std::vector<std::vector<double>> out(data.k());
    for (std::size_t g = 0; g < data.k(); ++g) {
        const double ng = static_cast<double>(data.size(g));
        out[g].resize(data.size(g));
        for (std::size_t i = 0; i < data.size(g); ++i) {
            const double loo = ustat.leave_one_out[data.offsets()[g] + i];
            out[g][i] = ng * ustat.value - (ng - 1.0) * loo;
        }
    }
    return out;
}

std::vector<double> ev_coefficients(std::span<const std::size_t> sizes,
                                    std::span<const std::size_t> degrees) {
    if (sizes.size() != degrees.size() || sizes.empty()) {
        throw InputError("sizes and degrees must have the same nonzero length");
    }
    const std::size_t n = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
    const std::size_t m = std::accumulate(degrees.begin(), degrees.end(), std::size_t{0});
    if (n <= m) {
        throw InputError("pooled size n=" + std::to_string(n) + " must exceed pooled degree m=" +
                         std::to_string(m));
    }
    for (std::size_t g = 0; g < sizes.size(); ++g) {
        if (sizes[g] <= degrees[g]) {
            throw InputError("group " + std::to_string(g + 1) + " needs n_g > m_g");
        }
    }
    const double nd = static_cast<double>(n);
    const double md = static_cast<double>(m);
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t g = 0; g < sizes.size(); ++g) {
        const double ng = static_cast<double>(sizes[g]);
        const double mg = static_cast<double>(degrees[g]);
        // Grouped so that equal sizes/degrees give exactly 1.
        const double c = (nd * (nd - md) * ng - nd * (nd - 1.0) * (ng - mg)) / ((nd - md) * ng);
        out.insert(out.end(), sizes[g], c);
    }
    return out;
}

PseudoValueSet combined_pseudo_values(const UStatResult& ustat, const MultiSampleDataset& data,
                                      const KernelSpec& kernel) {
    PseudoValueSet pv;
    pv.group_pseudo = group_pseudo_values(ustat, data, kernel);
    pv.sizes = data.sizes();
    pv.degrees = kernel.degrees();
    pv.u_value = ustat.value;
    pv.ev_coefficients = ev_coefficients(pv.sizes, pv.degrees);

    const double n = static_cast<double>(data.total_size());
    const double m = static_cast<double>(kernel.total_degree());
    const double u = ustat.value;
    pv.combined.reserve(data.total_size());
    for (std::size_t g = 0; g < data.k(); ++g) {
        const double ng = static_cast<double>(pv.sizes[g]);
        const double mg = static_cast<double>(pv.degrees[g]);
        // V_l = a_g U + b_g V_g
        const double b = n * (n - 1.0) * (ng - mg) / (ng * (n - m) * (ng - 1.0));
        const double a = n - b * ng;
        for (double vg : pv.group_pseudo[g]) pv.combined.push_back(a * u + b * vg);
    }
    return pv;
}

PseudoValueSet pseudo_values(const MultiSampleDataset& data, const KernelSpec& kernel,
                             EvalPath path) {
    return combined_pseudo_values(leave_one_out(data, kernel, path), data, kernel);
}

JackknifeVariance jackknife_variance(const std::vector<std::vector<double>>& group_pseudo,
                                     double u_value, std::span<const std::size_t> sizes) {
    (void)u_value;  // group means equal U up to rounding; the estimator centers on the means
    if (group_pseudo.size() != sizes.size()) {
        throw InputError("group pseudo-values and sizes disagree on k");
    }
    JackknifeVariance out;
    out.per_group_terms.reserve(sizes.size());
    for (std::size_t g = 0; g < sizes.size(); ++g) {
        const auto& v = group_pseudo[g];
        if (v.size() != sizes[g]) throw InputError("group pseudo-value count mismatch");
        if (sizes[g] < 2) {
            throw InputError("jackknife variance needs n_g >= 2 (group " + std::to_string(g + 1) +
                             ")");
        }
        const double mean = compensated_mean(v);
        KahanSum ss;
        for (double x : v) ss.add((x - mean) * (x - mean));
        const double ng = static_cast<double>(sizes[g]);
        const double term = ss.value() / (ng * (ng - 1.0));
        out.per_group_terms.push_back(term);
        out.sigma_hat_sq += term;
    }
    return out;
}

JackknifeVariance jackknife_variance(const PseudoValueSet& pv, std::optional<double> theta) {
    JackknifeVariance out = jackknife_variance(pv.group_pseudo, pv.u_value, pv.sizes);
    if (theta) out.s_n_sq = s_n_squared(pv, *theta);
    return out;
}

double s_n_squared(const PseudoValueSet& pv, double theta) {
    KahanSum ss;
    for (std::size_t l = 0; l < pv.n(); ++l) {
        const double d = pv.combined[l] - theta * pv.ev_coefficients[l];
        ss.add(d * d);
    }
    return ss.value() / static_cast<double>(pv.n());
}

}  // namespace ujel
