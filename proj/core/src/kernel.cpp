#include "ujel/kernel.hpp"

#include "ujel/errors.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <string>
#include <utility>

namespace ujel {

namespace {

constexpr std::array<std::string_view, 4> kBuiltinNames{"vus-diff", "hum-diff", "vus",
                                                        "prob-order"};

bool chain_holds(std::span<const RowView> rows, std::size_t column) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (!(rows[i - 1][column] < rows[i][column])) return false;
    }
    return true;
}

std::string builtin_list() {
    std::string out;
    for (auto name : kBuiltinNames) {
        if (!out.empty()) out += ", ";
        out += name;
    }
    return out;
}

}  // namespace

KernelSpec::KernelSpec(std::string name, std::vector<std::size_t> degrees, KernelFn fn,
                       std::optional<std::size_t> dimension)
    : name_(std::move(name)),
      degrees_(std::move(degrees)),
      fn_(std::move(fn)),
      dimension_(dimension) {
    if (degrees_.size() < 2) throw InputError("kernel '" + name_ + "' needs at least 2 groups");
    for (std::size_t m : degrees_) {
        if (m == 0) throw InputError("kernel '" + name_ + "' has a zero degree");
    }
    if (!fn_) throw InputError("kernel '" + name_ + "' has no evaluator");
    total_degree_ = std::accumulate(degrees_.begin(), degrees_.end(), std::size_t{0});
}

KernelSpec KernelSpec::order_indicator(std::string name, std::size_t k, OrderIndicatorForm form,
                                       std::optional<std::size_t> dimension) {
    for (const auto& t : form.terms) {
        if (dimension && t.column >= *dimension) {
            throw InputError("order term column " + std::to_string(t.column) +
                             " outside dimension " + std::to_string(*dimension));
        }
    }
    KernelFn fn = [form](std::span<const RowView> rows) {
        double h = form.offset;
        for (const auto& t : form.terms) {
            if (chain_holds(rows, t.column)) h += t.weight;
        }
        return h;
    };
    KernelSpec spec(std::move(name), std::vector<std::size_t>(k, 1), std::move(fn), dimension);
    spec.order_form_ = std::move(form);
    return spec;
}

double KernelSpec::operator()(std::span<const RowView> rows) const {
    if (rows.size() != total_degree_) {
        throw InputError("kernel '" + name_ + "' expects " + std::to_string(total_degree_) +
                         " rows, got " + std::to_string(rows.size()));
    }
    if (dimension_) {
        for (const auto& r : rows) {
            if (r.size() != *dimension_) {
                throw InputError("kernel '" + name_ + "' expects rows of dimension " +
                                 std::to_string(*dimension_) + ", got " +
                                 std::to_string(r.size()));
            }
        }
    }
    return fn_(rows);
}

KernelSpec KernelSpec::scaled(double a) const {
    if (order_form_) {
        OrderIndicatorForm form = *order_form_;
        form.offset *= a;
        for (auto& t : form.terms) t.weight *= a;
        return order_indicator(name_ + "*" + std::to_string(a), k(), std::move(form), dimension_);
    }
    KernelFn inner = fn_;
    KernelSpec out(name_ + "*" + std::to_string(a), degrees_,
                   [inner, a](std::span<const RowView> rows) { return a * inner(rows); },
                   dimension_);
    return out;
}

KernelSpec KernelSpec::shifted(double b) const {
    if (order_form_) {
        OrderIndicatorForm form = *order_form_;
        form.offset += b;
        return order_indicator(name_ + "+" + std::to_string(b), k(), std::move(form), dimension_);
    }
    KernelFn inner = fn_;
    return KernelSpec(name_ + "+" + std::to_string(b), degrees_,
                      [inner, b](std::span<const RowView> rows) { return inner(rows) + b; },
                      dimension_);
}

void KernelSpec::check_compatible(const MultiSampleDataset& data) const {
    if (data.k() != k()) {
        throw InputError("kernel '" + name_ + "' takes " + std::to_string(k()) +
                         " groups, dataset has " + std::to_string(data.k()));
    }
    if (dimension_ && data.q() != *dimension_) {
        throw InputError("kernel '" + name_ + "' needs q=" + std::to_string(*dimension_) +
                         ", dataset has q=" + std::to_string(data.q()));
    }
    for (std::size_t g = 0; g < k(); ++g) {
        if (degrees_[g] > data.size(g)) {
            throw InputError("degree " + std::to_string(degrees_[g]) + " exceeds size " +
                             std::to_string(data.size(g)) + " of group " +
                             std::to_string(g + 1));
        }
    }
}

std::span<const std::string_view> builtin_kernel_names() { return kBuiltinNames; }

KernelSpec builtin_kernel(std::string_view name, std::size_t k) {
    auto need_k = [&](bool ok, const char* what) {
        if (!ok) {
            throw InputError("kernel '" + std::string(name) + "' requires " + what + ", got k=" +
                             std::to_string(k));
        }
    };
    if (name == "vus-diff" || name == "hum-diff") {
        need_k(name == "vus-diff" ? k == 3 : k >= 2, name == "vus-diff" ? "k=3" : "k>=2");
        OrderIndicatorForm form{0.0, {{0, 1.0}, {1, -1.0}}};
        return KernelSpec::order_indicator(std::string(name), k, std::move(form), 2);
    }
    if (name == "vus" || name == "prob-order") {
        need_k(name == "vus" ? k == 3 : k >= 2, name == "vus" ? "k=3" : "k>=2");
        OrderIndicatorForm form{0.0, {{0, 1.0}}};
        return KernelSpec::order_indicator(std::string(name), k, std::move(form), 1);
    }
    throw InputError("unknown kernel '" + std::string(name) + "'; built-ins: " + builtin_list());
}

KernelSpec constant_kernel(double c, std::vector<std::size_t> degrees) {
    const bool all_one = std::all_of(degrees.begin(), degrees.end(),
                                     [](std::size_t m) { return m == 1; });
    if (all_one) {
        return KernelSpec::order_indicator("constant", degrees.size(), OrderIndicatorForm{c, {}},
                                           std::nullopt);
    }
    return KernelSpec("constant", std::move(degrees),
                      [c](std::span<const RowView>) { return c; });
}

}  // namespace ujel
