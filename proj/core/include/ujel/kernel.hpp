#pragma once

#include "ujel/dataset.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ujel {

using RowView = std::span<const double>;

/// Kernel evaluator. Receives m_1 rows from group 1, then m_2 rows from group 2, and so on.
/// Must be pure: the engine may call it from several threads at once.
using KernelFn = std::function<double(std::span<const RowView>)>;

/// One strict ordering chain I(x^(1)[column] < x^(2)[column] < ... < x^(k)[column]).
struct OrderChainTerm {
    std::size_t column = 0;
    double weight = 1.0;
};

/// h = offset + sum_t weight_t * chain_t. Kernels of this form with degrees (1,...,1)
/// are evaluated by rank counting instead of enumeration.
struct OrderIndicatorForm {
    double offset = 0.0;
    std::vector<OrderChainTerm> terms;
};

/// A kernel h of degree (m_1, ..., m_k). theta = E[h] is the inference target.
///
/// Symmetry of h within each group's arguments is part of the contract but is not checked;
/// for degrees (1,...,1) it holds trivially.
class KernelSpec {
public:
    KernelSpec(std::string name, std::vector<std::size_t> degrees, KernelFn fn,
               std::optional<std::size_t> dimension = std::nullopt);

    /// Kernel built from an order-indicator form; degrees are all 1.
    static KernelSpec order_indicator(std::string name, std::size_t k, OrderIndicatorForm form,
                                      std::optional<std::size_t> dimension);

    const std::string& name() const noexcept { return name_; }
    const std::vector<std::size_t>& degrees() const noexcept { return degrees_; }
    std::size_t k() const noexcept { return degrees_.size(); }
    std::size_t total_degree() const noexcept { return total_degree_; }
    /// Required observation dimension, if the kernel fixes one.
    std::optional<std::size_t> dimension() const noexcept { return dimension_; }
    /// Non-null when the counting path applies.
    const OrderIndicatorForm* order_form() const noexcept {
        return order_form_ ? &*order_form_ : nullptr;
    }

    /// Arity-checked evaluation.
    double operator()(std::span<const RowView> rows) const;
    /// Evaluation without arity checks, for the enumeration loop.
    double evaluate_unchecked(std::span<const RowView> rows) const { return fn_(rows); }

    /// a * h
    KernelSpec scaled(double a) const;
    /// h + b
    KernelSpec shifted(double b) const;

    /// Throws InputError unless k, q and m_g <= n_g match the dataset.
    void check_compatible(const MultiSampleDataset& data) const;

private:
    std::string name_;
    std::vector<std::size_t> degrees_;
    std::size_t total_degree_ = 0;
    KernelFn fn_;
    std::optional<std::size_t> dimension_;
    std::optional<OrderIndicatorForm> order_form_;
};

/// Names accepted by builtin_kernel: "vus-diff", "hum-diff", "vus", "prob-order".
std::span<const std::string_view> builtin_kernel_names();

/// vus-diff (k = 3, q = 2) and hum-diff (k >= 2, q = 2):
///   I(x1 < y1 < ...) - I(x2 < y2 < ...), strict, ties give 0.
/// vus (k = 3, q = 1) and prob-order (k >= 2, q = 1): I(x < y < ...).
KernelSpec builtin_kernel(std::string_view name, std::size_t k);

/// h == c with the given degrees. Degrees all 1 keep the counting path available.
KernelSpec constant_kernel(double c, std::vector<std::size_t> degrees);

}  // namespace ujel
