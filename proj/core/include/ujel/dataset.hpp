#pragma once

#include "ujel/matrix.hpp"

#include <cstddef>
#include <vector>

namespace ujel {

/// k independent samples of q-dimensional observations. Immutable once validated.
///
/// Group g occupies pooled indices [offset(g), offset(g) + size(g)), groups concatenated
/// in order, which is the indexing used for leave-one-out values and pseudo-values.
class MultiSampleDataset {
public:
    std::size_t k() const noexcept { return groups_.size(); }
    std::size_t q() const noexcept { return q_; }
    std::size_t size(std::size_t g) const { return groups_[g].rows(); }
    std::size_t total_size() const noexcept { return offsets_.back(); }
    const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }
    /// Prefix sums of group sizes, length k + 1.
    const std::vector<std::size_t>& offsets() const noexcept { return offsets_; }
    const Matrix& group(std::size_t g) const { return groups_[g]; }
    const std::vector<Matrix>& groups() const noexcept { return groups_; }

    /// Group holding pooled index `l`.
    std::size_t group_of(std::size_t l) const;

    /// Copy with pooled observation `l` removed from its group (no validation of sizes).
    MultiSampleDataset without(std::size_t l) const;

    friend MultiSampleDataset validate_dataset(std::vector<Matrix> raw);
    friend bool operator==(const MultiSampleDataset& a, const MultiSampleDataset& b) {
        return a.groups_ == b.groups_;
    }

private:
    MultiSampleDataset() = default;

    std::vector<Matrix> groups_;
    std::vector<std::size_t> sizes_;
    std::vector<std::size_t> offsets_{0};
    std::size_t q_ = 0;
};

/// Checks k >= 2, nonempty groups, a common column count and finite entries.
/// Throws InputError naming the offending group/row/column (1-based).
MultiSampleDataset validate_dataset(std::vector<Matrix> raw);

}  // namespace ujel
