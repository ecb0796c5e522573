#include "ujel/dataset.hpp"

#include "ujel/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ujel {

std::size_t MultiSampleDataset::group_of(std::size_t l) const {
    if (l >= total_size()) throw InputError("pooled index out of range");
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), l);
    return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

MultiSampleDataset MultiSampleDataset::without(std::size_t l) const {
    const std::size_t g = group_of(l);
    const std::size_t local = l - offsets_[g];
    const Matrix& src = groups_[g];
    if (src.rows() == 1) throw InputError("cannot remove the only observation of a group");

    std::vector<double> kept;
    kept.reserve((src.rows() - 1) * q_);
    for (std::size_t r = 0; r < src.rows(); ++r) {
        if (r == local) continue;
        auto row = src.row(r);
        kept.insert(kept.end(), row.begin(), row.end());
    }
    MultiSampleDataset out = *this;
    out.groups_[g] = Matrix(src.rows() - 1, q_, std::move(kept));
    out.sizes_[g] -= 1;
    for (std::size_t h = g + 1; h < out.offsets_.size(); ++h) out.offsets_[h] -= 1;
    return out;
}

MultiSampleDataset validate_dataset(std::vector<Matrix> raw) {
    if (raw.size() < 2) {
        throw InputError("a dataset needs at least 2 groups, got " + std::to_string(raw.size()));
    }
    const std::size_t q = raw.front().cols();
    for (std::size_t g = 0; g < raw.size(); ++g) {
        const Matrix& m = raw[g];
        if (m.rows() == 0) throw InputError("group " + std::to_string(g + 1) + " is empty");
        if (m.cols() != q) {
            throw InputError("dimension mismatch q=" + std::to_string(q) +
                             " vs q=" + std::to_string(m.cols()) + " in group " +
                             std::to_string(g + 1));
        }
        if (q == 0) throw InputError("group " + std::to_string(g + 1) + " has no columns");
        for (std::size_t r = 0; r < m.rows(); ++r) {
            for (std::size_t c = 0; c < q; ++c) {
                if (!std::isfinite(m(r, c))) {
                    throw InputError("non-finite value in group " + std::to_string(g + 1) +
                                     ", row " + std::to_string(r + 1) + ", column " +
                                     std::to_string(c + 1));
                }
            }
        }
    }

    MultiSampleDataset ds;
    ds.q_ = q;
    ds.sizes_.reserve(raw.size());
    for (const Matrix& m : raw) {
        ds.sizes_.push_back(m.rows());
        ds.offsets_.push_back(ds.offsets_.back() + m.rows());
    }
    ds.groups_ = std::move(raw);
    return ds;
}

}  // namespace ujel
