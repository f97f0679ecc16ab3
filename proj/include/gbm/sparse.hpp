#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gbm/errors.hpp"

namespace gbm {

/// Fixed-pattern CSR matrix holding both triangles of a symmetric operator.
/// The pattern is set once; values are overwritten on every assembly.
template <class Real = double>
class SparseSymmetricMatrix {
public:
    SparseSymmetricMatrix() = default;

    /// Builds the pattern from (row, col) pairs; pairs are mirrored and deduplicated.
    SparseSymmetricMatrix(std::size_t dimension, std::span<const std::pair<std::size_t, std::size_t>> entries)
        : dimension_(dimension) {
        std::vector<std::vector<std::size_t>> rows(dimension);
        for (auto [r, c] : entries) {
            if (r >= dimension || c >= dimension) throw SizeMismatch("sparse entry out of range");
            rows[r].push_back(c);
            rows[c].push_back(r);
        }
        row_start_.assign(dimension + 1, 0);
        for (std::size_t r = 0; r < dimension; ++r) {
            auto& cols = rows[r];
            cols.push_back(r);
            std::sort(cols.begin(), cols.end());
            cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
            row_start_[r + 1] = row_start_[r] + cols.size();
        }
        columns_.reserve(row_start_.back());
        for (const auto& cols : rows) columns_.insert(columns_.end(), cols.begin(), cols.end());
        values_.assign(columns_.size(), Real{0});
    }

    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t nonzeros() const noexcept { return values_.size(); }

    std::span<const std::size_t> row_start() const noexcept { return row_start_; }
    std::span<const std::size_t> columns() const noexcept { return columns_; }
    std::span<const Real> values() const noexcept { return values_; }
    std::span<Real> values() noexcept { return values_; }

    /// Storage slot of (r, c); throws if the entry is outside the pattern.
    std::size_t slot(std::size_t r, std::size_t c) const {
        const auto first = columns_.begin() + static_cast<std::ptrdiff_t>(row_start_.at(r));
        const auto last = columns_.begin() + static_cast<std::ptrdiff_t>(row_start_.at(r + 1));
        const auto it = std::lower_bound(first, last, c);
        if (it == last || *it != c) throw std::out_of_range("entry not in sparsity pattern");
        return static_cast<std::size_t>(it - columns_.begin());
    }

    /// Value at (r, c), zero outside the pattern.
    Real at(std::size_t r, std::size_t c) const {
        if (r >= dimension_ || c >= dimension_) throw std::out_of_range("matrix index");
        const auto first = columns_.begin() + static_cast<std::ptrdiff_t>(row_start_[r]);
        const auto last = columns_.begin() + static_cast<std::ptrdiff_t>(row_start_[r + 1]);
        const auto it = std::lower_bound(first, last, c);
        if (it == last || *it != c) return Real{0};
        return values_[static_cast<std::size_t>(it - columns_.begin())];
    }

    void set_zero() { std::fill(values_.begin(), values_.end(), Real{0}); }

    void add_to_diagonal(std::span<const Real> d) {
        if (d.size() != dimension_) throw SizeMismatch("diagonal length mismatch");
        for (std::size_t r = 0; r < dimension_; ++r) values_[slot(r, r)] += d[r];
    }

    std::vector<Real> diagonal() const {
        std::vector<Real> d(dimension_);
        for (std::size_t r = 0; r < dimension_; ++r) d[r] = values_[slot(r, r)];
        return d;
    }

    /// y = A x
    void multiply(std::span<const Real> x, std::span<Real> y) const {
        if (x.size() != dimension_ || y.size() != dimension_) throw SizeMismatch("matvec length mismatch");
        for (std::size_t r = 0; r < dimension_; ++r) {
            Real sum{0};
            for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) sum += values_[k] * x[columns_[k]];
            y[r] = sum;
        }
    }

    std::vector<Real> multiply(std::span<const Real> x) const {
        std::vector<Real> y(dimension_);
        multiply(x, y);
        return y;
    }

    Real dot_form(std::span<const Real> x) const {
        const auto ax = multiply(x);
        Real sum{0};
        for (std::size_t i = 0; i < dimension_; ++i) sum += x[i] * ax[i];
        return sum;
    }

private:
    std::size_t dimension_ = 0;
    std::vector<std::size_t> row_start_{0};
    std::vector<std::size_t> columns_;
    std::vector<Real> values_;
};

} // namespace gbm
