#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lrc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// An n x d matrix of observations, one case per row. Construction validates
/// that there are at least two cases, at least one column and that every entry
/// is finite; a DataMatrix that exists is always valid.
class DataMatrix {
public:
    explicit DataMatrix(Matrix values);

    std::size_t n_cases() const { return static_cast<std::size_t>(values_.rows()); }
    std::size_t n_dims() const { return static_cast<std::size_t>(values_.cols()); }

    const Matrix& values() const { return values_; }
    auto row(std::size_t i) const { return values_.row(static_cast<Eigen::Index>(i)); }
    double operator()(std::size_t i, std::size_t j) const {
        return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

private:
    Matrix values_;
};

/// Case indices are stored as 32-bit integers; n is desk scale.
using CaseIndex = std::uint32_t;

/// Per-case lists of the J_max nearest other cases, sorted by ascending
/// Euclidean distance with ties broken by ascending case index. The rank of the
/// neighbor at list position p (0-based) is p + 1; a case is never its own
/// neighbor.
class NeighborhoodTable {
public:
    NeighborhoodTable(std::size_t n_cases, std::size_t j_max, std::vector<CaseIndex> indices,
                      std::vector<double> distances);

    std::size_t n_cases() const { return n_cases_; }
    std::size_t j_max() const { return j_max_; }

    /// The first `j` neighbors of case i (j <= j_max).
    std::span<const CaseIndex> neighbors(std::size_t i, std::size_t j) const;
    std::span<const CaseIndex> neighbors(std::size_t i) const { return neighbors(i, j_max_); }
    std::span<const double> distances(std::size_t i) const;

    /// Rank (1-based) of case j among the listed neighbors of case i.
    std::optional<std::size_t> rank_of(std::size_t i, std::size_t j) const;

private:
    std::size_t n_cases_;
    std::size_t j_max_;
    std::vector<CaseIndex> indices_;
    std::vector<double> distances_;
};

/// Symmetric n x n matrix of Euclidean distances with an exactly zero diagonal.
Matrix pairwise_distances(const DataMatrix& data);

/// Exact J_max-nearest-neighbor lists for every case. Throws ParameterError
/// unless 1 <= j_max <= n_cases - 1.
NeighborhoodTable build_neighborhoods(const DataMatrix& data, std::size_t j_max);

}  // namespace lrc
