#include "lrc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "lrc/error.hpp"
#include "lrc/parallel.hpp"

namespace lrc {

DataMatrix::DataMatrix(Matrix values) : values_(std::move(values)) {
    if (values_.rows() < 2) {
        throw ValidationError("data matrix needs at least 2 cases, got " +
                              std::to_string(values_.rows()));
    }
    if (values_.cols() < 1) throw ValidationError("data matrix needs at least 1 column");
    for (Eigen::Index i = 0; i < values_.rows(); ++i) {
        for (Eigen::Index j = 0; j < values_.cols(); ++j) {
            if (!std::isfinite(values_(i, j))) {
                throw ValidationError("non-finite entry at row " + std::to_string(i + 1) +
                                      ", column " + std::to_string(j + 1));
            }
        }
    }
}

NeighborhoodTable::NeighborhoodTable(std::size_t n_cases, std::size_t j_max,
                                     std::vector<CaseIndex> indices, std::vector<double> distances)
    : n_cases_(n_cases), j_max_(j_max), indices_(std::move(indices)), distances_(std::move(distances)) {
    if (indices_.size() != n_cases_ * j_max_ || distances_.size() != indices_.size()) {
        throw ShapeError("neighborhood table storage does not match n_cases * j_max");
    }
}

std::span<const CaseIndex> NeighborhoodTable::neighbors(std::size_t i, std::size_t j) const {
    if (j > j_max_) {
        throw ParameterError("requested " + std::to_string(j) + " neighbors but table holds " +
                             std::to_string(j_max_));
    }
    return {indices_.data() + i * j_max_, j};
}

std::span<const double> NeighborhoodTable::distances(std::size_t i) const {
    return {distances_.data() + i * j_max_, j_max_};
}

std::optional<std::size_t> NeighborhoodTable::rank_of(std::size_t i, std::size_t j) const {
    const auto row = neighbors(i);
    const auto it = std::find(row.begin(), row.end(), static_cast<CaseIndex>(j));
    if (it == row.end()) return std::nullopt;
    return static_cast<std::size_t>(it - row.begin()) + 1;
}

namespace {

double squared_distance(const Matrix& m, Eigen::Index a, Eigen::Index b) {
    return (m.row(a) - m.row(b)).squaredNorm();
}

}  // namespace

Matrix pairwise_distances(const DataMatrix& data) {
    const auto n = static_cast<Eigen::Index>(data.n_cases());
    const Matrix& x = data.values();
    Matrix out = Matrix::Zero(n, n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t row) {
        const auto i = static_cast<Eigen::Index>(row);
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j != i) out(i, j) = std::sqrt(squared_distance(x, std::min(i, j), std::max(i, j)));
        }
    });
    return out;
}

NeighborhoodTable build_neighborhoods(const DataMatrix& data, std::size_t j_max) {
    const std::size_t n = data.n_cases();
    if (j_max < 1 || j_max > n - 1) {
        throw ParameterError("J_max must lie in [1, " + std::to_string(n - 1) + "], got " +
                             std::to_string(j_max));
    }
    const Matrix& x = data.values();
    std::vector<CaseIndex> indices(n * j_max);
    std::vector<double> distances(n * j_max);

    parallel_for(n, [&](std::size_t i) {
        // Squared distances order identically to distances and avoid sqrt-induced ties.
        std::vector<std::pair<double, CaseIndex>> cand;
        cand.reserve(n - 1);
        const auto ii = static_cast<Eigen::Index>(i);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const auto jj = static_cast<Eigen::Index>(j);
            // Evaluate in a canonical (min, max) order so d(i, j) == d(j, i) bitwise.
            cand.emplace_back(squared_distance(x, std::min(ii, jj), std::max(ii, jj)),
                              static_cast<CaseIndex>(j));
        }
        const auto kth = cand.begin() + static_cast<std::ptrdiff_t>(j_max);
        if (kth != cand.end()) std::nth_element(cand.begin(), kth - 1, cand.end());
        std::sort(cand.begin(), kth);
        for (std::size_t p = 0; p < j_max; ++p) {
            indices[i * j_max + p] = cand[p].second;
            distances[i * j_max + p] = std::sqrt(cand[p].first);
        }
    });
    return NeighborhoodTable(n, j_max, std::move(indices), std::move(distances));
}

}  // namespace lrc
