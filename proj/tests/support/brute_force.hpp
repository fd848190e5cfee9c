#pragma once

// Literal, full-sort implementation of the local rank correlations used as a
// test oracle. Every rank is recomputed from its counting definition over all
// cases; nothing is shared with the library beyond the Eigen matrix type.

#include <cmath>
#include <cstddef>
#include <set>
#include <vector>

#include <Eigen/Dense>

namespace lrc::testing {

struct BruteScores {
    double rho_input = 0.0;
    double rho_output = 0.0;
    double tau_input = 0.0;
    double tau_output = 0.0;
};

inline Eigen::MatrixXd naive_distances(const Eigen::MatrixXd& x) {
    const auto n = x.rows();
    Eigen::MatrixXd d(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            double s = 0.0;
            for (Eigen::Index c = 0; c < x.cols(); ++c) s += (x(i, c) - x(j, c)) * (x(i, c) - x(j, c));
            d(i, j) = std::sqrt(s);
        }
    }
    return d;
}

/// s_ij = #{k != i : d(i,k) <= d(i,j)}, i.e. nearest distinct case has rank 1.
inline int count_rank(const Eigen::MatrixXd& d, Eigen::Index i, Eigen::Index j) {
    int r = 0;
    for (Eigen::Index k = 0; k < d.rows(); ++k) {
        if (k != i && d(i, k) <= d(i, j)) ++r;
    }
    return r;
}

inline double sign(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

inline BruteScores brute_local_scores(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, Eigen::Index i,
                                      int J) {
    const Eigen::MatrixXd dx = naive_distances(x);
    const Eigen::MatrixXd dy = naive_distances(y);
    const auto n = x.rows();

    std::set<Eigen::Index> nin;
    std::set<Eigen::Index> nout;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        if (count_rank(dx, i, j) <= J) nin.insert(j);
        if (count_rank(dy, i, j) <= J) nout.insert(j);
    }
    std::set<Eigen::Index> both;
    for (auto j : nin) {
        if (nout.count(j)) both.insert(j);
    }
    const double zeta = static_cast<double>(both.size());
    const double mid = (zeta + J + 1) / 2.0;

    auto S = [&](Eigen::Index j) {
        if (!both.count(j)) return mid;
        double delta = 0;
        for (auto k : both) delta += dx(i, k) <= dx(i, j) ? 1 : 0;
        return delta;
    };
    auto R = [&](Eigen::Index j) {
        if (!both.count(j)) return mid;
        double delta = 0;
        for (auto k : both) delta += dy(i, k) <= dy(i, j) ? 1 : 0;
        return delta;
    };
    const double m = J - zeta;
    const double U = (m * m * m - m) / 12.0;
    const double JJ = J;

    BruteScores out;
    double sum = 0.0;
    for (auto j : nout) {
        const double r = count_rank(dy, i, j);
        sum += (S(j) - r) * (S(j) - r);
    }
    out.rho_output = 1.0 - 6.0 * (sum + U) / (JJ * (JJ * JJ - 1.0));

    double ksum = 0.0;
    for (auto j : nout) {
        for (auto k : nout) {
            if (j < k) ksum += 2.0 * sign((S(j) - S(k)) * (count_rank(dy, i, j) - count_rank(dy, i, k)));
        }
    }
    out.tau_output = ksum / (JJ * (JJ - 1.0));

    sum = 0.0;
    for (auto j : nin) {
        const double s = count_rank(dx, i, j);
        sum += (s - R(j)) * (s - R(j));
    }
    out.rho_input = 1.0 - (sum + U) / ((JJ * JJ * JJ - JJ) / 6.0);

    ksum = 0.0;
    for (auto j : nin) {
        for (auto k : nin) {
            if (j < k) ksum += sign((R(j) - R(k)) * (count_rank(dx, i, j) - count_rank(dx, i, k)));
        }
    }
    out.tau_input = ksum / (0.5 * JJ * (JJ - 1.0));
    return out;
}

}  // namespace lrc::testing
