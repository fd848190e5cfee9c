#include "lrc/rank_correlation.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "lrc/error.hpp"
#include "lrc/parallel.hpp"

namespace lrc {

std::string_view measure_name(Measure m) {
    switch (m) {
        case Measure::RhoInput: return "rho_I";
        case Measure::RhoOutput: return "rho_O";
        case Measure::TauInput: return "tau_I";
        case Measure::TauOutput: return "tau_O";
    }
    return "?";
}

Measure parse_measure(std::string_view text) {
    if (text == "rho_I" || text == "rho-i") return Measure::RhoInput;
    if (text == "rho_O" || text == "rho-o") return Measure::RhoOutput;
    if (text == "tau_I" || text == "tau-i") return Measure::TauInput;
    if (text == "tau_O" || text == "tau-o") return Measure::TauOutput;
    throw ParameterError("unknown measure '" + std::string(text) + "'");
}

double TrimmedRanks::U() const {
    const double m = static_cast<double>(J - zeta);
    return (m * m * m - m) / 12.0;
}

double LocalScores::get(Measure m) const {
    switch (m) {
        case Measure::RhoInput: return rho_input;
        case Measure::RhoOutput: return rho_output;
        case Measure::TauInput: return tau_input;
        case Measure::TauOutput: return tau_output;
    }
    return 0.0;
}

TrimmedRanks trimmed_ranks(const NeighborhoodTable& input_nbrs, const NeighborhoodTable& output_nbrs,
                           std::size_t i, std::size_t J) {
    if (J < 2) throw ParameterError("J must be at least 2, got " + std::to_string(J));
    if (input_nbrs.n_cases() != output_nbrs.n_cases()) {
        throw ShapeError("input and output neighborhood tables cover different case counts");
    }
    if (i >= input_nbrs.n_cases()) throw ParameterError("case index out of range");

    TrimmedRanks tr;
    tr.case_index = i;
    tr.J = J;
    const auto in = input_nbrs.neighbors(i, J);
    const auto out = output_nbrs.neighbors(i, J);
    tr.input_neighbors.assign(in.begin(), in.end());
    tr.output_neighbors.assign(out.begin(), out.end());

    // Output position of every output neighbor, sorted by case index for lookup.
    std::vector<std::pair<CaseIndex, std::size_t>> out_pos(J);
    for (std::size_t b = 0; b < J; ++b) out_pos[b] = {out[b], b};
    std::sort(out_pos.begin(), out_pos.end());

    constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);
    std::vector<std::size_t> in_to_out(J, kAbsent);
    std::vector<std::size_t> out_to_in(J, kAbsent);
    for (std::size_t a = 0; a < J; ++a) {
        const auto it = std::lower_bound(out_pos.begin(), out_pos.end(),
                                         std::pair<CaseIndex, std::size_t>{in[a], 0});
        if (it != out_pos.end() && it->first == in[a]) {
            in_to_out[a] = it->second;
            out_to_in[it->second] = a;
            ++tr.zeta;
        }
    }

    // Intersection ranks: position among intersection members in each order.
    std::vector<long long> delta_in(J, 0);   // indexed by input position
    std::vector<long long> delta_out(J, 0);  // indexed by output position
    long long c = 0;
    for (std::size_t a = 0; a < J; ++a) {
        if (in_to_out[a] != kAbsent) delta_in[a] = ++c;
    }
    c = 0;
    for (std::size_t b = 0; b < J; ++b) {
        if (out_to_in[b] != kAbsent) delta_out[b] = ++c;
    }

    const long long mid2 = tr.midrank2();
    tr.R_hat2.resize(J);
    tr.S2.resize(J);
    for (std::size_t a = 0; a < J; ++a) {
        tr.R_hat2[a] = in_to_out[a] == kAbsent ? mid2 : 2 * delta_out[in_to_out[a]];
    }
    for (std::size_t b = 0; b < J; ++b) {
        tr.S2[b] = out_to_in[b] == kAbsent ? mid2 : 2 * delta_in[out_to_in[b]];
    }
    return tr;
}

namespace {

// 1 - 6 (sum + U) / (J^3 - J) with sum = sum4 / 4 and U = (m^3 - m) / 12.
double spearman_from_doubled(long long sum4, std::size_t J, std::size_t zeta) {
    const long long j = static_cast<long long>(J);
    const long long m = static_cast<long long>(J - zeta);
    const long long numerator = 3 * sum4 + (m * m * m - m);
    const long long denominator = 2 * (j * j * j - j);
    return 1.0 - static_cast<double>(numerator) / static_cast<double>(denominator);
}

// Pairs are enumerated in raw-rank order, so the raw-rank difference has a
// fixed sign and only the trimmed ranks decide each term.
double kendall_against_position(const std::vector<long long>& trimmed2) {
    const std::size_t J = trimmed2.size();
    long long s = 0;
    for (std::size_t a = 0; a < J; ++a) {
        for (std::size_t b = a + 1; b < J; ++b) {
            const long long d = trimmed2[b] - trimmed2[a];
            s += (d > 0) - (d < 0);
        }
    }
    return static_cast<double>(2 * s) / static_cast<double>(J * (J - 1));
}

}  // namespace

double local_rho_output(const TrimmedRanks& r) {
    long long sum4 = 0;
    for (std::size_t b = 0; b < r.J; ++b) {
        const long long d = r.S2[b] - 2 * static_cast<long long>(b + 1);
        sum4 += d * d;
    }
    return spearman_from_doubled(sum4, r.J, r.zeta);
}

double local_rho_input(const TrimmedRanks& r) {
    long long sum4 = 0;
    for (std::size_t a = 0; a < r.J; ++a) {
        const long long d = 2 * static_cast<long long>(a + 1) - r.R_hat2[a];
        sum4 += d * d;
    }
    return spearman_from_doubled(sum4, r.J, r.zeta);
}

double local_tau_output(const TrimmedRanks& r) { return kendall_against_position(r.S2); }

double local_tau_input(const TrimmedRanks& r) { return kendall_against_position(r.R_hat2); }

LocalScores local_scores(const TrimmedRanks& r) {
    return {local_rho_input(r), local_rho_output(r), local_tau_input(r), local_tau_output(r)};
}

double local_rho_output(const NeighborhoodTable& in, const NeighborhoodTable& out, std::size_t i,
                        std::size_t J) {
    return local_rho_output(trimmed_ranks(in, out, i, J));
}
double local_tau_output(const NeighborhoodTable& in, const NeighborhoodTable& out, std::size_t i,
                        std::size_t J) {
    return local_tau_output(trimmed_ranks(in, out, i, J));
}
double local_rho_input(const NeighborhoodTable& in, const NeighborhoodTable& out, std::size_t i,
                       std::size_t J) {
    return local_rho_input(trimmed_ranks(in, out, i, J));
}
double local_tau_input(const NeighborhoodTable& in, const NeighborhoodTable& out, std::size_t i,
                       std::size_t J) {
    return local_tau_input(trimmed_ranks(in, out, i, J));
}

GoodnessReport evaluate(const NeighborhoodTable& input_nbrs, const NeighborhoodTable& output_nbrs,
                        std::size_t J) {
    if (J < 2) throw ParameterError("J must be at least 2, got " + std::to_string(J));
    if (input_nbrs.n_cases() != output_nbrs.n_cases()) {
        throw ShapeError("input has " + std::to_string(input_nbrs.n_cases()) + " cases, output has " +
                         std::to_string(output_nbrs.n_cases()));
    }
    const std::size_t n = input_nbrs.n_cases();
    std::vector<LocalScores> per_case(n);
    parallel_for(n, [&](std::size_t i) {
        per_case[i] = local_scores(trimmed_ranks(input_nbrs, output_nbrs, i, J));
    });

    GoodnessReport report;
    report.J = J;
    for (Measure m : kAllMeasures) {
        GoodnessScore& g = report.scores[static_cast<std::size_t>(m)];
        g.measure = m;
        g.J = J;
        g.local.measure = m;
        g.local.J = J;
        g.local.scores.resize(n);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            g.local.scores[i] = per_case[i].get(m);
            sum += g.local.scores[i];
        }
        g.value = sum / static_cast<double>(n);
    }
    return report;
}

namespace {

void check_pair(const DataMatrix& X, const DataMatrix& Yhat, std::size_t J) {
    if (X.n_cases() != Yhat.n_cases()) {
        throw ShapeError("input has " + std::to_string(X.n_cases()) + " cases, embedding has " +
                         std::to_string(Yhat.n_cases()));
    }
    if (J < 2 || J > X.n_cases() - 1) {
        throw ParameterError("J must lie in [2, " + std::to_string(X.n_cases() - 1) + "], got " +
                             std::to_string(J));
    }
}

}  // namespace

GoodnessReport evaluate(const DataMatrix& X, const DataMatrix& Yhat, std::size_t J) {
    check_pair(X, Yhat, J);
    return evaluate(build_neighborhoods(X, J), build_neighborhoods(Yhat, J), J);
}

GoodnessScore goodness(Measure measure, const DataMatrix& X, const DataMatrix& Yhat, std::size_t J) {
    return evaluate(X, Yhat, J).get(measure);
}

double affine_objective(const DataMatrix& X, const DataMatrix& Yhat, const NeighborhoodTable& input_nbrs,
                        std::size_t J, const Matrix& A) {
    const Matrix M = A.transpose() * A;
    double total = 0.0;
    for (std::size_t i = 0; i < X.n_cases(); ++i) {
        for (CaseIndex j : input_nbrs.neighbors(i, J)) {
            const double target = (X.row(i) - X.row(j)).squaredNorm();
            const Vector d = (Yhat.row(i) - Yhat.row(j)).transpose();
            const double r = target - d.dot(M * d);
            total += r * r;
        }
    }
    return total;
}

AffineAdjustment fit_affine_adjustment(const DataMatrix& X, const DataMatrix& Yhat, std::size_t J) {
    check_pair(X, Yhat, J);
    const std::size_t n = X.n_cases();
    const auto q = static_cast<Eigen::Index>(Yhat.n_dims());
    const Eigen::Index n_free = q * (q + 1) / 2;
    const NeighborhoodTable nbrs = build_neighborhoods(X, J);

    // Each row: features of (y_i - y_j) such that features . vech(M) = d' M d.
    Matrix F(static_cast<Eigen::Index>(n * J), n_free);
    Vector t(static_cast<Eigen::Index>(n * J));
    Eigen::Index row = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (CaseIndex j : nbrs.neighbors(i, J)) {
            const Vector d = (Yhat.row(i) - Yhat.row(j)).transpose();
            Eigen::Index col = 0;
            for (Eigen::Index a = 0; a < q; ++a) {
                for (Eigen::Index b = a; b < q; ++b) {
                    F(row, col++) = a == b ? d(a) * d(a) : 2.0 * d(a) * d(b);
                }
            }
            t(row) = (X.row(i) - X.row(j)).squaredNorm();
            ++row;
        }
    }

    AffineAdjustment result;
    result.q = static_cast<std::size_t>(q);
    const Matrix identity = Matrix::Identity(q, q);
    const double identity_residual = affine_objective(X, Yhat, nbrs, J, identity);

    if (F.cwiseAbs().maxCoeff() == 0.0) {
        result.A = identity;
        result.residual = identity_residual;
        result.degenerate = true;
        result.warning = "embedding has no local variation; identity adjustment returned";
        return result;
    }

    // Column scaling keeps the QR well conditioned when coordinates are far from unit scale.
    Vector scale = F.colwise().norm().transpose();
    for (Eigen::Index c = 0; c < n_free; ++c) {
        if (scale(c) == 0.0) scale(c) = 1.0;
    }
    const Matrix Fs = F * scale.cwiseInverse().asDiagonal();
    const Vector m = Fs.completeOrthogonalDecomposition().solve(t).cwiseQuotient(scale);

    Matrix M(q, q);
    Eigen::Index col = 0;
    for (Eigen::Index a = 0; a < q; ++a) {
        for (Eigen::Index b = a; b < q; ++b) {
            M(a, b) = M(b, a) = m(col++);
        }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(M);
    const Vector clipped = eig.eigenvalues().cwiseMax(0.0);
    const Matrix A = eig.eigenvectors() * clipped.cwiseSqrt().asDiagonal() * eig.eigenvectors().transpose();
    const double fitted_residual = affine_objective(X, Yhat, nbrs, J, A);

    if (fitted_residual <= identity_residual) {
        result.A = A;
        result.residual = fitted_residual;
    } else {
        result.A = identity;
        result.residual = identity_residual;
        result.warning = "PSD-projected fit was worse than the identity; identity adjustment returned";
    }
    return result;
}

DataMatrix apply_affine(const DataMatrix& Yhat, const AffineAdjustment& adjustment) {
    if (static_cast<std::size_t>(adjustment.A.rows()) != Yhat.n_dims()) {
        throw ShapeError("affine adjustment is " + std::to_string(adjustment.A.rows()) +
                         "-dimensional, embedding has " + std::to_string(Yhat.n_dims()) + " columns");
    }
    return DataMatrix(Yhat.values() * adjustment.A);
}

GoodnessReport evaluate_adjusted(const DataMatrix& X, const DataMatrix& Yhat, std::size_t J) {
    const AffineAdjustment adj = fit_affine_adjustment(X, Yhat, J);
    GoodnessReport report = evaluate(X, apply_affine(Yhat, adj), J);
    report.adjusted = true;
    for (auto& g : report.scores) g.adjusted = true;
    return report;
}

GoodnessScore goodness_adjusted(Measure measure, const DataMatrix& X, const DataMatrix& Yhat,
                                std::size_t J) {
    return evaluate_adjusted(X, Yhat, J).get(measure);
}

}  // namespace lrc
