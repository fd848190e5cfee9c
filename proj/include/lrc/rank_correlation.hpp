#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "lrc/geometry.hpp"

namespace lrc {

/// The four local rank correlations. "Input" measures sum over the input
/// J-neighborhood and detect input error; "output" measures sum over the output
/// J-neighborhood.
enum class Measure { RhoInput = 0, RhoOutput = 1, TauInput = 2, TauOutput = 3 };

inline constexpr std::array<Measure, 4> kAllMeasures{Measure::RhoInput, Measure::RhoOutput,
                                                     Measure::TauInput, Measure::TauOutput};

/// Stable short names: "rho_I", "rho_O", "tau_I", "tau_O".
std::string_view measure_name(Measure m);
/// Accepts the short names as well as the CLI spellings "rho-i", "rho-o", ...
Measure parse_measure(std::string_view text);

/// Trimmed ranks of one case for neighborhood size J.
///
/// Ranks are stored doubled (2 * rank) so that the midrank (zeta + J + 1) / 2
/// stays integral and all rank arithmetic is exact.
struct TrimmedRanks {
    std::size_t case_index = 0;
    std::size_t J = 0;
    std::size_t zeta = 0;  ///< size of the intersection of the two J-neighborhoods

    /// Input neighbors in input-rank order, and the doubled trimmed output rank
    /// 2 * R_hat of each (delta-hat inside the intersection, midrank outside).
    std::vector<CaseIndex> input_neighbors;
    std::vector<long long> R_hat2;
    /// Output neighbors in output-rank order, and the doubled trimmed input
    /// rank 2 * S of each.
    std::vector<CaseIndex> output_neighbors;
    std::vector<long long> S2;

    /// Doubled midrank 2 * (zeta + J + 1) / 2 = zeta + J + 1.
    long long midrank2() const { return static_cast<long long>(zeta + J + 1); }
    /// Tie adjustment U = ((J - zeta)^3 - (J - zeta)) / 12.
    double U() const;
};

/// Computes the trimmed ranks of case i from the first J entries of each table.
/// Throws ParameterError for J < 2 or J beyond either table's j_max.
TrimmedRanks trimmed_ranks(const NeighborhoodTable& input_nbrs, const NeighborhoodTable& output_nbrs,
                           std::size_t i, std::size_t J);

/// All four local measures of one case.
struct LocalScores {
    double rho_input = 0.0;
    double rho_output = 0.0;
    double tau_input = 0.0;
    double tau_output = 0.0;

    double get(Measure m) const;
};

LocalScores local_scores(const TrimmedRanks& ranks);

double local_rho_output(const TrimmedRanks& ranks);
double local_tau_output(const TrimmedRanks& ranks);
double local_rho_input(const TrimmedRanks& ranks);
double local_tau_input(const TrimmedRanks& ranks);

double local_rho_output(const NeighborhoodTable& in, const NeighborhoodTable& out, std::size_t i,
                        std::size_t J);
double local_tau_output(const NeighborhoodTable& in, const NeighborhoodTable& out, std::size_t i,
                        std::size_t J);
double local_rho_input(const NeighborhoodTable& in, const NeighborhoodTable& out, std::size_t i,
                       std::size_t J);
double local_tau_input(const NeighborhoodTable& in, const NeighborhoodTable& out, std::size_t i,
                       std::size_t J);

/// Per-case values of one local measure.
struct LocalScoreVector {
    Measure measure = Measure::RhoInput;
    std::size_t J = 0;
    std::vector<double> scores;
};

/// Mean of a LocalScoreVector.
struct GoodnessScore {
    Measure measure = Measure::RhoInput;
    std::size_t J = 0;
    double value = 0.0;
    bool adjusted = false;
    LocalScoreVector local;
};

/// All four goodness scores of one (input, output) pair at one J.
struct GoodnessReport {
    std::size_t J = 0;
    bool adjusted = false;
    std::array<GoodnessScore, 4> scores;

    const GoodnessScore& get(Measure m) const { return scores[static_cast<std::size_t>(m)]; }
    double value(Measure m) const { return get(m).value; }
};

/// Evaluates all four measures from precomputed neighborhood tables. The
/// per-case pass may run in parallel; means are accumulated sequentially in
/// case order.
GoodnessReport evaluate(const NeighborhoodTable& input_nbrs, const NeighborhoodTable& output_nbrs,
                        std::size_t J);

/// Builds both neighborhood tables and evaluates all four measures. Throws
/// ShapeError when X and Yhat describe different numbers of cases.
GoodnessReport evaluate(const DataMatrix& X, const DataMatrix& Yhat, std::size_t J);

GoodnessScore goodness(Measure measure, const DataMatrix& X, const DataMatrix& Yhat, std::size_t J);

/// q x q matrix A minimizing the local distance-preservation objective
///   sum_i sum_{j in N^I_J(i)} [ |x_i - x_j|^2 - (y_i - y_j)' A'A (y_i - y_j) ]^2.
struct AffineAdjustment {
    std::size_t q = 0;
    Matrix A;
    double residual = 0.0;  ///< objective value attained at A
    bool degenerate = false;
    std::string warning;
};

/// Fits M = A'A by linear least squares over the free entries of a symmetric
/// q x q matrix, projects M onto the PSD cone and returns its symmetric square
/// root. If the projected solution is worse than the identity, the identity is
/// returned instead. A configuration with no local variation yields the
/// identity with degenerate = true.
AffineAdjustment fit_affine_adjustment(const DataMatrix& X, const DataMatrix& Yhat, std::size_t J);

/// Value of the affine objective at a given A.
double affine_objective(const DataMatrix& X, const DataMatrix& Yhat, const NeighborhoodTable& input_nbrs,
                        std::size_t J, const Matrix& A);

/// Yhat * A.
DataMatrix apply_affine(const DataMatrix& Yhat, const AffineAdjustment& adjustment);

/// Fits the affine adjustment and evaluates all four measures on Yhat * A.
GoodnessReport evaluate_adjusted(const DataMatrix& X, const DataMatrix& Yhat, std::size_t J);

GoodnessScore goodness_adjusted(Measure measure, const DataMatrix& X, const DataMatrix& Yhat,
                                std::size_t J);

}  // namespace lrc
