#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lrc/rank_correlation.hpp"
#include "lrc/reducers.hpp"

namespace lrc {

enum class SweepParameter { J, K, Q };

std::string_view sweep_parameter_name(SweepParameter p);

/// One grid point of a sweep. `scores` is empty when the embedding could not
/// be computed at this value (e.g. a disconnected graph); `failure` says why.
struct SweepPoint {
    int value = 0;
    std::optional<std::array<double, 4>> scores;  ///< indexed by Measure
    std::string failure;

    double score(Measure m) const { return (*scores)[static_cast<std::size_t>(m)]; }
};

struct SweepCurve {
    SweepParameter parameter = SweepParameter::J;
    bool adjusted = false;
    std::size_t J = 0;  ///< fixed J of K and q sweeps; 0 for J sweeps
    std::vector<SweepPoint> points;

    std::vector<int> grid() const;
};

struct SelectionResult {
    int chosen_value = 0;
    bool found = true;  ///< false when no grid point satisfies the rule
    Measure measure = Measure::RhoInput;
    std::string rule;
};

/// Inclusive integer range as an ascending grid.
std::vector<int> make_grid(int first, int last);

/// Scores the fixed embedding at every J in the grid. Neighborhood tables are
/// built once at the largest J and shared.
SweepCurve sweep_J(const DataMatrix& X, const DataMatrix& Yhat, const std::vector<int>& grid,
                   bool adjusted = false);

/// Largest J whose trailing window of `window` grid points has a score range
/// below `tolerance`. Without such a window, found = false and the smallest
/// grid value is suggested.
SelectionResult select_J(const SweepCurve& curve, std::size_t window = 4, double tolerance = 0.02,
                         Measure measure = Measure::RhoInput);

/// Recomputes the embedding for every K; failures become missing points.
/// Output-normalized methods are scored with the adjusted measures.
SweepCurve sweep_K(const DataMatrix& X, const ReducerConfig& base, const std::vector<int>& grid,
                   std::size_t J);

/// Grid value with the largest score; ties go to the smaller value.
SelectionResult select_K(const SweepCurve& curve, Measure measure = Measure::RhoInput);

/// Recomputes the embedding for every target dimension q.
SweepCurve sweep_dim(const DataMatrix& X, const ReducerConfig& base, const std::vector<int>& grid,
                     std::size_t J);

/// Smallest q after which every later score stays within `plateau_tol` of the
/// score at q.
SelectionResult select_dim(const SweepCurve& curve, double plateau_tol = 0.02,
                           Measure measure = Measure::RhoInput);

/// Columns: parameter, rho_I, rho_O, tau_I, tau_O (empty cells for failures).
std::string curve_to_csv(const SweepCurve& curve);
nlohmann::json curve_to_json(const SweepCurve& curve);
nlohmann::json selection_to_json(const SelectionResult& selection);

}  // namespace lrc
