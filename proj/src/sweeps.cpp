#include "lrc/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lrc/error.hpp"
#include "lrc/matrix_io.hpp"

namespace lrc {

std::string_view sweep_parameter_name(SweepParameter p) {
    switch (p) {
        case SweepParameter::J: return "J";
        case SweepParameter::K: return "K";
        case SweepParameter::Q: return "q";
    }
    return "?";
}

std::vector<int> SweepCurve::grid() const {
    std::vector<int> g;
    g.reserve(points.size());
    for (const auto& p : points) g.push_back(p.value);
    return g;
}

std::vector<int> make_grid(int first, int last) {
    if (last < first) {
        throw ParameterError("grid end " + std::to_string(last) + " is below its start " + std::to_string(first));
    }
    std::vector<int> g;
    for (int v = first; v <= last; ++v) g.push_back(v);
    return g;
}

namespace {

void check_grid(const std::vector<int>& grid, int lo, int hi, std::string_view name) {
    if (grid.empty()) throw ParameterError("empty " + std::string(name) + " grid");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid[k] < lo || grid[k] > hi) {
            throw ParameterError(std::string(name) + " grid value " + std::to_string(grid[k]) +
                                 " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
        if (k > 0 && grid[k] <= grid[k - 1]) {
            throw ParameterError(std::string(name) + " grid must be strictly ascending");
        }
    }
}

std::array<double, 4> quad(const GoodnessReport& r) {
    return {r.value(Measure::RhoInput), r.value(Measure::RhoOutput), r.value(Measure::TauInput),
            r.value(Measure::TauOutput)};
}

std::vector<const SweepPoint*> present(const SweepCurve& curve) {
    std::vector<const SweepPoint*> pts;
    for (const auto& p : curve.points) {
        if (p.scores) pts.push_back(&p);
    }
    return pts;
}

SweepCurve sweep_embeddings(const DataMatrix& X, const ReducerConfig& base, const std::vector<int>& grid,
                            std::size_t J, SweepParameter parameter) {
    if (J < 2 || J > X.n_cases() - 1) throw ParameterError("J must lie in [2, n-1]");
    SweepCurve curve;
    curve.parameter = parameter;
    curve.J = J;
    curve.adjusted = is_output_normalized(base.method);
    // Input neighborhoods do not change across the grid.
    const NeighborhoodTable input_nbrs = build_neighborhoods(X, J);
    for (int value : grid) {
        ReducerConfig config = base;
        if (parameter == SweepParameter::K) {
            config.K = static_cast<std::size_t>(value);
        } else {
            config.q = static_cast<std::size_t>(value);
        }
        SweepPoint point;
        point.value = value;
        try {
            const Embedding emb = reduce(X, config);
            const DataMatrix out = curve.adjusted ? apply_affine(emb.data, fit_affine_adjustment(X, emb.data, J))
                                                  : emb.data;
            point.scores = quad(evaluate(input_nbrs, build_neighborhoods(out, J), J));
        } catch (const NumericalError& e) {
            point.failure = e.what();
        }
        curve.points.push_back(std::move(point));
    }
    return curve;
}

}  // namespace

SweepCurve sweep_J(const DataMatrix& X, const DataMatrix& Yhat, const std::vector<int>& grid, bool adjusted) {
    if (X.n_cases() != Yhat.n_cases()) {
        throw ShapeError("input has " + std::to_string(X.n_cases()) + " cases, embedding has " +
                         std::to_string(Yhat.n_cases()));
    }
    check_grid(grid, 2, static_cast<int>(X.n_cases()) - 1, "J");
    const auto j_max = static_cast<std::size_t>(grid.back());
    const NeighborhoodTable input_nbrs = build_neighborhoods(X, j_max);

    SweepCurve curve;
    curve.parameter = SweepParameter::J;
    curve.adjusted = adjusted;
    if (!adjusted) {
        const NeighborhoodTable output_nbrs = build_neighborhoods(Yhat, j_max);
        for (int J : grid) {
            curve.points.push_back({J, quad(evaluate(input_nbrs, output_nbrs, static_cast<std::size_t>(J))), {}});
        }
    } else {
        // The affine fit depends on J, so the output table is rebuilt per point.
        for (int J : grid) {
            const auto j = static_cast<std::size_t>(J);
            const DataMatrix out = apply_affine(Yhat, fit_affine_adjustment(X, Yhat, j));
            curve.points.push_back({J, quad(evaluate(input_nbrs, build_neighborhoods(out, j), j)), {}});
        }
    }
    return curve;
}

SelectionResult select_J(const SweepCurve& curve, std::size_t window, double tolerance, Measure measure) {
    if (window < 1) throw ParameterError("stability window must be at least 1");
    if (!(tolerance > 0.0)) throw ParameterError("stability tolerance must be positive");
    const auto pts = present(curve);
    if (pts.empty()) throw ParameterError("curve has no evaluated points");

    std::ostringstream rule;
    rule << "largest J whose trailing " << window << "-point window has range < " << tolerance;
    SelectionResult result{pts.front()->value, false, measure, rule.str()};
    // Curves shorter than the window are judged as a single window.
    window = std::min(window, pts.size());
    for (std::size_t end = window; end <= pts.size(); ++end) {
        double lo = pts[end - window]->score(measure);
        double hi = lo;
        for (std::size_t k = end - window; k < end; ++k) {
            lo = std::min(lo, pts[k]->score(measure));
            hi = std::max(hi, pts[k]->score(measure));
        }
        if (hi - lo < tolerance) {
            result.chosen_value = pts[end - 1]->value;
            result.found = true;
        }
    }
    if (!result.found) result.rule += "; no stable J, smallest grid value suggested";
    return result;
}

SweepCurve sweep_K(const DataMatrix& X, const ReducerConfig& base, const std::vector<int>& grid, std::size_t J) {
    check_grid(grid, 1, static_cast<int>(X.n_cases()) - 1, "K");
    return sweep_embeddings(X, base, grid, J, SweepParameter::K);
}

SelectionResult select_K(const SweepCurve& curve, Measure measure) {
    const auto pts = present(curve);
    if (pts.empty()) throw NumericalError("no K in the grid produced an embedding");
    const SweepPoint* best = pts.front();
    for (const SweepPoint* p : pts) {
        if (p->score(measure) > best->score(measure)) best = p;
    }
    return {best->value, true, measure, "argmax of " + std::string(measure_name(measure)) + ", ties to smaller K"};
}

SweepCurve sweep_dim(const DataMatrix& X, const ReducerConfig& base, const std::vector<int>& grid, std::size_t J) {
    check_grid(grid, 1, static_cast<int>(X.n_dims()) - 1, "q");
    return sweep_embeddings(X, base, grid, J, SweepParameter::Q);
}

SelectionResult select_dim(const SweepCurve& curve, double plateau_tol, Measure measure) {
    if (!(plateau_tol > 0.0)) throw ParameterError("plateau tolerance must be positive");
    const auto pts = present(curve);
    if (pts.empty()) throw NumericalError("no q in the grid produced an embedding");
    std::ostringstream rule;
    rule << "smallest q after which all scores stay within " << plateau_tol;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const double base = pts[k]->score(measure);
        bool stable = true;
        for (std::size_t l = k + 1; l < pts.size() && stable; ++l) {
            stable = std::abs(pts[l]->score(measure) - base) < plateau_tol;
        }
        if (stable) return {pts[k]->value, true, measure, rule.str()};
    }
    return {pts.back()->value, true, measure, rule.str()};  // unreachable: the last point is always stable
}

std::string curve_to_csv(const SweepCurve& curve) {
    std::ostringstream out;
    out << sweep_parameter_name(curve.parameter) << ",rho_I,rho_O,tau_I,tau_O\n";
    for (const auto& p : curve.points) {
        out << p.value;
        for (Measure m : kAllMeasures) out << ',' << (p.scores ? io::format_double(p.score(m)) : "");
        out << '\n';
    }
    return out.str();
}

nlohmann::json curve_to_json(const SweepCurve& curve) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : curve.points) {
        nlohmann::json entry{{"value", p.value}};
        if (p.scores) {
            for (Measure m : kAllMeasures) entry[std::string(measure_name(m))] = p.score(m);
        } else {
            entry["failure"] = p.failure;
        }
        points.push_back(std::move(entry));
    }
    nlohmann::json j{{"parameter", sweep_parameter_name(curve.parameter)},
                     {"adjusted", curve.adjusted},
                     {"points", std::move(points)}};
    if (curve.J != 0) j["J"] = curve.J;
    return j;
}

nlohmann::json selection_to_json(const SelectionResult& s) {
    return {{"chosen_value", s.chosen_value},
            {"found", s.found},
            {"measure", measure_name(s.measure)},
            {"rule", s.rule}};
}

}  // namespace lrc
