#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lrc/error.hpp"
#include "lrc/manifolds.hpp"
#include "lrc/matrix_io.hpp"
#include "lrc/parallel.hpp"
#include "lrc/rank_correlation.hpp"
#include "lrc/reducers.hpp"
#include "lrc/sweeps.hpp"

namespace py = pybind11;
using namespace py::literals;

namespace {

using lrc::DataMatrix;
using lrc::Matrix;
using lrc::Measure;

py::dict report_dict(const lrc::GoodnessReport& r, bool per_case) {
    py::dict d;
    for (Measure m : lrc::kAllMeasures) d[py::str(std::string(lrc::measure_name(m)))] = r.value(m);
    if (per_case) {
        py::dict local;
        for (Measure m : lrc::kAllMeasures) {
            local[py::str(std::string(lrc::measure_name(m)))] = r.get(m).local.scores;
        }
        d["local"] = local;
    }
    return d;
}

py::dict curve_dict(const lrc::SweepCurve& c) {
    py::list values, failures;
    py::dict scores;
    for (Measure m : lrc::kAllMeasures) scores[py::str(std::string(lrc::measure_name(m)))] = py::list();
    for (const auto& p : c.points) {
        values.append(p.value);
        failures.append(p.scores ? py::object(py::none()) : py::object(py::str(p.failure)));
        for (Measure m : lrc::kAllMeasures) {
            py::list col = scores[py::str(std::string(lrc::measure_name(m)))];
            col.append(p.scores ? py::object(py::float_(p.score(m))) : py::none());
        }
    }
    return py::dict("parameter"_a = std::string(lrc::sweep_parameter_name(c.parameter)), "adjusted"_a = c.adjusted,
                    "values"_a = values, "scores"_a = scores, "failures"_a = failures);
}

// Rebuilds a curve from its dict form so selections can run on Python data.
lrc::SweepCurve curve_from_dict(const py::dict& d) {
    lrc::SweepCurve c;
    const auto values = d["values"].cast<std::vector<int>>();
    const py::dict scores = d["scores"];
    for (std::size_t k = 0; k < values.size(); ++k) {
        lrc::SweepPoint p;
        p.value = values[k];
        std::array<double, 4> s{};
        bool ok = true;
        for (Measure m : lrc::kAllMeasures) {
            const py::list col = scores[py::str(std::string(lrc::measure_name(m)))];
            if (col[k].is_none()) {
                ok = false;
                break;
            }
            s[static_cast<std::size_t>(m)] = col[k].cast<double>();
        }
        if (ok) p.scores = s;
        c.points.push_back(p);
    }
    return c;
}

py::dict selection_dict(const lrc::SelectionResult& s) {
    return py::dict("chosen"_a = s.chosen_value, "found"_a = s.found,
                    "measure"_a = std::string(lrc::measure_name(s.measure)), "rule"_a = s.rule);
}

lrc::ReducerConfig config(const std::string& method, std::size_t q, std::size_t k) {
    return {lrc::parse_method(method), q, k, std::nullopt};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Local rank correlation scores for dimensionality reduction";

    auto base = py::register_exception<lrc::Error>(m, "Error", PyExc_RuntimeError);
    auto validation = py::register_exception<lrc::ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<lrc::ParameterError>(m, "ParameterError", validation.ptr());
    py::register_exception<lrc::ShapeError>(m, "ShapeError", validation.ptr());
    py::register_exception<lrc::FormatError>(m, "FormatError", base.ptr());
    auto numerical = py::register_exception<lrc::NumericalError>(m, "NumericalError", base.ptr());
    py::register_exception<lrc::DisconnectedGraphError>(m, "DisconnectedGraphError", numerical.ptr());

    m.def("set_thread_count", &lrc::set_thread_count, "count"_a, "0 uses every available core.");
    m.def("thread_count", &lrc::thread_count);

    m.def(
        "generate",
        [](const std::string& kind, std::size_t n, double noise, std::size_t p, std::size_t q, std::uint64_t seed) {
            const auto s = lrc::generate({lrc::parse_manifold_kind(kind), n, noise, p, q, seed});
            return py::make_tuple(s.X.values(), s.latent.values(), lrc::Vector(s.colors));
        },
        "kind"_a = "swiss-roll", "n"_a = 1000, "noise"_a = 0.0, "p"_a = 10, "q"_a = 3, "seed"_a = 0,
        "Returns (X, latent, colors).");

    m.def(
        "neighborhoods",
        [](const Matrix& X, std::size_t j_max) {
            const auto t = lrc::build_neighborhoods(DataMatrix(X), j_max);
            Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> idx(t.n_cases(), t.j_max());
            Matrix dist(t.n_cases(), t.j_max());
            for (std::size_t i = 0; i < t.n_cases(); ++i) {
                for (std::size_t j = 0; j < t.j_max(); ++j) {
                    idx(i, j) = t.neighbors(i)[j];
                    dist(i, j) = t.distances(i)[j];
                }
            }
            return py::make_tuple(idx, dist);
        },
        "X"_a, "j_max"_a, "Returns (indices, distances) of the j_max nearest distinct cases of every case.");

    m.def(
        "reduce",
        [](const Matrix& X, const std::string& method, std::size_t q, std::size_t k) {
            const auto e = lrc::reduce(DataMatrix(X), config(method, q, k));
            const auto& g = e.diagnostics;
            py::dict diag("eigenvalues"_a = g.eigenvalues, "residual_eigenvalues"_a = g.residual_eigenvalues,
                          "graph_components"_a = g.graph_components, "output_normalized"_a = g.output_normalized,
                          "gram_deviation"_a = g.gram_deviation, "notes"_a = g.notes);
            return py::make_tuple(e.data.values(), diag);
        },
        "X"_a, "method"_a = "pca", "q"_a = 2, "k"_a = 10, "Returns (embedding, diagnostics).");

    m.def(
        "evaluate",
        [](const Matrix& X, const Matrix& Y, std::size_t j, bool adjusted, bool per_case) {
            const DataMatrix x(X), y(Y);
            return report_dict(adjusted ? lrc::evaluate_adjusted(x, y, j) : lrc::evaluate(x, y, j), per_case);
        },
        "X"_a, "Y"_a, "j"_a = 6, "adjusted"_a = false, "per_case"_a = false,
        "All four goodness scores; per_case adds the local score vectors.");

    m.def(
        "local_scores",
        [](const Matrix& X, const Matrix& Y, std::size_t i, std::size_t j) {
            const auto in = lrc::build_neighborhoods(DataMatrix(X), j);
            const auto out = lrc::build_neighborhoods(DataMatrix(Y), j);
            const auto s = lrc::local_scores(lrc::trimmed_ranks(in, out, i, j));
            return py::dict("rho_I"_a = s.rho_input, "rho_O"_a = s.rho_output, "tau_I"_a = s.tau_input,
                            "tau_O"_a = s.tau_output);
        },
        "X"_a, "Y"_a, "i"_a, "j"_a = 6);

    m.def(
        "fit_affine_adjustment",
        [](const Matrix& X, const Matrix& Y, std::size_t j) {
            const auto a = lrc::fit_affine_adjustment(DataMatrix(X), DataMatrix(Y), j);
            return py::dict("A"_a = a.A, "residual"_a = a.residual, "degenerate"_a = a.degenerate,
                            "warning"_a = a.warning);
        },
        "X"_a, "Y"_a, "j"_a = 6);

    m.def(
        "sweep_j",
        [](const Matrix& X, const Matrix& Y, const std::vector<int>& grid, bool adjusted) {
            return curve_dict(lrc::sweep_J(DataMatrix(X), DataMatrix(Y), grid, adjusted));
        },
        "X"_a, "Y"_a, "grid"_a, "adjusted"_a = false);
    m.def(
        "sweep_k",
        [](const Matrix& X, const std::vector<int>& grid, const std::string& method, std::size_t q, std::size_t j) {
            return curve_dict(lrc::sweep_K(DataMatrix(X), config(method, q, 10), grid, j));
        },
        "X"_a, "grid"_a, "method"_a = "isomap", "q"_a = 2, "j"_a = 6);
    m.def(
        "sweep_dim",
        [](const Matrix& X, const std::vector<int>& grid, const std::string& method, std::size_t k, std::size_t j) {
            return curve_dict(lrc::sweep_dim(DataMatrix(X), config(method, 2, k), grid, j));
        },
        "X"_a, "grid"_a, "method"_a = "isomap", "k"_a = 10, "j"_a = 6);

    m.def(
        "select_j",
        [](const py::dict& curve, std::size_t window, double tol, const std::string& measure) {
            return selection_dict(lrc::select_J(curve_from_dict(curve), window, tol, lrc::parse_measure(measure)));
        },
        "curve"_a, "window"_a = 4, "tol"_a = 0.02, "measure"_a = "rho_I");
    m.def(
        "select_k",
        [](const py::dict& curve, const std::string& measure) {
            return selection_dict(lrc::select_K(curve_from_dict(curve), lrc::parse_measure(measure)));
        },
        "curve"_a, "measure"_a = "rho_I");
    m.def(
        "select_dim",
        [](const py::dict& curve, double plateau_tol, const std::string& measure) {
            return selection_dict(lrc::select_dim(curve_from_dict(curve), plateau_tol, lrc::parse_measure(measure)));
        },
        "curve"_a, "plateau_tol"_a = 0.02, "measure"_a = "rho_I");

    m.def(
        "read_matrix", [](const std::string& path) { return lrc::io::read_matrix(path); }, "path"_a);
    m.def(
        "write_matrix",
        [](const std::string& path, const Matrix& values) { lrc::io::write_matrix(path, values); }, "path"_a,
        "values"_a);
}
