#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lrc/error.hpp"
#include "lrc/manifolds.hpp"
#include "lrc/matrix_io.hpp"
#include "lrc/parallel.hpp"
#include "lrc/rank_correlation.hpp"
#include "lrc/reducers.hpp"
#include "lrc/sweeps.hpp"

namespace lrc::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Common {
    unsigned threads = 0;
    std::uint64_t seed = 0;
    std::string format;  // empty: from the output extension, else csv
};

struct GenerateArgs {
    std::string kind = "swiss-roll";
    std::size_t n = 1000;
    double noise = 0.0;
    std::size_t p = 10;
    std::size_t q = 3;
    std::string output;
    std::string latent;
    std::string colors;
};

struct ReduceArgs {
    std::string input;
    std::string method = "pca";
    std::size_t q = 2;
    std::size_t k = 10;
    std::string output;
};

struct EvaluateArgs {
    std::string input;
    std::string embedding;
    std::size_t j = 6;
    std::string measure = "all";
    bool adjusted = false;
    bool per_case = false;
    std::string output;
};

struct SweepArgs {
    std::string kind;
    std::string input;
    std::string embedding;
    std::string method = "isomap";
    std::size_t q = 2;
    std::size_t k = 10;
    std::size_t j = 6;
    std::optional<int> j_min, j_max, k_min, k_max, q_min, q_max;
    std::string measure = "rho-i";
    bool adjusted = false;
    std::size_t window = 4;
    double tol = 0.02;
    double plateau_tol = 0.02;
    std::string output;
};

const std::vector<std::string> kMeasureChoices{"rho-i", "rho-o", "tau-i", "tau-o", "all"};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--threads", c.threads, "worker threads (0 = all cores)");
    cmd->add_option("--seed", c.seed, "random seed");
    cmd->add_option("--format", c.format, "output file format")->check(CLI::IsMember({"csv", "json"}));
}

std::string resolved_format(const Common& c, const std::string& output) {
    if (!c.format.empty()) return c.format;
    return fs::path(output).extension() == ".json" ? "json" : "csv";
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw FormatError("write to '" + path + "' failed");
}

std::string fixed3(double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << v;
    return s.str();
}

std::vector<Measure> selected_measures(const std::string& text) {
    if (text == "all") return {kAllMeasures.begin(), kAllMeasures.end()};
    return {parse_measure(text)};
}

DataMatrix load(const std::string& path) { return DataMatrix(io::read_matrix(path)); }

json diagnostics_json(const Embedding& e) {
    return {{"eigenvalues", e.diagnostics.eigenvalues},
            {"residual_eigenvalues", e.diagnostics.residual_eigenvalues},
            {"graph_components", e.diagnostics.graph_components},
            {"output_normalized", e.diagnostics.output_normalized},
            {"gram_deviation", e.diagnostics.gram_deviation},
            {"notes", e.diagnostics.notes}};
}

// ---------------------------------------------------------------------------

int cmd_generate(const GenerateArgs& a, const Common& c, std::ostream& out) {
    ManifoldSpec spec;
    spec.kind = parse_manifold_kind(a.kind);
    spec.n = a.n;
    spec.noise_sd = a.noise;
    spec.ambient_dim = a.p;
    spec.latent_dim = a.q;
    spec.seed = c.seed;
    const ManifoldSample s = generate(spec);

    std::vector<std::string> header;
    for (std::size_t d = 0; d < s.X.n_dims(); ++d) header.push_back("x" + std::to_string(d + 1));
    io::write_matrix(a.output, s.X.values(), header);
    if (!a.latent.empty()) io::write_matrix(a.latent, s.latent.values());
    if (!a.colors.empty()) io::write_matrix(a.colors, Matrix(s.colors), {"color"});

    if (c.format == "json") {
        out << json{{"schema_version", kSchemaVersion}, {"command", "generate"}, {"kind", a.kind},
                    {"n", s.X.n_cases()}, {"p", s.X.n_dims()}, {"seed", c.seed}, {"output", a.output}}
                   .dump(2)
            << '\n';
    } else {
        out << "kind=" << a.kind << " n=" << s.X.n_cases() << " p=" << s.X.n_dims() << " seed=" << c.seed << '\n';
    }
    return kOk;
}

int cmd_reduce(const ReduceArgs& a, const Common& c, std::ostream& out) {
    const DataMatrix X = load(a.input);
    ReducerConfig cfg;
    cfg.method = parse_method(a.method);
    cfg.q = a.q;
    cfg.K = a.k;
    if (cfg.method == Method::External) throw ParameterError("reduce does not accept --method external");
    const Embedding e = reduce(X, cfg);

    std::vector<std::string> header;
    for (std::size_t d = 0; d < e.data.n_dims(); ++d) header.push_back("y" + std::to_string(d + 1));
    io::write_matrix(a.output, e.data.values(), header);

    if (c.format == "json") {
        json j{{"schema_version", kSchemaVersion}, {"command", "reduce"}, {"method", method_name(cfg.method)},
               {"n", X.n_cases()}, {"q", cfg.q}, {"output", a.output}, {"diagnostics", diagnostics_json(e)}};
        if (cfg.method != Method::PCA) j["K"] = cfg.K;
        out << j.dump(2) << '\n';
        return kOk;
    }
    out << "method=" << method_name(cfg.method) << " n=" << X.n_cases() << " q=" << cfg.q;
    if (cfg.method != Method::PCA) out << " K=" << cfg.K;
    out << '\n';
    out << "eigenvalues:";
    for (double v : e.diagnostics.eigenvalues) out << ' ' << io::format_double(v);
    out << "\nresidual eigenvalues:";
    for (double v : e.diagnostics.residual_eigenvalues) out << ' ' << io::format_double(v);
    out << '\n';
    if (e.diagnostics.graph_components > 0) out << "graph components: " << e.diagnostics.graph_components << '\n';
    if (e.diagnostics.output_normalized) {
        out << "gram deviation: " << io::format_double(e.diagnostics.gram_deviation) << '\n';
    }
    for (const auto& note : e.diagnostics.notes) out << "note: " << note << '\n';
    return kOk;
}

// Orthonormal zero-mean columns are the signature of normalized outputs.
bool looks_normalized(const DataMatrix& Y) {
    const Matrix& y = Y.values();
    const Matrix gram = y.transpose() * y;
    const double dev = (gram - Matrix::Identity(y.cols(), y.cols())).cwiseAbs().maxCoeff();
    return dev < 1e-6 && y.colwise().mean().cwiseAbs().maxCoeff() < 1e-6;
}

int cmd_evaluate(const EvaluateArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
    const DataMatrix X = load(a.input);
    const DataMatrix Y = load(a.embedding);
    if (X.n_cases() != Y.n_cases()) {
        throw ShapeError("input has " + std::to_string(X.n_cases()) + " rows, embedding has " +
                         std::to_string(Y.n_cases()));
    }
    const auto measures = selected_measures(a.measure);

    std::optional<AffineAdjustment> fit;
    GoodnessReport report;
    if (a.adjusted) {
        fit = fit_affine_adjustment(X, Y, a.j);
        if (!fit->warning.empty()) err << "warning: " << fit->warning << '\n';
        report = evaluate(X, apply_affine(Y, *fit), a.j);
        report.adjusted = true;
        for (auto& s : report.scores) s.adjusted = true;
    } else {
        report = evaluate(X, Y, a.j);
        if (looks_normalized(Y)) {
            err << "note: embedding columns are orthonormal; it may be normalized, consider --adjusted\n";
        }
    }

    json j{{"schema_version", kSchemaVersion}, {"command", "evaluate"}, {"n", X.n_cases()},
           {"J", a.j}, {"adjusted", a.adjusted}};
    json scores = json::object();
    for (Measure m : measures) scores[std::string(measure_name(m))] = report.value(m);
    j["scores"] = scores;
    if (fit) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < fit->A.rows(); ++r) {
            std::vector<double> row;
            for (Eigen::Index col = 0; col < fit->A.cols(); ++col) row.push_back(fit->A(r, col));
            rows.push_back(row);
        }
        j["affine"] = {{"A", rows}, {"residual", fit->residual}, {"degenerate", fit->degenerate}};
    }
    if (a.per_case) {
        json local = json::object();
        for (Measure m : measures) local[std::string(measure_name(m))] = report.get(m).local.scores;
        j["local"] = local;
    }

    if (!a.output.empty()) {
        if (resolved_format(c, a.output) == "json") {
            write_text(a.output, j.dump(2) + "\n");
        } else {
            std::ostringstream csv;
            if (a.per_case) {
                csv << "case";
                for (Measure m : measures) csv << ',' << measure_name(m);
                csv << '\n';
                for (std::size_t i = 0; i < X.n_cases(); ++i) {
                    csv << i;
                    for (Measure m : measures) csv << ',' << io::format_double(report.get(m).local.scores[i]);
                    csv << '\n';
                }
            } else {
                csv << "measure,J,adjusted,value\n";
                for (Measure m : measures) {
                    csv << measure_name(m) << ',' << a.j << ',' << (a.adjusted ? 1 : 0) << ','
                        << io::format_double(report.value(m)) << '\n';
                }
            }
            write_text(a.output, csv.str());
        }
    }

    if (c.format == "json" && a.output.empty()) {
        out << j.dump(2) << '\n';
        return kOk;
    }
    out << "n=" << X.n_cases() << " J=" << a.j << (a.adjusted ? " adjusted" : "") << '\n';
    for (Measure m : measures) out << measure_name(m) << ' ' << fixed3(report.value(m)) << '\n';
    if (fit) out << "affine residual " << io::format_double(fit->residual) << '\n';
    return kOk;
}

int cmd_sweep(const SweepArgs& a, const Common& c, std::ostream& out) {
    const DataMatrix X = load(a.input);
    const Measure measure = parse_measure(a.measure);
    SweepCurve curve;
    SelectionResult sel;

    if (a.kind == "j") {
        if (a.embedding.empty()) throw ParameterError("sweep --kind j needs --embedding");
        const DataMatrix Y = load(a.embedding);
        const int top = static_cast<int>(std::min<std::size_t>(20, X.n_cases() - 1));
        curve = sweep_J(X, Y, make_grid(a.j_min.value_or(2), a.j_max.value_or(top)), a.adjusted);
        sel = select_J(curve, a.window, a.tol, measure);
    } else {
        ReducerConfig base;
        base.method = parse_method(a.method);
        if (base.method == Method::External) throw ParameterError("sweeps need a built-in method");
        base.q = a.q;
        base.K = a.k;
        if (a.kind == "k") {
            if (base.method == Method::PCA) throw ParameterError("PCA has no neighborhood size to sweep");
            curve = sweep_K(X, base, make_grid(a.k_min.value_or(4), a.k_max.value_or(20)), a.j);
            sel = select_K(curve, measure);
        } else {
            const int top = static_cast<int>(std::min<std::size_t>(6, X.n_dims() - 1));
            curve = sweep_dim(X, base, make_grid(a.q_min.value_or(1), a.q_max.value_or(top)), a.j);
            sel = select_dim(curve, a.plateau_tol, measure);
        }
    }

    json j{{"schema_version", kSchemaVersion}, {"command", "sweep"}, {"kind", a.kind},
           {"curve", curve_to_json(curve)}, {"selection", selection_to_json(sel)}};
    if (!a.output.empty()) {
        if (resolved_format(c, a.output) == "json") {
            write_text(a.output, j.dump(2) + "\n");
        } else {
            write_text(a.output, curve_to_csv(curve));
        }
    }
    if (c.format == "json" && a.output.empty()) {
        out << j.dump(2) << '\n';
        return kOk;
    }

    out << sweep_parameter_name(curve.parameter);
    for (Measure m : kAllMeasures) out << ' ' << measure_name(m);
    out << '\n';
    for (const auto& p : curve.points) {
        out << p.value;
        if (p.scores) {
            for (Measure m : kAllMeasures) out << ' ' << fixed3(p.score(m));
        } else {
            out << " failed: " << p.failure;
        }
        out << '\n';
    }
    out << "selected " << sweep_parameter_name(curve.parameter) << '=' << sel.chosen_value
        << (sel.found ? "" : " (no value met the rule)") << " [" << sel.rule << "]\n";
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Local rank correlation scores for dimensionality reduction"};
    app.name("lrc");
    app.require_subcommand(1);

    Common common;

    GenerateArgs g;
    auto* gen = app.add_subcommand("generate", "sample a synthetic manifold");
    gen->add_option("--kind", g.kind)->check(CLI::IsMember({"swiss-roll", "s-curve", "noisy-flat"}));
    gen->add_option("--n", g.n, "number of cases");
    gen->add_option("--noise", g.noise, "standard deviation of isotropic Gaussian noise");
    gen->add_option("--p", g.p, "ambient dimension (noisy-flat)");
    gen->add_option("--q", g.q, "latent dimension (noisy-flat)");
    gen->add_option("--output", g.output, "data matrix (.csv or .bin)")->required();
    gen->add_option("--latent", g.latent, "also write the latent coordinates");
    gen->add_option("--colors", g.colors, "also write the coloring variable");
    add_common(gen, common);

    ReduceArgs r;
    auto* red = app.add_subcommand("reduce", "compute an embedding");
    red->add_option("--input", r.input)->required();
    red->add_option("--method", r.method)->check(CLI::IsMember({"pca", "isomap", "ltsa"}));
    red->add_option("--q", r.q, "target dimension");
    red->add_option("--k", r.k, "graph neighborhood size");
    red->add_option("--output", r.output, "embedding matrix (.csv or .bin)")->required();
    add_common(red, common);

    EvaluateArgs e;
    auto* ev = app.add_subcommand("evaluate", "score an embedding against its input");
    ev->add_option("--input", e.input)->required();
    ev->add_option("--embedding", e.embedding)->required();
    ev->add_option("--j", e.j, "neighborhood size J");
    ev->add_option("--measure", e.measure)->check(CLI::IsMember(kMeasureChoices));
    ev->add_flag("--adjusted", e.adjusted, "fit the affine adjustment before scoring");
    ev->add_flag("--per-case", e.per_case, "include local scores of every case");
    ev->add_option("--output", e.output, "report file (.csv or .json)");
    add_common(ev, common);

    SweepArgs s;
    auto* sw = app.add_subcommand("sweep", "score a grid of J, K or q");
    sw->add_option("--kind", s.kind)->required()->check(CLI::IsMember({"j", "k", "dim"}));
    sw->add_option("--input", s.input)->required();
    sw->add_option("--embedding", s.embedding, "fixed embedding (kind j)");
    sw->add_option("--method", s.method)->check(CLI::IsMember({"pca", "isomap", "ltsa"}));
    sw->add_option("--q", s.q);
    sw->add_option("--k", s.k);
    sw->add_option("--j", s.j, "fixed J of K and q sweeps");
    sw->add_option("--j-min", s.j_min);
    sw->add_option("--j-max", s.j_max);
    sw->add_option("--k-min", s.k_min);
    sw->add_option("--k-max", s.k_max);
    sw->add_option("--q-min", s.q_min);
    sw->add_option("--q-max", s.q_max);
    sw->add_option("--measure", s.measure, "measure driving the selection")
        ->check(CLI::IsMember({"rho-i", "rho-o", "tau-i", "tau-o"}));
    sw->add_flag("--adjusted", s.adjusted, "adjusted scores (kind j)");
    sw->add_option("--window", s.window, "stability window (kind j)");
    sw->add_option("--tol", s.tol, "stability tolerance (kind j)");
    sw->add_option("--plateau-tol", s.plateau_tol, "plateau tolerance (kind dim)");
    sw->add_option("--output", s.output, "curve file (.csv or .json)");
    add_common(sw, common);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& ex) {
        const int code = app.exit(ex, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        set_thread_count(common.threads);
        if (*gen) return cmd_generate(g, common, out);
        if (*red) return cmd_reduce(r, common, out);
        if (*ev) return cmd_evaluate(e, common, out, err);
        return cmd_sweep(s, common, out);
    } catch (const ValidationError& ex) {
        err << "error: " << ex.what() << '\n';
        return kValidation;
    } catch (const FormatError& ex) {
        err << "error: " << ex.what() << '\n';
        return kFormat;
    } catch (const NumericalError& ex) {
        err << "error: " << ex.what() << '\n';
        return kNumerical;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return kNumerical;
    }
}

}  // namespace lrc::cli
