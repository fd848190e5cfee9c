#include "lrc/manifolds.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "lrc/error.hpp"

namespace lrc {

ManifoldKind parse_manifold_kind(std::string_view text) {
    if (text == "swiss-roll" || text == "swiss_roll" || text == "SwissRoll") return ManifoldKind::SwissRoll;
    if (text == "s-curve" || text == "s_curve" || text == "SCurve") return ManifoldKind::SCurve;
    if (text == "noisy-flat" || text == "noisy_flat" || text == "NoisyFlat") return ManifoldKind::NoisyFlat;
    throw ParameterError("unknown manifold kind '" + std::string(text) + "'");
}

std::string_view manifold_kind_name(ManifoldKind kind) {
    switch (kind) {
        case ManifoldKind::SwissRoll: return "swiss-roll";
        case ManifoldKind::SCurve: return "s-curve";
        case ManifoldKind::NoisyFlat: return "noisy-flat";
    }
    return "?";
}

namespace {

// The standard distributions are implementation-defined; these conversions
// keep the output identical across standard libraries.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace

ManifoldSample generate(const ManifoldSpec& spec) {
    if (spec.n < 10) throw ValidationError("manifold sample needs n >= 10, got " + std::to_string(spec.n));
    if (!(spec.noise_sd >= 0.0) || !std::isfinite(spec.noise_sd)) {
        throw ValidationError("noise_sd must be a finite value >= 0");
    }
    const auto n = static_cast<Eigen::Index>(spec.n);
    constexpr double pi = std::numbers::pi;
    Sampler rng(spec.seed);

    Matrix X;
    Matrix latent;
    Vector colors(n);

    switch (spec.kind) {
        case ManifoldKind::SwissRoll:
        case ManifoldKind::SCurve: {
            X.resize(n, 3);
            latent.resize(n, 2);
            const bool roll = spec.kind == ManifoldKind::SwissRoll;
            for (Eigen::Index i = 0; i < n; ++i) {
                const double t = roll ? rng.uniform(1.5 * pi, 4.5 * pi) : rng.uniform(-1.5 * pi, 1.5 * pi);
                const double h = roll ? rng.uniform(0.0, 21.0) : rng.uniform(0.0, 2.0);
                if (roll) {
                    X.row(i) << t * std::cos(t), h, t * std::sin(t);
                } else {
                    const double sign = t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0);
                    X.row(i) << std::sin(t), h, sign * (std::cos(t) - 1.0);
                }
                latent.row(i) << t, h;
                colors(i) = t;
            }
            break;
        }
        case ManifoldKind::NoisyFlat: {
            const auto p = static_cast<Eigen::Index>(spec.ambient_dim);
            const auto q = static_cast<Eigen::Index>(spec.latent_dim);
            if (q < 1 || q >= p) {
                throw ValidationError("noisy flat needs 1 <= latent_dim < ambient_dim");
            }
            Matrix gauss(p, q);
            for (Eigen::Index r = 0; r < p; ++r) {
                for (Eigen::Index c = 0; c < q; ++c) gauss(r, c) = rng.normal();
            }
            const Matrix frame = gauss.householderQr().householderQ() * Matrix::Identity(p, q);
            latent.resize(n, q);
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index c = 0; c < q; ++c) latent(i, c) = rng.uniform(0.0, kFlatSide);
            }
            X = latent * frame.transpose();
            colors = latent.col(0);
            break;
        }
    }

    if (spec.noise_sd > 0.0) {
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            for (Eigen::Index c = 0; c < X.cols(); ++c) X(i, c) += spec.noise_sd * rng.normal();
        }
    }
    return {DataMatrix(std::move(X)), DataMatrix(std::move(latent)), std::move(colors)};
}

}  // namespace lrc
