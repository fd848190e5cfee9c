#pragma once

#include <cstdint>
#include <string_view>

#include "lrc/geometry.hpp"

namespace lrc {

enum class ManifoldKind { SwissRoll, SCurve, NoisyFlat };

ManifoldKind parse_manifold_kind(std::string_view text);
std::string_view manifold_kind_name(ManifoldKind kind);

/// Observed points are phi(latent) + isotropic Gaussian noise with standard
/// deviation noise_sd.
///
///   SwissRoll: t ~ U[1.5 pi, 4.5 pi], h ~ U[0, 21], x = (t cos t, h, t sin t)
///   SCurve:    t ~ U[-1.5 pi, 1.5 pi], h ~ U[0, 2], x = (sin t, h, sign(t)(cos t - 1))
///   NoisyFlat: y ~ U[0, flat_side]^latent_dim, x = y Q' for a random p x q
///              orthonormal frame Q
struct ManifoldSpec {
    ManifoldKind kind = ManifoldKind::SwissRoll;
    std::size_t n = 1000;
    double noise_sd = 0.0;
    std::size_t ambient_dim = 10;  // NoisyFlat only
    std::size_t latent_dim = 3;    // NoisyFlat only
    std::uint64_t seed = 0;
};

inline constexpr double kFlatSide = 10.0;

struct ManifoldSample {
    DataMatrix X;
    DataMatrix latent;  ///< generator parameters; (t, h) for the surfaces
    Vector colors;      ///< t for the surfaces, first latent coordinate for flats
};

/// Throws ValidationError for n < 10, negative noise, or latent_dim outside
/// [1, ambient_dim). Output is a pure function of the spec.
ManifoldSample generate(const ManifoldSpec& spec);

}  // namespace lrc
