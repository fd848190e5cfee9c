#include <doctest.h>

#include <cmath>

#include "lrc/error.hpp"
#include "lrc/manifolds.hpp"
#include "lrc/rank_correlation.hpp"
#include "lrc/reducers.hpp"

using namespace lrc;

namespace {

// Arc length of the planar spiral (t cos t, t sin t) from 0 to t.
double spiral_arc_length(double t) { return 0.5 * (t * std::sqrt(1.0 + t * t) + std::asinh(t)); }

}  // namespace

TEST_CASE("Swiss roll points lie on the roll") {
    const auto s = generate({ManifoldKind::SwissRoll, 1000, 0.0, 0, 0, 7});
    REQUIRE(s.X.n_cases() == 1000);
    REQUIRE(s.X.n_dims() == 3);
    for (std::size_t i = 0; i < 1000; ++i) {
        const double t = s.latent(i, 0);
        CHECK(s.X(i, 0) * s.X(i, 0) + s.X(i, 2) * s.X(i, 2) == doctest::Approx(t * t).epsilon(1e-12));
        CHECK(s.X(i, 1) == s.latent(i, 1));
        CHECK(t >= 1.5 * M_PI);
        CHECK(t <= 4.5 * M_PI);
        CHECK(s.colors(static_cast<Eigen::Index>(i)) == t);
    }
}

TEST_CASE("S-curve coordinates are bounded and reproducible") {
    const ManifoldSpec spec{ManifoldKind::SCurve, 1000, 0.0, 0, 0, 3};
    const auto a = generate(spec);
    const auto b = generate(spec);
    CHECK(a.X.values() == b.X.values());
    CHECK(a.latent.values() == b.latent.values());
    for (std::size_t i = 0; i < 1000; ++i) {
        CHECK(std::abs(a.X(i, 0)) <= 1.0);
        CHECK(a.X(i, 1) >= 0.0);
        CHECK(a.X(i, 1) <= 2.0);
        CHECK(std::abs(a.X(i, 2)) <= 2.0);
    }
    const auto c = generate({ManifoldKind::SCurve, 1000, 0.0, 0, 0, 4});
    CHECK(a.X.values() != c.X.values());
}

TEST_CASE("generation is deterministic for every kind, with noise") {
    for (auto kind : {ManifoldKind::SwissRoll, ManifoldKind::SCurve, ManifoldKind::NoisyFlat}) {
        const ManifoldSpec spec{kind, 200, 0.1, 6, 2, 123};
        CHECK(generate(spec).X.values() == generate(spec).X.values());
    }
}

TEST_CASE("specs are validated") {
    CHECK_THROWS_AS(generate({ManifoldKind::SwissRoll, 5, 0.0, 0, 0, 1}), ValidationError);
    CHECK_THROWS_AS(generate({ManifoldKind::SwissRoll, 100, -1.0, 0, 0, 1}), ValidationError);
    CHECK_THROWS_AS(generate({ManifoldKind::NoisyFlat, 100, 0.0, 3, 3, 1}), ValidationError);
    CHECK_THROWS_AS(generate({ManifoldKind::NoisyFlat, 100, 0.0, 3, 0, 1}), ValidationError);
    CHECK_THROWS_AS(parse_manifold_kind("torus"), ParameterError);
    CHECK(parse_manifold_kind("swiss-roll") == ManifoldKind::SwissRoll);
}

TEST_CASE("a noiseless flat is reproduced exactly by PCA at its own dimension") {
    const auto s = generate({ManifoldKind::NoisyFlat, 300, 0.0, 10, 3, 9});
    const auto emb = reduce_pca(s.X, 3);
    const auto r = evaluate(s.X, emb.data, 6);
    for (Measure m : kAllMeasures) CHECK(r.value(m) == 1.0);
}

TEST_CASE("short Euclidean distances approximate unrolled latent distances") {
    SUBCASE("Swiss roll") {
        const auto s = generate({ManifoldKind::SwissRoll, 1000, 0.0, 0, 0, 5});
        const auto nbrs = build_neighborhoods(s.X, 6);
        for (std::size_t i = 0; i < 1000; ++i) {
            for (CaseIndex j : nbrs.neighbors(i)) {
                const double ds = spiral_arc_length(s.latent(i, 0)) - spiral_arc_length(s.latent(j, 0));
                const double dh = s.latent(i, 1) - s.latent(j, 1);
                const double geodesic = std::hypot(ds, dh);
                const double euclid = (s.X.row(i) - s.X.row(j)).norm();
                CHECK(std::abs(euclid - geodesic) <= 0.05 * geodesic);
            }
        }
    }
    SUBCASE("S-curve") {
        const auto s = generate({ManifoldKind::SCurve, 1000, 0.0, 0, 0, 5});
        const auto nbrs = build_neighborhoods(s.X, 6);
        for (std::size_t i = 0; i < 1000; ++i) {
            for (CaseIndex j : nbrs.neighbors(i)) {
                const double geodesic = (s.latent.row(i) - s.latent.row(j)).norm();
                const double euclid = (s.X.row(i) - s.X.row(j)).norm();
                CHECK(std::abs(euclid - geodesic) <= 0.05 * geodesic);
            }
        }
    }
}
