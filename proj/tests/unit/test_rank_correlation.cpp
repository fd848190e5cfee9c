#include <doctest.h>

#include <random>

#include <Eigen/Geometry>

#include "../support/brute_force.hpp"
#include "lrc/error.hpp"
#include "lrc/parallel.hpp"
#include "lrc/rank_correlation.hpp"

using namespace lrc;

namespace {

Matrix column(std::initializer_list<double> v) {
    Matrix m(static_cast<Eigen::Index>(v.size()), 1);
    Eigen::Index r = 0;
    for (double x : v) m(r++, 0) = x;
    return m;
}

Matrix random_matrix(std::mt19937_64& rng, Eigen::Index n, Eigen::Index d) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix m(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) m(i, j) = u(rng);
    }
    return m;
}

struct Pair {
    NeighborhoodTable in;
    NeighborhoodTable out;
};

Pair tables(const Matrix& x, const Matrix& y, std::size_t J) {
    return {build_neighborhoods(DataMatrix(x), J), build_neighborhoods(DataMatrix(y), J)};
}

}  // namespace

TEST_CASE("trimmed ranks of identical configurations") {
    std::mt19937_64 rng(1);
    const Matrix x = random_matrix(rng, 30, 3);
    const auto t = tables(x, x, 7);
    for (std::size_t i = 0; i < 30; ++i) {
        const auto tr = trimmed_ranks(t.in, t.out, i, 7);
        CHECK(tr.zeta == 7);
        CHECK(tr.U() == 0.0);
        CHECK(tr.S2 == tr.R_hat2);
        const auto s = local_scores(tr);
        CHECK(s.rho_input == 1.0);
        CHECK(s.rho_output == 1.0);
        CHECK(s.tau_input == 1.0);
        CHECK(s.tau_output == 1.0);
    }
}

TEST_CASE("trimmed ranks with one shared neighbor") {
    // Input neighbors of case 0: {1, 2}; output neighbors: {2, 3}.
    const auto t = tables(column({0, 1, 2, 3, 100}), column({0, 5, 1, 2, 100}), 2);
    const auto tr = trimmed_ranks(t.in, t.out, 0, 2);
    CHECK(tr.zeta == 1);
    CHECK(tr.midrank2() == 4);  // midrank (1 + 2 + 1) / 2 = 2
    CHECK(tr.U() == 0.0);
    CHECK(tr.input_neighbors == std::vector<CaseIndex>{1, 2});
    CHECK(tr.output_neighbors == std::vector<CaseIndex>{2, 3});
    CHECK(tr.S2 == std::vector<long long>{2, 4});      // S for case 2 is 1, case 3 gets the midrank
    CHECK(tr.R_hat2 == std::vector<long long>{4, 2});  // case 1 midrank, case 2 is 1

    CHECK(local_rho_output(tr) == 1.0);
    CHECK(local_tau_output(tr) == 1.0);
    CHECK(local_rho_input(tr) == -1.0);
    CHECK(local_tau_input(tr) == -1.0);
}

TEST_CASE("disjoint neighborhoods give midranks and the full tie adjustment") {
    const auto t = tables(column({0, 1, 2, 10, 11}), column({0, 10, 11, 1, 2}), 2);
    const auto tr = trimmed_ranks(t.in, t.out, 0, 2);
    CHECK(tr.zeta == 0);
    CHECK(tr.S2 == std::vector<long long>{3, 3});
    CHECK(tr.R_hat2 == std::vector<long long>{3, 3});
    CHECK(tr.U() == doctest::Approx((8.0 - 2.0) / 12.0));
    CHECK(local_rho_output(tr) == 0.0);
    CHECK(local_rho_input(tr) == 0.0);
    CHECK(local_tau_output(tr) == 0.0);
    CHECK(local_tau_input(tr) == 0.0);
}

TEST_CASE("two swapped neighbors give -1 on every measure") {
    const auto t = tables(column({0, 1, 2, 10}), column({0, 2, 1, 10}), 2);
    CHECK(local_rho_output(t.in, t.out, 0, 2) == -1.0);
    CHECK(local_tau_output(t.in, t.out, 0, 2) == -1.0);
    CHECK(local_rho_input(t.in, t.out, 0, 2) == -1.0);
    CHECK(local_tau_input(t.in, t.out, 0, 2) == -1.0);
}

TEST_CASE("J below 2 is rejected") {
    const auto t = tables(column({0, 1, 2, 10}), column({0, 2, 1, 10}), 2);
    CHECK_THROWS_AS(trimmed_ranks(t.in, t.out, 0, 1), ParameterError);
    CHECK_THROWS_AS(trimmed_ranks(t.in, t.out, 0, 3), ParameterError);
    const DataMatrix x(column({0, 1, 2, 10}));
    CHECK_THROWS_AS(evaluate(x, x, 1), ParameterError);
    CHECK_THROWS_AS(evaluate(x, x, 4), ParameterError);
}

TEST_CASE("case-count mismatch is a shape error") {
    const DataMatrix x(column({0, 1, 2, 10}));
    const DataMatrix y(column({0, 1, 2}));
    CHECK_THROWS_AS(evaluate(x, y, 2), ShapeError);
    CHECK_THROWS_AS(goodness(Measure::RhoInput, x, y, 2), ShapeError);
    CHECK_THROWS_AS(fit_affine_adjustment(x, y, 2), ShapeError);
}

TEST_CASE("with a full intersection rho reduces to the classical Spearman formula") {
    // Case 0 has the same three nearest neighbors in both spaces, in a different order.
    const auto t = tables(column({0, 1, 2, 3, 50}), column({0, 3, 1, 2, 50}), 3);
    const auto tr = trimmed_ranks(t.in, t.out, 0, 3);
    REQUIRE(tr.zeta == 3);
    CHECK(tr.U() == 0.0);
    // Input ranks of cases 1,2,3: 1,2,3. Output ranks: 3,1,2. sum d^2 = 4 + 1 + 1.
    const double classical = 1.0 - 6.0 * 6.0 / (3.0 * (9.0 - 1.0));
    CHECK(local_rho_input(tr) == doctest::Approx(classical).epsilon(1e-15));
    CHECK(local_rho_output(tr) == doctest::Approx(classical).epsilon(1e-15));
}

TEST_CASE("tie adjustment vanishes when at most one neighbor differs") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix x = random_matrix(rng, 25, 3);
        const Matrix y = x + 0.05 * random_matrix(rng, 25, 3);
        const auto t = tables(x, y, 6);
        for (std::size_t i = 0; i < 25; ++i) {
            const auto tr = trimmed_ranks(t.in, t.out, i, 6);
            CHECK(tr.zeta <= 6);
            if (tr.zeta >= 5) CHECK(tr.U() == 0.0);
            if (tr.zeta < 5) CHECK(tr.U() > 0.0);
        }
    }
}

TEST_CASE("local measures match the brute-force oracle") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        const Eigen::Index n = 10 + static_cast<Eigen::Index>(rng() % 21);
        const Matrix x = random_matrix(rng, n, 1 + static_cast<Eigen::Index>(rng() % 5));
        const Matrix y = random_matrix(rng, n, 1 + static_cast<Eigen::Index>(rng() % 3));
        const int J = 2 + static_cast<int>(rng() % 7);
        const auto t = tables(x, y, static_cast<std::size_t>(J));
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto s = local_scores(trimmed_ranks(t.in, t.out, static_cast<std::size_t>(i), static_cast<std::size_t>(J)));
            const auto b = testing::brute_local_scores(x, y, i, J);
            CHECK(s.rho_input == doctest::Approx(b.rho_input).epsilon(1e-12));
            CHECK(s.rho_output == doctest::Approx(b.rho_output).epsilon(1e-12));
            CHECK(s.tau_input == doctest::Approx(b.tau_input).epsilon(1e-12));
            CHECK(s.tau_output == doctest::Approx(b.tau_output).epsilon(1e-12));
        }
    }
}

TEST_CASE("every local and global score is bounded by [-1, 1]") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix x = random_matrix(rng, 80, 4);
        const Matrix y = random_matrix(rng, 80, 2);
        const std::size_t J = 2 + rng() % 20;
        const auto report = evaluate(DataMatrix(x), DataMatrix(y), J);
        for (Measure m : kAllMeasures) {
            CHECK(report.value(m) >= -1.0);
            CHECK(report.value(m) <= 1.0);
            for (double s : report.get(m).local.scores) {
                CHECK(s >= -1.0);
                CHECK(s <= 1.0);
            }
        }
    }
}

TEST_CASE("scores are invariant under independent rigid motions and scalings") {
    std::mt19937_64 rng(4);
    const Matrix x = random_matrix(rng, 120, 3);
    const Matrix y = x.leftCols(2) + 0.1 * random_matrix(rng, 120, 2);
    const Matrix rot3 = Eigen::AngleAxisd(1.1, Eigen::Vector3d(0.3, -1, 2).normalized()).toRotationMatrix();
    const Matrix rot2 = Eigen::Rotation2Dd(0.4).toRotationMatrix();
    const Matrix x2 = ((x * rot3.transpose()) * 7.0).rowwise() + Eigen::RowVector3d(1, 2, 3);
    const Matrix y2 = ((y * rot2.transpose()) * 0.25).rowwise() + Eigen::RowVector2d(-5, 5);
    const auto a = evaluate(DataMatrix(x), DataMatrix(y), 8);
    const auto b = evaluate(DataMatrix(x2), DataMatrix(y2), 8);
    for (Measure m : kAllMeasures) CHECK(a.value(m) == b.value(m));
}

TEST_CASE("an independent random output scores near zero") {
    double sums[4] = {0, 0, 0, 0};
    const int seeds = 5;
    for (int seed = 0; seed < seeds; ++seed) {
        std::mt19937_64 rng(1000 + seed);
        const auto r = evaluate(DataMatrix(random_matrix(rng, 400, 3)), DataMatrix(random_matrix(rng, 400, 2)), 6);
        for (Measure m : kAllMeasures) sums[static_cast<int>(m)] += r.value(m);
    }
    for (double s : sums) CHECK(std::abs(s / seeds) < 0.05);
}

TEST_CASE("evaluation is identical across thread counts") {
    std::mt19937_64 rng(12);
    const DataMatrix x(random_matrix(rng, 300, 3));
    const DataMatrix y(random_matrix(rng, 300, 2));
    set_thread_count(1);
    const auto a = evaluate(x, y, 6);
    set_thread_count(3);
    const auto b = evaluate(x, y, 6);
    set_thread_count(0);
    for (Measure m : kAllMeasures) {
        CHECK(a.value(m) == b.value(m));
        CHECK(a.get(m).local.scores == b.get(m).local.scores);
    }
}

TEST_CASE("measure names round-trip") {
    for (Measure m : kAllMeasures) CHECK(parse_measure(measure_name(m)) == m);
    CHECK(parse_measure("tau-o") == Measure::TauOutput);
    CHECK_THROWS_AS(parse_measure("rho"), ParameterError);
}

TEST_CASE("affine adjustment recovers an isometry") {
    std::mt19937_64 rng(31);
    const Matrix x = random_matrix(rng, 150, 3);
    const Matrix q = Eigen::AngleAxisd(0.9, Eigen::Vector3d(1, 1, 0).normalized()).toRotationMatrix();
    const DataMatrix X(x);
    const DataMatrix Y(x * q);
    const auto adj = fit_affine_adjustment(X, Y, 6);
    CHECK(adj.residual < 1e-16);
    CHECK_FALSE(adj.degenerate);
    CHECK((adj.A.transpose() * adj.A - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-9);
    const auto r = evaluate_adjusted(X, Y, 6);
    CHECK(r.adjusted);
    for (Measure m : kAllMeasures) CHECK(r.value(m) == 1.0);
}

TEST_CASE("affine adjustment undoes an axis scaling") {
    std::mt19937_64 rng(32);
    const Matrix x = random_matrix(rng, 150, 3);
    const Eigen::Vector3d c(2.0, 0.5, 1.0);
    const DataMatrix X(x);
    const DataMatrix Y(x * c.asDiagonal());
    const auto adj = fit_affine_adjustment(X, Y, 6);
    CHECK(adj.residual < 1e-8);
    // Closed form: A'A = diag(1 / c^2), so A = diag(1 / c).
    const Matrix expected = c.cwiseInverse().asDiagonal();
    CHECK((adj.A - expected).cwiseAbs().maxCoeff() < 1e-9);
    const Matrix restored = apply_affine(Y, adj).values();
    CHECK((restored - x).cwiseAbs().maxCoeff() < 1e-9);
    for (Measure m : kAllMeasures) CHECK(goodness_adjusted(m, X, Y, 6).value == 1.0);
}

TEST_CASE("affine residual never exceeds the identity residual") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix x = random_matrix(rng, 60, 4);
        const Matrix y = random_matrix(rng, 60, 2) * (0.1 + trial);
        const DataMatrix X(x);
        const DataMatrix Y(y);
        const auto adj = fit_affine_adjustment(X, Y, 5);
        const auto nbrs = build_neighborhoods(X, 5);
        CHECK(adj.residual <= affine_objective(X, Y, nbrs, 5, Matrix::Identity(2, 2)) * (1 + 1e-12));
        CHECK(adj.residual == doctest::Approx(affine_objective(X, Y, nbrs, 5, adj.A)));
        // A'A must be symmetric PSD.
        const Matrix M = adj.A.transpose() * adj.A;
        CHECK((M - M.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(M).eigenvalues().minCoeff() >= -1e-12);
    }
}

TEST_CASE("a configuration without local variation is flagged") {
    std::mt19937_64 rng(34);
    const DataMatrix X(random_matrix(rng, 20, 3));
    const DataMatrix Y(Matrix::Constant(20, 2, 4.0));
    const auto adj = fit_affine_adjustment(X, Y, 4);
    CHECK(adj.degenerate);
    CHECK_FALSE(adj.warning.empty());
    CHECK(adj.A == Matrix::Identity(2, 2));
}
