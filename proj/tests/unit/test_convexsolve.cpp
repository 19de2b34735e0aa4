#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "qgh/convexsolve.hpp"

using namespace qgh;

TEST_CASE("single variable with a lower bound") {
    LinearProgram lp(1);
    lp.objective(0) = 1.0;
    lp.lower(0) = 3.0;
    CHECK(solve_lp(lp).value == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("linear objective over the simplex picks the smallest coordinate") {
    Rng rng(11);
    for (int t = 0; t < 20; ++t) {
        LinearProgram lp(6);
        lp.objective = gaussian_vector(rng, 6);
        lp.eq_matrix = Eigen::MatrixXd::Ones(1, 6);
        lp.eq_rhs = Eigen::VectorXd::Ones(1);
        const LpSolution s = solve_lp(lp);
        CHECK(std::abs(s.value - lp.objective.minCoeff()) < 1e-12);
        CHECK(std::abs(s.x.sum() - 1.0) < 1e-12);
    }
}

TEST_CASE("random five-variable programs agree with vertex enumeration") {
    Rng rng(5);
    for (int t = 0; t < 25; ++t) {
        const int n = 5, m = 4;
        LinearProgram lp(n);
        lp.objective = gaussian_vector(rng, n);
        lp.ineq_matrix = Eigen::MatrixXd(m + 1, n);
        lp.ineq_rhs = Eigen::VectorXd(m + 1);
        for (int i = 0; i < m; ++i) {
            lp.ineq_matrix.row(i) = gaussian_vector(rng, n).transpose();
            lp.ineq_rhs(i) = uniform(rng, 0.5, 2.0);  // x = 0 stays feasible
        }
        lp.ineq_matrix.row(m).setOnes();
        lp.ineq_rhs(m) = 10.0;  // keeps the region bounded
        Eigen::MatrixXd A(m + 1 + n, n);
        Eigen::VectorXd b(m + 1 + n);
        A << lp.ineq_matrix, -Eigen::MatrixXd::Identity(n, n);
        b << lp.ineq_rhs, Eigen::VectorXd::Zero(n);
        const double brute = oracle::vertex_enumeration_min(A, b, lp.objective);
        CHECK(std::abs(solve_lp(lp).value - brute) < 1e-9);
    }
}

TEST_CASE("infeasible and unbounded programs are detected") {
    LinearProgram lp(1);
    lp.objective(0) = -1.0;
    CHECK_THROWS_AS(solve_lp(lp), Error);
    try {
        solve_lp(lp);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Unbounded);
    }
    LinearProgram bad(1);
    bad.upper(0) = 1.0;
    bad.lower(0) = 2.0;
    CHECK_THROWS(solve_lp(bad));
    LinearProgram inf(2);
    inf.eq_matrix = Eigen::MatrixXd::Ones(1, 2);
    inf.eq_rhs = Eigen::VectorXd::Constant(1, -1.0);
    try {
        solve_lp(inf);
        FAIL("expected an infeasibility error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Infeasible);
    }
}

TEST_CASE("standard form reports a zero duality gap") {
    Rng rng(17);
    for (int t = 0; t < 30; ++t) {
        const int m = 4, n = 9;
        Eigen::MatrixXd A(m, n);
        for (int i = 0; i < m; ++i) A.row(i) = gaussian_vector(rng, n).transpose();
        Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
        for (int j = 0; j < n; ++j) x0(j) = uniform(rng, 0.0, 1.0);
        const Eigen::VectorXd b = A * x0;
        Eigen::VectorXd c(n);
        for (int j = 0; j < n; ++j) c(j) = uniform(rng, 0.1, 2.0);  // c > 0 keeps it bounded
        const StandardSolution s = solve_standard(A, b, c);
        CHECK(std::abs(b.dot(s.duals) - s.value) <= 1e-8);
        CHECK(((A.transpose() * s.duals - c).array() <= 1e-8).all());
        CHECK((A * s.x - b).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("chebyshev value against a direct one-dimensional search") {
    Rng rng(3);
    for (int t = 0; t < 10; ++t) {
        Eigen::MatrixXd G = gaussian_vector(rng, 7);
        const Eigen::VectorXd h = gaussian_vector(rng, 7);
        const double brute = oracle::golden_min(
            [&](double y) { return (G.col(0) * y + h).cwiseAbs().maxCoeff(); }, -50.0, 50.0, 200);
        CHECK(std::abs(chebyshev_value(G, h) - brute) < 1e-8);
    }
}

TEST_CASE("nearest point: vertices are at distance zero") {
    Rng rng(1);
    Eigen::MatrixXd V(3, 4);
    for (int j = 0; j < 4; ++j) V.col(j) = gaussian_vector(rng, 3);
    const Polytope P(V);
    MaxAbsGauge g{Eigen::MatrixXd::Identity(3, 3)};
    for (int j = 0; j < 4; ++j) {
        CHECK(nearest_point(V.col(j), P, g).distance < 1e-12);
        CHECK(nearest_point(V.col(j), P, EuclideanGauge{}).distance < 1e-9);
    }
}

TEST_CASE("nearest point to a segment under the dual of a path Lip-norm") {
    // Points y1, y2, y3 with y1y2 = y2y3 = 1; the dual gauge has atoms
    // y1 - y2 and y2 - y3.
    Eigen::MatrixXd atoms(3, 2);
    atoms << 1, 0, -1, 1, 0, -1;
    AtomicGauge g{atoms, {}};
    Eigen::Vector3d w1(1.0, 0.5, -0.5), w2(-0.5, 0.5, 1.0);
    Eigen::MatrixXd seg(3, 2);
    seg << w1, w2;
    const NearestPoint np = nearest_point(Eigen::Vector3d(1, 0, 0), Polytope(seg), g);
    CHECK(np.distance == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("polyhedral and Euclidean nearest points against nested line searches") {
    Rng rng(21);
    for (int t = 0; t < 10; ++t) {
        Eigen::MatrixXd V(2, 3);
        for (int j = 0; j < 3; ++j) V.col(j) = gaussian_vector(rng, 2);
        const Eigen::VectorXd z = 2.0 * gaussian_vector(rng, 2);
        Eigen::MatrixXd F(4, 2);
        for (int i = 0; i < 4; ++i) F.row(i) = gaussian_vector(rng, 2).transpose();
        auto poly = [&](const Eigen::VectorXd& p) { return (F * (z - p)).cwiseAbs().maxCoeff(); };
        auto eucl = [&](const Eigen::VectorXd& p) { return (z - p).norm(); };
        const double brute_poly = oracle::triangle_min(poly, V.col(0), V.col(1), V.col(2));
        const double brute_eucl = oracle::triangle_min(eucl, V.col(0), V.col(1), V.col(2));
        CHECK(std::abs(nearest_point(z, Polytope(V), MaxAbsGauge{F}).distance - brute_poly) < 1e-6);
        CHECK(std::abs(nearest_point(z, Polytope(V), EuclideanGauge{}).distance - brute_eucl) < 1e-6);
    }
}

TEST_CASE("distance zero exactly when the membership LP says inside") {
    Rng rng(8);
    Eigen::MatrixXd V(3, 5);
    for (int j = 0; j < 5; ++j) V.col(j) = gaussian_vector(rng, 3);
    const Polytope P(V);
    MaxAbsGauge g{Eigen::MatrixXd::Identity(3, 3)};
    for (int t = 0; t < 40; ++t) {
        const Eigen::VectorXd z = gaussian_vector(rng, 3);
        const bool inside = polytope_contains(P, z);
        const double dist = nearest_point(z, P, g).distance;
        CHECK(inside == (dist < 1e-9));
    }
    Eigen::VectorXd w = Eigen::VectorXd::Constant(5, 0.2);
    CHECK(polytope_contains(P, V * w));
}

TEST_CASE("Euclidean nearest point moves less as the vertices move less") {
    Rng rng(4);
    Eigen::MatrixXd V(3, 4);
    for (int j = 0; j < 4; ++j) V.col(j) = gaussian_vector(rng, 3);
    const Eigen::VectorXd z = 3.0 * gaussian_vector(rng, 3);
    const Eigen::VectorXd base = nearest_point(z, Polytope(V), EuclideanGauge{}).point;
    Eigen::MatrixXd dir(3, 4);
    for (int j = 0; j < 4; ++j) dir.col(j) = gaussian_vector(rng, 3).normalized();
    double prev = kInf;
    for (double eta : {1e-2, 1e-4, 1e-6}) {
        const Eigen::VectorXd moved = nearest_point(z, Polytope(V + eta * dir), EuclideanGauge{}).point;
        const double change = (moved - base).norm();
        CHECK(change < prev);
        CHECK(change <= 2.0 * eta + 1e-8);
        prev = change;
    }
}
