#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "qgh/dirac.hpp"
#include "qgh/lipnorm.hpp"

#include <Eigen/SVD>

using namespace qgh;

namespace {

// Commutator built from scratch on the unweighted basis of ordered pairs.
double commutator_oracle(const FiniteMetricSpace& X, const Eigen::VectorXd& f) {
    const int n = X.size();
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) pairs.emplace_back(i, j);
    const int m = static_cast<int>(pairs.size());
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m, m), F = Eigen::MatrixXd::Zero(m, m);
    for (int a = 0; a < m; ++a) {
        const auto [i, j] = pairs[a];
        F(a, a) = f(i);
        for (int b = 0; b < m; ++b)
            if (pairs[b] == std::pair{j, i}) D(a, b) = 1.0 / X.dist(i, j);
    }
    const Eigen::MatrixXd C = D * F - F * D;
    return Eigen::JacobiSVD<Eigen::MatrixXd>(C).singularValues()(0);
}

FiniteMetricSpace two_point(double r) {
    Eigen::MatrixXd d(2, 2);
    d << 0, r, r, 0;
    return make_metric_space(d);
}

}  // namespace

TEST_CASE("two points give a 2x2 swap") {
    const DiracTriple t = build_dirac(two_point(2.0));
    CHECK(t.dim() == 2);
    const Eigen::MatrixXd D = dirac_matrix(t);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D);
    CHECK(es.eigenvalues()(0) == doctest::Approx(-0.5));
    CHECK(es.eigenvalues()(1) == doctest::Approx(0.5));
    Eigen::VectorXd f(2);
    f << 1.0, 4.0;
    CHECK(commutator_lipnorm(t, f) == doctest::Approx(1.5));
    CHECK(commutator_norm_dense(t, f) == doctest::Approx(1.5));
}

TEST_CASE("pair indexing is lexicographic over i != j") {
    Rng rng(2);
    const DiracTriple t = build_dirac(make_metric_space(oracle::random_metric(rng, 4)));
    CHECK(t.dim() == 12);
    int k = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) {
                CHECK(t.pair_index(i, j) == k);
                CHECK(t.pairs[k] == std::pair{i, j});
                ++k;
            }
}

TEST_CASE("commutator norm equals the metric Lipschitz constant") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + trial % 6;
        const FiniteMetricSpace X = make_metric_space(oracle::random_metric(rng, n));
        Eigen::VectorXd w(n);
        for (int i = 0; i < n; ++i) w(i) = uniform(rng, 0.2, 3.0);
        const DiracTriple t = build_dirac(X, w);
        const LipNorm L = lipnorm_from_metric(X);
        for (int s = 0; s < 10; ++s) {
            const Eigen::VectorXd f = gaussian_vector(rng, n);
            const double expected = commutator_oracle(X, f);
            CHECK(commutator_lipnorm(t, f) == doctest::Approx(expected).epsilon(1e-10));
            CHECK(commutator_norm_dense(t, f) == doctest::Approx(expected).epsilon(1e-10));
            CHECK(eval_lip(L, f) == doctest::Approx(expected).epsilon(1e-10));
        }
    }
}

TEST_CASE("weights do not change the operator norms") {
    Rng rng(7);
    const FiniteMetricSpace X = make_metric_space(oracle::random_metric(rng, 5));
    const DiracTriple a = build_dirac(X);
    Eigen::VectorXd w(5);
    w << 0.1, 7.0, 1.0, 2.5, 0.3;
    const DiracTriple b = build_dirac(X, w);
    for (int s = 0; s < 10; ++s) {
        const Eigen::VectorXd f = gaussian_vector(rng, 5);
        CHECK(commutator_norm_dense(a, f) == doctest::Approx(commutator_norm_dense(b, f)).epsilon(1e-10));
    }
    const Eigen::MatrixXd Da = dirac_matrix(a), Db = dirac_matrix(b);
    CHECK((Da - Db).norm() < 1e-12);
}

TEST_CASE("Dirac operator is self-adjoint") {
    Rng rng(9);
    for (int n = 2; n <= 8; ++n) {
        const FiniteMetricSpace X = make_metric_space(oracle::random_metric(rng, n));
        Eigen::VectorXd w(n);
        for (int i = 0; i < n; ++i) w(i) = uniform(rng, 0.5, 2.0);
        const DiracTriple t = build_dirac(X, w);
        CHECK(self_adjoint_residual(t) < 1e-12);
        const Eigen::MatrixXd D = dirac_matrix(t);
        CHECK((D - D.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("commutator is a seminorm vanishing on constants") {
    Rng rng(11);
    const FiniteMetricSpace X = make_metric_space(oracle::random_metric(rng, 6));
    const DiracTriple t = build_dirac(X);
    const Eigen::VectorXd f = gaussian_vector(rng, 6), g = gaussian_vector(rng, 6);
    CHECK(commutator_lipnorm(t, Eigen::VectorXd::Constant(6, 3.0)) == 0.0);
    CHECK(commutator_lipnorm(t, f + g) <= commutator_lipnorm(t, f) + commutator_lipnorm(t, g) + 1e-12);
    CHECK(commutator_lipnorm(t, -2.5 * f) == doctest::Approx(2.5 * commutator_lipnorm(t, f)));
    CHECK(commutator_lipnorm(t, f + Eigen::VectorXd::Constant(6, 1.0)) ==
          doctest::Approx(commutator_lipnorm(t, f)));
    const Eigen::MatrixXd C = commutator_matrix(t, f);
    CHECK((C + C.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("invalid Dirac inputs") {
    Eigen::MatrixXd one(1, 1);
    one << 0;
    CHECK_THROWS_AS(build_dirac(make_metric_space(one)), Error);
    try {
        build_dirac(make_metric_space(one));
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::TooSmall);
    }
    Eigen::VectorXd w(2);
    w << 1.0, 0.0;
    try {
        build_dirac(two_point(1.0), w);
        FAIL("expected a weight error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonpositiveWeight);
    }
    Rng rng(13);
    const DiracTriple big = build_dirac(make_metric_space(oracle::random_metric(rng, 13)));
    CHECK_THROWS_AS(commutator_norm_dense(big, Eigen::VectorXd::Zero(13)), Error);
    CHECK(commutator_lipnorm(big, Eigen::VectorXd::Zero(13)) == 0.0);
}
