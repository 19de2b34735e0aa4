#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "qgh/classical.hpp"
#include "qgh/lipnorm.hpp"

using namespace qgh;

namespace {

Eigen::VectorXd centered(Rng& rng, int n) {
    Eigen::VectorXd v = gaussian_vector(rng, n);
    return v.array() - v.mean();
}

// sup lambda(a) over {L(a) <= 1} by enumerating the vertices of the slice
// a_0 = 0 of the unit ball (lambda(e) = 0 makes the slice sufficient).
double ball_sup_by_vertices(const LipNorm& L, const Eigen::VectorXd& lambda) {
    const int n = L.dim();
    const int k = L.num_functionals();
    Eigen::MatrixXd A(2 * k, n - 1);
    A << L.functionals.rightCols(n - 1), -L.functionals.rightCols(n - 1);
    const Eigen::VectorXd b = Eigen::VectorXd::Ones(2 * k);
    return -oracle::vertex_enumeration_min(A, b, -lambda.tail(n - 1));
}

// Smallest |a - t e| over t, as an LP.
double quotient_norm(const OrderUnitSpace& A, const Eigen::VectorXd& a) {
    LinearProgram lp(2);  // (t, r)
    lp.objective << 0.0, 1.0;
    lp.lower(0) = -kInf;
    const int k = A.num_states();
    lp.ineq_matrix.resize(2 * k, 2);
    lp.ineq_rhs.resize(2 * k);
    for (int i = 0; i < k; ++i) {
        const double v = A.state(i).dot(a);
        lp.ineq_matrix.row(i) << -1.0, -1.0;  // v - t <= r
        lp.ineq_rhs(i) = -v;
        lp.ineq_matrix.row(k + i) << 1.0, -1.0;  // t - v <= r
        lp.ineq_rhs(k + i) = v;
    }
    return solve_lp(lp).value;
}

}  // namespace

TEST_CASE("two points at distance d: the identity function has slope one") {
    Eigen::MatrixXd d(2, 2);
    d << 0, 2.5, 2.5, 0;
    const LipNorm L = lipnorm_from_metric(make_metric_space(d));
    CHECK(eval_lip(L, Eigen::Vector2d(0, 2.5)) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("path metric on three points: the long pair is dominated") {
    const Appendix1 a = appendix1_instance();
    const LipNorm L = lipnorm_from_metric(a.Y);
    Rng rng(1);
    for (int t = 0; t < 100; ++t) {
        const Eigen::VectorXd f = gaussian_vector(rng, 3);
        const double expect = std::max(std::abs(f(0) - f(1)), std::abs(f(1) - f(2)));
        CHECK(std::abs(eval_lip(L, f) - expect) < 1e-14);
    }
    CHECK(eval_lip(L, Eigen::Vector3d(0, 1, 2)) == 1.0);
}

TEST_CASE("metric Lip-norm equals the brute-force pairwise maximum") {
    Rng rng(2);
    for (int t = 0; t < 20; ++t) {
        const Eigen::MatrixXd d = oracle::random_metric(rng, 4);
        const LipNorm L = lipnorm_from_metric(make_metric_space(d));
        const Eigen::VectorXd f = gaussian_vector(rng, 4);
        double brute = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (i != j) brute = std::max(brute, std::abs(f(i) - f(j)) / d(i, j));
        CHECK(std::abs(eval_lip(L, f) - brute) < 1e-13);
    }
}

TEST_CASE("non-metrics are rejected") {
    Eigen::MatrixXd d(3, 3);
    d << 0, 1, 5, 1, 0, 1, 5, 1, 0;
    try {
        lipnorm_from_metric(make_metric_space(d));
        FAIL("expected a metric error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotAMetric);
    }
}

TEST_CASE("the unit is in the null space and the norm is homogeneous") {
    Rng rng(3);
    const LipNorm L = lipnorm_from_metric(make_metric_space(oracle::random_metric(rng, 5)));
    CHECK(eval_lip(L, Eigen::VectorXd::Ones(5)) < 1e-15);
    for (int t = 0; t < 20; ++t) {
        const Eigen::VectorXd a = gaussian_vector(rng, 5);
        const double s = uniform(rng, -3.0, 3.0);
        CHECK(eval_lip(L, s * a) == doctest::Approx(std::abs(s) * eval_lip(L, a)).epsilon(1e-13));
    }
}

TEST_CASE("dual of the three-point path Lip-norm is |l1| + |l3|") {
    const LipNorm L = lipnorm_from_metric(appendix1_instance().Y);
    CHECK(dual_seminorm(L, Eigen::Vector3d(1.5, 0, -1.5)) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(dual_seminorm(L, Eigen::Vector3d::Zero()) == 0.0);
    Rng rng(4);
    for (int t = 0; t < 100; ++t) {
        const Eigen::VectorXd l = centered(rng, 3);
        CHECK(std::abs(dual_seminorm(L, l) - (std::abs(l(0)) + std::abs(l(2)))) < 1e-9);
    }
}

TEST_CASE("dual seminorm requires a centered functional") {
    const LipNorm L = lipnorm_from_metric(appendix1_instance().Y);
    try {
        dual_seminorm(L, Eigen::Vector3d(1, 0, 0));
        FAIL("expected NotCentered");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotCentered);
    }
}

TEST_CASE("dual seminorm equals the maximum over vertices of the Lip ball") {
    Rng rng(5);
    for (int t = 0; t < 15; ++t) {
        const LipNorm L = lipnorm_from_metric(make_metric_space(oracle::random_metric(rng, 4)));
        const Eigen::VectorXd l = centered(rng, 4);
        CHECK(std::abs(dual_seminorm(L, l) - ball_sup_by_vertices(L, l)) < 1e-9);
    }
}

TEST_CASE("dual seminorm between point masses reproduces the metric") {
    Rng rng(6);
    const Eigen::MatrixXd d = oracle::random_metric(rng, 4);
    const LipNorm L = lipnorm_from_metric(make_metric_space(d));
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(std::abs(dual_seminorm(L, I.col(i) - I.col(j)) - d(i, j)) < 1e-9);
}

TEST_CASE("radius and diameter of the two golden spaces") {
    const Appendix1 a = appendix1_instance();
    const CqmsEmbedding Y = embed_cqms(a.Y), Z = embed_cqms(a.Z);
    CHECK(radius_diameter(Y.space, Y.lip).diameter == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(radius_diameter(Y.space, Y.lip).radius == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(radius_diameter(Z.space, Z.lip).diameter == doctest::Approx(3.0).epsilon(1e-12));
    const OrderUnitSpace R = scalar_space();
    const LipNorm zero = polyhedral_lipnorm(R.unit, Eigen::MatrixXd(0, 1));
    CHECK(radius_diameter(R, zero).diameter == 0.0);
}

TEST_CASE("quotient dual through the identity is the plain dual") {
    Rng rng(7);
    const CqmsEmbedding A = embed_cqms(make_metric_space(oracle::random_metric(rng, 4)));
    const Restriction r = restrict_to_states(A.space, A.space.state_polytope());
    for (int t = 0; t < 10; ++t) {
        const Eigen::VectorXd l = centered(rng, 4);
        CHECK(std::abs(quotient_dual(r.pi, A.lip, l, r.space.unit) - dual_seminorm(A.lip, l)) < 1e-12);
    }
}

TEST_CASE("quotient onto the segment [w1, w2] puts its ends at distance 3") {
    const Appendix1 a = appendix1_instance();
    const CqmsEmbedding Y = embed_cqms(a.Y);
    const Restriction r = restrict_to_states(Y.space, a.K1);
    REQUIRE(r.space.num_states() == 2);
    const Eigen::VectorXd l = r.space.state(0) - r.space.state(1);
    CHECK(quotient_dual(r.pi, Y.lip, l, r.space.unit) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("quotient dual bounds sampled values over the Lip ball") {
    Rng rng(8);
    for (int t = 0; t < 5; ++t) {
        const CqmsEmbedding A = embed_cqms(make_metric_space(oracle::random_metric(rng, 4)));
        // Two random states inside S(A).
        Eigen::MatrixXd K(4, 2);
        for (int c = 0; c < 2; ++c) {
            Eigen::VectorXd w = (gaussian_vector(rng, 4).array().abs()).matrix();
            K.col(c) = w / w.sum();
        }
        const Restriction r = restrict_to_states(A.space, Polytope(K));
        const Eigen::VectorXd l = r.space.state(0) - r.space.state(1);
        const double q = quotient_dual(r.pi, A.lip, l, r.space.unit);
        double sampled = 0.0;
        for (int s = 0; s < 20000; ++s) {
            Eigen::VectorXd a = gaussian_vector(rng, 4);
            const double La = eval_lip(A.lip, a);
            if (La < 1e-12) continue;
            a /= La;
            sampled = std::max(sampled, std::abs(l.dot(r.pi.apply(a))));
        }
        CHECK(sampled <= q + 1e-9);
        CHECK(sampled >= 0.9 * q);
        CHECK(std::abs(q - ball_sup_by_vertices(A.lip, K.col(0) - K.col(1))) < 1e-9);
    }
}

TEST_CASE("validation report") {
    const CqmsEmbedding Y = embed_cqms(appendix1_instance().Y);
    const LipReport ok = validate_lipnorm(Y.space, Y.lip);
    CHECK(ok.valid);
    CHECK(ok.radius == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ok.rank == 2);

    // Keep only the pair (y1, y2): y3 is unconstrained.
    const LipNorm missing = polyhedral_lipnorm(Y.space.unit, Y.lip.functionals.topRows(1));
    const LipReport bad = validate_lipnorm(Y.space, missing);
    CHECK_FALSE(bad.valid);
    CHECK(bad.rank == 1);
    CHECK_FALSE(bad.problems.empty());

    const OrderUnitSpace R = scalar_space();
    CHECK(validate_lipnorm(R, polyhedral_lipnorm(R.unit, Eigen::MatrixXd(0, 1))).valid);
}

TEST_CASE("pairing is bounded by the product of the Lip-norm and its dual") {
    Rng rng(9);
    const LipNorm L = lipnorm_from_metric(make_metric_space(oracle::random_metric(rng, 5)));
    for (int t = 0; t < 50; ++t) {
        Eigen::VectorXd a = gaussian_vector(rng, 5);
        a /= eval_lip(L, a);
        const Eigen::VectorXd l = centered(rng, 5);
        CHECK(std::abs(l.dot(a)) <= dual_seminorm(L, l) + 1e-9);
    }
}

TEST_CASE("distance to the scalars is at most radius times L") {
    Rng rng(10);
    for (int t = 0; t < 5; ++t) {
        const CqmsEmbedding A = embed_cqms(make_metric_space(oracle::random_metric(rng, 4)));
        const double r = radius_diameter(A.space, A.lip).radius;
        for (int s = 0; s < 10; ++s) {
            const Eigen::VectorXd a = gaussian_vector(rng, 4);
            CHECK(quotient_norm(A.space, a) <= r * eval_lip(A.lip, a) + 1e-9);
        }
    }
}

TEST_CASE("norm is controlled by the quotient norm plus twice the radius times L") {
    Rng rng(11);
    const Appendix1 g = appendix1_instance();
    const CqmsEmbedding A = embed_cqms(g.Y);
    const double r = radius_diameter(A.space, A.lip).radius;
    const Restriction q = restrict_to_states(A.space, g.K1);
    for (int s = 0; s < 100; ++s) {
        const Eigen::VectorXd a = gaussian_vector(rng, 3);
        const double lhs = order_unit_norm(A.space, a).norm;
        const double rhs = order_unit_norm(q.space, q.pi.apply(a)).norm + 2.0 * r * eval_lip(A.lip, a);
        CHECK(lhs <= rhs + 1e-9);
    }
}
