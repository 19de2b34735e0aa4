#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "qgh/classical.hpp"

#include <algorithm>
#include <bit>

using namespace qgh;

namespace {

// Half the smallest distortion over every relation that covers both sides,
// enumerated as bit masks over X x Y.
double gh_by_all_relations(const FiniteMetricSpace& X, const FiniteMetricSpace& Y) {
    const int nx = X.size(), ny = Y.size(), cells = nx * ny;
    double best = kInf;
    for (std::uint32_t mask = 1; mask < (1u << cells); ++mask) {
        std::vector<char> hx(nx, 0), hy(ny, 0);
        std::vector<std::pair<int, int>> R;
        for (int c = 0; c < cells; ++c)
            if (mask >> c & 1u) {
                R.emplace_back(c / ny, c % ny);
                hx[c / ny] = hy[c % ny] = 1;
            }
        if (std::count(hx.begin(), hx.end(), 0) || std::count(hy.begin(), hy.end(), 0)) continue;
        double d = 0.0;
        for (const auto& [x, y] : R)
            for (const auto& [xp, yp] : R) d = std::max(d, std::abs(X.dist(x, xp) - Y.dist(y, yp)));
        best = std::min(best, d);
    }
    return best / 2.0;
}

// Fewest centres by trying every subset.
int cover_by_subsets(const FiniteMetricSpace& X, double eps) {
    const int n = X.size();
    int best = n;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        bool ok = true;
        for (int p = 0; p < n && ok; ++p) {
            bool hit = false;
            for (int c = 0; c < n; ++c)
                if ((mask >> c & 1u) && X.dist(c, p) <= eps) hit = true;
            ok = hit;
        }
        if (ok) best = std::min(best, std::popcount(mask));
    }
    return best;
}

FiniteMetricSpace two_points(double d) {
    Eigen::MatrixXd m(2, 2);
    m << 0, d, d, 0;
    return make_metric_space(m);
}

}  // namespace

TEST_CASE("golden pair has Gromov-Hausdorff distance one") {
    const Appendix1 a = appendix1_instance();
    const GhResult r = gh_distance(a.Y, a.Z);
    CHECK(r.exact);
    CHECK(r.value == 1.0);
    CHECK(distortion(a.Y, a.Z, r.correspondence) == 2.0);
}

TEST_CASE("a space is at distance zero from itself") {
    Rng rng(1);
    const FiniteMetricSpace X = make_metric_space(oracle::random_metric(rng, 4));
    CHECK(gh_distance(X, X).value == 0.0);
}

TEST_CASE("two-point spaces are half their diameter difference apart") {
    CHECK(gh_distance(two_points(1.0), two_points(3.5)).value == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(gh_by_all_relations(two_points(1.0), two_points(3.5)) == doctest::Approx(1.25).epsilon(1e-15));
}

TEST_CASE("exhaustive search agrees with enumerating every relation") {
    Rng rng(2);
    for (int t = 0; t < 25; ++t) {
        const FiniteMetricSpace X = make_metric_space(oracle::random_metric(rng, 2 + t % 3));
        const FiniteMetricSpace Y = make_metric_space(oracle::random_metric(rng, 2 + (t / 3) % 3));
        CHECK(std::abs(gh_distance(X, Y).value - gh_by_all_relations(X, Y)) < 1e-12);
    }
}

TEST_CASE("beyond the cap exact search is refused when required") {
    Rng rng(3);
    const FiniteMetricSpace X = make_metric_space(oracle::random_metric(rng, 5));
    const FiniteMetricSpace Y = make_metric_space(oracle::random_metric(rng, 5));
    GhOptions opt;
    opt.require_exact = true;
    try {
        gh_distance(X, Y, opt);
        FAIL("expected TooLarge");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::TooLarge);
    }
    opt.require_exact = false;
    const GhResult approx = gh_distance(X, Y, opt);
    CHECK_FALSE(approx.exact);
    CHECK(approx.value >= 0.0);
    CHECK(approx.value == doctest::Approx(distortion(X, Y, approx.correspondence) / 2.0));
}

TEST_CASE("Gromov-Hausdorff distance is a metric on small spaces") {
    Rng rng(4);
    for (int t = 0; t < 30; ++t) {
        const FiniteMetricSpace A = make_metric_space(oracle::random_metric(rng, 2 + t % 3));
        const FiniteMetricSpace B = make_metric_space(oracle::random_metric(rng, 2 + (t + 1) % 3));
        const FiniteMetricSpace C = make_metric_space(oracle::random_metric(rng, 2 + (t + 2) % 3));
        const double ab = gh_distance(A, B).value, ba = gh_distance(B, A).value;
        CHECK(ab == ba);
        CHECK(gh_distance(A, C).value <= ab + gh_distance(B, C).value + 1e-9);
    }
}

TEST_CASE("covering numbers") {
    const Appendix1 a = appendix1_instance();
    CHECK(cov_growth(a.Y, 2.5).count == 1);
    CHECK(cov_growth(a.Y, 1.0).count == 1);  // y2 reaches both ends
    CHECK(cov_growth(a.Y, 0.9).count == cover_by_subsets(a.Y, 0.9));
    CHECK(cov_growth(a.Y, 0.9).count == 3);
    CHECK(cov_growth(a.Y, 0.5).count == 3);
    Rng rng(5);
    for (int t = 0; t < 10; ++t) {
        const FiniteMetricSpace X = make_metric_space(oracle::random_metric(rng, 7));
        const double eps = uniform(rng, 0.3, 2.0);
        const CoverResult c = cov_growth(X, eps);
        CHECK(c.exact);
        CHECK(c.count == cover_by_subsets(X, eps));
    }
}

TEST_CASE("embedding as functions reproduces the metric") {
    const CqmsEmbedding two = embed_cqms(two_points(2.5));
    CHECK(dual_seminorm(two.lip, Eigen::Vector2d(1, -1)) == doctest::Approx(2.5).epsilon(1e-12));
    const CqmsEmbedding Y = embed_cqms(appendix1_instance().Y);
    CHECK(radius_diameter(Y.space, Y.lip).diameter == doctest::Approx(2.0).epsilon(1e-12));
    Rng rng(6);
    const Eigen::MatrixXd d = oracle::random_metric(rng, 4);
    const CqmsEmbedding X = embed_cqms(make_metric_space(d));
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(std::abs(dual_seminorm(X.lip, I.col(i) - I.col(j)) - d(i, j)) < 1e-9);
}

TEST_CASE("golden pair shows a strict gap below the classical distance") {
    const Appendix1 a = appendix1_instance();
    CompareOptions opt;
    opt.extra = a.extra;
    const GhVsQ r = compare_gh_vs_q(a.Y, a.Z, opt);
    CHECK(r.gh == 1.0);
    CHECK(r.q_lower == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.q_upper <= 0.5 + 1e-6);
    CHECK(r.used == GhStrategy::HullEnlargement);
    CHECK(r.strict_gap);
}

TEST_CASE("a space against itself") {
    Rng rng(7);
    const FiniteMetricSpace X = make_metric_space(oracle::random_metric(rng, 3));
    const GhVsQ r = compare_gh_vs_q(X, X);
    CHECK(r.gh == 0.0);
    CHECK(r.q_upper < 1e-6);
}

TEST_CASE("the quantum bound never exceeds the classical distance") {
    Rng rng(8);
    for (int t = 0; t < 15; ++t) {
        const FiniteMetricSpace X = make_metric_space(oracle::random_metric(rng, 2 + t % 3));
        const FiniteMetricSpace Y = make_metric_space(oracle::random_metric(rng, 2 + (t + 1) % 3));
        const GhVsQ r = compare_gh_vs_q(X, Y);
        CHECK(r.q_upper <= r.gh + 1e-6);
        CHECK(r.q_lower <= r.q_upper + 1e-8);
    }
}

TEST_CASE("a genuine union metric puts the state spaces at least the classical distance apart") {
    Rng rng(9);
    for (int t = 0; t < 10; ++t) {
        const FiniteMetricSpace X = make_metric_space(oracle::random_metric(rng, 3));
        const FiniteMetricSpace Y = make_metric_space(oracle::random_metric(rng, 2 + t % 3));
        const GhResult gh = gh_distance(X, Y);
        // Any correspondence, not only the optimal one, gives a union metric.
        std::vector<std::pair<int, int>> R;
        for (int x = 0; x < X.size(); ++x) R.emplace_back(x, x % Y.size());
        for (int y = 0; y < Y.size(); ++y) R.emplace_back(y % X.size(), y);
        const FiniteMetricSpace joint = correspondence_union(X, Y, R);
        const CqmsEmbedding A = embed_cqms(X), B = embed_cqms(Y);
        const CombinedLip M = combine(A.lip, B.lip, metric_union_bridge(joint, X.size()));
        CHECK(hausdorff_states(M.lip, A.space, B.space) >= gh.value - 1e-6);
    }
}

TEST_CASE("golden instance constants") {
    const Appendix1 a = appendix1_instance();
    CHECK(a.Y.dist(0, 2) == 2.0);
    CHECK(a.Z.dist(0, 1) == 3.0);
    CHECK(a.w1.isApprox(Eigen::Vector3d(1, 0.5, -0.5)));
    CHECK(a.w2.isApprox(Eigen::Vector3d(-0.5, 0.5, 1)));
    CHECK(a.K.size() == 5);
    CHECK(a.K1.size() == 2);
}
