#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qgh/fejer.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

using namespace qgh;

namespace {

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

// On the circle with the distance to 0, integrating |x| against e(px) over
// [-1/2, 1/2) gives 1/4 at p = 0 and -1/(pi^2 p^2) at odd p (zero at even
// p != 0).  The kernel coefficients are C(2n, n+p)/C(2n, n).
double circle_delta(int n) {
    double s = 0.0;
    for (int p = 1; p <= n; p += 2) s += binom(2 * n, n + p) / binom(2 * n, n) / (p * p);
    return 0.25 - 2.0 / (std::numbers::pi * std::numbers::pi) * s;
}

}  // namespace

TEST_CASE("character coefficients") {
    const CharacterPoly c1 = build_character(1);
    CHECK(c1.coeffs.size() == 3);
    CHECK(c1.at({0}) == 2.0);
    CHECK(c1.at({1}) == 1.0);
    CHECK(c1.at({-1}) == 1.0);
    for (int d = 1; d <= 4; ++d) CHECK(build_character(d).at(Index(d, 0)) == d + 1.0);
    const CharacterPoly c2 = power(build_character(2), 3);
    for (const auto& [p, v] : c2.coeffs) {
        CHECK(v > 0.0);
        CHECK(c2.at({-p[0], -p[1]}) == v);
    }
}

TEST_CASE("first kernel on the circle matches the closed form") {
    const FejerKernel k = build_kernel(build_character(1), 1);
    const double exact = 0.25 - 1.0 / (std::numbers::pi * std::numbers::pi);
    CHECK(std::abs(k.delta - exact) < 1e-4);
    CHECK(std::abs(k.delta - exact) < 1e-8);
    CHECK(k.residual < 1e-5);
}

TEST_CASE("kernel deltas on the circle against the binomial series") {
    for (int n = 1; n <= 12; ++n) {
        const FejerKernel k = build_kernel(build_character(1), n);
        CHECK(std::abs(k.delta - circle_delta(n)) < 1e-7);
    }
}

TEST_CASE("deltas decrease but stay above 0.05 up to n = 12 on the circle") {
    double prev = kInf;
    for (int n = 1; n <= 12; ++n) {
        const double d = circle_delta(n);
        CHECK(d < prev);
        prev = d;
    }
    CHECK(circle_delta(8) < circle_delta(1));
    // Decay is like n^{-1/2}; the first n with delta below 0.05 is 13.
    CHECK(circle_delta(12) > 0.05);
    CHECK(circle_delta(13) < 0.05);
}

TEST_CASE("frequency sets on the circle are intervals") {
    for (int n = 1; n <= 6; ++n) {
        const FejerKernel k = build_kernel(build_character(1), n);
        REQUIRE(k.support.size() == static_cast<size_t>(2 * n + 1));
        for (int p = -n; p <= n; ++p) CHECK(k.support[p + n] == Index{p});
    }
}

TEST_CASE("multipliers lie in [0, 1] with value one at the origin") {
    for (int d = 1; d <= 2; ++d)
        for (int n = 1; n <= 4; ++n) {
            const FejerKernel k = build_kernel(build_character(d), n);
            CHECK(k.multiplier_at(Index(d, 0)) == 1.0);
            for (const auto& p : k.support) {
                CHECK(k.multiplier_at(p) >= 0.0);
                CHECK(k.multiplier_at(p) <= 1.0);
            }
        }
}

TEST_CASE("frequency sets are nested, symmetric and contain the origin") {
    const CharacterPoly chi = build_character(2);
    std::set<Index> prev;
    for (int n = 1; n <= 4; ++n) {
        const FejerKernel k = build_kernel(chi, n);
        const std::set<Index> cur(k.support.begin(), k.support.end());
        CHECK(cur.count({0, 0}) == 1);
        for (const auto& p : cur) CHECK(cur.count({-p[0], -p[1]}) == 1);
        for (const auto& p : prev) CHECK(cur.count(p) == 1);
        prev = cur;
    }
}

TEST_CASE("coarse grids are refused") {
    KernelOptions opt;
    opt.grid = 32;
    try {
        build_kernel(build_character(1), 2, {}, opt);
        FAIL("expected GridTooCoarse");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::GridTooCoarse);
    }
}

TEST_CASE("projection fixes the identity and kills far frequencies") {
    const FejerKernel k = build_kernel(build_character(2), 2);
    const TorusElement one = point_mass(2, {0, 0});
    const TorusElement p1 = apply_Pn(k, one);
    CHECK(p1.at({0, 0}) == Complex(1.0));
    const TorusElement far = point_mass(2, {5, -7}, Complex(2.0, 1.0));
    CHECK(std::abs(apply_Pn(k, far).at({5, -7})) == 0.0);
    CHECK(apply_Pn(k, far).l1() == 0.0);
}

TEST_CASE("projection contracts the l1 norm") {
    Rng rng(1);
    const FejerKernel k = build_kernel(build_character(2), 3);
    for (int t = 0; t < 20; ++t) {
        const TorusElement f = random_element(rng, 2, 4, 10, t % 2 == 0);
        CHECK(apply_Pn(k, f).l1() <= f.l1() + 1e-12);
    }
}

TEST_CASE("truncation inequalities: identity element") {
    const FejerKernel k = build_kernel(build_character(2), 3);
    const TruncationReport r = truncation_check(k, point_mass(2, {0, 0}), skew2(0.3));
    CHECK(r.residual_norm < 1e-12);
    CHECK(r.lip < 1e-12);
    CHECK(r.approximation_ok);
    CHECK(r.contraction_ok);
}

TEST_CASE("truncation inequalities on random elements") {
    Rng rng(2);
    const FejerKernel k = build_kernel(build_character(2), 3);
    for (int t = 0; t < 6; ++t) {
        const TorusElement f = random_element(rng, 2, 3, 8, true);
        const SkewMatrix theta = skew2(uniform(rng, 0.0, 1.0));
        const TruncationReport r = truncation_check(k, f, theta);
        CHECK(r.approximation_ok);
        CHECK(r.contraction_ok);
        CHECK(r.margin >= 0.0);
        CHECK(r.worst_ratio <= 1.0 + 1e-9);
    }
}

TEST_CASE("table output") {
    const auto rows = fejer_table(1, 3);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].support_size == 3);
    std::ostringstream os;
    write_fejer_csv(os, rows);
    CHECK(os.str().rfind("n,support_size,delta_n,quadrature_residual\n", 0) == 0);
}
