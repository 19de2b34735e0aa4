#pragma once

#include "qgh/bridges.hpp"
#include "qgh/metric_space.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace qgh {

struct GhOptions {
    int exhaustive_cap = 20;  // |X| * |Y| at or below this is searched exactly
    bool require_exact = false;
    int restarts = 64;        // local search beyond the cap
    std::uint64_t seed = 0;
};

struct GhResult {
    double value = 0.0;  // half the distortion of the best correspondence found
    bool exact = false;
    std::vector<std::pair<int, int>> correspondence;
};

double distortion(const FiniteMetricSpace& X, const FiniteMetricSpace& Y,
                  const std::vector<std::pair<int, int>>& R);

GhResult gh_distance(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, const GhOptions& opt = {});

struct CoverResult {
    int count = 0;
    bool exact = false;
    std::vector<int> centers;
};

// Fewest closed eps-balls centred at points of X covering X.
CoverResult cov_growth(const FiniteMetricSpace& X, double eps, int exhaustive_cap = 15);

struct CqmsEmbedding {
    OrderUnitSpace space;  // C(X) with the Dirac states
    LipNorm lip;           // metric Lipschitz seminorm
};

CqmsEmbedding embed_cqms(const FiniteMetricSpace& X);

// Disjoint union metric in which the given correspondence has cross
// distance r = max(dis/2, floor): d(x, y) = min over (x', y') in R of
// d(x, x') + r + d(y', y).
FiniteMetricSpace correspondence_union(const FiniteMetricSpace& X, const FiniteMetricSpace& Y,
                                       const std::vector<std::pair<int, int>>& R, double floor = 1e-8);

// Cross terms of a metric on X u Y as a bridge between C(X) and C(Y).
Bridge metric_union_bridge(const FiniteMetricSpace& joint, int size_x);

enum class GhStrategy {
    MetricUnion,      // optimal correspondence turned into a metric on X u Y
    HullEnlargement,  // enlarge S(C(X)) by two extra points isometric to Y
    Best,             // smallest of the strategies that apply
};

struct CompareOptions {
    GhStrategy strategy = GhStrategy::Best;
    Polytope extra;  // extra points for HullEnlargement (columns in X's dual), |Y| = 2
    double eps = 1e-7;
    GhOptions gh{};
};

struct GhVsQ {
    double gh = 0.0;
    bool gh_exact = false;
    double q_upper = kInf;
    double q_lower = 0.0;
    GhStrategy used = GhStrategy::MetricUnion;
    bool strict_gap = false;  // q_upper < gh beyond tolerance
};

GhVsQ compare_gh_vs_q(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, const CompareOptions& opt = {});

struct Appendix1 {
    FiniteMetricSpace Y;
    FiniteMetricSpace Z;
    Eigen::VectorXd w1;
    Eigen::VectorXd w2;
    Polytope K;   // co{y1, y2, y3, w1, w2}
    Polytope K1;  // segment [w1, w2]
    Polytope extra;

    double gh = 1.0;
    double distq = 0.5;
    double diam_y = 2.0;
    double diam_z = 3.0;
    double rho_w1_w2 = 3.0;
    double rho_y1_w1 = 0.5;
    double rho_y2_mid = 0.5;
    double hausdorff_k1 = 0.5;
};

// Three points at 1, 1, 2 against two points at distance 3.
Appendix1 appendix1_instance();

}  // namespace qgh
