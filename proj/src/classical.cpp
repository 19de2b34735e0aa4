#include "qgh/classical.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace qgh {

void validate_metric(const FiniteMetricSpace& X, double tol) {
    const int n = X.size();
    if (n == 0) throw Error(ErrorKind::NotAMetric, "empty point set");
    if (X.dist.cols() != n) throw Error(ErrorKind::NotAMetric, "distance matrix is not square");
    if (!X.labels.empty() && static_cast<int>(X.labels.size()) != n)
        throw Error(ErrorKind::NotAMetric, "label count differs from point count");
    const double scale = std::max(1.0, X.dist.cwiseAbs().maxCoeff());
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(X.dist.row(i).sum())) throw Error(ErrorKind::NotAMetric, "non-finite distance");
        if (std::abs(X.dist(i, i)) > tol) throw Error(ErrorKind::NotAMetric, "non-zero diagonal");
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(X.dist(i, j) - X.dist(j, i)) > tol * scale)
                throw Error(ErrorKind::NotAMetric, "symmetry fails at (" + std::to_string(i) + "," + std::to_string(j) + ")");
            if (X.dist(i, j) <= tol)
                throw Error(ErrorKind::NotAMetric, "positivity fails at (" + std::to_string(i) + "," + std::to_string(j) + ")");
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (X.dist(i, k) > X.dist(i, j) + X.dist(j, k) + tol * scale)
                    throw Error(ErrorKind::NotAMetric, "triangle inequality fails at (" + std::to_string(i) + "," +
                                                           std::to_string(j) + "," + std::to_string(k) + ")");
}

FiniteMetricSpace make_metric_space(Eigen::MatrixXd dist, std::vector<std::string> labels) {
    FiniteMetricSpace X{std::move(labels), std::move(dist)};
    if (X.labels.empty())
        for (int i = 0; i < X.size(); ++i) X.labels.push_back("x" + std::to_string(i));
    validate_metric(X);
    return X;
}

double distortion(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, const std::vector<std::pair<int, int>>& R) {
    double d = 0.0;
    for (size_t a = 0; a < R.size(); ++a)
        for (size_t b = a + 1; b < R.size(); ++b)
            d = std::max(d, std::abs(X.dist(R[a].first, R[b].first) - Y.dist(R[a].second, R[b].second)));
    return d;
}

namespace {

// Every correspondence contains one made of a map X -> Y plus one partner
// for each point of Y missed by the map, and removing pairs cannot raise
// the distortion, so searching these minimal relations is exhaustive.
struct ExactSearch {
    const FiniteMetricSpace& X;
    const FiniteMetricSpace& Y;
    double best = kInf;
    std::vector<std::pair<int, int>> best_R{};
    std::vector<std::pair<int, int>> R{};

    double added(int x, int y, double cur) const {
        for (const auto& [xp, yp] : R) cur = std::max(cur, std::abs(X.dist(x, xp) - Y.dist(y, yp)));
        return cur;
    }

    void cover(const std::vector<int>& missing, size_t idx, double cur) {
        if (idx == missing.size()) {
            best = cur;
            best_R = R;
            return;
        }
        for (int x = 0; x < X.size(); ++x) {
            const double next = added(x, missing[idx], cur);
            if (next >= best) continue;
            R.emplace_back(x, missing[idx]);
            cover(missing, idx + 1, next);
            R.pop_back();
        }
    }

    void assign(int x, double cur) {
        if (x == X.size()) {
            std::vector<char> hit(Y.size(), 0);
            for (const auto& pr : R) hit[pr.second] = 1;
            std::vector<int> missing;
            for (int y = 0; y < Y.size(); ++y)
                if (!hit[y]) missing.push_back(y);
            cover(missing, 0, cur);
            return;
        }
        for (int y = 0; y < Y.size(); ++y) {
            const double next = added(x, y, cur);
            if (next >= best) continue;
            R.emplace_back(x, y);
            assign(x + 1, next);
            R.pop_back();
        }
    }
};

// Relation from a map f : X -> Y with missed points of Y attached greedily.
std::vector<std::pair<int, int>> complete_map(const FiniteMetricSpace& X, const FiniteMetricSpace& Y,
                                              const std::vector<int>& f) {
    std::vector<std::pair<int, int>> R;
    std::vector<char> hit(Y.size(), 0);
    for (int x = 0; x < X.size(); ++x) {
        R.emplace_back(x, f[x]);
        hit[f[x]] = 1;
    }
    for (int y = 0; y < Y.size(); ++y) {
        if (hit[y]) continue;
        int best_x = 0;
        double best = kInf;
        for (int x = 0; x < X.size(); ++x) {
            double d = 0.0;
            for (const auto& [xp, yp] : R) d = std::max(d, std::abs(X.dist(x, xp) - Y.dist(y, yp)));
            if (d < best) {
                best = d;
                best_x = x;
            }
        }
        R.emplace_back(best_x, y);
    }
    return R;
}

GhResult local_search(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, const GhOptions& opt) {
    GhResult out;
    out.value = kInf;
    Rng rng(opt.seed);
    std::uniform_int_distribution<int> pick(0, Y.size() - 1);
    for (int restart = 0; restart < std::max(1, opt.restarts); ++restart) {
        std::vector<int> f(X.size());
        for (int& v : f) v = pick(rng);
        auto R = complete_map(X, Y, f);
        double cur = distortion(X, Y, R);
        for (bool improved = true; improved;) {
            improved = false;
            for (int x = 0; x < X.size(); ++x)
                for (int y = 0; y < Y.size(); ++y) {
                    if (y == f[x]) continue;
                    const int old = f[x];
                    f[x] = y;
                    auto R2 = complete_map(X, Y, f);
                    const double d2 = distortion(X, Y, R2);
                    if (d2 < cur - 1e-15) {
                        cur = d2;
                        R = std::move(R2);
                        improved = true;
                    } else {
                        f[x] = old;
                    }
                }
        }
        if (cur / 2.0 < out.value) {
            out.value = cur / 2.0;
            out.correspondence = R;
        }
    }
    return out;
}

}  // namespace

GhResult gh_distance(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, const GhOptions& opt) {
    validate_metric(X);
    validate_metric(Y);
    GhResult out;
    if (static_cast<long>(X.size()) * Y.size() <= opt.exhaustive_cap) {
        ExactSearch s{X, Y};
        s.assign(0, 0.0);
        out.value = s.best / 2.0;
        out.correspondence = s.best_R;
        out.exact = true;
        return out;
    }
    if (opt.require_exact)
        throw Error(ErrorKind::TooLarge, "exhaustive search limited to |X||Y| <= " + std::to_string(opt.exhaustive_cap));
    out = local_search(X, Y, opt);
    // Searching from the other side as well only ever helps an upper bound.
    GhResult back = local_search(Y, X, opt);
    if (back.value < out.value) {
        out.value = back.value;
        out.correspondence.clear();
        for (const auto& [y, x] : back.correspondence) out.correspondence.emplace_back(x, y);
    }
    out.exact = false;
    return out;
}

CoverResult cov_growth(const FiniteMetricSpace& X, double eps, int exhaustive_cap) {
    if (!(eps > 0)) throw Error(ErrorKind::InvalidParams, "cov_growth needs eps > 0");
    validate_metric(X);
    const int n = X.size();
    const double reach = eps * (1.0 + 1e-12);
    CoverResult out;
    if (n <= exhaustive_cap) {
        std::vector<std::uint32_t> ball(n, 0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (X.dist(i, j) <= reach) ball[i] |= 1u << j;
        const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1u);
        int best = n + 1;
        std::uint32_t best_mask = 0;
        for (std::uint32_t mask = 1; mask <= full; ++mask) {
            const int size = std::popcount(mask);
            if (size >= best) continue;
            std::uint32_t covered = 0;
            for (int i = 0; i < n; ++i)
                if (mask >> i & 1u) covered |= ball[i];
            if (covered == full) {
                best = size;
                best_mask = mask;
            }
        }
        for (int i = 0; i < n; ++i)
            if (best_mask >> i & 1u) out.centers.push_back(i);
        out.count = best;
        out.exact = true;
        return out;
    }
    std::vector<char> covered(n, 0);
    int left = n;
    while (left > 0) {
        int best = 0, best_count = -1;
        for (int c = 0; c < n; ++c) {
            int count = 0;
            for (int j = 0; j < n; ++j)
                if (!covered[j] && X.dist(c, j) <= reach) ++count;
            if (count > best_count) {
                best = c;
                best_count = count;
            }
        }
        out.centers.push_back(best);
        for (int j = 0; j < n; ++j)
            if (!covered[j] && X.dist(best, j) <= reach) {
                covered[j] = 1;
                --left;
            }
    }
    out.count = static_cast<int>(out.centers.size());
    out.exact = false;
    return out;
}

CqmsEmbedding embed_cqms(const FiniteMetricSpace& X) {
    validate_metric(X);
    const int n = X.size();
    return {make_space(Eigen::VectorXd::Ones(n), Eigen::MatrixXd::Identity(n, n), X.labels), lipnorm_from_metric(X)};
}

FiniteMetricSpace correspondence_union(const FiniteMetricSpace& X, const FiniteMetricSpace& Y,
                                       const std::vector<std::pair<int, int>>& R, double floor) {
    if (R.empty()) throw Error(ErrorKind::InvalidParams, "empty correspondence");
    const int nx = X.size(), ny = Y.size();
    const double r = std::max(distortion(X, Y, R) / 2.0, floor);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(nx + ny, nx + ny);
    D.topLeftCorner(nx, nx) = X.dist;
    D.bottomRightCorner(ny, ny) = Y.dist;
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) {
            double d = kInf;
            for (const auto& [xp, yp] : R) d = std::min(d, X.dist(x, xp) + r + Y.dist(yp, y));
            D(x, nx + y) = D(nx + y, x) = d;
        }
    std::vector<std::string> labels = X.labels;
    labels.insert(labels.end(), Y.labels.begin(), Y.labels.end());
    if (static_cast<int>(labels.size()) != nx + ny) labels.clear();
    return make_metric_space(D, labels);
}

Bridge metric_union_bridge(const FiniteMetricSpace& joint, int size_x) {
    const int n = joint.size();
    const int ny = n - size_x;
    if (size_x < 1 || ny < 1) throw Error(ErrorKind::InvalidParams, "both parts of the union must be non-empty");
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(size_x * ny, n);
    int row = 0;
    for (int x = 0; x < size_x; ++x)
        for (int y = 0; y < ny; ++y, ++row) {
            F(row, x) = 1.0 / joint.dist(x, size_x + y);
            F(row, size_x + y) = -1.0 / joint.dist(x, size_x + y);
        }
    Bridge N;
    N.recipe = BridgeRecipe::MetricUnion;
    N.dim_a = size_x;
    N.dim_b = ny;
    N.functionals = F;
    N.gap = joint.dist.block(0, size_x, size_x, ny).minCoeff();
    N.description = "metric_union";
    return N;
}

GhVsQ compare_gh_vs_q(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, const CompareOptions& opt) {
    GhVsQ out;
    const GhResult gh = gh_distance(X, Y, opt.gh);
    out.gh = gh.value;
    out.gh_exact = gh.exact;
    const CqmsEmbedding A = embed_cqms(X);
    const CqmsEmbedding B = embed_cqms(Y);
    out.q_lower = distq_lower(A.space, A.lip, B.space, B.lip);

    const bool hull_ok = Y.size() == 2 && opt.extra.size() == 2;
    if (opt.strategy == GhStrategy::HullEnlargement && !hull_ok)
        throw Error(ErrorKind::InvalidParams, "hull enlargement needs |Y| = 2 and two extra points");

    if (opt.strategy != GhStrategy::HullEnlargement) {
        const FiniteMetricSpace joint = correspondence_union(X, Y, gh.correspondence);
        const Bridge N = metric_union_bridge(joint, X.size());
        out.q_upper = distq_upper(A.space, A.lip, B.space, B.lip, N);
        out.used = GhStrategy::MetricUnion;
    }
    if (opt.strategy != GhStrategy::MetricUnion && hull_ok) {
        const HullEnlargement he = hull_enlargement_upper(A.space, A.lip, opt.extra, opt.extra, opt.eps);
        const double d = Y.dist(0, 1);
        if (std::abs(he.k1_diameter - d) > 1e-9 * std::max(1.0, d))
            throw Error(ErrorKind::InvalidParams, "extra points are at distance " + std::to_string(he.k1_diameter) +
                                                      ", not " + std::to_string(d));
        if (he.upper < out.q_upper) {
            out.q_upper = he.upper;
            out.used = GhStrategy::HullEnlargement;
        }
    }
    out.strict_gap = out.q_upper < out.gh - 1e-6;
    return out;
}

Appendix1 appendix1_instance() {
    Appendix1 a;
    Eigen::MatrixXd dy(3, 3);
    dy << 0, 1, 2, 1, 0, 1, 2, 1, 0;
    a.Y = make_metric_space(dy, {"y1", "y2", "y3"});
    Eigen::MatrixXd dz(2, 2);
    dz << 0, 3, 3, 0;
    a.Z = make_metric_space(dz, {"z1", "z2"});
    const Eigen::Matrix3d I = Eigen::Matrix3d::Identity();
    a.w1 = I.col(0) + (I.col(1) - I.col(2)) / 2.0;
    a.w2 = I.col(2) + (I.col(1) - I.col(0)) / 2.0;
    Eigen::MatrixXd K(3, 5);
    K << I, a.w1, a.w2;
    a.K = Polytope(K);
    Eigen::MatrixXd K1(3, 2);
    K1 << a.w1, a.w2;
    a.K1 = Polytope(K1);
    a.extra = a.K1;
    return a;
}

}  // namespace qgh
