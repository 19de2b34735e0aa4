#include "qgh/statemetric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace qgh {

namespace {

void require_state(const Eigen::VectorXd& mu, const Eigen::VectorXd& unit, double tol, const char* which) {
    require_dim(mu.size(), unit.size(), which);
    const double v = mu.dot(unit);
    if (std::abs(v - 1.0) > tol)
        throw Error(ErrorKind::NotStates, std::string(which) + " takes value " + std::to_string(v) + " at the unit");
}

}  // namespace

StateMetricContext make_context(OrderUnitSpace space, LipNorm lip, const Tolerances& tol) {
    require_dim(lip.dim(), space.dim, "Lip-norm host");
    StateMetricContext ctx{std::move(space), std::move(lip), {}};
    const int k = ctx.space.num_states();
    ctx.pairwise = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            const double d = dual_seminorm(ctx.lip, ctx.space.state(i) - ctx.space.state(j), tol);
            ctx.pairwise(i, j) = ctx.pairwise(j, i) = d;
        }
    return ctx;
}

double rho(const LipNorm& L, const Eigen::VectorXd& mu, const Eigen::VectorXd& nu, const Tolerances& tol) {
    require_state(mu, L.unit, 1e-9, "first state");
    require_state(nu, L.unit, 1e-9, "second state");
    return dual_seminorm(L, mu - nu, tol);
}

double rho(const StateMetricContext& ctx, const Eigen::VectorXd& mu, const Eigen::VectorXd& nu, StateCheck check,
           const Tolerances& tol) {
    if (check == StateCheck::Hull) {
        const Polytope S = ctx.space.state_polytope();
        if (!polytope_contains(S, mu)) throw Error(ErrorKind::NotStates, "first argument outside the state space");
        if (!polytope_contains(S, nu)) throw Error(ErrorKind::NotStates, "second argument outside the state space");
    }
    return rho(ctx.lip, mu, nu, tol);
}

double hausdorff(const LipNorm& L, const Polytope& P, const Polytope& Q, const Tolerances& tol) {
    const Gauge g = dual_gauge(L);
    double h = 0.0;
    for (int i = 0; i < P.size(); ++i) h = std::max(h, nearest_point(P.vertex(i), Q, g, tol).distance);
    for (int j = 0; j < Q.size(); ++j) h = std::max(h, nearest_point(Q.vertex(j), P, g, tol).distance);
    return h;
}

double hausdorff_states(const LipNorm& L_sum, const OrderUnitSpace& A, const OrderUnitSpace& B,
                        const Tolerances& tol) {
    require_dim(L_sum.dim(), A.dim + B.dim, "Lip-norm on the sum");
    return hausdorff(L_sum, embed_first(A.state_polytope(), B.dim), embed_second(B.state_polytope(), A.dim), tol);
}

double min_cross_distance(const LipNorm& L_sum, const OrderUnitSpace& A, const OrderUnitSpace& B,
                          const Tolerances& tol) {
    double best = kInf;
    for (int i = 0; i < A.num_states(); ++i)
        for (int j = 0; j < B.num_states(); ++j) {
            const Eigen::VectorXd diff = embed_first(A.state(i), B.dim) - embed_second(B.state(j), A.dim);
            best = std::min(best, dual_seminorm(L_sum, diff, tol));
        }
    return best;
}

Eigen::MatrixXd scv_candidates(const OrderUnitSpace& A, int depth) {
    const int G = A.num_states();
    std::vector<Eigen::VectorXd> out;
    for (int i = 0; i < G; ++i) out.push_back(A.state(i));
    if (depth > 0 && G > 1) {
        const int m = 1 << depth;
        std::vector<int> k(G, 0);
        // Enumerate compositions of m into G parts in lexicographic order.
        std::function<void(int, int)> rec = [&](int idx, int left) {
            if (idx == G - 1) {
                k[idx] = left;
                if (*std::max_element(k.begin(), k.end()) == m) return;  // a generator, already listed
                Eigen::VectorXd v = Eigen::VectorXd::Zero(A.dim);
                for (int i = 0; i < G; ++i) v += (static_cast<double>(k[i]) / m) * A.state(i);
                out.push_back(v);
                return;
            }
            for (int t = left; t >= 0; --t) {
                k[idx] = t;
                rec(idx + 1, left - t);
            }
        };
        rec(0, m);
    }
    Eigen::MatrixXd C(out.size(), A.dim);
    for (size_t i = 0; i < out.size(); ++i) C.row(static_cast<long>(i)) = out[i].transpose();
    return C;
}

namespace {

Eigen::MatrixXd candidate_distances(const LipNorm& L, const Eigen::MatrixXd& C, const Tolerances& tol) {
    const int N = static_cast<int>(C.rows());
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j)
            D(i, j) = D(j, i) = dual_seminorm(L, (C.row(i) - C.row(j)).transpose(), tol);
    return D;
}

// Greedy net: repeatedly take the candidate covering the most uncovered
// candidates, ties broken by smaller eccentricity, then by index.
std::vector<int> greedy_net(const Eigen::MatrixXd& D, double eps) {
    const int N = static_cast<int>(D.rows());
    const double reach = eps * (1.0 + 1e-12) + 1e-12;
    std::vector<char> covered(N, 0);
    int left = N;
    std::vector<int> net;
    while (left > 0) {
        int best = -1, best_count = -1;
        double best_ecc = kInf;
        for (int c = 0; c < N; ++c) {
            int count = 0;
            for (int j = 0; j < N; ++j)
                if (!covered[j] && D(c, j) <= reach) ++count;
            const double ecc = D.row(c).maxCoeff();
            if (count > best_count || (count == best_count && ecc < best_ecc)) {
                best = c;
                best_count = count;
                best_ecc = ecc;
            }
        }
        net.push_back(best);
        for (int j = 0; j < N; ++j)
            if (!covered[j] && D(best, j) <= reach) {
                covered[j] = 1;
                --left;
            }
    }
    return net;
}

}  // namespace

ScvBounds scv(const StateMetricContext& ctx, double eps, const ScvOptions& opt) {
    if (!(eps > 0)) throw Error(ErrorKind::InvalidParams, "scv needs eps > 0");
    const Eigen::MatrixXd C = scv_candidates(ctx.space, opt.depth);
    const Eigen::MatrixXd D = candidate_distances(ctx.lip, C, opt.tol);
    ScvBounds out;
    out.candidates = static_cast<int>(C.rows());
    out.net = greedy_net(D, eps);
    out.upper = static_cast<int>(out.net.size());
    for (int c = 0; c < out.candidates; ++c) {
        bool far = true;
        for (int p : out.packing)
            if (D(c, p) <= 2.0 * eps) {
                far = false;
                break;
            }
        if (far) out.packing.push_back(c);
    }
    out.lower = static_cast<int>(out.packing.size());
    return out;
}

FiniteApproximation finite_approximation(const StateMetricContext& ctx, double eps, const Tolerances& tol) {
    if (!(eps > 0)) throw Error(ErrorKind::InvalidParams, "finite_approximation needs eps > 0");
    FiniteApproximation out;
    out.net = greedy_net(ctx.pairwise, eps);
    std::sort(out.net.begin(), out.net.end());
    Eigen::MatrixXd K(ctx.space.dim, out.net.size());
    for (size_t i = 0; i < out.net.size(); ++i) K.col(static_cast<long>(i)) = ctx.space.state(out.net[i]);
    const Polytope KP(K);
    out.restricted = restrict_to_states(ctx.space, KP, tol);
    out.hausdorff = hausdorff(ctx.lip, ctx.space.state_polytope(), KP, tol);
    out.bound = out.hausdorff;
    if (out.net.size() == 1) {
        // B is R, whose distance to A is exactly the radius.
        const double radius = ctx.pairwise.maxCoeff() / 2.0;
        out.bound = std::min(out.bound, radius);
    }
    return out;
}

StabilityReport base_norm_stability_check(const Polytope& base1, const Polytope& base2, const Eigen::VectorXd& eta,
                                          const Gauge& ref_norm, const StabilityOptions& opt) {
    require_dim(base1.dim(), eta.size(), "first base");
    require_dim(base2.dim(), eta.size(), "second base");
    for (const Polytope* P : {&base1, &base2})
        for (int k = 0; k < P->size(); ++k) {
            const double v = eta.dot(P->vertex(k));
            if (std::abs(v - 1.0) > 1e-9)
                throw Error(ErrorKind::HypothesisViolated,
                            "base vertex pairs with the centering functional at " + std::to_string(v));
        }

    // co(S u -S) is only a unit ball when S spans the space.
    for (const Polytope* P : {&base1, &base2})
        if (Eigen::FullPivLU<Eigen::MatrixXd>(P->vertices).rank() < P->dim())
            throw Error(ErrorKind::HypothesisViolated, "base does not span the space, so its base norm is not a norm");

    StabilityReport rep;
    // |.|_* <= base norm  iff  |v|_* <= 1 on the extreme points +-v of the
    // base-norm ball, which is an exact finite check.
    for (const Polytope* P : {&base1, &base2})
        for (int k = 0; k < P->size(); ++k)
            rep.domination = std::max(rep.domination, gauge_value(ref_norm, P->vertex(k), opt.tol));
    if (rep.domination > 1.0 + 1e-9)
        throw Error(ErrorKind::HypothesisViolated,
                    "reference norm exceeds a base norm (max " + std::to_string(rep.domination) + ")");

    const Gauge n1 = AtomicGauge{base1.vertices, {}};
    const Gauge n2 = AtomicGauge{base2.vertices, {}};
    auto ratio = [&](const Eigen::VectorXd& x) {
        const double r = gauge_value(ref_norm, x, opt.tol);
        if (r <= 1e-14) return 0.0;
        return std::abs(gauge_value(n1, x, opt.tol) - gauge_value(n2, x, opt.tol)) / r;
    };

    std::vector<Eigen::VectorXd> probes;
    for (const Polytope* P : {&base1, &base2})
        for (int k = 0; k < P->size(); ++k) probes.push_back(P->vertex(k));
    const int common = std::min(base1.size(), base2.size());
    for (int k = 0; k < common; ++k) probes.push_back(base1.vertex(k) - base2.vertex(k));
    Rng rng(opt.seed);
    const int random_count = std::max(0, opt.samples - static_cast<int>(probes.size()));
    for (int s = 0; s < random_count; ++s) probes.push_back(gaussian_vector(rng, static_cast<int>(eta.size())));

    for (const auto& x : probes) rep.delta = std::max(rep.delta, ratio(x));
    rep.samples = static_cast<int>(probes.size());
    rep.epsilon = 4.0 * rep.delta * (1.0 + opt.margin);

    for (int k = 0; k < base1.size(); ++k)
        rep.hausdorff = std::max(rep.hausdorff, nearest_point(base1.vertex(k), base2, ref_norm, opt.tol).distance);
    for (int k = 0; k < base2.size(); ++k)
        rep.hausdorff = std::max(rep.hausdorff, nearest_point(base2.vertex(k), base1, ref_norm, opt.tol).distance);

    rep.passed = rep.hausdorff < rep.epsilon || (rep.delta == 0.0 && rep.hausdorff <= 1e-12);
    return rep;
}

StabilityInstance random_stability_instance(Rng& rng, int dim, int vertices, double perturbation) {
    if (dim < 2) throw Error(ErrorKind::InvalidParams, "need dim >= 2");
    if (vertices < dim) throw Error(ErrorKind::InvalidParams, "a base spanning R^dim needs at least dim vertices");
    Eigen::MatrixXd V(dim, vertices);
    Eigen::MatrixXd W(dim, vertices);
    for (int k = 0; k < vertices; ++k) {
        V.col(k) = gaussian_vector(rng, dim);
        V(0, k) = 1.0;
        Eigen::VectorXd step = gaussian_vector(rng, dim);
        step(0) = 0.0;
        if (step.norm() > 0) step *= perturbation / step.norm();
        W.col(k) = V.col(k) + step;
    }
    const double biggest = std::max(V.colwise().norm().maxCoeff(), W.colwise().norm().maxCoeff());
    Eigen::VectorXd eta = Eigen::VectorXd::Zero(dim);
    eta(0) = 1.0;
    return {Polytope(V), Polytope(W), eta, EuclideanGauge{1.0 / biggest}};
}

}  // namespace qgh
