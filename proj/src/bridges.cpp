#include "qgh/bridges.hpp"

#include <algorithm>
#include <cmath>

namespace qgh {

const char* to_string(BridgeRecipe r) {
    switch (r) {
        case BridgeRecipe::TwoPoints: return "two_points";
        case BridgeRecipe::ToScalars: return "to_scalars";
        case BridgeRecipe::Doubling: return "doubling";
        case BridgeRecipe::AlongMap: return "along_map";
        case BridgeRecipe::StateFamily: return "state_family";
        case BridgeRecipe::MetricUnion: return "metric_union";
        case BridgeRecipe::Custom: return "custom";
    }
    return "unknown";
}

double Bridge::eval(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    require_dim(a.size(), dim_a, "bridge first argument");
    require_dim(b.size(), dim_b, "bridge second argument");
    if (functionals.rows() == 0) return 0.0;
    return (functionals.leftCols(dim_a) * a + functionals.rightCols(dim_b) * b).cwiseAbs().maxCoeff();
}

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0) || !std::isfinite(v)) throw Error(ErrorKind::InvalidParams, std::string(what) + " must be positive");
}

Bridge finish(BridgeRecipe recipe, int dim_a, int dim_b, Eigen::MatrixXd F, const Eigen::VectorXd& ea,
              std::string description) {
    Bridge N;
    N.recipe = recipe;
    N.dim_a = dim_a;
    N.dim_b = dim_b;
    N.functionals = std::move(F);
    N.description = std::move(description);
    const double first = N.eval(ea, Eigen::VectorXd::Zero(dim_b));
    N.gap = first > 0 ? 1.0 / first : kInf;
    return N;
}

// Residual rows of a polyhedral seminorm, skipping an absent one (L = 0).
Eigen::MatrixXd rows_or_empty(const LipNorm& L) {
    return L.functionals.rows() ? L.functionals : Eigen::MatrixXd(0, L.dim());
}

}  // namespace

Bridge two_points_bridge(const OrderUnitSpace& A, const OrderUnitSpace& B, const Eigen::VectorXd& mu0,
                         const Eigen::VectorXd& nu0, double gamma) {
    require_positive(gamma, "gamma");
    require_dim(mu0.size(), A.dim, "mu0");
    require_dim(nu0.size(), B.dim, "nu0");
    if (std::abs(mu0.dot(A.unit) - 1.0) > 1e-9 || std::abs(nu0.dot(B.unit) - 1.0) > 1e-9)
        throw Error(ErrorKind::InvalidParams, "two_points needs states");
    Eigen::MatrixXd F(1, A.dim + B.dim);
    F << mu0.transpose() / gamma, -nu0.transpose() / gamma;
    return finish(BridgeRecipe::TwoPoints, A.dim, B.dim, F, A.unit, "two_points gamma=" + std::to_string(gamma));
}

Bridge to_scalars_bridge(const OrderUnitSpace& A, const LipNorm& L_A, double r) {
    if (r <= 0) r = radius_diameter(A, L_A).radius;
    if (r <= 0) throw Error(ErrorKind::InvalidParams, "to_scalars needs a positive radius (A is one-dimensional)");
    const int k = A.num_states();
    Eigen::MatrixXd F(k, A.dim + 1);
    F.leftCols(A.dim) = A.states / r;
    F.col(A.dim).setConstant(-1.0 / r);
    return finish(BridgeRecipe::ToScalars, A.dim, 1, F, A.unit, "to_scalars r=" + std::to_string(r));
}

Bridge doubling_bridge(const OrderUnitSpace& host, double eps) {
    require_positive(eps, "epsilon");
    Eigen::MatrixXd F(host.num_states(), 2 * host.dim);
    F << host.states / eps, -host.states / eps;
    return finish(BridgeRecipe::Doubling, host.dim, host.dim, F, host.unit, "doubling eps=" + std::to_string(eps));
}

Bridge along_map_bridge(const OrderUnitSpace& A, const OrderUnitSpace& B, const Eigen::MatrixXd& phi, double gamma,
                        MapDirection dir) {
    require_positive(gamma, "gamma");
    Eigen::MatrixXd F;
    if (dir == MapDirection::AtoB) {
        if (phi.rows() != B.dim || phi.cols() != A.dim)
            throw Error(ErrorKind::InvalidParams, "map must be dim_B x dim_A");
        if ((phi * A.unit - B.unit).cwiseAbs().maxCoeff() > 1e-9)
            throw Error(ErrorKind::InvalidParams, "map is not unital");
        F.resize(B.num_states(), A.dim + B.dim);
        F << B.states * phi / gamma, -B.states / gamma;
    } else {
        if (phi.rows() != A.dim || phi.cols() != B.dim)
            throw Error(ErrorKind::InvalidParams, "map must be dim_A x dim_B");
        if ((phi * B.unit - A.unit).cwiseAbs().maxCoeff() > 1e-9)
            throw Error(ErrorKind::InvalidParams, "map is not unital");
        F.resize(A.num_states(), A.dim + B.dim);
        F << A.states / gamma, -A.states * phi / gamma;
    }
    return finish(BridgeRecipe::AlongMap, A.dim, B.dim, F, A.unit, "along_map gamma=" + std::to_string(gamma));
}

Bridge state_family_bridge(const Eigen::MatrixXd& states_a, const Eigen::MatrixXd& states_b, double eps) {
    require_positive(eps, "epsilon");
    if (states_a.rows() == 0) throw Error(ErrorKind::InvalidParams, "empty state family");
    if (states_a.rows() != states_b.rows())
        throw Error(ErrorKind::InvalidParams, "state family sides have different lengths");
    Eigen::MatrixXd F(states_a.rows(), states_a.cols() + states_b.cols());
    F << states_a / eps, -states_b / eps;
    Bridge N;
    N.recipe = BridgeRecipe::StateFamily;
    N.dim_a = static_cast<int>(states_a.cols());
    N.dim_b = static_cast<int>(states_b.cols());
    N.functionals = F;
    N.gap = eps;  // every paired state takes value 1 at e_A
    N.description = "state_family eps=" + std::to_string(eps);
    return N;
}

Bridge custom_bridge(const OrderUnitSpace& A, const OrderUnitSpace& B, Eigen::MatrixXd functionals) {
    require_dim(functionals.cols(), A.dim + B.dim, "bridge functional");
    return finish(BridgeRecipe::Custom, A.dim, B.dim, std::move(functionals), A.unit, "custom");
}

double required_bridge_scale(const Eigen::VectorXd& s, const Eigen::MatrixXd& W, const Eigen::MatrixXd& G_B,
                             const Tolerances& tol) {
    const int k = static_cast<int>(W.rows());
    const int n = static_cast<int>(W.cols());
    const int J = static_cast<int>(G_B.rows());
    require_dim(s.size(), k, "state values");
    if (J) require_dim(G_B.cols(), n, "Lip functional");
    // Dual:  max s.(w+ - w-) - sum(u+ + u-)
    //        s.t.  W^T (w+ - w-) = G^T (u+ - u-),  sum(w+ + w-) = 1.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + 1, 2 * k + 2 * J);
    A.block(0, 0, n, k) = W.transpose();
    A.block(0, k, n, k) = -W.transpose();
    if (J) {
        A.block(0, 2 * k, n, J) = -G_B.transpose();
        A.block(0, 2 * k + J, n, J) = G_B.transpose();
    }
    A.row(n).head(2 * k).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
    b(n) = 1.0;
    Eigen::VectorXd c(2 * k + 2 * J);
    c.head(k) = -s;
    c.segment(k, k) = s;
    c.tail(2 * J).setOnes();
    return -solve_standard(A, b, c, tol).value;
}

BridgeReport validate_bridge(const Bridge& N, const OrderUnitSpace& A, const LipNorm& L_A, const OrderUnitSpace& B,
                             const LipNorm& L_B, const BridgeCheckOptions& opt) {
    BridgeReport rep;
    rep.canonical = N.canonical();
    if (N.dim_a != A.dim || N.dim_b != B.dim) {
        rep.problems.push_back("bridge dimensions do not match the spaces");
        return rep;
    }
    if (opt.samples < 1) throw Error(ErrorKind::InvalidParams, "bridge validation needs at least one sample");
    rep.unit_value = N.eval(A.unit, B.unit);
    rep.first_unit = N.eval(A.unit, Eigen::VectorXd::Zero(B.dim));
    rep.gap = rep.first_unit > 0 ? 1.0 / rep.first_unit : kInf;
    const double scale = std::max(1.0, N.functionals.rows() ? N.functionals.cwiseAbs().maxCoeff() : 1.0);
    if (rep.unit_value > 1e-9 * scale) rep.problems.push_back("N(e_A, e_B) is not zero");
    if (rep.first_unit <= 1e-12) rep.problems.push_back("N(e_A, 0) vanishes");
    if (!rep.problems.empty()) return rep;

    const Eigen::MatrixXd FA = N.functionals.leftCols(A.dim);
    const Eigen::MatrixXd FB = N.functionals.rightCols(B.dim);
    const Eigen::MatrixXd GA = rows_or_empty(L_A);
    const Eigen::MatrixXd GB = rows_or_empty(L_B);

    // For x on the unit sphere of L_X, min over y of L_Y(y) v N(x, y) is a
    // Chebyshev problem in y with residual rows [G_Y ; F_Y] y + [0 ; F_X x].
    auto worst = [&](int dim_x, const LipNorm& LX, const Eigen::MatrixXd& FX, const Eigen::MatrixXd& GY,
                     const Eigen::MatrixXd& FY, Rng& rng) {
        double w = -kInf;
        Eigen::MatrixXd G(GY.rows() + FY.rows(), FY.cols());
        G << GY, FY;
        for (int s = 0; s < opt.samples; ++s) {
            Eigen::VectorXd x = gaussian_vector(rng, dim_x);
            const double lx = eval_lip(LX, x);
            if (lx <= 1e-12) continue;
            x /= lx;
            Eigen::VectorXd h = Eigen::VectorXd::Zero(G.rows());
            h.tail(FY.rows()) = FX * x;
            w = std::max(w, chebyshev_value(G, h, opt.tol) - 1.0);
            ++rep.samples;
        }
        // A seminorm vanishing identically (B = R) leaves only multiples of
        // the unit, witnessed by the other unit with residual zero.
        return w == -kInf ? 0.0 : w;
    };
    Rng rng(opt.seed);
    rep.residual_ab = worst(A.dim, L_A, FA, GB, FB, rng);
    rep.residual_ba = worst(B.dim, L_B, FB, GA, FA, rng);
    const double limit = opt.tol.bridge_residual;
    if (rep.residual_ab > limit) rep.problems.push_back("condition 3 fails from A to B");
    if (rep.residual_ba > limit) rep.problems.push_back("condition 3 fails from B to A");
    rep.valid = rep.problems.empty();
    return rep;
}

CombinedLip combine(const LipNorm& L_A, const LipNorm& L_B, const Bridge& N) {
    require_dim(N.dim_a, L_A.dim(), "bridge first block");
    require_dim(N.dim_b, L_B.dim(), "bridge second block");
    const int na = L_A.dim(), nb = L_B.dim();
    const int ra = L_A.num_functionals(), rb = L_B.num_functionals(), rn = static_cast<int>(N.functionals.rows());
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(ra + rb + rn, na + nb);
    if (ra) F.topLeftCorner(ra, na) = L_A.functionals;
    if (rb) F.block(ra, na, rb, nb) = L_B.functionals;
    if (rn) F.bottomRows(rn) = N.functionals;
    Eigen::VectorXd unit(na + nb);
    unit << L_A.unit, L_B.unit;
    return {polyhedral_lipnorm(unit, F), N.gap};
}

double distq_upper(const OrderUnitSpace& A, const LipNorm& L_A, const OrderUnitSpace& B, const LipNorm& L_B,
                   const Bridge& N, const Tolerances& tol) {
    return hausdorff_states(combine(L_A, L_B, N).lip, A, B, tol);
}

double distq_lower(const OrderUnitSpace& A, const LipNorm& L_A, const OrderUnitSpace& B, const LipNorm& L_B,
                   const Tolerances& tol) {
    return std::abs(radius_diameter(A, L_A, tol).diameter - radius_diameter(B, L_B, tol).diameter) / 2.0;
}

DistqCertificate certify(const OrderUnitSpace& A, const LipNorm& L_A, const OrderUnitSpace& B, const LipNorm& L_B,
                         const Bridge& N, const BridgeCheckOptions& opt) {
    DistqCertificate c;
    c.recipe = N.recipe;
    c.report = validate_bridge(N, A, L_A, B, L_B, opt);
    if (!c.report.valid) {
        std::string why;
        for (const auto& p : c.report.problems) why += (why.empty() ? "" : "; ") + p;
        throw Error(ErrorKind::BridgeInvalid, why);
    }
    const CombinedLip M = combine(L_A, L_B, N);
    c.gap = M.gap;
    c.upper = hausdorff_states(M.lip, A, B, opt.tol);
    c.lower = distq_lower(A, L_A, B, L_B, opt.tol);
    c.min_cross = min_cross_distance(M.lip, A, B, opt.tol);
    return c;
}

ChainResult chain(const std::vector<OrderUnitSpace>& spaces, const std::vector<LipNorm>& lips,
                  const std::vector<Bridge>& links, const Tolerances& tol) {
    const int k = static_cast<int>(spaces.size());
    if (k < 2) throw Error(ErrorKind::InvalidParams, "a chain needs at least two spaces");
    if (static_cast<int>(lips.size()) != k || static_cast<int>(links.size()) != k - 1)
        throw Error(ErrorKind::InvalidParams, "chain needs one Lip-norm per space and one link per step");
    ChainResult out;
    int total = 0;
    int rows = 0;
    for (int j = 0; j < k; ++j) {
        require_dim(lips[j].dim(), spaces[j].dim, "chain Lip-norm");
        out.offsets.push_back(total);
        total += spaces[j].dim;
        rows += lips[j].num_functionals();
    }
    for (const auto& N : links) rows += static_cast<int>(N.functionals.rows());

    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(rows, total);
    Eigen::VectorXd unit(total);
    int r = 0;
    for (int j = 0; j < k; ++j) {
        unit.segment(out.offsets[j], spaces[j].dim) = spaces[j].unit;
        const int q = lips[j].num_functionals();
        if (q) F.block(r, out.offsets[j], q, spaces[j].dim) = lips[j].functionals;
        r += q;
    }
    for (int j = 0; j + 1 < k; ++j) {
        const Bridge& N = links[j];
        require_dim(N.dim_a, spaces[j].dim, "link first block");
        require_dim(N.dim_b, spaces[j + 1].dim, "link second block");
        const int q = static_cast<int>(N.functionals.rows());
        F.block(r, out.offsets[j], q, N.dim_a) = N.functionals.leftCols(N.dim_a);
        F.block(r, out.offsets[j + 1], q, N.dim_b) = N.functionals.rightCols(N.dim_b);
        r += q;
        const double h = distq_upper(spaces[j], lips[j], spaces[j + 1], lips[j + 1], N, tol);
        out.link_hausdorff.push_back(h);
        out.link_sum += h;
    }
    out.joint = polyhedral_lipnorm(unit, F);

    auto embed = [&](int j) {
        Eigen::MatrixXd V = Eigen::MatrixXd::Zero(total, spaces[j].num_states());
        V.middleRows(out.offsets[j], spaces[j].dim) = spaces[j].states.transpose();
        return Polytope(V);
    };
    out.end_to_end = hausdorff(out.joint, embed(0), embed(k - 1), tol);
    return out;
}

double order_unit_dual_norm(const OrderUnitSpace& A, const Eigen::VectorXd& lambda, const Tolerances& tol) {
    return gauge_value(AtomicGauge{A.states.transpose(), {}}, lambda, tol);
}

PerturbationCertificate perturbation_bridge(const OrderUnitSpace& A, const LipNorm& L1, const LipNorm& L2,
                                            const PerturbationOptions& opt) {
    require_dim(L1.dim(), A.dim, "first Lip-norm");
    require_dim(L2.dim(), A.dim, "second Lip-norm");
    PerturbationCertificate out;

    auto center = [&](Eigen::VectorXd l) {
        return Eigen::VectorXd(l - (l.dot(A.unit) / A.unit.squaredNorm()) * A.unit);
    };
    std::vector<Eigen::VectorXd> probes;
    for (int i = 0; i < A.num_states(); ++i)
        for (int j = i + 1; j < A.num_states(); ++j) probes.push_back(A.state(i) - A.state(j));
    for (const LipNorm* L : {&L1, &L2})
        for (int j = 0; j < L->num_functionals(); ++j) probes.push_back(L->functionals.row(j).transpose());
    Rng rng(opt.seed);
    for (int s = 0; s < opt.samples; ++s) probes.push_back(center(gaussian_vector(rng, A.dim)));

    for (const auto& l : probes) {
        const double base = order_unit_dual_norm(A, l, opt.tol);
        if (base <= 1e-12) continue;
        const double diff = std::abs(dual_seminorm(L1, l, opt.tol) - dual_seminorm(L2, l, opt.tol));
        out.measured_delta = std::max(out.measured_delta, diff / base);
        ++out.samples;
    }

    if (opt.delta > 0) {
        if (out.measured_delta > opt.delta * (1.0 + 1e-9) + 1e-12)
            throw Error(ErrorKind::HypothesisViolated, "measured dual discrepancy " +
                                                           std::to_string(out.measured_delta) + " exceeds delta " +
                                                           std::to_string(opt.delta));
        out.delta = opt.delta;
    } else {
        out.delta = out.measured_delta;
    }
    if (!(out.delta > 0))
        throw Error(ErrorKind::InvalidParams, "the Lip-norms agree on every sample; pass an explicit delta");

    const Bridge N = doubling_bridge(A, out.delta);
    BridgeCheckOptions bopt;
    bopt.samples = opt.samples;
    bopt.seed = opt.seed;
    bopt.tol = opt.tol;
    out.report = validate_bridge(N, A, L1, A, L2, bopt);
    out.upper = distq_upper(A, L1, A, L2, N, opt.tol);
    out.lower = distq_lower(A, L1, A, L2, opt.tol);
    return out;
}

HullEnlargement hull_enlargement_upper(const OrderUnitSpace& A, const LipNorm& L, const Polytope& extra,
                                       const Polytope& K1, double eps, const Tolerances& tol) {
    require_dim(extra.dim(), A.dim, "extra states");
    require_dim(K1.dim(), A.dim, "target polytope");
    HullEnlargement out;
    out.eps = eps;
    Eigen::MatrixXd states(A.num_states() + extra.size(), A.dim);
    states << A.states, extra.vertices.transpose();
    out.enlarged = make_space(A.unit, states, {}, tol);
    const Polytope K = out.enlarged.state_polytope();
    for (int k = 0; k < K1.size(); ++k)
        if (!polytope_contains(K, K1.vertex(k)))
            throw Error(ErrorKind::InvalidParams, "target polytope leaves the enlarged state space");
    out.quotient = restrict_to_states(out.enlarged, K1, tol);

    for (int i = 0; i < K1.size(); ++i)
        for (int j = i + 1; j < K1.size(); ++j)
            out.k1_diameter = std::max(out.k1_diameter, dual_seminorm(L, K1.vertex(i) - K1.vertex(j), tol));
    out.direct = hausdorff(L, A.state_polytope(), K1, tol);

    // Two copies of the enlarged space joined by a doubling bridge for its own
    // norm; A and C are quotients of the respective copies.
    const CombinedLip M = combine(L, L, doubling_bridge(out.enlarged, eps));
    out.upper = hausdorff(M.lip, embed_first(A.state_polytope(), A.dim), embed_second(K1, A.dim), tol);
    return out;
}

}  // namespace qgh
