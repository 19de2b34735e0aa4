#pragma once

#include "qgh/lipnorm.hpp"

#include <cstdint>
#include <vector>

namespace qgh {

struct StateMetricContext {
    OrderUnitSpace space;
    LipNorm lip;
    Eigen::MatrixXd pairwise;  // rho_L between generators
};

StateMetricContext make_context(OrderUnitSpace space, LipNorm lip, const Tolerances& tol = {});

enum class StateCheck {
    Unit,  // only mu(e) = 1 is checked
    Hull,  // additionally require membership in the generators' hull
};

double rho(const LipNorm& L, const Eigen::VectorXd& mu, const Eigen::VectorXd& nu, const Tolerances& tol = {});
double rho(const StateMetricContext& ctx, const Eigen::VectorXd& mu, const Eigen::VectorXd& nu,
           StateCheck check = StateCheck::Unit, const Tolerances& tol = {});

// Hausdorff distance between two polytopes of states under rho_L.  The
// outer sup is taken over vertices: distance to a convex set is a convex
// function, so its maximum over a polytope sits at a vertex.
double hausdorff(const LipNorm& L, const Polytope& P, const Polytope& Q, const Tolerances& tol = {});

// S(A) and S(B) embedded in the dual of A (+) B, with L_sum on the sum.
double hausdorff_states(const LipNorm& L_sum, const OrderUnitSpace& A, const OrderUnitSpace& B,
                        const Tolerances& tol = {});

// Smallest rho_L distance from a generator of A to a generator of B
// (cross distances inside the sum).
double min_cross_distance(const LipNorm& L_sum, const OrderUnitSpace& A, const OrderUnitSpace& B,
                          const Tolerances& tol = {});

struct ScvBounds {
    int upper = 0;  // greedy eps-net over the candidate set
    int lower = 0;  // greedy packing with pairwise distance > 2 eps
    int candidates = 0;
    std::vector<int> net;      // candidate indices
    std::vector<int> packing;  // candidate indices
};

struct ScvOptions {
    int depth = 2;  // barycentric grid with denominator 2^depth; 0 means generators only
    Tolerances tol{};
};

// Candidate states used by scv: generators plus a dyadic barycentric grid.
Eigen::MatrixXd scv_candidates(const OrderUnitSpace& A, int depth);

ScvBounds scv(const StateMetricContext& ctx, double eps, const ScvOptions& opt = {});

struct FiniteApproximation {
    Restriction restricted;
    std::vector<int> net;  // generator indices spanning K
    double bound = 0.0;
    double hausdorff = 0.0;  // dist_H(S(A), K) under rho_L
};

FiniteApproximation finite_approximation(const StateMetricContext& ctx, double eps, const Tolerances& tol = {});

struct StabilityOptions {
    int samples = 10000;
    std::uint64_t seed = 0;
    double margin = 1e-6;
    Tolerances tol{};
};

struct StabilityReport {
    double delta = 0.0;       // max |x|_1 - |x|_2| / |x|_*
    double epsilon = 0.0;     // 4 delta (1 + margin)
    double hausdorff = 0.0;   // dist_H between the bases under |.|_*
    double domination = 0.0;  // max of |v|_* over vertices of both bases (<= 1 required)
    int samples = 0;
    bool passed = false;
};

// Base-norm stability: bases are polytopes whose vertices satisfy
// eta(v) = 1; the base norm has unit ball co(S u -S).
StabilityReport base_norm_stability_check(const Polytope& base1, const Polytope& base2,
                                          const Eigen::VectorXd& eta, const Gauge& ref_norm,
                                          const StabilityOptions& opt = {});

struct StabilityInstance {
    Polytope base1;
    Polytope base2;
    Eigen::VectorXd eta;
    Gauge ref_norm;
};

// Bases in the hyperplane x_0 = 1 with vertices (1, u), u Gaussian; base2
// moves each vertex by `perturbation` in a random direction inside the
// hyperplane; vertices >= dim so that the bases span.  The reference norm is
// the Euclidean norm scaled so that every vertex of both bases has norm at
// most 1.
StabilityInstance random_stability_instance(Rng& rng, int dim, int vertices, double perturbation);

}  // namespace qgh
