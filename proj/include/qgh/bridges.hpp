#pragma once

#include "qgh/statemetric.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qgh {

enum class BridgeRecipe {
    TwoPoints,    // |mu0(a) - nu0(b)| / gamma
    ToScalars,    // sup_mu |mu(a) - b| / r, with B = R
    Doubling,     // |a - b|_host / eps on two copies of one space
    AlongMap,     // |phi(a) - b|_B / gamma  or  |a - psi(b)|_A / gamma
    StateFamily,  // max_k |Omega_k(a) - Omega'_k(b)| / eps over paired states
    MetricUnion,  // cross terms of a metric on a disjoint union
    Custom,
};

const char* to_string(BridgeRecipe r);

// A polyhedral seminorm N(a, b) = max_j |f_j . (a, b)| on A (+) B.
struct Bridge {
    BridgeRecipe recipe = BridgeRecipe::Custom;
    int dim_a = 0;
    int dim_b = 0;
    Eigen::MatrixXd functionals;  // rows of length dim_a + dim_b
    double gap = 0.0;             // 1 / N(e_A, 0)
    std::string description;

    // Recipes whose third admissibility condition has a constructive
    // witness (b chosen explicitly from a) rather than a sampled check.
    bool canonical() const { return recipe != BridgeRecipe::Custom && recipe != BridgeRecipe::StateFamily; }
    double eval(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
};

Bridge two_points_bridge(const OrderUnitSpace& A, const OrderUnitSpace& B, const Eigen::VectorXd& mu0,
                         const Eigen::VectorXd& nu0, double gamma);
// B is the scalar space.  r <= 0 selects the radius of (A, L_A).
Bridge to_scalars_bridge(const OrderUnitSpace& A, const LipNorm& L_A, double r = 0.0);
// Both summands share the vector space of `host`, whose generators define |.|.
Bridge doubling_bridge(const OrderUnitSpace& host, double eps);

enum class MapDirection { AtoB, BintoA };
// AtoB: phi is dim_b x dim_a, unital, and N = |phi(a) - b|_B / gamma.
// BintoA: phi is dim_a x dim_b, unital, and N = |a - phi(b)|_A / gamma.
Bridge along_map_bridge(const OrderUnitSpace& A, const OrderUnitSpace& B, const Eigen::MatrixXd& phi,
                        double gamma, MapDirection dir = MapDirection::AtoB);
// Row k of states_a and of states_b form one paired state.
Bridge state_family_bridge(const Eigen::MatrixXd& states_a, const Eigen::MatrixXd& states_b, double eps);
Bridge custom_bridge(const OrderUnitSpace& A, const OrderUnitSpace& B, Eigen::MatrixXd functionals);

struct BridgeReport {
    bool valid = false;
    double unit_value = 0.0;   // N(e_A, e_B), must vanish
    double first_unit = 0.0;   // N(e_A, 0), must not vanish
    double gap = 0.0;
    double residual_ab = -kInf;  // worst min_b L_B(b) v N(a,b) - L_A(a) over samples
    double residual_ba = -kInf;
    int samples = 0;
    bool canonical = false;
    std::vector<std::string> problems;
};

struct BridgeCheckOptions {
    int samples = 512;
    std::uint64_t seed = 0;
    Tolerances tol{};
};

BridgeReport validate_bridge(const Bridge& N, const OrderUnitSpace& A, const LipNorm& L_A,
                             const OrderUnitSpace& B, const LipNorm& L_B, const BridgeCheckOptions& opt = {});

// min over b of max(|G_B b|_inf, |s - W b|_inf) with |G_B b| <= 1 enforced:
// the smallest t for which some b with L_B(b) <= 1 has |s - W b|_inf <= t.
double required_bridge_scale(const Eigen::VectorXd& s, const Eigen::MatrixXd& W, const Eigen::MatrixXd& G_B,
                             const Tolerances& tol = {});

struct CombinedLip {
    LipNorm lip;
    double gap = 0.0;
};

CombinedLip combine(const LipNorm& L_A, const LipNorm& L_B, const Bridge& N);

double distq_upper(const OrderUnitSpace& A, const LipNorm& L_A, const OrderUnitSpace& B, const LipNorm& L_B,
                   const Bridge& N, const Tolerances& tol = {});
double distq_lower(const OrderUnitSpace& A, const LipNorm& L_A, const OrderUnitSpace& B, const LipNorm& L_B,
                   const Tolerances& tol = {});

struct DistqCertificate {
    double upper = kInf;
    double lower = 0.0;
    double gap = 0.0;
    double min_cross = 0.0;  // smallest generator cross distance, >= gap
    BridgeRecipe recipe = BridgeRecipe::Custom;
    BridgeReport report;
};

DistqCertificate certify(const OrderUnitSpace& A, const LipNorm& L_A, const OrderUnitSpace& B, const LipNorm& L_B,
                         const Bridge& N, const BridgeCheckOptions& opt = {});

// Links[j] is a bridge between spaces[j] and spaces[j+1].
struct ChainResult {
    LipNorm joint;                     // sup of the link Lip-norms on the full sum
    std::vector<double> link_hausdorff;
    double link_sum = 0.0;
    double end_to_end = 0.0;           // Hausdorff between the first and last state spaces
    std::vector<int> offsets;          // coordinate offset of each summand
};

ChainResult chain(const std::vector<OrderUnitSpace>& spaces, const std::vector<LipNorm>& lips,
                  const std::vector<Bridge>& links, const Tolerances& tol = {});

struct PerturbationOptions {
    double delta = 0.0;  // bridge scale; <= 0 uses the measured value
    int samples = 512;
    std::uint64_t seed = 0;
    Tolerances tol{};
};

struct PerturbationCertificate {
    double measured_delta = 0.0;  // max |L1'(l) - L2'(l)| / |l|' over samples
    double delta = 0.0;           // scale used for the bridge
    double upper = kInf;
    double lower = 0.0;
    int samples = 0;
    BridgeReport report;
};

// Two Lip-norms on one space whose duals differ by at most delta |.|'.
PerturbationCertificate perturbation_bridge(const OrderUnitSpace& A, const LipNorm& L1, const LipNorm& L2,
                                            const PerturbationOptions& opt = {});

// Dual of the order-unit norm: min sum |c_i| with lambda = sum c_i mu_i.
double order_unit_dual_norm(const OrderUnitSpace& A, const Eigen::VectorXd& lambda, const Tolerances& tol = {});

// Enlarge S(A) by extra points of the unit hyperplane, keep L, and compare A
// with the quotient C onto the polytope K1 of enlarged states.  The bound
// comes from a doubling bridge on two copies of the enlarged space.
struct HullEnlargement {
    OrderUnitSpace enlarged;  // same vector space, states S(A) plus the extra points
    Restriction quotient;     // C
    double upper = kInf;      // Hausdorff distance under the bridged Lip-norm
    double direct = 0.0;      // dist_H(S(A), K1) under rho_L, without the bridge
    double k1_diameter = 0.0;
    double eps = 0.0;
};

HullEnlargement hull_enlargement_upper(const OrderUnitSpace& A, const LipNorm& L, const Polytope& extra,
                                       const Polytope& K1, double eps = 1e-7, const Tolerances& tol = {});

}  // namespace qgh
