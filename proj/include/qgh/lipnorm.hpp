#pragma once

#include "qgh/metric_space.hpp"
#include "qgh/ouspace.hpp"

#include <functional>
#include <string>
#include <vector>

namespace qgh {

// A seminorm vanishing exactly on R e.  Polyhedral Lip-norms are
// max_j |nu_j(a)|.  Oracle Lip-norms carry an evaluator plus a finite list
// of sampled functionals; every dual quantity computed from those samples
// is an estimate and is labelled as such by callers.
struct LipNorm {
    Eigen::VectorXd unit;
    Eigen::MatrixXd functionals;  // one functional per row, each annihilating the unit
    std::function<double(const Eigen::VectorXd&)> evaluator;

    int dim() const { return static_cast<int>(unit.size()); }
    bool is_polyhedral() const { return !evaluator; }
    int num_functionals() const { return static_cast<int>(functionals.rows()); }
};

LipNorm polyhedral_lipnorm(Eigen::VectorXd unit, Eigen::MatrixXd functionals, const Tolerances& tol = {});
LipNorm oracle_lipnorm(Eigen::VectorXd unit, std::function<double(const Eigen::VectorXd&)> evaluator,
                       Eigen::MatrixXd sampled_functionals);

// Functionals (delta_x - delta_y)/rho(x,y) over unordered pairs x < y.
LipNorm lipnorm_from_metric(const FiniteMetricSpace& X);

double eval_lip(const LipNorm& L, const Eigen::VectorXd& a);

// L'(lambda) = min sum |c_j| s.t. lambda = sum c_j nu_j.
double dual_seminorm(const LipNorm& L, const Eigen::VectorXd& lambda, const Tolerances& tol = {});

// The gauge whose value is L' (used for nearest points under rho_L).
AtomicGauge dual_gauge(const LipNorm& L);

struct RadiusDiameter {
    double radius = 0.0;
    double diameter = 0.0;
};

RadiusDiameter radius_diameter(const OrderUnitSpace& A, const LipNorm& L, const Tolerances& tol = {});

double quotient_dual(const Projection& pi, const LipNorm& L, const Eigen::VectorXd& lambda_b,
                     const Eigen::VectorXd& unit_b, const Tolerances& tol = {});

struct LipReport {
    bool valid = false;
    double unit_value = 0.0;  // L(e)
    int rank = 0;
    int expected_rank = 0;
    double radius = 0.0;
    double diameter = 0.0;
    std::vector<std::string> problems;
};

LipReport validate_lipnorm(const OrderUnitSpace& A, const LipNorm& L, const Tolerances& tol = {});

}  // namespace qgh
