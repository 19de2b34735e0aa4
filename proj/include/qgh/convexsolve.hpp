#pragma once

#include "qgh/common.hpp"

#include <variant>

namespace qgh {

// minimize objective . x
//   subject to  eq_matrix x = eq_rhs,  ineq_matrix x <= ineq_rhs,  lower <= x <= upper.
// Bounds default to [0, +inf); use -kInf / kInf for free directions.
struct LinearProgram {
    Eigen::VectorXd objective;
    Eigen::MatrixXd eq_matrix;
    Eigen::VectorXd eq_rhs;
    Eigen::MatrixXd ineq_matrix;
    Eigen::VectorXd ineq_rhs;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    LinearProgram() = default;
    explicit LinearProgram(int n);
    int num_vars() const { return static_cast<int>(objective.size()); }
    void validate() const;
};

struct LpSolution {
    double value = 0.0;
    Eigen::VectorXd x;
    int pivots = 0;
};

struct LpOptions {
    Tolerances tol{};
    // Among optimal points return the lexicographically smallest one
    // (costs one extra LP per coordinate).
    bool lexicographic = true;
};

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opt = {});

// Standard form: minimize c.x subject to A x = b, x >= 0.  This is the
// workhorse behind every dual-seminorm and nearest-point computation; the
// callers formulate their problems with few rows and many columns.
struct StandardSolution {
    double value = 0.0;
    Eigen::VectorXd x;
    Eigen::VectorXd duals;  // y with A^T y <= c and b.y = value
    int pivots = 0;
};

StandardSolution solve_standard(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                const Eigen::VectorXd& c, const Tolerances& tol = {});

// min over y of max_r |G_r . y + h_r|, solved through its dual so the
// tableau has G.cols()+1 rows regardless of how many residuals there are.
double chebyshev_value(const Eigen::MatrixXd& G, const Eigen::VectorXd& h,
                       const Tolerances& tol = {});

// Vertices are stored column-wise.
struct Polytope {
    Eigen::MatrixXd vertices;

    Polytope() = default;
    explicit Polytope(Eigen::MatrixXd v);
    int dim() const { return static_cast<int>(vertices.rows()); }
    int size() const { return static_cast<int>(vertices.cols()); }
    Eigen::VectorXd vertex(int i) const { return vertices.col(i); }
};

// g(v) = max_j |f_j . v|, functionals stored row-wise.
struct MaxAbsGauge {
    Eigen::MatrixXd functionals;
};

// g(v) = min sum_j w_j |c_j| subject to v = sum_j c_j a_j, atoms stored
// column-wise.  This is the dual of a polyhedral seminorm; +inf outside the
// span of the atoms.
struct AtomicGauge {
    Eigen::MatrixXd atoms;
    Eigen::VectorXd weights;  // empty means all ones
};

// g(v) = scale * |v|_2
struct EuclideanGauge {
    double scale = 1.0;
};

using Gauge = std::variant<MaxAbsGauge, AtomicGauge, EuclideanGauge>;

double gauge_value(const Gauge& g, const Eigen::VectorXd& v, const Tolerances& tol = {});

struct NearestPoint {
    Eigen::VectorXd point;
    Eigen::VectorXd weights;  // convex weights on P's vertices
    double distance = 0.0;
};

NearestPoint nearest_point(const Eigen::VectorXd& z, const Polytope& P, const Gauge& g,
                           const Tolerances& tol = {});

// Membership by a feasibility LP, independent of nearest_point.
bool polytope_contains(const Polytope& P, const Eigen::VectorXd& z, double tol = 1e-9);

}  // namespace qgh
