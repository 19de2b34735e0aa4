#pragma once

#include "qgh/convexsolve.hpp"

#include <string>
#include <vector>

namespace qgh {

// A finite-dimensional order-unit space given by a finite list of state
// generators.  Norm and order both come from the generators:
//   |a| = max_i |mu_i(a)|,   a >= 0  iff  mu_i(a) >= 0 for all i.
struct OrderUnitSpace {
    int dim = 0;
    Eigen::VectorXd unit;
    Eigen::MatrixXd states;  // one generator per row
    std::vector<std::string> labels;

    int num_states() const { return static_cast<int>(states.rows()); }
    Eigen::VectorXd state(int i) const { return states.row(i).transpose(); }
    Polytope state_polytope() const { return Polytope(states.transpose()); }
};

// Validates mu_i(e) = 1 and that the generators separate points.
OrderUnitSpace make_space(Eigen::VectorXd unit, Eigen::MatrixXd states,
                          std::vector<std::string> labels = {}, const Tolerances& tol = {});

// The one-dimensional space R with its single state.
OrderUnitSpace scalar_space();

struct NormValue {
    double norm = 0.0;
    bool positive = false;
};

NormValue order_unit_norm(const OrderUnitSpace& A, const Eigen::VectorXd& a);

OrderUnitSpace direct_sum(const OrderUnitSpace& A, const OrderUnitSpace& B);

// Pads a dual vector on one summand with zeros on the other.
Eigen::VectorXd embed_first(const Eigen::VectorXd& mu, int dim_b);
Eigen::VectorXd embed_second(const Eigen::VectorXd& nu, int dim_a);
Polytope embed_first(const Polytope& P, int dim_b);
Polytope embed_second(const Polytope& P, int dim_a);

// Restriction map pi : A -> B.  When it is injective B keeps A's
// coordinates; otherwise B's coordinates are taken in an orthonormal basis
// of the row space spanned by the retained states.
struct Projection {
    bool identity = true;
    Eigen::MatrixXd basis;  // dim_A x dim_B, orthonormal columns (unused when identity)

    Eigen::VectorXd apply(const Eigen::VectorXd& a) const;
    // pi' : B' -> A'
    Eigen::VectorXd pullback(const Eigen::VectorXd& lambda_b) const;
};

struct Restriction {
    OrderUnitSpace space;
    Projection pi;
};

Restriction restrict_to_states(const OrderUnitSpace& A, const Polytope& K, const Tolerances& tol = {});

}  // namespace qgh
