#pragma once

#include "qgh/metric_space.hpp"

#include <utility>
#include <vector>

namespace qgh {

// Pair-swap Dirac operator on functions of ordered pairs (i, j), i != j:
// (D xi)(i, j) = xi(j, i) / rho(i, j), with inner product weighted by m_i m_j.
struct DiracTriple {
    FiniteMetricSpace points;
    Eigen::VectorXd weights;
    std::vector<std::pair<int, int>> pairs;  // ordered pairs, lexicographic

    int dim() const { return static_cast<int>(pairs.size()); }
    int pair_index(int i, int j) const;
};

DiracTriple build_dirac(const FiniteMetricSpace& X, const Eigen::VectorXd& weights);
DiracTriple build_dirac(const FiniteMetricSpace& X);  // unit weights

// D in the orthonormal basis of the weighted inner product.
Eigen::MatrixXd dirac_matrix(const DiracTriple& t);
// [D, M_f] in the same basis, where f acts on (i, j) by f(i).
Eigen::MatrixXd commutator_matrix(const DiracTriple& t, const Eigen::VectorXd& f);

// Largest |D - D^*| entry in the weighted inner product.
double self_adjoint_residual(const DiracTriple& t);

// |[D, f]| through the 2x2 block structure: max |f(i) - f(j)| / rho(i, j).
double commutator_lipnorm(const DiracTriple& t, const Eigen::VectorXd& f);
// The same norm from the dense matrix; |X| <= 12.
double commutator_norm_dense(const DiracTriple& t, const Eigen::VectorXd& f);

}  // namespace qgh
