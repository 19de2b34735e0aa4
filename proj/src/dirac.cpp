#include "qgh/dirac.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace qgh {

int DiracTriple::pair_index(int i, int j) const {
    const int n = points.size();
    if (i == j || i < 0 || j < 0 || i >= n || j >= n) return -1;
    return i * (n - 1) + (j < i ? j : j - 1);
}

DiracTriple build_dirac(const FiniteMetricSpace& X, const Eigen::VectorXd& weights) {
    if (X.size() < 2) throw Error(ErrorKind::TooSmall, "Dirac construction needs at least two points");
    validate_metric(X);
    require_dim(weights.size(), X.size(), "weights");
    for (long i = 0; i < weights.size(); ++i)
        if (!(weights(i) > 0) || !std::isfinite(weights(i)))
            throw Error(ErrorKind::NonpositiveWeight, "weight " + std::to_string(i) + " is not positive");
    DiracTriple t{X, weights, {}};
    for (int i = 0; i < X.size(); ++i)
        for (int j = 0; j < X.size(); ++j)
            if (i != j) t.pairs.emplace_back(i, j);
    return t;
}

DiracTriple build_dirac(const FiniteMetricSpace& X) {
    return build_dirac(X, Eigen::VectorXd::Ones(X.size()));
}

// In the orthonormal basis u_(i,j) = e_(i,j) / sqrt(m_i m_j) the swap keeps
// its coefficient because m_i m_j = m_j m_i, so the weights drop out.
Eigen::MatrixXd dirac_matrix(const DiracTriple& t) {
    const int N = t.dim();
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N, N);
    for (int k = 0; k < N; ++k) {
        const auto [i, j] = t.pairs[k];
        const int l = t.pair_index(j, i);
        // W^{1/2} D_raw W^{-1/2} with W = diag(m_i m_j)
        const double wk = std::sqrt(t.weights(i) * t.weights(j));
        const double wl = std::sqrt(t.weights(j) * t.weights(i));
        D(k, l) = wk / t.points.dist(i, j) / wl;
    }
    return D;
}

Eigen::MatrixXd commutator_matrix(const DiracTriple& t, const Eigen::VectorXd& f) {
    require_dim(f.size(), t.points.size(), "function");
    const int N = t.dim();
    Eigen::VectorXd mf(N);
    for (int k = 0; k < N; ++k) mf(k) = f(t.pairs[k].first);
    const Eigen::MatrixXd D = dirac_matrix(t);
    return D * mf.asDiagonal() - mf.asDiagonal() * D;
}

double self_adjoint_residual(const DiracTriple& t) {
    const Eigen::MatrixXd D = dirac_matrix(t);
    return (D - D.transpose()).cwiseAbs().maxCoeff();
}

double commutator_lipnorm(const DiracTriple& t, const Eigen::VectorXd& f) {
    require_dim(f.size(), t.points.size(), "function");
    // Each swap block [[0, c], [-c, 0]] with c = (f(j) - f(i)) / rho(i, j)
    // has norm |c|.
    double best = 0.0;
    for (const auto& [i, j] : t.pairs)
        if (i < j) best = std::max(best, std::abs(f(i) - f(j)) / t.points.dist(i, j));
    return best;
}

double commutator_norm_dense(const DiracTriple& t, const Eigen::VectorXd& f) {
    if (t.points.size() > 12) throw Error(ErrorKind::TooLarge, "dense check limited to 12 points");
    const Eigen::MatrixXd C = commutator_matrix(t, f);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(C);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

}  // namespace qgh
