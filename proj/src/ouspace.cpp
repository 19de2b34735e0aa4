#include "qgh/ouspace.hpp"

#include <cmath>

namespace qgh {

OrderUnitSpace make_space(Eigen::VectorXd unit, Eigen::MatrixXd states, std::vector<std::string> labels,
                          const Tolerances& tol) {
    OrderUnitSpace A;
    A.dim = static_cast<int>(unit.size());
    if (A.dim <= 0) throw Error(ErrorKind::InvalidInput, "space dimension must be positive");
    if (states.rows() == 0) throw Error(ErrorKind::EmptyPolytope, "no state generators");
    require_dim(states.cols(), A.dim, "state generator");
    for (int i = 0; i < states.rows(); ++i) {
        const double v = states.row(i).dot(unit);
        if (std::abs(v - 1.0) > tol.unit)
            throw Error(ErrorKind::UnitViolation,
                        "generator " + std::to_string(i) + " takes value " + std::to_string(v) + " at the unit");
    }
    if (numerical_rank(states, tol.rank) < A.dim)
        throw Error(ErrorKind::InvalidInput, "state generators do not separate points");
    if (!labels.empty() && static_cast<long>(labels.size()) != states.rows())
        throw Error(ErrorKind::InvalidInput, "label count differs from generator count");
    A.unit = std::move(unit);
    A.states = std::move(states);
    A.labels = std::move(labels);
    return A;
}

OrderUnitSpace scalar_space() {
    return make_space(Eigen::VectorXd::Ones(1), Eigen::MatrixXd::Ones(1, 1), {"1"});
}

NormValue order_unit_norm(const OrderUnitSpace& A, const Eigen::VectorXd& a) {
    require_dim(a.size(), A.dim, "element");
    const Eigen::VectorXd vals = A.states * a;
    return {vals.cwiseAbs().maxCoeff(), vals.minCoeff() >= 0.0};
}

OrderUnitSpace direct_sum(const OrderUnitSpace& A, const OrderUnitSpace& B) {
    OrderUnitSpace S;
    S.dim = A.dim + B.dim;
    S.unit.resize(S.dim);
    S.unit << A.unit, B.unit;
    S.states = Eigen::MatrixXd::Zero(A.num_states() + B.num_states(), S.dim);
    S.states.topLeftCorner(A.num_states(), A.dim) = A.states;
    S.states.bottomRightCorner(B.num_states(), B.dim) = B.states;
    if (!A.labels.empty() && !B.labels.empty()) {
        S.labels = A.labels;
        S.labels.insert(S.labels.end(), B.labels.begin(), B.labels.end());
    }
    return S;
}

Eigen::VectorXd embed_first(const Eigen::VectorXd& mu, int dim_b) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(mu.size() + dim_b);
    out.head(mu.size()) = mu;
    return out;
}

Eigen::VectorXd embed_second(const Eigen::VectorXd& nu, int dim_a) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(nu.size() + dim_a);
    out.tail(nu.size()) = nu;
    return out;
}

Polytope embed_first(const Polytope& P, int dim_b) {
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(P.dim() + dim_b, P.size());
    v.topRows(P.dim()) = P.vertices;
    return Polytope(v);
}

Polytope embed_second(const Polytope& P, int dim_a) {
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(P.dim() + dim_a, P.size());
    v.bottomRows(P.dim()) = P.vertices;
    return Polytope(v);
}

Eigen::VectorXd Projection::apply(const Eigen::VectorXd& a) const {
    return identity ? a : Eigen::VectorXd(basis.transpose() * a);
}

Eigen::VectorXd Projection::pullback(const Eigen::VectorXd& lambda_b) const {
    return identity ? lambda_b : Eigen::VectorXd(basis * lambda_b);
}

Restriction restrict_to_states(const OrderUnitSpace& A, const Polytope& K, const Tolerances& tol) {
    if (K.size() == 0) throw Error(ErrorKind::EmptyPolytope, "restriction to an empty state set");
    require_dim(K.dim(), A.dim, "state polytope");
    for (int k = 0; k < K.size(); ++k) {
        const double v = K.vertex(k).dot(A.unit);
        if (std::abs(v - 1.0) > tol.unit)
            throw Error(ErrorKind::UnitViolation,
                        "vertex " + std::to_string(k) + " takes value " + std::to_string(v) + " at the unit");
    }
    const Eigen::MatrixXd rows = K.vertices.transpose();
    Restriction out;
    if (numerical_rank(rows, tol.rank) == A.dim) {
        out.pi.identity = true;
        out.space = make_space(A.unit, rows, {}, tol);
        return out;
    }
    // Quotient by the joint kernel: coordinates in an orthonormal basis of
    // the span of K's vertices.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    int r = 0;
    while (r < sv.size() && sv(r) > tol.rank * sv(0)) ++r;
    out.pi.identity = false;
    out.pi.basis = svd.matrixV().leftCols(r);
    Eigen::VectorXd unit_b = out.pi.basis.transpose() * A.unit;
    Eigen::MatrixXd states_b = rows * out.pi.basis;
    // Renormalize the rounding drift in mu(e) so the unit check stays exact.
    for (int k = 0; k < states_b.rows(); ++k) states_b.row(k) /= states_b.row(k).dot(unit_b);
    out.space = make_space(unit_b, states_b, {}, tol);
    return out;
}

}  // namespace qgh
