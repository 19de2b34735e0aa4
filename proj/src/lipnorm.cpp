#include "qgh/lipnorm.hpp"

#include <cmath>

namespace qgh {

LipNorm polyhedral_lipnorm(Eigen::VectorXd unit, Eigen::MatrixXd functionals, const Tolerances& tol) {
    if (functionals.rows() > 0) require_dim(functionals.cols(), unit.size(), "Lip functional");
    LipNorm L;
    L.unit = std::move(unit);
    L.functionals = functionals.rows() ? std::move(functionals) : Eigen::MatrixXd(0, L.unit.size());
    for (int j = 0; j < L.functionals.rows(); ++j) {
        const double v = L.functionals.row(j).dot(L.unit);
        const double scale = std::max(1.0, L.functionals.row(j).cwiseAbs().maxCoeff());
        if (std::abs(v) > tol.center * scale)
            throw Error(ErrorKind::NotCentered, "Lip functional " + std::to_string(j) + " does not vanish on the unit");
    }
    return L;
}

LipNorm oracle_lipnorm(Eigen::VectorXd unit, std::function<double(const Eigen::VectorXd&)> evaluator,
                       Eigen::MatrixXd sampled_functionals) {
    LipNorm L = polyhedral_lipnorm(std::move(unit), std::move(sampled_functionals));
    L.evaluator = std::move(evaluator);
    return L;
}

LipNorm lipnorm_from_metric(const FiniteMetricSpace& X) {
    validate_metric(X);
    const int n = X.size();
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n * (n - 1) / 2, n);
    int row = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++row) {
            F(row, i) = 1.0 / X.dist(i, j);
            F(row, j) = -1.0 / X.dist(i, j);
        }
    return polyhedral_lipnorm(Eigen::VectorXd::Ones(n), F);
}

double eval_lip(const LipNorm& L, const Eigen::VectorXd& a) {
    require_dim(a.size(), L.dim(), "element");
    if (L.evaluator) return L.evaluator(a);
    if (L.functionals.rows() == 0) return 0.0;
    return (L.functionals * a).cwiseAbs().maxCoeff();
}

AtomicGauge dual_gauge(const LipNorm& L) {
    return AtomicGauge{L.functionals.transpose(), Eigen::VectorXd()};
}

double dual_seminorm(const LipNorm& L, const Eigen::VectorXd& lambda, const Tolerances& tol) {
    require_dim(lambda.size(), L.dim(), "dual vector");
    const double at_unit = lambda.dot(L.unit);
    if (std::abs(at_unit) > tol.center * std::max(1.0, lambda.cwiseAbs().maxCoeff()))
        throw Error(ErrorKind::NotCentered, "lambda(e) = " + std::to_string(at_unit));
    // Remove the rounding-level component along e so the equality system is
    // exactly consistent with the centered functionals.
    const Eigen::VectorXd centered = lambda - (at_unit / L.unit.squaredNorm()) * L.unit;
    return gauge_value(dual_gauge(L), centered, tol);
}

RadiusDiameter radius_diameter(const OrderUnitSpace& A, const LipNorm& L, const Tolerances& tol) {
    require_dim(L.dim(), A.dim, "Lip-norm host");
    double diam = 0.0;
    for (int i = 0; i < A.num_states(); ++i)
        for (int j = i + 1; j < A.num_states(); ++j)
            diam = std::max(diam, dual_seminorm(L, A.state(i) - A.state(j), tol));
    return {diam / 2.0, diam};
}

double quotient_dual(const Projection& pi, const LipNorm& L, const Eigen::VectorXd& lambda_b,
                     const Eigen::VectorXd& unit_b, const Tolerances& tol) {
    require_dim(lambda_b.size(), unit_b.size(), "quotient dual vector");
    const double at_unit = lambda_b.dot(unit_b);
    if (std::abs(at_unit) > tol.center * std::max(1.0, lambda_b.cwiseAbs().maxCoeff()))
        throw Error(ErrorKind::NotCentered, "lambda(e_B) = " + std::to_string(at_unit));
    return dual_seminorm(L, pi.pullback(lambda_b), tol);
}

LipReport validate_lipnorm(const OrderUnitSpace& A, const LipNorm& L, const Tolerances& tol) {
    LipReport rep;
    rep.expected_rank = A.dim - 1;
    if (L.dim() != A.dim) {
        rep.problems.push_back("dimension mismatch between Lip-norm and space");
        return rep;
    }
    rep.unit_value = eval_lip(L, A.unit);
    if (rep.unit_value > tol.center) rep.problems.push_back("L(e) is not zero");
    rep.rank = numerical_rank(L.functionals, tol.rank);
    if (rep.rank < rep.expected_rank) rep.problems.push_back("null space larger than R e");
    if (rep.rank > rep.expected_rank) rep.problems.push_back("functionals do not annihilate e");
    if (rep.problems.empty()) {
        try {
            const RadiusDiameter rd = radius_diameter(A, L, tol);
            rep.radius = rd.radius;
            rep.diameter = rd.diameter;
        } catch (const Error& e) {
            rep.problems.push_back(std::string("radius not finite: ") + e.what());
        }
    }
    rep.valid = rep.problems.empty();
    return rep;
}

}  // namespace qgh
