#include "qgh/common.hpp"

namespace qgh {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Infeasible: return "Infeasible";
        case ErrorKind::Unbounded: return "Unbounded";
        case ErrorKind::NumericalFailure: return "NumericalFailure";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::UnitViolation: return "UnitViolation";
        case ErrorKind::EmptyPolytope: return "EmptyPolytope";
        case ErrorKind::NotAMetric: return "NotAMetric";
        case ErrorKind::NotCentered: return "NotCentered";
        case ErrorKind::NotStates: return "NotStates";
        case ErrorKind::InvalidParams: return "InvalidParams";
        case ErrorKind::HypothesisViolated: return "HypothesisViolated";
        case ErrorKind::TooLarge: return "TooLarge";
        case ErrorKind::GridTooCoarse: return "GridTooCoarse";
        case ErrorKind::BoundViolated: return "BoundViolated";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::WindowTooSmall: return "WindowTooSmall";
        case ErrorKind::BridgeInvalid: return "BridgeInvalid";
        case ErrorKind::TooSmall: return "TooSmall";
        case ErrorKind::NonpositiveWeight: return "NonpositiveWeight";
        case ErrorKind::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

int numerical_rank(const Eigen::MatrixXd& m, double rel_tol) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
    qr.setThreshold(rel_tol);
    return static_cast<int>(qr.rank());
}

void require_dim(long got, long want, const char* what) {
    if (got != want)
        throw Error(ErrorKind::DimensionMismatch,
                    std::string(what) + " has dimension " + std::to_string(got) + ", expected " +
                        std::to_string(want));
}

}  // namespace qgh
