#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace qgh {

enum class ErrorKind {
    Infeasible,
    Unbounded,
    NumericalFailure,
    DimensionMismatch,
    UnitViolation,
    EmptyPolytope,
    NotAMetric,
    NotCentered,
    NotStates,
    InvalidParams,
    HypothesisViolated,
    TooLarge,
    GridTooCoarse,
    BoundViolated,
    NoConvergence,
    WindowTooSmall,
    BridgeInvalid,
    TooSmall,
    NonpositiveWeight,
    InvalidInput,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

// Every numeric threshold used by the library lives here so callers can
// tighten or loosen them in one place.
struct Tolerances {
    double lp = 1e-9;               // reduced-cost / feasibility threshold in the simplex
    double pivot = 1e-11;           // smallest admissible pivot element
    double unit = 1e-12;            // mu(e) = 1 check on state generators
    double center = 1e-9;           // lambda(e) = 0 check on dual vectors
    double rank = 1e-9;             // relative threshold for rank decisions
    double euclid = 1e-9;           // Euclidean nearest-point stopping rule
    double bridge_residual = 1e-7;  // condition-3 slack for sampled bridge validation
    int max_pivots = 200000;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using Rng = std::mt19937_64;

inline Eigen::VectorXd gaussian_vector(Rng& rng, int n) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = g(rng);
    return v;
}

inline double uniform(Rng& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    return u(rng);
}

// Numerical rank with a threshold relative to the largest pivot.
int numerical_rank(const Eigen::MatrixXd& m, double rel_tol);

void require_dim(long got, long want, const char* what);

}  // namespace qgh
