#pragma once

#include "qgh/bridges.hpp"
#include "qgh/qtorus.hpp"

#include <json.hpp>

#include <string>

namespace qgh {

using json = nlohmann::json;

json read_json_file(const std::string& path);

Eigen::VectorXd vector_from_json(const json& j, const char* what);
Eigen::MatrixXd matrix_from_json(const json& j, const char* what);  // array of rows
json to_json(const Eigen::VectorXd& v);
json to_json(const Eigen::MatrixXd& m);  // array of rows

// { "labels": [...], "dist": [[...]] }
FiniteMetricSpace metric_from_json(const json& j);
json to_json(const FiniteMetricSpace& X);

// { "dimension": n, "unit": [..], "states": [[..], ..], "labels": [..] }
OrderUnitSpace space_from_json(const json& j);
json to_json(const OrderUnitSpace& A);

// { "type": "polyhedral", "functionals": [[..]] } or { "type": "metric", "space": {metric} }
LipNorm lipnorm_from_json(const json& j, const OrderUnitSpace& host);

// A space with its Lip-norm: either a metric-space file (giving C(X)) or a
// space file carrying a "lip" entry.
struct QuantumMetricInput {
    OrderUnitSpace space;
    LipNorm lip;
};
QuantumMetricInput quantum_metric_from_json(const json& j);

// { "recipe": "doubling", "epsilon": 0.25 } and the other recipe names.
Bridge bridge_from_json(const json& j, const QuantumMetricInput& A, const QuantumMetricInput& B);

// { "d": 2, "theta": [[0,t],[-t,0]], "coeffs": [{"p": [1,0], "re": 1, "im": 0}, ...] }
struct TorusInput {
    TorusElement element;
    SkewMatrix theta;
};
TorusInput torus_from_json(const json& j);
json to_json(const TorusElement& f, const SkewMatrix& theta);

// Every number in command output carries where it came from.
inline constexpr const char* kExactLp = "exact-lp";
inline constexpr const char* kWindowLowerBound = "window-lower-bound";
inline constexpr const char* kSampledEstimate = "sampled-estimate";

json provenanced(double value, const char* provenance);

}  // namespace qgh
