#include "qgh/io.hpp"

#include <cmath>
#include <fstream>

namespace qgh {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

double number(const json& j, const char* what) {
    if (!j.is_number()) bad(std::string(what) + " must be a number");
    return j.get<double>();
}

}  // namespace

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        bad(path + ": " + e.what());
    }
}

Eigen::VectorXd vector_from_json(const json& j, const char* what) {
    if (!j.is_array()) bad(std::string(what) + " must be an array of numbers");
    Eigen::VectorXd v(static_cast<long>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) v(static_cast<long>(i)) = number(j[i], what);
    return v;
}

Eigen::MatrixXd matrix_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.empty()) bad(std::string(what) + " must be a non-empty array of rows");
    const size_t cols = j[0].is_array() ? j[0].size() : 0;
    Eigen::MatrixXd m(static_cast<long>(j.size()), static_cast<long>(cols));
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_array() || j[i].size() != cols) bad(std::string(what) + " rows must have equal length");
        for (size_t k = 0; k < cols; ++k) m(static_cast<long>(i), static_cast<long>(k)) = number(j[i][k], what);
    }
    return m;
}

json to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (long i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

json to_json(const Eigen::MatrixXd& m) {
    json out = json::array();
    for (long i = 0; i < m.rows(); ++i) out.push_back(to_json(Eigen::VectorXd(m.row(i).transpose())));
    return out;
}

FiniteMetricSpace metric_from_json(const json& j) {
    const Eigen::MatrixXd d = matrix_from_json(field(j, "dist"), "dist");
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    return make_metric_space(d, labels);
}

json to_json(const FiniteMetricSpace& X) {
    return {{"labels", X.labels}, {"dist", to_json(X.dist)}};
}

OrderUnitSpace space_from_json(const json& j) {
    const Eigen::VectorXd unit = vector_from_json(field(j, "unit"), "unit");
    const Eigen::MatrixXd states = matrix_from_json(field(j, "states"), "states");
    if (j.contains("dimension") && j.at("dimension").get<long>() != unit.size())
        throw Error(ErrorKind::DimensionMismatch, "dimension does not match the unit");
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    return make_space(unit, states, labels);
}

json to_json(const OrderUnitSpace& A) {
    return {{"dimension", A.dim}, {"unit", to_json(A.unit)}, {"states", to_json(A.states)}, {"labels", A.labels}};
}

LipNorm lipnorm_from_json(const json& j, const OrderUnitSpace& host) {
    const std::string type = field(j, "type").get<std::string>();
    if (type == "polyhedral") {
        const Eigen::MatrixXd F = matrix_from_json(field(j, "functionals"), "functionals");
        require_dim(F.cols(), host.dim, "Lip-norm functionals");
        return polyhedral_lipnorm(host.unit, F);
    }
    if (type == "metric") {
        const FiniteMetricSpace X = metric_from_json(field(j, "space"));
        require_dim(X.size(), host.dim, "metric Lip-norm");
        return lipnorm_from_metric(X);
    }
    bad("unknown Lip-norm type \"" + type + "\"");
}

QuantumMetricInput quantum_metric_from_json(const json& j) {
    if (j.is_object() && j.contains("dist")) {
        const FiniteMetricSpace X = metric_from_json(j);
        const LipNorm L = lipnorm_from_metric(X);
        Eigen::MatrixXd states = Eigen::MatrixXd::Identity(X.size(), X.size());
        return {make_space(Eigen::VectorXd::Ones(X.size()), states, X.labels), L};
    }
    const json& s = j.contains("space") ? j.at("space") : j;
    OrderUnitSpace A = space_from_json(s);
    LipNorm L = lipnorm_from_json(field(j, "lip"), A);
    return {std::move(A), std::move(L)};
}

Bridge bridge_from_json(const json& j, const QuantumMetricInput& A, const QuantumMetricInput& B) {
    const std::string recipe = field(j, "recipe").get<std::string>();
    if (recipe == "doubling") {
        require_dim(B.space.dim, A.space.dim, "doubling bridge summands");
        return doubling_bridge(A.space, number(field(j, "epsilon"), "epsilon"));
    }
    if (recipe == "two_points")
        return two_points_bridge(A.space, B.space, vector_from_json(field(j, "mu0"), "mu0"),
                                 vector_from_json(field(j, "nu0"), "nu0"), number(field(j, "gamma"), "gamma"));
    if (recipe == "to_scalars") {
        require_dim(B.space.dim, 1, "scalar summand");
        return to_scalars_bridge(A.space, A.lip, j.contains("r") ? number(j.at("r"), "r") : 0.0);
    }
    if (recipe == "along_map") {
        const std::string dir = j.value("direction", std::string("a_to_b"));
        if (dir != "a_to_b" && dir != "b_into_a") bad("direction must be a_to_b or b_into_a");
        return along_map_bridge(A.space, B.space, matrix_from_json(field(j, "phi"), "phi"),
                                number(field(j, "gamma"), "gamma"),
                                dir == "a_to_b" ? MapDirection::AtoB : MapDirection::BintoA);
    }
    if (recipe == "state_family") {
        const Eigen::MatrixXd sa = j.contains("states_a") ? matrix_from_json(j.at("states_a"), "states_a") : A.space.states;
        const Eigen::MatrixXd sb = j.contains("states_b") ? matrix_from_json(j.at("states_b"), "states_b") : B.space.states;
        return state_family_bridge(sa, sb, number(field(j, "epsilon"), "epsilon"));
    }
    if (recipe == "custom")
        return custom_bridge(A.space, B.space, matrix_from_json(field(j, "functionals"), "functionals"));
    bad("unknown bridge recipe \"" + recipe + "\"");
}

TorusInput torus_from_json(const json& j) {
    const int d = field(j, "d").get<int>();
    if (d < 1) bad("d must be positive");
    TorusInput in{TorusElement{d, {}}, make_skew(matrix_from_json(field(j, "theta"), "theta"))};
    if (in.theta.d() != d) throw Error(ErrorKind::DimensionMismatch, "theta does not match d");
    for (const auto& c : field(j, "coeffs")) {
        const Index p = field(c, "p").get<Index>();
        require_dim(static_cast<long>(p.size()), d, "coefficient index");
        in.element.add(p, Complex(c.value("re", 0.0), c.value("im", 0.0)));
    }
    return in;
}

json to_json(const TorusElement& f, const SkewMatrix& theta) {
    json coeffs = json::array();
    for (const auto& [p, c] : f.coeffs) coeffs.push_back({{"p", p}, {"re", c.real()}, {"im", c.imag()}});
    return {{"d", f.d}, {"theta", to_json(theta.entries)}, {"coeffs", coeffs}};
}

json provenanced(double value, const char* provenance) {
    json v = std::isfinite(value) ? json(value) : json(value > 0 ? "inf" : "-inf");
    return {{"value", v}, {"provenance", provenance}};
}

}  // namespace qgh
