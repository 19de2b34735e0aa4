#include "qgh/classical.hpp"
#include "qgh/cli.hpp"
#include "qgh/dirac.hpp"
#include "qgh/fejer.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;

namespace {

qgh::FiniteMetricSpace metric(const Eigen::MatrixXd& dist) { return qgh::make_metric_space(dist); }

qgh::TorusElement element(int d, const std::map<std::vector<int>, std::complex<double>>& coeffs) {
    qgh::TorusElement f{d, {}};
    for (const auto& [p, c] : coeffs) f.add(p, c);
    return f;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Certified bounds for quantum Gromov-Hausdorff distances";
    py::register_exception<qgh::Error>(m, "QghError", PyExc_ValueError);

    m.def(
        "gh_distance",
        [](const Eigen::MatrixXd& dx, const Eigen::MatrixXd& dy) {
            const qgh::GhResult r = qgh::gh_distance(metric(dx), metric(dy));
            return py::make_tuple(r.value, r.exact);
        },
        py::arg("dist_x"), py::arg("dist_y"));

    m.def(
        "lip_dual",
        [](const Eigen::MatrixXd& dist, const Eigen::VectorXd& lambda) {
            return qgh::dual_seminorm(qgh::lipnorm_from_metric(metric(dist)), lambda);
        },
        py::arg("dist"), py::arg("functional"));

    m.def(
        "radius_diameter",
        [](const Eigen::MatrixXd& dist) {
            const auto e = qgh::embed_cqms(metric(dist));
            const auto r = qgh::radius_diameter(e.space, e.lip);
            return py::make_tuple(r.radius, r.diameter);
        },
        py::arg("dist"));

    m.def(
        "distq_bracket",
        [](const Eigen::MatrixXd& dx, const Eigen::MatrixXd& dy) {
            const qgh::GhVsQ r = qgh::compare_gh_vs_q(metric(dx), metric(dy));
            return py::dict(py::arg("gh") = r.gh, py::arg("lower") = r.q_lower, py::arg("upper") = r.q_upper);
        },
        py::arg("dist_x"), py::arg("dist_y"));

    m.def(
        "fejer_delta",
        [](int d, int n) {
            const auto k = qgh::build_kernel(qgh::build_character(d), n);
            return py::make_tuple(k.delta, k.residual, static_cast<int>(k.support.size()));
        },
        py::arg("d"), py::arg("n"));

    m.def(
        "window_norm",
        [](int d, const std::map<std::vector<int>, std::complex<double>>& coeffs, const Eigen::MatrixXd& theta,
           int window) { return qgh::window_norm(element(d, coeffs), qgh::make_skew(theta), window); },
        py::arg("d"), py::arg("coeffs"), py::arg("theta"), py::arg("window"));

    m.def(
        "commutator_norm",
        [](const Eigen::MatrixXd& dist, const Eigen::VectorXd& weights, const Eigen::VectorXd& f) {
            return qgh::commutator_lipnorm(qgh::build_dirac(metric(dist), weights), f);
        },
        py::arg("dist"), py::arg("weights"), py::arg("f"));

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = qgh::run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
