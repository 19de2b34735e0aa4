#include "qgh/cli.hpp"

#include "qgh/classical.hpp"
#include "qgh/dirac.hpp"
#include "qgh/fejer.hpp"
#include "qgh/io.hpp"
#include "qgh/statemetric.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <sstream>

namespace qgh {

namespace {

struct RunConfig {
    double tol = 1e-9;
    std::uint64_t seed = 0;
    int window_max = 12;
    int grid = 0;
    int sphere_samples = 16;
    std::string out_path;
    std::string format;  // empty picks the command default

    Tolerances tolerances() const {
        Tolerances t;
        t.lp = tol;
        return t;
    }
};

// What a command hands back: a JSON document, an optional CSV rendering,
// a one-paragraph human summary and whether its checks passed.
struct Outcome {
    json doc;
    std::string csv;
    std::string summary;
    bool passed = true;
};

class CheckList {
public:
    void add(const std::string& name, double value, double expected, double tol, const char* provenance) {
        const bool ok = std::abs(value - expected) <= tol;
        items_.push_back({{"name", name},
                          {"value", provenanced(value, provenance)},
                          {"expected", expected},
                          {"tolerance", tol},
                          {"pass", ok}});
        lines_ << (ok ? "PASS " : "FAIL ") << name << " = " << std::setprecision(12) << value << " (expected "
               << expected << ")\n";
        passed_ = passed_ && ok;
    }
    void add_range(const std::string& name, double value, double lo, double hi, const char* provenance) {
        const bool ok = value >= lo && value <= hi;
        items_.push_back({{"name", name},
                          {"value", provenanced(value, provenance)},
                          {"range", {lo, hi}},
                          {"pass", ok}});
        lines_ << (ok ? "PASS " : "FAIL ") << name << " = " << std::setprecision(12) << value << " (range [" << lo
               << ", " << hi << "])\n";
        passed_ = passed_ && ok;
    }
    json items() const { return items_; }
    std::string lines() const { return lines_.str(); }
    bool passed() const { return passed_; }

private:
    json items_ = json::array();
    std::ostringstream lines_;
    bool passed_ = true;
};

int exit_code_for(ErrorKind k) {
    switch (k) {
        case ErrorKind::BoundViolated:
        case ErrorKind::HypothesisViolated:
        case ErrorKind::BridgeInvalid:
            return 1;
        case ErrorKind::Infeasible:
        case ErrorKind::Unbounded:
        case ErrorKind::NumericalFailure:
        case ErrorKind::NoConvergence:
        case ErrorKind::GridTooCoarse:
            return 3;
        default:
            return 2;
    }
}

NormSpec parse_length(const std::string& name) {
    NormSpec g;
    if (name == "euclidean")
        g.kind = NormSpec::Kind::Euclidean;
    else if (name == "max")
        g.kind = NormSpec::Kind::Max;
    else if (name == "l1")
        g.kind = NormSpec::Kind::L1;
    else
        throw Error(ErrorKind::InvalidInput, "unknown length \"" + name + "\" (euclidean, max, l1)");
    return g;
}

Outcome cmd_appendix1(const RunConfig& cfg) {
    const Tolerances tol = cfg.tolerances();
    const Appendix1 inst = appendix1_instance();
    const CqmsEmbedding Y = embed_cqms(inst.Y);
    const CqmsEmbedding Z = embed_cqms(inst.Z);
    CheckList checks;

    GhOptions gopt;
    gopt.require_exact = true;
    checks.add("gh(Y,Z)", gh_distance(inst.Y, inst.Z, gopt).value, inst.gh, 0.0, kExactLp);

    Eigen::Vector3d lam(1.5, 0.0, -1.5);
    checks.add("L'(3/2,0,-3/2)", dual_seminorm(Y.lip, lam, tol), 3.0, 1e-9, kExactLp);
    Rng rng(cfg.seed);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        Eigen::VectorXd l = gaussian_vector(rng, 3);
        l.array() -= l.mean();
        worst = std::max(worst, std::abs(dual_seminorm(Y.lip, l, tol) - (std::abs(l(0)) + std::abs(l(2)))));
    }
    checks.add("max |L'(l) - (|l1|+|l3|)| over 100 random l", worst, 0.0, 1e-9, kExactLp);

    checks.add("rho(w1,w2)", rho(Y.lip, inst.w1, inst.w2, tol), inst.rho_w1_w2, 1e-9, kExactLp);
    checks.add("rho(y1,w1)", rho(Y.lip, Y.space.state(0), inst.w1, tol), inst.rho_y1_w1, 1e-9, kExactLp);
    checks.add("rho(y2,(w1+w2)/2)", rho(Y.lip, Y.space.state(1), (inst.w1 + inst.w2) / 2.0, tol), inst.rho_y2_mid,
               1e-9, kExactLp);
    const RadiusDiameter ry = radius_diameter(Y.space, Y.lip, tol);
    const RadiusDiameter rz = radius_diameter(Z.space, Z.lip, tol);
    checks.add("diam(Y)", ry.diameter, inst.diam_y, 1e-9, kExactLp);
    checks.add("diam(Z)", rz.diameter, inst.diam_z, 1e-9, kExactLp);
    checks.add("dist_H(S(C(Y)), K1)", hausdorff(Y.lip, Y.space.state_polytope(), inst.K1, tol), inst.hausdorff_k1,
               1e-9, kExactLp);

    const HullEnlargement he = hull_enlargement_upper(Y.space, Y.lip, inst.extra, inst.K1, 1e-7, tol);
    const double lower = distq_lower(Y.space, Y.lip, Z.space, Z.lip, tol);
    checks.add("diam(K1)", he.k1_diameter, inst.diam_z, 1e-9, kExactLp);
    checks.add("distq lower", lower, inst.distq, 1e-9, kExactLp);
    checks.add_range("distq upper", he.upper, inst.distq, inst.distq + 1e-6, kExactLp);

    Outcome o;
    o.doc = {{"command", "appendix1"},
             {"checks", checks.items()},
             {"distq_bracket", {provenanced(lower, kExactLp), provenanced(he.upper, kExactLp)}},
             {"gh", provenanced(inst.gh, kExactLp)},
             {"strict_gap", he.upper < inst.gh - 1e-6},
             {"passed", checks.passed()}};
    o.summary = checks.lines() + "dist_q bracket [" + std::to_string(lower) + ", " + std::to_string(he.upper) +
                "] against gh = 1\n";
    o.passed = checks.passed();
    return o;
}

Outcome cmd_gh(const RunConfig& cfg, const std::string& xpath, const std::string& ypath, int cap, bool with_q) {
    const FiniteMetricSpace X = metric_from_json(read_json_file(xpath));
    const FiniteMetricSpace Y = metric_from_json(read_json_file(ypath));
    GhOptions opt;
    opt.exhaustive_cap = cap;
    opt.seed = cfg.seed;
    const GhResult r = gh_distance(X, Y, opt);
    json corr = json::array();
    for (const auto& [x, y] : r.correspondence) corr.push_back({X.labels[x], Y.labels[y]});
    Outcome o;
    o.doc = {{"command", "gh"},
             {"gh", provenanced(r.value, r.exact ? kExactLp : kSampledEstimate)},
             {"exact", r.exact},
             {"correspondence", corr}};
    o.summary = "gh = " + std::to_string(r.value) + (r.exact ? " (exhaustive)\n" : " (local search upper bound)\n");
    if (with_q) {
        CompareOptions copt;
        copt.strategy = GhStrategy::MetricUnion;
        copt.gh = opt;
        const GhVsQ q = compare_gh_vs_q(X, Y, copt);
        o.doc["q_upper"] = provenanced(q.q_upper, kExactLp);
        o.doc["q_lower"] = provenanced(q.q_lower, kExactLp);
        o.doc["strict_gap"] = q.strict_gap;
        o.summary += "dist_q bracket [" + std::to_string(q.q_lower) + ", " + std::to_string(q.q_upper) + "]\n";
        o.passed = q.q_upper <= q.gh + 1e-6;
    }
    return o;
}

json report_json(const BridgeReport& r) {
    return {{"valid", r.valid},
            {"canonical", r.canonical},
            {"gap", provenanced(r.gap, kExactLp)},
            {"residual_ab", provenanced(r.residual_ab, kSampledEstimate)},
            {"residual_ba", provenanced(r.residual_ba, kSampledEstimate)},
            {"samples", r.samples},
            {"problems", r.problems}};
}

Outcome cmd_distq(const RunConfig& cfg, const std::string& apath, const std::string& bpath,
                  const std::string& bridge_path, int samples) {
    const QuantumMetricInput A = quantum_metric_from_json(read_json_file(apath));
    const QuantumMetricInput B = quantum_metric_from_json(read_json_file(bpath));
    const Bridge N = bridge_from_json(read_json_file(bridge_path), A, B);
    BridgeCheckOptions opt;
    opt.samples = samples;
    opt.seed = cfg.seed;
    opt.tol = cfg.tolerances();
    const BridgeReport report = validate_bridge(N, A.space, A.lip, B.space, B.lip, opt);
    Outcome o;
    o.doc = {{"command", "distq"}, {"recipe", to_string(N.recipe)}, {"report", report_json(report)}};
    if (!report.valid) {
        o.passed = false;
        o.summary = "bridge rejected:";
        for (const auto& p : report.problems) o.summary += " " + p + ";";
        o.summary += "\n";
        return o;
    }
    const DistqCertificate c = certify(A.space, A.lip, B.space, B.lip, N, opt);
    o.doc["upper"] = provenanced(c.upper, kExactLp);
    o.doc["lower"] = provenanced(c.lower, kExactLp);
    o.doc["gap"] = provenanced(c.gap, kExactLp);
    o.doc["min_cross"] = provenanced(c.min_cross, kExactLp);
    o.summary = "dist_q in [" + std::to_string(c.lower) + ", " + std::to_string(c.upper) + "] via " +
                to_string(N.recipe) + " bridge\n";
    o.passed = c.lower <= c.upper + 1e-8;
    return o;
}

Outcome cmd_scv(const RunConfig& cfg, const std::string& apath, double eps, int depth) {
    const QuantumMetricInput A = quantum_metric_from_json(read_json_file(apath));
    const Tolerances tol = cfg.tolerances();
    const StateMetricContext ctx = make_context(A.space, A.lip, tol);
    ScvOptions opt;
    opt.depth = depth;
    opt.tol = tol;
    const ScvBounds b = scv(ctx, eps, opt);
    opt.depth = 0;
    const ScvBounds g = scv(ctx, eps, opt);
    const double D = ctx.pairwise.size() ? ctx.pairwise.maxCoeff() : 0.0;
    const double volume = std::pow(D / eps + 1.0, A.space.dim - 1);
    const FiniteApproximation fa = finite_approximation(ctx, eps, tol);
    Outcome o;
    o.doc = {{"command", "scv"},
             {"eps", eps},
             {"depth", depth},
             {"upper", b.upper},
             {"lower", b.lower},
             {"candidates", b.candidates},
             {"generator_upper", g.upper},
             {"volume_bound", provenanced(volume, kExactLp)},
             {"diameter", provenanced(D, kExactLp)},
             {"finite_approximation",
              {{"net", fa.net}, {"dimension", fa.restricted.space.dim}, {"bound", provenanced(fa.bound, kExactLp)}}}};
    o.passed = g.upper <= volume && b.lower <= b.upper;
    o.summary = "Scv(" + std::to_string(eps) + ") in [" + std::to_string(b.lower) + ", " + std::to_string(b.upper) +
                "], generator net " + std::to_string(g.upper) + " <= " + std::to_string(volume) + "\n";
    return o;
}

Outcome cmd_fejer(const RunConfig& cfg, int d, int n_max, const std::string& length) {
    KernelOptions kopt;
    kopt.grid = cfg.grid;
    const auto rows = fejer_table(d, n_max, parse_length(length), kopt);
    Outcome o;
    json arr = json::array();
    for (const auto& r : rows)
        arr.push_back({{"n", r.n},
                       {"support_size", r.support_size},
                       {"delta_n", provenanced(r.delta, kSampledEstimate)},
                       {"quadrature_residual", r.residual}});
    o.doc = {{"command", "fejer-table"}, {"d", d}, {"length", length}, {"rows", arr}};
    std::ostringstream csv;
    write_fejer_csv(csv, rows);
    o.csv = csv.str();
    o.summary = "delta_1 = " + std::to_string(rows.front().delta) + ", delta_" + std::to_string(n_max) + " = " +
                std::to_string(rows.back().delta) + "\n";
    return o;
}

struct SweepArgs {
    int d = 2;
    int n = 2;
    double theta0 = 0.30;
    double step = 0.01;
    int steps = 6;
    double eps = 0.0;
    int window = 8;
};

Outcome cmd_torus_sweep(const RunConfig& cfg, const SweepArgs& a) {
    if (a.d < 2) throw Error(ErrorKind::InvalidParams, "torus sweep needs d >= 2");
    if (a.steps < 1) throw Error(ErrorKind::InvalidParams, "steps must be positive");
    if (a.window > cfg.window_max) throw Error(ErrorKind::InvalidParams, "window exceeds --window-max");
    KernelOptions kopt;
    kopt.grid = cfg.grid;
    const FejerKernel kernel = build_kernel(build_character(a.d), a.n, NormSpec{}, kopt);
    TorusBridgeOptions opt;
    opt.window = a.window;
    opt.eps = a.eps;
    opt.seed = cfg.seed;
    opt.tol = cfg.tolerances();
    opt.directions = std::max(4, cfg.sphere_samples);

    auto skew_at = [&](double t) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(a.d, a.d);
        m(0, 1) = t;
        m(1, 0) = -t;
        return make_skew(m);
    };
    const SkewMatrix psi = skew_at(a.theta0);
    // Farthest parameter first, so the certificates should shrink along the rows.
    std::vector<double> thetas;
    for (int k = 0; k < a.steps; ++k) thetas.push_back(a.theta0 + (a.steps - 1 - k) * a.step);
    std::vector<std::future<TorusCertificate>> jobs;
    for (double t : thetas)
        jobs.push_back(std::async(std::launch::async, [&, t] {
            return torus_distq_upper(skew_at(t), psi, kernel.support, kernel.delta, opt);
        }));
    std::vector<TorusCertificate> certs;
    for (auto& j : jobs) certs.push_back(j.get());

    bool decreasing = true;
    for (size_t k = 1; k < certs.size(); ++k) decreasing = decreasing && certs[k].certificate < certs[k - 1].certificate;

    Outcome o;
    json rows = json::array();
    std::ostringstream csv;
    csv << "theta,psi,n,eps,bridge_residual,certificate,hausdorff,density_residual,upper,delta_n,full_chain\n"
        << std::setprecision(12);
    for (size_t k = 0; k < certs.size(); ++k) {
        const auto& c = certs[k];
        rows.push_back({{"theta", thetas[k]},
                        {"psi", a.theta0},
                        {"n", a.n},
                        {"eps", provenanced(c.eps, kSampledEstimate)},
                        {"bridge_residual", provenanced(c.residual, kSampledEstimate)},
                        {"certificate", provenanced(c.certificate, kSampledEstimate)},
                        {"hausdorff", provenanced(c.hausdorff, kSampledEstimate)},
                        {"density_residual", provenanced(c.density_residual, kSampledEstimate)},
                        {"upper", provenanced(c.upper, kSampledEstimate)},
                        {"full_chain", provenanced(c.full_chain, kSampledEstimate)}});
        csv << thetas[k] << ',' << a.theta0 << ',' << a.n << ',' << c.eps << ',' << c.residual << ','
            << c.certificate << ',' << c.hausdorff << ',' << c.density_residual << ',' << c.upper << ','
            << kernel.delta << ',' << c.full_chain << '\n';
    }
    o.doc = {{"command", "torus-sweep"},
             {"d", a.d},
             {"n", a.n},
             {"window", a.window},
             {"delta_n", provenanced(kernel.delta, kSampledEstimate)},
             {"support_size", kernel.support.size()},
             {"states", certs.front().states},
             {"functionals", certs.front().functionals},
             {"rows", rows},
             {"certificates_decreasing", decreasing}};
    o.csv = csv.str();
    o.summary = "certificate " + std::to_string(certs.front().certificate) + " at theta=" +
                std::to_string(thetas.front()) + " down to " + std::to_string(certs.back().certificate) +
                " at theta=" + std::to_string(thetas.back()) + (decreasing ? " (decreasing)\n" : " (not monotone)\n");
    return o;
}

Outcome cmd_dirac(const RunConfig& cfg, const std::string& path, int samples) {
    const json j = read_json_file(path);
    const FiniteMetricSpace X = metric_from_json(j);
    const Eigen::VectorXd w = j.contains("weights") ? vector_from_json(j.at("weights"), "weights")
                                                    : Eigen::VectorXd(Eigen::VectorXd::Ones(X.size()));
    const DiracTriple t = build_dirac(X, w);
    const LipNorm L = lipnorm_from_metric(X);
    const bool dense = X.size() <= 12;
    Rng rng(cfg.seed);
    double worst_metric = 0.0, worst_dense = 0.0, worst_weights = 0.0;
    const DiracTriple rescaled = build_dirac(X, Eigen::VectorXd(w.array() * 3.7));
    for (int k = 0; k < samples; ++k) {
        const Eigen::VectorXd f = gaussian_vector(rng, X.size());
        const double block = commutator_lipnorm(t, f);
        worst_metric = std::max(worst_metric, std::abs(block - eval_lip(L, f)));
        if (dense) {
            worst_dense = std::max(worst_dense, std::abs(block - commutator_norm_dense(t, f)));
            worst_weights = std::max(worst_weights, std::abs(block - commutator_norm_dense(rescaled, f)));
        }
    }
    CheckList checks;
    checks.add("max |[D,f]| - L(f)|", worst_metric, 0.0, 1e-10, kExactLp);
    if (dense) {
        checks.add("max block vs dense", worst_dense, 0.0, 1e-10, kExactLp);
        checks.add("max weight rescaling change", worst_weights, 0.0, 1e-10, kExactLp);
    }
    checks.add("self-adjoint residual", self_adjoint_residual(t), 0.0, 1e-12, kExactLp);
    Outcome o;
    o.doc = {{"command", "dirac-check"},
             {"points", X.size()},
             {"hilbert_dim", t.dim()},
             {"samples", samples},
             {"dense_checked", dense},
             {"checks", checks.items()},
             {"passed", checks.passed()}};
    o.summary = checks.lines();
    o.passed = checks.passed();
    return o;
}

struct StabilityArgs {
    std::string input;
    int dim = 3;
    int vertices = 5;
    double perturbation = 1e-3;
    int samples = 10000;
};

Gauge gauge_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "euclidean") return EuclideanGauge{j.value("scale", 1.0)};
    if (type == "polyhedral") return MaxAbsGauge{matrix_from_json(j.at("functionals"), "functionals")};
    throw Error(ErrorKind::InvalidInput, "unknown reference norm \"" + type + "\"");
}

Outcome cmd_stability(const RunConfig& cfg, const StabilityArgs& a) {
    StabilityInstance inst;
    if (!a.input.empty()) {
        const json j = read_json_file(a.input);
        inst.base1 = Polytope(matrix_from_json(j.at("base1"), "base1").transpose());
        inst.base2 = Polytope(matrix_from_json(j.at("base2"), "base2").transpose());
        inst.eta = vector_from_json(j.at("eta"), "eta");
        inst.ref_norm = gauge_from_json(j.at("ref"));
    } else {
        Rng rng(cfg.seed);
        inst = random_stability_instance(rng, a.dim, a.vertices, a.perturbation);
    }
    StabilityOptions opt;
    opt.samples = a.samples;
    opt.seed = cfg.seed;
    opt.tol = cfg.tolerances();
    const StabilityReport r = base_norm_stability_check(inst.base1, inst.base2, inst.eta, inst.ref_norm, opt);
    Outcome o;
    o.doc = {{"command", "stability-check"},
             {"delta", provenanced(r.delta, kSampledEstimate)},
             {"epsilon", provenanced(r.epsilon, kSampledEstimate)},
             {"hausdorff", provenanced(r.hausdorff, kExactLp)},
             {"domination", provenanced(r.domination, kExactLp)},
             {"samples", r.samples},
             {"passed", r.passed}};
    o.passed = r.passed;
    o.summary = std::string(r.passed ? "PASS" : "FAIL") + " dist_H = " + std::to_string(r.hausdorff) +
                " against eps = 4 delta = " + std::to_string(r.epsilon) + "\n";
    return o;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Certified bounds for quantum Gromov-Hausdorff distances", "qgh-cli"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    app.add_option("--tol", cfg.tol, "LP tolerance")->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "random seed");
    app.add_option("--window-max", cfg.window_max, "largest window radius for torus norms")->check(CLI::PositiveNumber);
    app.add_option("--grid", cfg.grid, "quadrature points per axis (0 = default)")->check(CLI::NonNegativeNumber);
    app.add_option("--sphere-samples", cfg.sphere_samples, "Lie directions sampled in d = 2")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", cfg.out_path, "write the result here instead of stdout");
    app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    std::function<Outcome()> action;

    app.add_subcommand("appendix1", "reproduce the three-point versus two-point example")->callback([&] {
        action = [&] { return cmd_appendix1(cfg); };
    });

    auto* gh = app.add_subcommand("gh", "classical Gromov-Hausdorff distance of two metric spaces");
    std::string xpath, ypath;
    int cap = 20;
    bool with_q = false;
    gh->add_option("X", xpath)->required()->check(CLI::ExistingFile);
    gh->add_option("Y", ypath)->required()->check(CLI::ExistingFile);
    gh->add_option("--exhaustive-cap", cap, "largest |X||Y| searched exactly");
    gh->add_flag("--with-q", with_q, "also bracket dist_q through the correspondence metric");
    gh->callback([&] { action = [&] { return cmd_gh(cfg, xpath, ypath, cap, with_q); }; });

    auto* dq = app.add_subcommand("distq", "bracket dist_q through a bridge");
    std::string apath, bpath, bridge_path;
    int samples = 512;
    dq->add_option("A", apath)->required()->check(CLI::ExistingFile);
    dq->add_option("B", bpath)->required()->check(CLI::ExistingFile);
    dq->add_option("--bridge", bridge_path)->required()->check(CLI::ExistingFile);
    dq->add_option("--samples", samples, "sampled elements per direction for bridge validation")
        ->check(CLI::PositiveNumber);
    dq->callback([&] { action = [&] { return cmd_distq(cfg, apath, bpath, bridge_path, samples); }; });

    auto* sc = app.add_subcommand("scv", "bounds on the state-space covering number");
    double eps = 0.0;
    int depth = 2;
    sc->add_option("A", apath)->required()->check(CLI::ExistingFile);
    sc->add_option("--eps", eps)->required()->check(CLI::PositiveNumber);
    sc->add_option("--depth", depth, "barycentric candidate depth")->check(CLI::NonNegativeNumber);
    sc->callback([&] { action = [&] { return cmd_scv(cfg, apath, eps, depth); }; });

    auto* fj = app.add_subcommand("fejer-table", "delta_n table for the default character");
    int fd = 1, n_max = 8;
    std::string length = "euclidean";
    fj->add_option("--d", fd)->check(CLI::Range(1, 3));
    fj->add_option("--n-max", n_max)->check(CLI::PositiveNumber);
    fj->add_option("--length", length, "euclidean, max or l1");
    fj->callback([&] { action = [&] { return cmd_fejer(cfg, fd, n_max, length); }; });

    auto* ts = app.add_subcommand("torus-sweep", "bridge certificates between nearby quantum tori");
    SweepArgs sw;
    ts->add_option("--d", sw.d)->check(CLI::Range(2, 3));
    ts->add_option("--n", sw.n)->check(CLI::PositiveNumber);
    ts->add_option("--theta0", sw.theta0, "reference theta_12");
    ts->add_option("--step", sw.step, "theta_12 spacing");
    ts->add_option("--steps", sw.steps)->check(CLI::PositiveNumber);
    ts->add_option("--eps", sw.eps, "bridge scale (0 = smallest admissible)");
    ts->add_option("--window", sw.window, "density-matrix window radius")->check(CLI::PositiveNumber);
    ts->callback([&] { action = [&] { return cmd_torus_sweep(cfg, sw); }; });

    auto* dc = app.add_subcommand("dirac-check", "commutator norm against the metric Lipschitz constant");
    int dsamples = 200;
    dc->add_option("X", xpath)->required()->check(CLI::ExistingFile);
    dc->add_option("--samples", dsamples)->check(CLI::PositiveNumber);
    dc->callback([&] { action = [&] { return cmd_dirac(cfg, xpath, dsamples); }; });

    auto* st = app.add_subcommand("stability-check", "Hausdorff stability of close base norms");
    StabilityArgs sa;
    st->add_option("--input", sa.input, "JSON with base1, base2, eta, ref")->check(CLI::ExistingFile);
    st->add_option("--dim", sa.dim)->check(CLI::Range(2, 12));
    st->add_option("--vertices", sa.vertices)->check(CLI::PositiveNumber);
    st->add_option("--perturbation", sa.perturbation)->check(CLI::NonNegativeNumber);
    st->add_option("--samples", sa.samples)->check(CLI::NonNegativeNumber);
    st->callback([&] { action = [&] { return cmd_stability(cfg, sa); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    Outcome o;
    try {
        o = action();
    } catch (const Error& e) {
        err << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const json::exception& e) {
        err << "InvalidInput: " << e.what() << '\n';
        return 2;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    const bool csv_default = sub == "fejer-table" || sub == "torus-sweep";
    const std::string format = cfg.format.empty() ? (csv_default ? "csv" : "json") : cfg.format;
    if (format == "csv" && o.csv.empty()) {
        err << "InvalidInput: " << sub << " has no CSV form\n";
        return 2;
    }
    const std::string payload = format == "csv" ? o.csv : o.doc.dump(2) + "\n";
    if (cfg.out_path.empty()) {
        out << payload;
    } else {
        std::ofstream f(cfg.out_path);
        if (!f) {
            err << "InvalidInput: cannot write " << cfg.out_path << '\n';
            return 2;
        }
        f << payload;
    }
    err << o.summary;
    return o.passed ? 0 : 1;
}

}  // namespace qgh
