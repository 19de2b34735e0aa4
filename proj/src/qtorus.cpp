#include "qgh/qtorus.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qgh {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Index negate(const Index& p) {
    Index q(p.size());
    for (size_t k = 0; k < p.size(); ++k) q[k] = -p[k];
    return q;
}

Index add_index(const Index& a, const Index& b) {
    Index c(a.size());
    for (size_t k = 0; k < a.size(); ++k) c[k] = a[k] + b[k];
    return c;
}

bool is_zero(const Index& p) {
    return std::all_of(p.begin(), p.end(), [](int v) { return v == 0; });
}

bool lex_positive(const Index& p) {
    for (int v : p)
        if (v != 0) return v > 0;
    return false;
}

double dot(const Index& p, const Eigen::VectorXd& x) {
    double s = 0.0;
    for (size_t k = 0; k < p.size(); ++k) s += p[k] * x(static_cast<long>(k));
    return s;
}

void require_same_d(int a, int b) {
    if (a != b) throw Error(ErrorKind::DimensionMismatch, "lattice dimensions differ");
}

}  // namespace

SkewMatrix make_skew(Eigen::MatrixXd entries) {
    if (entries.rows() != entries.cols() || entries.rows() < 1)
        throw Error(ErrorKind::InvalidInput, "theta must be a non-empty square matrix");
    for (int i = 0; i < entries.rows(); ++i)
        for (int j = 0; j < entries.cols(); ++j)
            if (entries(i, j) != -entries(j, i)) throw Error(ErrorKind::InvalidInput, "theta is not skew-symmetric");
    return SkewMatrix{std::move(entries)};
}

SkewMatrix skew2(double t) {
    Eigen::MatrixXd m(2, 2);
    m << 0.0, t, -t, 0.0;
    return make_skew(m);
}

SkewMatrix normalize(const SkewMatrix& theta) {
    SkewMatrix out = theta;
    for (int i = 0; i < theta.d(); ++i)
        for (int j = i + 1; j < theta.d(); ++j) {
            double v = std::fmod(theta.entries(i, j), 2.0);
            if (v < 0) v += 2.0;
            if (v >= 2.0) v = 0.0;
            out.entries(i, j) = v;
            out.entries(j, i) = -v;
        }
    return out;
}

double skew_distance(const SkewMatrix& a, const SkewMatrix& b) {
    require_same_d(a.d(), b.d());
    return (a.entries - b.entries).cwiseAbs().maxCoeff();
}

Complex sigma(const SkewMatrix& theta, const Index& p, const Index& q) {
    double s = 0.0;
    for (int i = 0; i < theta.d(); ++i)
        for (int j = 0; j < theta.d(); ++j) s += p[i] * theta.entries(i, j) * q[j];
    return std::polar(1.0, kPi * s);
}

Complex TorusElement::at(const Index& p) const {
    const auto it = coeffs.find(p);
    return it == coeffs.end() ? Complex(0.0) : it->second;
}

void TorusElement::add(const Index& p, Complex c) {
    require_dim(static_cast<long>(p.size()), d, "lattice point");
    if (c == Complex(0.0)) return;
    auto [it, inserted] = coeffs.emplace(p, c);
    if (!inserted) {
        it->second += c;
        if (it->second == Complex(0.0)) coeffs.erase(it);
    }
}

int TorusElement::radius() const {
    int r = 0;
    for (const auto& [p, c] : coeffs)
        for (int v : p) r = std::max(r, std::abs(v));
    return r;
}

double TorusElement::l1() const {
    double s = 0.0;
    for (const auto& [p, c] : coeffs) s += std::abs(c);
    return s;
}

TorusElement point_mass(int d, const Index& p, Complex c) {
    TorusElement f{d, {}};
    f.add(p, c);
    return f;
}

TorusElement adjoint(const TorusElement& f) {
    TorusElement g{f.d, {}};
    for (const auto& [p, c] : f.coeffs) g.add(negate(p), std::conj(c));
    return g;
}

bool is_self_adjoint(const TorusElement& f, double tol) {
    for (const auto& [p, c] : f.coeffs)
        if (std::abs(c - std::conj(f.at(negate(p)))) > tol * std::max(1.0, std::abs(c))) return false;
    return true;
}

TorusElement operator+(const TorusElement& f, const TorusElement& g) {
    require_same_d(f.d, g.d);
    TorusElement h = f;
    for (const auto& [p, c] : g.coeffs) h.add(p, c);
    return h;
}

TorusElement operator-(const TorusElement& f, const TorusElement& g) {
    return f + scale(g, -1.0);
}

TorusElement scale(const TorusElement& f, Complex c) {
    TorusElement h{f.d, {}};
    for (const auto& [p, v] : f.coeffs) h.add(p, c * v);
    return h;
}

TorusElement twisted_multiply(const TorusElement& f, const TorusElement& g, const SkewMatrix& theta) {
    require_same_d(f.d, g.d);
    require_same_d(f.d, theta.d());
    TorusElement h{f.d, {}};
    for (const auto& [q, fq] : f.coeffs)
        for (const auto& [r, gr] : g.coeffs) {
            const Index p = add_index(q, r);
            h.add(p, fq * gr * sigma(theta, q, p));
        }
    return h;
}

TorusElement random_element(Rng& rng, int d, int radius, int terms, bool self_adjoint) {
    std::uniform_int_distribution<int> coord(-radius, radius);
    std::normal_distribution<double> g(0.0, 1.0);
    TorusElement f{d, {}};
    for (int t = 0; t < terms; ++t) {
        Index p(d);
        for (int& v : p) v = coord(rng);
        const Complex c(g(rng), g(rng));
        if (!self_adjoint) {
            f.add(p, c);
        } else if (is_zero(p)) {
            f.add(p, c.real());
        } else {
            f.add(p, c);
            f.add(negate(p), std::conj(c));
        }
    }
    return f;
}

Window make_window(int d, int M) {
    if (d < 1 || M < 0) throw Error(ErrorKind::InvalidParams, "window needs d >= 1 and M >= 0");
    Window w{d, M, {}};
    const int side = 2 * M + 1;
    long total = 1;
    for (int k = 0; k < d; ++k) total *= side;
    if (total > 20000) throw Error(ErrorKind::TooLarge, "window has more than 20000 points");
    w.points.reserve(static_cast<size_t>(total));
    for (long idx = 0; idx < total; ++idx) {
        Index p(d);
        long rest = idx;
        for (int k = d - 1; k >= 0; --k) {
            p[k] = static_cast<int>(rest % side) - M;
            rest /= side;
        }
        w.points.push_back(p);
    }
    return w;
}

int Window::index(const Index& p) const {
    const int side = 2 * M + 1;
    int idx = 0;
    for (int k = 0; k < d; ++k) {
        if (p[k] < -M || p[k] > M) return -1;
        idx = idx * side + (p[k] + M);
    }
    return idx;
}

Eigen::MatrixXcd rep_window(const TorusElement& f, const SkewMatrix& theta, int M) {
    require_same_d(f.d, theta.d());
    const Window w = make_window(f.d, M);
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(w.size(), w.size());
    for (int col = 0; col < w.size(); ++col)
        for (const auto& [a, fa] : f.coeffs) {
            const Index p = add_index(w.points[col], a);
            const int row = w.index(p);
            if (row >= 0) A(row, col) = fa * sigma(theta, a, p);
        }
    return A;
}

double operator_norm(const Eigen::MatrixXcd& A, bool hermitian) {
    if (A.size() == 0) return 0.0;
    if (hermitian) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A, Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().maxCoeff();
    }
    const Eigen::MatrixXcd G = A.adjoint() * A;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double window_norm(const TorusElement& f, const SkewMatrix& theta, int M) {
    if (f.coeffs.empty()) return 0.0;
    return operator_norm(rep_window(f, theta, M), is_self_adjoint(f));
}

NormEstimate norm_theta(const TorusElement& f, const SkewMatrix& theta, const NormOptions& opt) {
    if (!(opt.tol > 0)) throw Error(ErrorKind::InvalidParams, "norm tolerance must be positive");
    NormEstimate out;
    out.upper = f.l1();
    const int start = opt.window_start > 0 ? opt.window_start : std::max(1, f.radius());
    for (int M = start; M <= std::max(start, opt.window_max); ++M) {
        const double v = window_norm(f, theta, M);
        out.history.push_back(v);
        out.estimate = v;
        out.window = M;
        if (out.history.size() >= 2 && std::abs(v - out.history[out.history.size() - 2]) < opt.tol) {
            out.converged = true;
            break;
        }
    }
    return out;
}

double NormSpec::norm(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd w = weights.size() ? Eigen::VectorXd(weights.cwiseProduct(x)) : x;
    switch (kind) {
        case Kind::Euclidean: return w.norm();
        case Kind::Max: return w.cwiseAbs().maxCoeff();
        case Kind::L1: return w.cwiseAbs().sum();
    }
    return w.norm();
}

double NormSpec::torus_length(const Eigen::VectorXd& x) const {
    // The norms offered here are monotone in each |coordinate|, so the
    // nearest lattice point is found coordinate by coordinate.
    Eigen::VectorXd r = x;
    for (long k = 0; k < r.size(); ++k) r(k) -= std::round(r(k));
    return norm(r);
}

const char* to_string(NormSpec::Kind k) {
    switch (k) {
        case NormSpec::Kind::Euclidean: return "euclidean";
        case NormSpec::Kind::Max: return "max";
        case NormSpec::Kind::L1: return "l1";
    }
    return "unknown";
}

std::vector<Eigen::VectorXd> sphere_directions(const NormSpec& g, int d, int samples, std::uint64_t seed) {
    std::vector<Eigen::VectorXd> out;
    if (d == 1) {
        Eigen::VectorXd x = Eigen::VectorXd::Ones(1);
        out.push_back(x / g.norm(x));
        return out;
    }
    if (samples < 1) throw Error(ErrorKind::InvalidParams, "need at least one sphere sample");
    if (d == 2) {
        // X and -X give the same value, so an even count only needs half.
        const int reps = samples % 2 == 0 ? samples / 2 : samples;
        for (int k = 0; k < reps; ++k) {
            const double a = kTwoPi * k / samples;
            Eigen::VectorXd x(2);
            x << std::cos(a), std::sin(a);
            out.push_back(x / g.norm(x));
        }
        return out;
    }
    Rng rng(seed);
    for (int k = 0; k < samples; ++k) {
        Eigen::VectorXd x = gaussian_vector(rng, d);
        out.push_back(x / g.norm(x));
    }
    return out;
}

TorusElement derivative(const TorusElement& f, const Eigen::VectorXd& X) {
    require_dim(X.size(), f.d, "Lie direction");
    TorusElement h{f.d, {}};
    for (const auto& [p, c] : f.coeffs) h.add(p, Complex(0.0, kTwoPi * dot(p, X)) * c);
    return h;
}

TorusElement translate(const TorusElement& f, const Eigen::VectorXd& x) {
    require_dim(x.size(), f.d, "group element");
    TorusElement h{f.d, {}};
    for (const auto& [p, c] : f.coeffs) h.add(p, std::polar(1.0, kTwoPi * dot(p, x)) * c);
    return h;
}

LipEstimate lie_lipnorm(const TorusElement& f, const SkewMatrix& theta, const NormSpec& g, int samples, int window,
                        std::uint64_t seed) {
    LipEstimate out;
    out.window = window;
    const auto dirs = sphere_directions(g, f.d, samples, seed);
    for (const auto& X : dirs) out.value = std::max(out.value, window_norm(derivative(f, X), theta, window));
    out.samples = f.d == 2 ? samples : static_cast<int>(dirs.size());
    if (f.d == 1) {
        out.upper = out.value;
    } else if (f.d == 2 && g.kind == NormSpec::Kind::Euclidean && !g.weights.size() && samples >= 4) {
        // X -> |d_X f| is a seminorm and every unit X lies within pi/K of a
        // sampled direction, so sup <= sampled max + (pi/K) sup.
        out.upper = out.value / (1.0 - kPi / samples);
    }
    return out;
}

LipEstimate length_lipnorm(const TorusElement& f, const SkewMatrix& theta, const NormSpec& ell, int grid, int window) {
    if (grid < 2) throw Error(ErrorKind::InvalidParams, "length grid needs at least 2 points per axis");
    LipEstimate out;
    out.window = window;
    const int d = f.d;
    long total = 1;
    for (int k = 0; k < d; ++k) total *= grid;
    for (long idx = 1; idx < total; ++idx) {
        Eigen::VectorXd x(d);
        long rest = idx;
        bool near_zero = true;
        for (int k = d - 1; k >= 0; --k) {
            const int t = static_cast<int>(rest % grid);
            rest /= grid;
            x(k) = static_cast<double>(t) / grid;
            if (t != 0 && t != 1 && t != grid - 1) near_zero = false;
        }
        const double l = ell.torus_length(x);
        if (l <= 0) continue;
        out.value = std::max(out.value, window_norm(translate(f, x) - f, theta, window) / l);
        if (near_zero) {
            // Next to the identity the difference quotient is close to its
            // derivative limit, which is evaluated directly.
            Eigen::VectorXd r = x;
            for (int k = 0; k < d; ++k) r(k) -= std::round(r(k));
            out.value = std::max(out.value, window_norm(derivative(f, r / l), theta, window));
        }
        ++out.samples;
    }
    return out;
}

StateField make_state_field(int d, int M, Eigen::MatrixXcd T) {
    const Window w = make_window(d, M);
    if (T.rows() != w.size() || T.cols() != w.size())
        throw Error(ErrorKind::DimensionMismatch, "density matrix does not match the window");
    if ((T - T.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw Error(ErrorKind::InvalidInput, "density matrix is not Hermitian");
    const Eigen::MatrixXcd H = (T + T.adjoint()) / 2.0;
    if (std::abs(H.trace() - Complex(1.0)) > 1e-10) throw Error(ErrorKind::InvalidInput, "density matrix trace is not 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) throw Error(ErrorKind::InvalidInput, "density matrix is not positive");
    return StateField{d, M, H};
}

StateField basis_state(int d, int M, const Index& p) {
    const Window w = make_window(d, M);
    const int i = w.index(p);
    if (i < 0) throw Error(ErrorKind::WindowTooSmall, "basis vector outside the window");
    Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(w.size(), w.size());
    T(i, i) = 1.0;
    return StateField{d, M, T};
}

StateField vector_state(int d, int M, const Eigen::VectorXcd& v) {
    const double n = v.norm();
    if (!(n > 0)) throw Error(ErrorKind::InvalidInput, "zero vector state");
    const Eigen::VectorXcd u = v / n;
    Eigen::MatrixXcd T = u * u.adjoint();
    T.diagonal() /= T.trace().real();
    return make_state_field(d, M, T);
}

StateField random_density(Rng& rng, int d, int M) {
    const Window w = make_window(d, M);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXcd G(w.size(), 2);
    for (long i = 0; i < G.rows(); ++i)
        for (long j = 0; j < G.cols(); ++j) G(i, j) = Complex(g(rng), g(rng));
    Eigen::MatrixXcd T = G * G.adjoint();
    T /= T.trace().real();
    return StateField{d, M, (T + T.adjoint()) / 2.0};
}

namespace {

// omega(delta_a) = sum_r sigma(a, r + a) T(r, r + a) over r with r, r + a in the window.
Complex point_value(const StateField& S, const Window& w, const SkewMatrix& theta, const Index& a) {
    Complex z = 0.0;
    for (int col = 0; col < w.size(); ++col) {
        const Index p = add_index(w.points[col], a);
        const int row = w.index(p);
        if (row >= 0) z += sigma(theta, a, p) * S.T(col, row);
    }
    return z;
}

}  // namespace

Complex state_field_eval(const StateField& S, const SkewMatrix& theta, const TorusElement& f) {
    require_same_d(S.d, f.d);
    require_same_d(S.d, theta.d());
    if (f.radius() > S.M) throw Error(ErrorKind::WindowTooSmall, "element support exceeds the density window");
    const Window w = make_window(S.d, S.M);
    Complex z = 0.0;
    for (const auto& [a, fa] : f.coeffs) z += fa * point_value(S, w, theta, a);
    return z;
}

double continuity_modulus(const StateField& S, const SkewMatrix& theta, const SkewMatrix& psi, const TorusElement& f,
                          int steps) {
    if (steps < 1) throw Error(ErrorKind::InvalidParams, "continuity scan needs at least one step");
    double worst = 0.0;
    SkewMatrix prev = theta;
    Complex prev_val = state_field_eval(S, theta, f);
    for (int k = 1; k <= steps; ++k) {
        const double t = static_cast<double>(k) / steps;
        const SkewMatrix cur = make_skew((1.0 - t) * theta.entries + t * psi.entries);
        const Complex v = state_field_eval(S, cur, f);
        const double h = skew_distance(cur, prev);
        if (h > 0) worst = std::max(worst, std::abs(v - prev_val) / h);
        prev = cur;
        prev_val = v;
    }
    return worst;
}

TruncatedSpace truncated_space(int d, const std::vector<Index>& support) {
    TruncatedSpace B;
    B.d = d;
    bool has_zero = false;
    for (const auto& p : support) {
        require_dim(static_cast<long>(p.size()), d, "frequency");
        if (is_zero(p)) has_zero = true;
        if (std::find(support.begin(), support.end(), negate(p)) == support.end())
            throw Error(ErrorKind::InvalidInput, "frequency set is not symmetric");
        if (lex_positive(p)) B.positive.push_back(p);
    }
    if (!has_zero) throw Error(ErrorKind::InvalidInput, "frequency set misses 0");
    std::sort(B.positive.begin(), B.positive.end());
    B.positive.erase(std::unique(B.positive.begin(), B.positive.end()), B.positive.end());
    return B;
}

TorusElement TruncatedSpace::element(const Eigen::VectorXd& a) const {
    require_dim(a.size(), dim(), "truncated coordinates");
    TorusElement f{d, {}};
    f.add(Index(d, 0), a(0));
    for (size_t j = 0; j < positive.size(); ++j) {
        const double c = a(1 + 2 * static_cast<long>(j));
        const double s = a(2 + 2 * static_cast<long>(j));
        f.add(positive[j], Complex(c, s));
        f.add(negate(positive[j]), Complex(c, -s));
    }
    return f;
}

Eigen::RowVectorXd TruncatedSpace::state_row(const StateField& S, const SkewMatrix& theta) const {
    const Window w = make_window(S.d, S.M);
    Eigen::RowVectorXd row(dim());
    row(0) = S.T.trace().real();
    for (size_t j = 0; j < positive.size(); ++j) {
        const Complex z = point_value(S, w, theta, positive[j]);
        row(1 + 2 * static_cast<long>(j)) = 2.0 * z.real();
        row(2 + 2 * static_cast<long>(j)) = -2.0 * z.imag();
    }
    return row;
}

Eigen::RowVectorXd TruncatedSpace::lip_row(const StateField& S, const SkewMatrix& theta,
                                           const Eigen::VectorXd& X) const {
    const Window w = make_window(S.d, S.M);
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(dim());
    for (size_t j = 0; j < positive.size(); ++j) {
        const Complex z = point_value(S, w, theta, positive[j]);
        const double k = kTwoPi * dot(positive[j], X);
        row(1 + 2 * static_cast<long>(j)) = -2.0 * k * z.imag();
        row(2 + 2 * static_cast<long>(j)) = -2.0 * k * z.real();
    }
    return row;
}

Eigen::MatrixXd TruncatedSpace::inclusion_into(const TruncatedSpace& big) const {
    require_same_d(d, big.d);
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(big.dim(), dim());
    P(0, 0) = 1.0;
    for (size_t j = 0; j < positive.size(); ++j) {
        const auto it = std::find(big.positive.begin(), big.positive.end(), positive[j]);
        if (it == big.positive.end()) throw Error(ErrorKind::InvalidInput, "frequency set is not contained in the larger one");
        const long J = it - big.positive.begin();
        P(1 + 2 * J, 1 + 2 * static_cast<long>(j)) = 1.0;
        P(2 + 2 * J, 2 + 2 * static_cast<long>(j)) = 1.0;
    }
    return P;
}

std::vector<StateField> torus_state_family(const TruncatedSpace& B, const SkewMatrix& reference,
                                           const TorusBridgeOptions& opt) {
    const int d = B.d;
    const int M = opt.window;
    std::vector<StateField> family;
    // Every basis projection gives the trace state on elements supported
    // away from the window edge, so a single one represents them all.
    family.push_back(basis_state(d, M, Index(d, 0)));
    Rng rng(opt.seed);
    for (int k = 0; k < opt.random_states; ++k) family.push_back(random_density(rng, d, M));

    // States at which the norm and the Lie derivatives of probe elements are
    // attained at the reference parameter.
    const auto dirs = sphere_directions(opt.g, d, std::max(1, opt.probe_directions), opt.seed);
    auto extremal = [&](const TorusElement& h) {
        const Eigen::MatrixXcd A = rep_window(h, reference, M);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((A + A.adjoint()) / 2.0);
        const long n = es.eigenvalues().size();
        family.push_back(vector_state(d, M, es.eigenvectors().col(0)));
        family.push_back(vector_state(d, M, es.eigenvectors().col(n - 1)));
    };
    for (int k = 0; k < opt.probe_elements; ++k) {
        Eigen::VectorXd a = gaussian_vector(rng, B.dim());
        a(0) = 0.0;
        const TorusElement h = B.element(a);
        extremal(h);
        for (const auto& X : dirs) extremal(derivative(h, X));
    }
    return family;
}

TorusModel torus_model(const TruncatedSpace& B, const SkewMatrix& theta, const std::vector<StateField>& family,
                       const std::vector<Eigen::VectorXd>& directions) {
    const int k = static_cast<int>(family.size());
    Eigen::MatrixXd states(k, B.dim());
    for (int i = 0; i < k; ++i) states.row(i) = B.state_row(family[i], theta);
    // The trace of each density matrix is 1 only up to rounding.
    for (int i = 0; i < k; ++i) states(i, 0) = 1.0;
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(B.dim());
    unit(0) = 1.0;
    Eigen::MatrixXd F(k * static_cast<int>(directions.size()), B.dim());
    int r = 0;
    for (const auto& S : family)
        for (const auto& X : directions) F.row(r++) = B.lip_row(S, theta, X);
    return {make_space(unit, states), polyhedral_lipnorm(unit, F)};
}

TorusCertificate torus_distq_upper(const SkewMatrix& theta, const SkewMatrix& psi, const std::vector<Index>& support,
                                   double delta_n, const TorusBridgeOptions& opt) {
    require_same_d(theta.d(), psi.d());
    const int d = theta.d();
    const TruncatedSpace B = truncated_space(d, support);
    const auto family = torus_state_family(B, psi, opt);
    const auto dirs = sphere_directions(opt.g, d, opt.directions, opt.seed);
    const TorusModel Mt = torus_model(B, theta, family, dirs);
    const TorusModel Mp = torus_model(B, psi, family, dirs);

    TorusCertificate out;
    out.delta_n = delta_n;
    out.states = static_cast<int>(family.size());
    out.functionals = Mt.lip.num_functionals();
    out.dim = B.dim();

    // Smallest eps for which every sampled element on either side has a
    // partner with no larger Lip-norm whose paired state values are eps-close.
    Rng rng(opt.seed + 1);
    auto side = [&](const TorusModel& from, const TorusModel& to) {
        double worst = 0.0;
        for (int s = 0; s < opt.bridge_samples; ++s) {
            Eigen::VectorXd a = gaussian_vector(rng, B.dim());
            const double l = eval_lip(from.lip, a);
            if (l <= 1e-12) continue;
            a /= l;
            worst = std::max(worst, required_bridge_scale(from.space.states * a, to.space.states, to.lip.functionals,
                                                          opt.tol));
        }
        return worst;
    };
    out.certificate = std::max(side(Mt, Mp), side(Mp, Mt));

    if (opt.eps > 0) {
        if (out.certificate > opt.eps * (1.0 + 1e-9) + opt.tol.bridge_residual)
            throw Error(ErrorKind::BridgeInvalid, "bridge scale " + std::to_string(opt.eps) +
                                                      " is below the admissible minimum " +
                                                      std::to_string(out.certificate));
        out.eps = opt.eps;
    } else {
        out.eps = out.certificate;
    }

    if (out.eps > 1e-12) {
        out.residual = out.certificate / out.eps - 1.0;
        const CombinedLip M = combine(Mt.lip, Mp.lip, state_family_bridge(Mt.space.states, Mp.space.states, out.eps));
        out.hausdorff = hausdorff_states(M.lip, Mt.space, Mp.space, opt.tol);
    }

    // Density of the family, measured against extra random states.
    Rng extra(opt.seed + 2);
    const Gauge g = dual_gauge(Mt.lip);
    const Polytope P = Mt.space.state_polytope();
    for (int k = 0; k < opt.density_samples; ++k) {
        Eigen::VectorXd mu = B.state_row(random_density(extra, d, opt.window), theta).transpose();
        mu(0) = 1.0;
        out.density_residual = std::max(out.density_residual, nearest_point(mu, P, g, opt.tol).distance);
    }
    out.upper = out.certificate + out.density_residual;
    out.full_chain = 2.0 * delta_n + out.upper;
    return out;
}

TruncationBracket truncation_distq(const SkewMatrix& theta, const std::vector<Index>& big_support,
                                   const std::vector<Index>& support, double delta_n, const TorusBridgeOptions& opt) {
    const int d = theta.d();
    const TruncatedSpace big = truncated_space(d, big_support);
    const TruncatedSpace small = truncated_space(d, support);
    const auto family = torus_state_family(big, theta, opt);
    const auto dirs = sphere_directions(opt.g, d, opt.directions, opt.seed);
    const TorusModel A = torus_model(big, theta, family, dirs);
    const TorusModel Bn = torus_model(small, theta, family, dirs);
    const Bridge N = along_map_bridge(A.space, Bn.space, small.inclusion_into(big), delta_n, MapDirection::BintoA);
    TruncationBracket out;
    out.delta_n = delta_n;
    out.upper = distq_upper(A.space, A.lip, Bn.space, Bn.lip, N, opt.tol);
    out.lower = distq_lower(A.space, A.lip, Bn.space, Bn.lip, opt.tol);
    return out;
}

}  // namespace qgh
