#include "qgh/fejer.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <numbers>

namespace qgh {

double CharacterPoly::at(const Index& p) const {
    const auto it = coeffs.find(p);
    return it == coeffs.end() ? 0.0 : it->second;
}

CharacterPoly build_character(int d) {
    if (d < 1) throw Error(ErrorKind::InvalidParams, "character needs d >= 1");
    std::vector<Index> freqs{Index(d, 0)};
    for (int k = 0; k < d; ++k) {
        Index e(d, 0);
        e[k] = 1;
        freqs.push_back(e);
    }
    CharacterPoly chi{d, {}};
    for (const auto& q : freqs)
        for (const auto& r : freqs) {
            Index p(d);
            for (int k = 0; k < d; ++k) p[k] = q[k] - r[k];
            chi.coeffs[p] += 1.0;
        }
    return chi;
}

CharacterPoly convolve(const CharacterPoly& a, const CharacterPoly& b) {
    if (a.d != b.d) throw Error(ErrorKind::DimensionMismatch, "character dimensions differ");
    CharacterPoly c{a.d, {}};
    for (const auto& [p, x] : a.coeffs)
        for (const auto& [q, y] : b.coeffs) {
            Index r(a.d);
            for (int k = 0; k < a.d; ++k) r[k] = p[k] + q[k];
            c.coeffs[r] += x * y;
        }
    return c;
}

CharacterPoly power(const CharacterPoly& chi, int n) {
    if (n < 1) throw Error(ErrorKind::InvalidParams, "kernel power must be >= 1");
    CharacterPoly out = chi;
    for (int k = 1; k < n; ++k) out = convolve(out, chi);
    return out;
}

double FejerKernel::multiplier_at(const Index& p) const {
    const auto it = multiplier.find(p);
    return it == multiplier.end() ? 0.0 : it->second;
}

namespace {

// Midpoint rule for the integral of phi * length over [0,1)^d.
double midpoint_delta(const FejerKernel& k, int grid) {
    const int d = k.d;
    int R = 0;
    for (const auto& p : k.support)
        for (int v : p) R = std::max(R, std::abs(v));
    const int width = 2 * R + 1;
    std::vector<std::complex<double>> table(static_cast<size_t>(width) * grid);
    for (int p = -R; p <= R; ++p)
        for (int j = 0; j < grid; ++j)
            table[static_cast<size_t>(p + R) * grid + j] =
                std::polar(1.0, 2.0 * std::numbers::pi * p * (j + 0.5) / grid);

    std::vector<std::pair<const Index*, double>> terms;
    for (const auto& [p, m] : k.multiplier) terms.emplace_back(&p, m);

    long total = 1;
    for (int a = 0; a < d; ++a) total *= grid;
    std::vector<int> j(d, 0);
    Eigen::VectorXd x(d);
    double sum = 0.0;
    for (long idx = 0; idx < total; ++idx) {
        long rest = idx;
        for (int a = d - 1; a >= 0; --a) {
            j[a] = static_cast<int>(rest % grid);
            rest /= grid;
            x(a) = (j[a] + 0.5) / grid;
        }
        double phi = 0.0;
        for (const auto& [p, m] : terms) {
            std::complex<double> z = 1.0;
            for (int a = 0; a < d; ++a) z *= table[static_cast<size_t>((*p)[a] + R) * grid + j[a]];
            phi += m * z.real();
        }
        sum += phi * k.length.torus_length(x);
    }
    return sum / static_cast<double>(total);
}

}  // namespace

FejerKernel build_kernel(const CharacterPoly& chi, int n, const NormSpec& length, const KernelOptions& opt) {
    const CharacterPoly chn = power(chi, n);
    const double c0 = chn.at(Index(chi.d, 0));
    if (!(c0 > 0)) throw Error(ErrorKind::InvalidInput, "character has no constant term");
    FejerKernel k;
    k.d = chi.d;
    k.n = n;
    k.length = length;
    for (const auto& [p, c] : chn.coeffs) {
        if (c < 0) throw Error(ErrorKind::InvalidInput, "character coefficients must be non-negative");
        if (c == 0) continue;
        k.multiplier[p] = c / c0;
        k.support.push_back(p);
    }
    k.grid = opt.grid > 0 ? opt.grid : (k.d == 1 ? 512 : (k.d == 2 ? 128 : 64));
    if (k.grid < 64) throw Error(ErrorKind::GridTooCoarse, "quadrature grid must have at least 64 points per axis");
    const double coarse = midpoint_delta(k, k.grid);
    const double fine = midpoint_delta(k, 2 * k.grid);
    k.delta = (4.0 * fine - coarse) / 3.0;
    k.residual = std::abs(fine - coarse) / 3.0;
    if (k.residual > opt.tol)
        throw Error(ErrorKind::GridTooCoarse, "quadrature residual " + std::to_string(k.residual) + " above tolerance");
    return k;
}

TorusElement apply_Pn(const FejerKernel& kernel, const TorusElement& f) {
    if (f.d != kernel.d) throw Error(ErrorKind::DimensionMismatch, "element and kernel dimensions differ");
    TorusElement g{f.d, {}};
    for (const auto& [p, c] : f.coeffs) g.add(p, kernel.multiplier_at(p) * c);
    return g;
}

TruncationReport truncation_check(const FejerKernel& kernel, const TorusElement& f, const SkewMatrix& theta,
                                  const TruncationOptions& opt) {
    if (f.d != kernel.d || theta.d() != kernel.d)
        throw Error(ErrorKind::DimensionMismatch, "element, kernel and theta dimensions differ");
    if (kernel.d >= 2 && (kernel.length.kind != NormSpec::Kind::Euclidean || kernel.length.weights.size()))
        throw Error(ErrorKind::InvalidParams, "the sphere bound for d >= 2 needs the plain Euclidean length");
    if (kernel.d == 2 && opt.sphere_samples < 4)
        throw Error(ErrorKind::InvalidParams, "need at least 4 sphere samples");
    if (kernel.d > 2) throw Error(ErrorKind::InvalidParams, "truncation check is implemented for d <= 2");

    TruncationReport r;
    r.window = opt.window;
    const TorusElement Pf = apply_Pn(kernel, f);
    r.residual_norm = window_norm(f - Pf, theta, opt.window);

    const auto dirs = sphere_directions(kernel.length, kernel.d, opt.sphere_samples, opt.seed);
    r.contraction_ok = true;
    for (const auto& X : dirs) {
        const double full = window_norm(derivative(f, X), theta, opt.window);
        const double cut = window_norm(derivative(Pf, X), theta, opt.window);
        r.lip = std::max(r.lip, full);
        r.lip_truncated = std::max(r.lip_truncated, cut);
        if (full > 0) r.worst_ratio = std::max(r.worst_ratio, cut / full);
        if (cut > full + opt.tol * std::max(1.0, full)) r.contraction_ok = false;
    }
    r.samples = kernel.d == 1 ? 1 : opt.sphere_samples;
    r.lip_upper = kernel.d == 1 ? r.lip : r.lip / (1.0 - std::numbers::pi / opt.sphere_samples);
    r.bound = (kernel.delta + kernel.residual) * r.lip_upper;
    r.margin = r.bound - r.residual_norm;
    r.approximation_ok = r.residual_norm <= r.bound + opt.tol * std::max(1.0, r.bound);
    if (!r.approximation_ok)
        throw Error(ErrorKind::BoundViolated, "truncation error " + std::to_string(r.residual_norm) +
                                                  " exceeds delta_n * L = " + std::to_string(r.bound));
    if (!r.contraction_ok)
        throw Error(ErrorKind::BoundViolated, "truncation increased a directional derivative norm");
    return r;
}

std::vector<FejerRow> fejer_table(int d, int n_max, const NormSpec& length, const KernelOptions& opt) {
    if (n_max < 1) throw Error(ErrorKind::InvalidParams, "n-max must be >= 1");
    const CharacterPoly chi = build_character(d);
    std::vector<FejerRow> rows;
    for (int n = 1; n <= n_max; ++n) {
        const FejerKernel k = build_kernel(chi, n, length, opt);
        rows.push_back({n, static_cast<int>(k.support.size()), k.delta, k.residual});
    }
    return rows;
}

void write_fejer_csv(std::ostream& out, const std::vector<FejerRow>& rows) {
    out << "n,support_size,delta_n,quadrature_residual\n";
    out << std::setprecision(12);
    for (const auto& r : rows) out << r.n << ',' << r.support_size << ',' << r.delta << ',' << r.residual << '\n';
}

}  // namespace qgh
