#pragma once

#include "qgh/qtorus.hpp"

#include <map>
#include <ostream>
#include <vector>

namespace qgh {

// Non-negative trigonometric polynomial on T^d given by its coefficients.
struct CharacterPoly {
    int d = 0;
    std::map<Index, double> coeffs;

    double at(const Index& p) const;
};

// |1 + e_1 + ... + e_d|^2: autocorrelation of the frequencies {0, e_1, ..., e_d}.
CharacterPoly build_character(int d);
CharacterPoly convolve(const CharacterPoly& a, const CharacterPoly& b);
CharacterPoly power(const CharacterPoly& chi, int n);

struct FejerKernel {
    int d = 0;
    int n = 0;
    std::map<Index, double> multiplier;  // Fourier coefficients of chi^n / |chi^n|_1
    double delta = 0.0;                  // integral of the kernel against the length function
    double residual = 0.0;               // quadrature refinement residual on delta
    int grid = 0;
    std::vector<Index> support;  // sorted
    NormSpec length{};

    double multiplier_at(const Index& p) const;
};

struct KernelOptions {
    int grid = 0;        // midpoint points per axis; 0 picks 512 for d = 1 and 128 otherwise
    double tol = 1e-5;   // largest accepted quadrature residual
};

FejerKernel build_kernel(const CharacterPoly& chi, int n, const NormSpec& length = {}, const KernelOptions& opt = {});

// Fourier multiplier p -> multiplier(p) f(p).
TorusElement apply_Pn(const FejerKernel& kernel, const TorusElement& f);

struct TruncationOptions {
    int window = 6;
    int sphere_samples = 16;  // d = 2 directions; the sup bound needs at least 4
    double tol = 1e-9;
    std::uint64_t seed = 0;
};

// Both inequalities are evaluated on the same window compression, where
// they hold exactly: translations act by diagonal unitaries, which commute
// with the compression.
struct TruncationReport {
    double residual_norm = 0.0;  // |C_W(f - P_n f)|
    double lip = 0.0;            // sampled Lie Lip-norm of f at the window
    double lip_upper = 0.0;      // bound on the Lip-norm over the whole sphere
    double bound = 0.0;          // (delta + quadrature residual) * lip_upper
    double margin = 0.0;         // bound - residual_norm
    double lip_truncated = 0.0;  // sampled Lie Lip-norm of P_n f
    double worst_ratio = 0.0;    // max over directions of |d_X P_n f| / |d_X f|
    bool approximation_ok = false;
    bool contraction_ok = false;
    int window = 0;
    int samples = 0;
};

// Throws BoundViolated when either inequality fails beyond opt.tol.
TruncationReport truncation_check(const FejerKernel& kernel, const TorusElement& f, const SkewMatrix& theta,
                                  const TruncationOptions& opt = {});

struct FejerRow {
    int n = 0;
    int support_size = 0;
    double delta = 0.0;
    double residual = 0.0;
};

std::vector<FejerRow> fejer_table(int d, int n_max, const NormSpec& length = {}, const KernelOptions& opt = {});
void write_fejer_csv(std::ostream& out, const std::vector<FejerRow>& rows);

}  // namespace qgh
