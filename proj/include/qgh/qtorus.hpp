#pragma once

#include "qgh/bridges.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

namespace qgh {

using Index = std::vector<int>;
using Complex = std::complex<double>;

struct SkewMatrix {
    Eigen::MatrixXd entries;
    int d() const { return static_cast<int>(entries.rows()); }
};

// Requires entries^T == -entries exactly.
SkewMatrix make_skew(Eigen::MatrixXd entries);
// d = 2 with theta_12 = t.
SkewMatrix skew2(double t);
// Upper entries reduced to [0, 2); the twisting phase only sees theta mod 2.
SkewMatrix normalize(const SkewMatrix& theta);
double skew_distance(const SkewMatrix& a, const SkewMatrix& b);  // max entry difference

// exp(i pi p . theta q)
Complex sigma(const SkewMatrix& theta, const Index& p, const Index& q);

// Finitely supported coefficients on Z^d, ordered for deterministic output.
struct TorusElement {
    int d = 0;
    std::map<Index, Complex> coeffs;

    Complex at(const Index& p) const;
    void add(const Index& p, Complex c);
    int radius() const;  // largest |p_k| on the support
    double l1() const;
};

TorusElement point_mass(int d, const Index& p, Complex c = 1.0);
TorusElement adjoint(const TorusElement& f);
bool is_self_adjoint(const TorusElement& f, double tol = 1e-12);
TorusElement operator+(const TorusElement& f, const TorusElement& g);
TorusElement operator-(const TorusElement& f, const TorusElement& g);
TorusElement scale(const TorusElement& f, Complex c);
TorusElement twisted_multiply(const TorusElement& f, const TorusElement& g, const SkewMatrix& theta);

// Random element with integer support in [-radius, radius]^d.
TorusElement random_element(Rng& rng, int d, int radius, int terms, bool self_adjoint);

// The box {-M..M}^d, enumerated lexicographically.
struct Window {
    int d = 0;
    int M = 0;
    std::vector<Index> points;
    int size() const { return static_cast<int>(points.size()); }
    int index(const Index& p) const;  // -1 outside
};

Window make_window(int d, int M);

// A_{p,r} = f(p - r) sigma(p - r, p) for p, r in the window.
Eigen::MatrixXcd rep_window(const TorusElement& f, const SkewMatrix& theta, int M);
double operator_norm(const Eigen::MatrixXcd& A, bool hermitian);
double window_norm(const TorusElement& f, const SkewMatrix& theta, int M);

struct NormOptions {
    int window_start = 0;  // 0 picks max(radius, 1)
    int window_max = 12;
    double tol = 1e-6;
};

struct NormEstimate {
    double estimate = 0.0;  // last window value, a lower bound
    double upper = 0.0;     // l1 norm
    int window = 0;
    bool converged = false;
    std::vector<double> history;  // one value per window size
};

NormEstimate norm_theta(const TorusElement& f, const SkewMatrix& theta, const NormOptions& opt = {});

// Norm on R^d used both as a Lie-algebra norm and, through flat-torus
// distance to 0, as a length function.
struct NormSpec {
    enum class Kind { Euclidean, Max, L1 };
    Kind kind = Kind::Euclidean;
    Eigen::VectorXd weights;  // empty means all ones

    double norm(const Eigen::VectorXd& x) const;
    // Distance from x to the lattice Z^d in this norm.
    double torus_length(const Eigen::VectorXd& x) const;
};

const char* to_string(NormSpec::Kind k);

// Unit directions for the Lie Lip-norm supremum: the two signs in d = 1,
// equally spaced angles in d = 2, seeded Gaussian directions otherwise.
std::vector<Eigen::VectorXd> sphere_directions(const NormSpec& g, int d, int samples, std::uint64_t seed = 0);

TorusElement derivative(const TorusElement& f, const Eigen::VectorXd& X);   // 2 pi i (p . X) f(p)
TorusElement translate(const TorusElement& f, const Eigen::VectorXd& x);    // exp(2 pi i p . x) f(p)

struct LipEstimate {
    double value = 0.0;  // max over the sampled directions or grid
    double upper = kInf; // bound on the supremum over the whole sphere at the same window
    int samples = 0;
    int window = 0;
};

LipEstimate lie_lipnorm(const TorusElement& f, const SkewMatrix& theta, const NormSpec& g, int samples, int window,
                        std::uint64_t seed = 0);
LipEstimate length_lipnorm(const TorusElement& f, const SkewMatrix& theta, const NormSpec& ell, int grid, int window);

// A density matrix on a window, giving the state field theta -> tr(pi_theta(.) T).
struct StateField {
    int d = 0;
    int M = 0;
    Eigen::MatrixXcd T;
};

StateField make_state_field(int d, int M, Eigen::MatrixXcd T);
StateField basis_state(int d, int M, const Index& p);
StateField vector_state(int d, int M, const Eigen::VectorXcd& v);
StateField random_density(Rng& rng, int d, int M);

Complex state_field_eval(const StateField& S, const SkewMatrix& theta, const TorusElement& f);
// Largest |omega_theta(f) - omega_psi(f)| / |theta - psi| over a theta grid.
double continuity_modulus(const StateField& S, const SkewMatrix& theta, const SkewMatrix& psi,
                          const TorusElement& f, int steps = 8);

// Self-adjoint elements supported on a symmetric frequency set G_n, in real
// coordinates: delta_0, then for each positive p (lexicographically > 0)
// c_p = delta_p + delta_-p and s_p = i (delta_p - delta_-p).
struct TruncatedSpace {
    int d = 0;
    std::vector<Index> positive;

    int dim() const { return 1 + 2 * static_cast<int>(positive.size()); }
    TorusElement element(const Eigen::VectorXd& a) const;
    Eigen::RowVectorXd state_row(const StateField& S, const SkewMatrix& theta) const;
    Eigen::RowVectorXd lip_row(const StateField& S, const SkewMatrix& theta, const Eigen::VectorXd& X) const;
    // Coordinates of this space inside a larger truncated space.
    Eigen::MatrixXd inclusion_into(const TruncatedSpace& big) const;
};

TruncatedSpace truncated_space(int d, const std::vector<Index>& support);

struct TorusBridgeOptions {
    int window = 8;
    double eps = 0.0;          // bridge scale; <= 0 uses the smallest admissible value
    int random_states = 16;
    int probe_elements = 8;    // elements whose extremal eigenvectors join the state family
    int probe_directions = 4;
    int directions = 16;       // Lie directions for the sampled Lip functionals
    int bridge_samples = 48;   // sampled elements for the admissibility LPs, per side
    int density_samples = 24;  // extra random states for the density residual
    NormSpec g{};
    std::uint64_t seed = 0;
    Tolerances tol{};
};

// Fixed finite family of density matrices used on both sides of the bridge.
std::vector<StateField> torus_state_family(const TruncatedSpace& B, const SkewMatrix& reference,
                                           const TorusBridgeOptions& opt);

struct TorusModel {
    OrderUnitSpace space;
    LipNorm lip;
};

TorusModel torus_model(const TruncatedSpace& B, const SkewMatrix& theta, const std::vector<StateField>& family,
                       const std::vector<Eigen::VectorXd>& directions);

struct TorusCertificate {
    double certificate = 0.0;  // smallest bridge scale admissible on every sample
    double eps = 0.0;          // scale actually used
    double residual = 0.0;     // worst sampled admissibility residual at eps
    double hausdorff = 0.0;    // state-family Hausdorff distance under the bridged Lip-norm
    double density_residual = 0.0;
    double upper = 0.0;        // certificate + density residual
    double delta_n = 0.0;
    double full_chain = 0.0;   // 2 delta_n + upper
    int states = 0;
    int functionals = 0;
    int dim = 0;
};

TorusCertificate torus_distq_upper(const SkewMatrix& theta, const SkewMatrix& psi, const std::vector<Index>& support,
                                   double delta_n, const TorusBridgeOptions& opt = {});

// Along-map bridge between a larger truncated model and the subspace B_n,
// with scale delta_n and the same state family.
struct TruncationBracket {
    double upper = 0.0;
    double lower = 0.0;
    double delta_n = 0.0;
};

TruncationBracket truncation_distq(const SkewMatrix& theta, const std::vector<Index>& big_support,
                                   const std::vector<Index>& support, double delta_n,
                                   const TorusBridgeOptions& opt = {});

}  // namespace qgh
