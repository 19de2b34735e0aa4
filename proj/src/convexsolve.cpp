#include "qgh/convexsolve.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace qgh {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Dense two-phase tableau.  The last row holds reduced costs (and minus the
// objective value in the rhs slot), the last column holds the rhs.  The
// original rows are kept so the tableau can be rebuilt from the current
// basis, which stops rounding error from piling up over long pivot runs.
struct Tableau {
    RowMat T;
    RowMat orig;             // [A | I | b] as scaled at the start
    Eigen::VectorXd cost;    // objective of the current phase over all columns
    std::vector<int> rows;   // original rows still in play (not positional)
    std::vector<int> basis;
    int m = 0;
    int ncols = 0;
    int pivots = 0;
    const Tolerances* tol = nullptr;

    static constexpr int kRefactorEvery = 64;
    static constexpr double kHarrisPivot = 1e-9;

    void pivot(int r, int s) {
        T.row(r) /= T(r, s);
        for (int i = 0; i <= m; ++i) {
            if (i == r) continue;
            const double f = T(i, s);
            if (f != 0.0) T.row(i) -= f * T.row(r);
            T(i, s) = 0.0;
        }
        T(r, s) = 1.0;
        basis[r] = s;
        ++pivots;
    }

    // Recompute every entry from the original data and the current basis.
    void refactor() {
        Eigen::MatrixXd B(m, m);
        Eigen::MatrixXd R(m, ncols + 1);
        for (int i = 0; i < m; ++i) R.row(i) = orig.row(rows[i]);
        for (int i = 0; i < m; ++i) B.col(i) = R.col(basis[i]);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
        const Eigen::MatrixXd body = lu.solve(R);
        if (!body.allFinite()) return;
        Eigen::VectorXd cb(m);
        for (int i = 0; i < m; ++i) cb(i) = cost(basis[i]);
        T.topRows(m) = body;
        T.row(m).head(ncols) = cost.transpose() - cb.transpose() * body.leftCols(ncols);
        T(m, ncols) = -cb.dot(body.col(ncols));
        for (int i = 0; i < m; ++i) {
            T.col(basis[i]).setZero();
            T(i, basis[i]) = 1.0;
        }
    }

    // Returns false when the objective is unbounded along an entering column.
    // Dantzig pricing, falling back to Bland's rule after a run of degenerate
    // pivots so that cycling cannot occur.
    bool optimize(int allowed_cols) {
        for (int round = 0;; ++round) {
            if (!run(allowed_cols)) return false;
            // Confirm optimality on a freshly rebuilt tableau.
            const int before = pivots;
            refactor();
            if (!run(allowed_cols)) return false;
            if (pivots == before || round >= 3) return true;
        }
    }

    bool run(int allowed_cols) {
        int degenerate_run = 0;
        int since_refactor = 0;
        const int bland_after = 2 * m + 20;
        for (;;) {
            if (pivots > tol->max_pivots)
                throw Error(ErrorKind::NumericalFailure, "simplex pivot cap reached");
            if (since_refactor >= kRefactorEvery) {
                refactor();
                since_refactor = 0;
            }
            const bool bland = degenerate_run > bland_after;
            int s = -1;
            double best = -tol->lp;
            for (int j = 0; j < allowed_cols; ++j) {
                const double r = T(m, j);
                if (r < best) {
                    s = j;
                    if (bland) break;
                    best = r;
                }
            }
            if (s < 0) return true;

            int r = -1;
            double best_ratio = 0.0;
            if (bland) {
                for (int i = 0; i < m; ++i) {
                    const double a = T(i, s);
                    if (a <= tol->pivot) continue;
                    const double ratio = std::max(0.0, T(i, ncols)) / a;
                    if (r < 0 || ratio < best_ratio - 1e-12 * (1.0 + best_ratio) ||
                        (ratio <= best_ratio + 1e-12 * (1.0 + best_ratio) && basis[i] < basis[r])) {
                        r = i;
                        best_ratio = ratio;
                    }
                }
            } else {
                // Harris two-pass test: relax the bound by the feasibility
                // tolerance, then take the largest pivot among the rows that
                // fit under it.  Tiny pivots are what ruin dense tableaux.
                double bound = kInf;
                for (int i = 0; i < m; ++i) {
                    const double a = T(i, s);
                    if (a <= kHarrisPivot) continue;
                    bound = std::min(bound, (std::max(0.0, T(i, ncols)) + tol->lp) / a);
                }
                double best_a = 0.0;
                for (int i = 0; i < m; ++i) {
                    const double a = T(i, s);
                    if (a <= kHarrisPivot) continue;
                    const double ratio = std::max(0.0, T(i, ncols)) / a;
                    if (ratio <= bound && a > best_a) {
                        r = i;
                        best_a = a;
                        best_ratio = ratio;
                    }
                }
            }
            if (r < 0) return false;
            degenerate_run = (best_ratio <= tol->lp) ? degenerate_run + 1 : 0;
            pivot(r, s);
            ++since_refactor;
        }
    }

    // Tableau row r has vanished on the structural columns, so the original
    // rows are dependent.  The artificial columns hold the combination; drop
    // the surviving original row that carries the largest weight in it.
    void drop_row(int r, int n) {
        int victim = 0;
        for (int k = 1; k < static_cast<int>(rows.size()); ++k)
            if (std::abs(T(r, n + rows[k])) > std::abs(T(r, n + rows[victim]))) victim = k;
        rows.erase(rows.begin() + victim);
        RowMat next(T.rows() - 1, T.cols());
        next.topRows(r) = T.topRows(r);
        next.bottomRows(T.rows() - 1 - r) = T.bottomRows(T.rows() - 1 - r);
        T.swap(next);
        basis.erase(basis.begin() + r);
        --m;
    }
};

}  // namespace

StandardSolution solve_standard(const Eigen::MatrixXd& A_in, const Eigen::VectorXd& b_in,
                                const Eigen::VectorXd& c, const Tolerances& tol) {
    const int m0 = static_cast<int>(A_in.rows());
    const int n = static_cast<int>(A_in.cols());
    require_dim(b_in.size(), m0, "rhs");
    require_dim(c.size(), n, "objective");

    StandardSolution out;
    out.duals = Eigen::VectorXd::Zero(m0);

    if (m0 == 0) {
        for (int j = 0; j < n; ++j)
            if (c(j) < -tol.lp) throw Error(ErrorKind::Unbounded, "no constraints, negative cost");
        out.x = Eigen::VectorXd::Zero(n);
        return out;
    }

    // Row scaling keeps pivot thresholds meaningful; rows are also flipped
    // so that the rhs is non-negative before phase 1.
    Eigen::MatrixXd A = A_in;
    Eigen::VectorXd b = b_in;
    Eigen::VectorXd row_scale(m0);
    for (int i = 0; i < m0; ++i) {
        double s = A.row(i).cwiseAbs().maxCoeff();
        s = std::max(s, std::abs(b(i)));
        if (s == 0.0) s = 1.0;
        if (b(i) < 0) s = -s;
        row_scale(i) = 1.0 / s;
        A.row(i) *= row_scale(i);
        b(i) *= row_scale(i);
    }

    Tableau tb;
    tb.tol = &tol;
    tb.m = m0;
    tb.ncols = n + m0;
    tb.T = RowMat::Zero(m0 + 1, n + m0 + 1);
    tb.T.topLeftCorner(m0, n) = A;
    tb.T.block(0, n, m0, m0).setIdentity();
    tb.T.topRightCorner(m0, 1) = b;
    tb.basis.resize(m0);
    for (int i = 0; i < m0; ++i) {
        tb.basis[i] = n + i;
        tb.rows.push_back(i);
    }
    for (int j = 0; j < n; ++j) tb.T(m0, j) = -A.col(j).sum();
    tb.T(m0, n + m0) = -b.sum();
    tb.orig = tb.T.topRows(m0);
    tb.cost = Eigen::VectorXd::Zero(n + m0);
    tb.cost.tail(m0).setOnes();

    // Phase 1: drive the artificial variables to zero.
    tb.optimize(n);
    const double infeas = -tb.T(tb.m, tb.ncols);
    if (infeas > std::max(tol.lp, 1e-10 * static_cast<double>(m0)) * 10.0)
        throw Error(ErrorKind::Infeasible, "phase-1 residual " + std::to_string(infeas));

    // Pivot remaining artificials out of the basis, dropping redundant rows.
    for (int r = 0; r < tb.m;) {
        if (tb.basis[r] < n) {
            ++r;
            continue;
        }
        int s = -1;
        double best = 1e-9;
        for (int j = 0; j < n; ++j) {
            const double a = std::abs(tb.T(r, j));
            if (a > best) {
                best = a;
                s = j;
            }
        }
        if (s >= 0) {
            tb.pivot(r, s);
            ++r;
        } else {
            tb.drop_row(r, n);
        }
    }

    // Phase 2 objective row.
    const int m = tb.m;
    const std::vector<int>& kept_rows = tb.rows;
    tb.cost = Eigen::VectorXd::Zero(n + m0);
    tb.cost.head(n) = c;
    tb.T.row(m).setZero();
    for (int j = 0; j < n; ++j) tb.T(m, j) = c(j);
    for (int i = 0; i < m; ++i) {
        const double cb = c(tb.basis[i]);
        if (cb != 0.0) tb.T.row(m) -= cb * tb.T.row(i);
    }
    if (!tb.optimize(n)) throw Error(ErrorKind::Unbounded, "objective unbounded below");

    // Re-solve the final basis against the original data for accuracy.
    out.x = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd Bk(m, m);
    Eigen::VectorXd bb(m), cb(m);
    for (int i = 0; i < m; ++i) {
        for (int k = 0; k < m; ++k) Bk(k, i) = A(kept_rows[k], tb.basis[i]);
        cb(i) = c(tb.basis[i]);
        bb(i) = b(kept_rows[i]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(Bk);
    Eigen::VectorXd xb = lu.solve(bb);
    const bool refined_ok = lu.isInvertible() && (Bk * xb - bb).cwiseAbs().maxCoeff() < 1e-9 &&
                            xb.minCoeff() > -1e-9;
    // Refined values are left unclamped: rounding a -1e-12 basic value up to 0
    // would break the equality rows by the same amount.
    for (int i = 0; i < m; ++i) out.x(tb.basis[i]) = refined_ok ? xb(i) : std::max(0.0, tb.T(i, tb.ncols));
    out.value = c.dot(out.x);

    if (lu.isInvertible()) {
        const Eigen::VectorXd y = Bk.transpose().fullPivLu().solve(cb);
        for (int i = 0; i < m; ++i) out.duals(kept_rows[i]) = y(i) * row_scale(kept_rows[i]);
    }
    out.pivots = tb.pivots;
    return out;
}

double chebyshev_value(const Eigen::MatrixXd& G, const Eigen::VectorXd& h, const Tolerances& tol) {
    const int R = static_cast<int>(G.rows());
    const int k = static_cast<int>(G.cols());
    require_dim(h.size(), R, "residual offsets");
    if (R == 0) return 0.0;
    // Dual: max h.(u - v)  s.t.  G^T (u - v) = 0,  sum(u + v) = 1,  u, v >= 0.
    Eigen::MatrixXd A(k + 1, 2 * R);
    A.topLeftCorner(k, R) = G.transpose();
    A.topRightCorner(k, R) = -G.transpose();
    A.row(k).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(k + 1);
    b(k) = 1.0;
    Eigen::VectorXd c(2 * R);
    c.head(R) = -h;
    c.tail(R) = h;
    return -solve_standard(A, b, c, tol).value;
}

// ---------------------------------------------------------------------------
// General LPs

LinearProgram::LinearProgram(int n)
    : objective(Eigen::VectorXd::Zero(n)),
      eq_matrix(0, n),
      eq_rhs(0),
      ineq_matrix(0, n),
      ineq_rhs(0),
      lower(Eigen::VectorXd::Zero(n)),
      upper(Eigen::VectorXd::Constant(n, kInf)) {}

void LinearProgram::validate() const {
    const long n = objective.size();
    require_dim(eq_matrix.cols(), n, "equality matrix columns");
    require_dim(eq_rhs.size(), eq_matrix.rows(), "equality rhs");
    require_dim(ineq_matrix.cols(), n, "inequality matrix columns");
    require_dim(ineq_rhs.size(), ineq_matrix.rows(), "inequality rhs");
    require_dim(lower.size(), n, "lower bounds");
    require_dim(upper.size(), n, "upper bounds");
    for (long j = 0; j < n; ++j)
        if (!(lower(j) <= upper(j)))
            throw Error(ErrorKind::InvalidParams, "empty bound interval for variable " + std::to_string(j));
}

namespace {

// x = offset + M u with u >= 0 in standard form.
struct StandardMapping {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::VectorXd c;
    Eigen::MatrixXd M;
    Eigen::VectorXd offset;
};

StandardMapping to_standard(const LinearProgram& lp) {
    const int n = lp.num_vars();
    std::vector<Eigen::VectorXd> cols;  // columns of M
    Eigen::VectorXd offset = Eigen::VectorXd::Zero(n);
    std::vector<std::pair<int, double>> range_rows;  // (u index, width)

    for (int j = 0; j < n; ++j) {
        const double lo = lp.lower(j), hi = lp.upper(j);
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        if (std::isfinite(lo)) {
            offset(j) = lo;
            e(j) = 1.0;
            cols.push_back(e);
            if (std::isfinite(hi)) range_rows.emplace_back(static_cast<int>(cols.size()) - 1, hi - lo);
        } else if (std::isfinite(hi)) {
            offset(j) = hi;
            e(j) = -1.0;
            cols.push_back(e);
        } else {
            e(j) = 1.0;
            cols.push_back(e);
            cols.push_back(-e);
        }
    }
    const int nu = static_cast<int>(cols.size());
    const int n_eq = static_cast<int>(lp.eq_matrix.rows());
    const int n_in = static_cast<int>(lp.ineq_matrix.rows());
    const int n_rg = static_cast<int>(range_rows.size());
    const int n_slack = n_in + n_rg;

    StandardMapping s;
    s.M = Eigen::MatrixXd(n, nu);
    for (int k = 0; k < nu; ++k) s.M.col(k) = cols[k];
    s.offset = offset;

    const int rows = n_eq + n_in + n_rg;
    s.A = Eigen::MatrixXd::Zero(rows, nu + n_slack);
    s.b = Eigen::VectorXd::Zero(rows);
    if (n_eq) {
        s.A.topLeftCorner(n_eq, nu) = lp.eq_matrix * s.M;
        s.b.head(n_eq) = lp.eq_rhs - lp.eq_matrix * offset;
    }
    if (n_in) {
        s.A.block(n_eq, 0, n_in, nu) = lp.ineq_matrix * s.M;
        s.A.block(n_eq, nu, n_in, n_in).setIdentity();
        s.b.segment(n_eq, n_in) = lp.ineq_rhs - lp.ineq_matrix * offset;
    }
    for (int r = 0; r < n_rg; ++r) {
        s.A(n_eq + n_in + r, range_rows[r].first) = 1.0;
        s.A(n_eq + n_in + r, nu + n_in + r) = 1.0;
        s.b(n_eq + n_in + r) = range_rows[r].second;
    }
    s.c = Eigen::VectorXd::Zero(nu + n_slack);
    s.c.head(nu) = s.M.transpose() * lp.objective;
    return s;
}

LpSolution solve_once(const LinearProgram& lp, const Tolerances& tol) {
    StandardMapping s = to_standard(lp);
    StandardSolution sol = solve_standard(s.A, s.b, s.c, tol);
    LpSolution out;
    out.x = s.offset + s.M * sol.x.head(s.M.cols());
    out.value = lp.objective.dot(out.x);
    out.pivots = sol.pivots;
    return out;
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opt) {
    lp.validate();
    LpSolution best = solve_once(lp, opt.tol);
    if (!opt.lexicographic) return best;

    // Walk the optimal face coordinate by coordinate.
    const int n = lp.num_vars();
    // The face is kept thin so the walk cannot trade objective value for a
    // smaller coordinate; the refined basic solutions are accurate far below
    // the LP tolerance.
    const double face_slack = 1e-3 * opt.tol.lp * (1.0 + std::abs(best.value));
    LinearProgram face = lp;
    face.ineq_matrix.conservativeResize(lp.ineq_matrix.rows() + 1, n);
    face.ineq_matrix.row(lp.ineq_matrix.rows()) = lp.objective.transpose();
    face.ineq_rhs.conservativeResize(lp.ineq_rhs.size() + 1);
    face.ineq_rhs(lp.ineq_rhs.size()) = best.value + face_slack;
    Eigen::VectorXd x = best.x;
    int pivots = best.pivots;
    for (int k = 0; k < n; ++k) {
        face.objective = Eigen::VectorXd::Zero(n);
        face.objective(k) = 1.0;
        LpSolution step;
        try {
            step = solve_once(face, opt.tol);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::Unbounded) break;  // lexicographic order undefined past here
            throw;
        }
        pivots += step.pivots;
        x = step.x;
        const double fix = step.x(k);
        face.lower(k) = std::max(lp.lower(k), fix - face_slack);
        face.upper(k) = std::min(lp.upper(k), fix + face_slack);
        if (face.lower(k) > face.upper(k)) face.lower(k) = face.upper(k);
    }
    LpSolution out;
    out.x = x;
    out.value = best.value;
    out.pivots = pivots;
    return out;
}

// ---------------------------------------------------------------------------
// Polytopes and gauges

Polytope::Polytope(Eigen::MatrixXd v) : vertices(std::move(v)) {
    if (vertices.cols() == 0) throw Error(ErrorKind::EmptyPolytope, "polytope needs at least one vertex");
}

namespace {

// Atoms normalized to unit max-norm; the scale moves into the weights so
// that very steep functionals do not wreck the tableau.
struct NormalizedAtoms {
    Eigen::MatrixXd atoms;
    Eigen::VectorXd weights;
};

NormalizedAtoms normalize_atoms(const AtomicGauge& g) {
    const int J = static_cast<int>(g.atoms.cols());
    NormalizedAtoms out;
    out.atoms = g.atoms;
    out.weights = g.weights.size() ? g.weights : Eigen::VectorXd::Ones(J);
    require_dim(out.weights.size(), J, "atom weights");
    for (int j = 0; j < J; ++j) {
        const double s = out.atoms.col(j).cwiseAbs().maxCoeff();
        if (s > 0) {
            out.atoms.col(j) /= s;
            out.weights(j) /= s;
        }
    }
    return out;
}

double atomic_value(const AtomicGauge& g, const Eigen::VectorXd& v, const Tolerances& tol) {
    const int n = static_cast<int>(v.size());
    require_dim(g.atoms.rows(), n, "gauge atoms");
    if (g.atoms.cols() == 0) {
        if (v.cwiseAbs().maxCoeff() <= tol.lp) return 0.0;
        throw Error(ErrorKind::Infeasible, "vector outside the span of an empty atom set");
    }
    const NormalizedAtoms na = normalize_atoms(g);
    const int J = static_cast<int>(na.atoms.cols());
    Eigen::MatrixXd A(n, 2 * J);
    A << na.atoms, -na.atoms;
    Eigen::VectorXd c(2 * J);
    c << na.weights, na.weights;
    return solve_standard(A, v, c, tol).value;
}

NearestPoint nearest_maxabs(const Eigen::VectorXd& z, const Polytope& P, const MaxAbsGauge& g,
                            const Tolerances& tol) {
    const int K = P.size();
    const int J = static_cast<int>(g.functionals.rows());
    NearestPoint out;
    if (J == 0) {
        out.weights = Eigen::VectorXd::Zero(K);
        out.weights(0) = 1.0;
        out.point = P.vertex(0);
        return out;
    }
    // Dual of  min t  s.t.  |F(z - V w)| <= t,  sum w = 1,  w >= 0,
    // kept in primal form here: rows = 2J + 1 is fine for the gauges that
    // reach this path (few functionals).
    LinearProgram lp(K + 1);
    lp.objective(K) = 1.0;
    lp.lower(K) = -kInf;
    const Eigen::MatrixXd FV = g.functionals * P.vertices;
    const Eigen::VectorXd Fz = g.functionals * z;
    lp.ineq_matrix = Eigen::MatrixXd::Zero(2 * J, K + 1);
    lp.ineq_rhs = Eigen::VectorXd(2 * J);
    lp.ineq_matrix.topLeftCorner(J, K) = -FV;
    lp.ineq_matrix.topRightCorner(J, 1).setConstant(-1.0);
    lp.ineq_rhs.head(J) = -Fz;
    lp.ineq_matrix.bottomLeftCorner(J, K) = FV;
    lp.ineq_matrix.bottomRightCorner(J, 1).setConstant(-1.0);
    lp.ineq_rhs.tail(J) = Fz;
    lp.eq_matrix = Eigen::MatrixXd::Zero(1, K + 1);
    lp.eq_matrix.row(0).head(K).setOnes();
    lp.eq_rhs = Eigen::VectorXd::Ones(1);
    LpOptions opt;
    opt.tol = tol;
    opt.lexicographic = false;
    const LpSolution sol = solve_lp(lp, opt);
    out.weights = sol.x.head(K);
    out.point = P.vertices * out.weights;
    out.distance = (g.functionals * (z - out.point)).cwiseAbs().maxCoeff();
    return out;
}

NearestPoint nearest_atomic(const Eigen::VectorXd& z, const Polytope& P, const AtomicGauge& g,
                            const Tolerances& tol) {
    const int n = static_cast<int>(z.size());
    const int K = P.size();
    const NormalizedAtoms na = normalize_atoms(g);
    const int J = static_cast<int>(na.atoms.cols());
    // min sum w_j (c+_j + c-_j)  s.t.  V w + A (c+ - c-) = z,  sum w = 1.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + 1, K + 2 * J);
    A.topLeftCorner(n, K) = P.vertices;
    A.block(0, K, n, J) = na.atoms;
    A.block(0, K + J, n, J) = -na.atoms;
    A.row(n).head(K).setOnes();
    Eigen::VectorXd b(n + 1);
    b << z, 1.0;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(K + 2 * J);
    c.segment(K, J) = na.weights;
    c.segment(K + J, J) = na.weights;
    const StandardSolution sol = solve_standard(A, b, c, tol);
    NearestPoint out;
    out.weights = sol.x.head(K);
    const double total = out.weights.sum();
    if (total > 0) out.weights /= total;
    out.point = P.vertices * out.weights;
    out.distance = sol.value;
    return out;
}

// Wolfe's minimum-norm-point method on the translated vertex set.  Finite
// termination; the stopping rule is the usual optimality gap on |x|^2.
NearestPoint nearest_euclidean(const Eigen::VectorXd& z, const Polytope& P, double scale,
                               const Tolerances& tol) {
    const int K = P.size();
    Eigen::MatrixXd Q = P.vertices.colwise() - z;
    double qmax = 0.0;
    for (int k = 0; k < K; ++k) qmax = std::max(qmax, Q.col(k).squaredNorm());
    const double gap_tol = std::max(tol.euclid * tol.euclid, 1e-24) * std::max(1.0, qmax);

    std::vector<int> S;
    std::vector<double> lam;
    int start = 0;
    for (int k = 1; k < K; ++k)
        if (Q.col(k).squaredNorm() < Q.col(start).squaredNorm()) start = k;
    S.push_back(start);
    lam.push_back(1.0);
    Eigen::VectorXd x = Q.col(start);

    for (int major = 0; major < 10 * K + 100; ++major) {
        int j = 0;
        double best = Q.col(0).dot(x);
        for (int k = 1; k < K; ++k) {
            const double v = Q.col(k).dot(x);
            if (v < best) {
                best = v;
                j = k;
            }
        }
        if (x.squaredNorm() - best <= gap_tol) break;
        if (std::find(S.begin(), S.end(), j) != S.end()) break;  // stalled on rounding
        S.push_back(j);
        lam.push_back(0.0);

        for (int minor = 0; minor < K + 5; ++minor) {
            const int s = static_cast<int>(S.size());
            Eigen::MatrixXd Ms(s, s);
            for (int a = 0; a < s; ++a)
                for (int bidx = 0; bidx < s; ++bidx) Ms(a, bidx) = Q.col(S[a]).dot(Q.col(S[bidx]));
            Eigen::MatrixXd KKT = Eigen::MatrixXd::Zero(s + 1, s + 1);
            KKT.topLeftCorner(s, s) = Ms;
            KKT.block(0, s, s, 1).setOnes();
            KKT.block(s, 0, 1, s).setOnes();
            Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s + 1);
            rhs(s) = 1.0;
            const Eigen::VectorXd sol = KKT.completeOrthogonalDecomposition().solve(rhs);
            Eigen::VectorXd alpha = sol.head(s);
            if (alpha.minCoeff() > 1e-14) {
                for (int a = 0; a < s; ++a) lam[a] = alpha(a);
                break;
            }
            double theta = 1.0;
            for (int a = 0; a < s; ++a)
                if (alpha(a) <= 1e-14) {
                    const double denom = lam[a] - alpha(a);
                    if (denom > 0) theta = std::min(theta, lam[a] / denom);
                }
            for (int a = 0; a < s; ++a) lam[a] = lam[a] + theta * (alpha(a) - lam[a]);
            std::vector<int> S2;
            std::vector<double> l2;
            for (int a = 0; a < s; ++a)
                if (lam[a] > 1e-14) {
                    S2.push_back(S[a]);
                    l2.push_back(lam[a]);
                }
            S.swap(S2);
            lam.swap(l2);
            double tot = 0.0;
            for (double v : lam) tot += v;
            for (double& v : lam) v /= tot;
        }
        x.setZero();
        for (size_t a = 0; a < S.size(); ++a) x += lam[a] * Q.col(S[a]);
    }

    NearestPoint out;
    out.weights = Eigen::VectorXd::Zero(K);
    for (size_t a = 0; a < S.size(); ++a) out.weights(S[a]) = lam[a];
    out.point = P.vertices * out.weights;
    out.distance = scale * (z - out.point).norm();
    return out;
}

}  // namespace

double gauge_value(const Gauge& g, const Eigen::VectorXd& v, const Tolerances& tol) {
    if (const auto* m = std::get_if<MaxAbsGauge>(&g)) {
        if (m->functionals.rows() == 0) return 0.0;
        require_dim(m->functionals.cols(), v.size(), "gauge functionals");
        return (m->functionals * v).cwiseAbs().maxCoeff();
    }
    if (const auto* a = std::get_if<AtomicGauge>(&g)) return atomic_value(*a, v, tol);
    return std::get<EuclideanGauge>(g).scale * v.norm();
}

NearestPoint nearest_point(const Eigen::VectorXd& z, const Polytope& P, const Gauge& g,
                           const Tolerances& tol) {
    if (P.size() == 0) throw Error(ErrorKind::EmptyPolytope, "nearest_point on empty polytope");
    require_dim(z.size(), P.dim(), "query point");
    if (const auto* m = std::get_if<MaxAbsGauge>(&g)) return nearest_maxabs(z, P, *m, tol);
    if (const auto* a = std::get_if<AtomicGauge>(&g)) return nearest_atomic(z, P, *a, tol);
    return nearest_euclidean(z, P, std::get<EuclideanGauge>(g).scale, tol);
}

bool polytope_contains(const Polytope& P, const Eigen::VectorXd& z, double tol) {
    const int n = P.dim();
    const int K = P.size();
    require_dim(z.size(), n, "query point");
    // Feasibility of V w = z, sum w = 1, w >= 0 with explicit slack so that
    // the answer does not depend on the phase-1 tolerance.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + 1, K + 2 * (n + 1));
    A.topLeftCorner(n, K) = P.vertices;
    A.row(n).head(K).setOnes();
    A.block(0, K, n + 1, n + 1).setIdentity();
    A.block(0, K + n + 1, n + 1, n + 1) = -Eigen::MatrixXd::Identity(n + 1, n + 1);
    Eigen::VectorXd b(n + 1);
    b << z, 1.0;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(K + 2 * (n + 1));
    c.tail(2 * (n + 1)).setOnes();
    return solve_standard(A, b, c).value <= tol;
}

}  // namespace qgh
