#include "drlq/qp_oracle.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace drlq {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Variables are interleaved by node: [x_0 u_0 x_1 u_1 ... x_{N-1} u_{N-1} x_N].
struct Layout {
  int n, m, steps;
  int x(int k, int i) const { return k * (n + m) + i; }
  int u(int k, int j) const { return k * (n + m) + n + j; }
  int size() const { return steps * (n + m) + n; }
};

struct Transcription {
  SparseMatrix H;  // objective Hessian (diagonal)
  SparseMatrix C;  // equality constraints C w = d
  Eigen::VectorXd d;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

Transcription transcribe(const SampledProblem& p, const Layout& lay) {
  const ProblemSpec& spec = p.spec();
  const double h = p.grid().h();
  const int n = lay.n, m = lay.m, N = lay.steps;
  Transcription t;
  const int vars = lay.size();
  const int rows = (N + 2) * n;

  std::vector<Triplet> hess;
  t.lower.resize(vars);
  t.upper.resize(vars);
  for (int k = 0; k <= N; ++k) {
    for (int i = 0; i < n; ++i) {
      if (k < N) hess.emplace_back(lay.x(k, i), lay.x(k, i), h * p.q(k)[i]);
      t.lower[lay.x(k, i)] = spec.x_lower[i];
      t.upper[lay.x(k, i)] = spec.x_upper[i];
    }
    if (k == N) break;
    for (int j = 0; j < m; ++j) {
      hess.emplace_back(lay.u(k, j), lay.u(k, j), h * p.r(k)[j]);
      t.lower[lay.u(k, j)] = spec.u_lower[j];
      t.upper[lay.u(k, j)] = spec.u_upper[j];
    }
  }
  t.H.resize(vars, vars);
  t.H.setFromTriplets(hess.begin(), hess.end());

  std::vector<Triplet> con;
  t.d = Eigen::VectorXd::Zero(rows);
  for (int i = 0; i < n; ++i) {
    con.emplace_back(i, lay.x(0, i), 1.0);
    t.d[i] = spec.x0[i];
  }
  for (int k = 0; k < N; ++k) {
    const Eigen::MatrixXd& A = p.A(k);
    const Eigen::MatrixXd& B = p.B(k);
    const int row0 = (k + 1) * n;
    for (int i = 0; i < n; ++i) {
      con.emplace_back(row0 + i, lay.x(k + 1, i), 1.0);
      con.emplace_back(row0 + i, lay.x(k, i), -1.0);
      for (int c = 0; c < n; ++c) {
        if (A(i, c) != 0.0) con.emplace_back(row0 + i, lay.x(k, c), -h * A(i, c));
      }
      for (int j = 0; j < m; ++j) {
        if (B(i, j) != 0.0) con.emplace_back(row0 + i, lay.u(k, j), -h * B(i, j));
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    con.emplace_back((N + 1) * n + i, lay.x(N, i), 1.0);
    t.d[(N + 1) * n + i] = spec.xf[i];
  }
  t.C.resize(rows, vars);
  t.C.setFromTriplets(con.begin(), con.end());
  return t;
}

Eigen::VectorXd clamp(const Eigen::VectorXd& w, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  return w.cwiseMax(lo).cwiseMin(hi);
}

double projected_gradient_norm(const Eigen::VectorXd& w, const Eigen::VectorXd& g, const Eigen::VectorXd& lo,
                               const Eigen::VectorXd& hi) {
  return (w - clamp(w - g, lo, hi)).cwiseAbs().maxCoeff();
}

/**
 * min 1/2 w'Mw + c'w over lo <= w <= hi, M positive definite.
 *
 * Newton steps on the variables not held at a bound by the gradient, projected line
 * search, and a projected gradient step with 1/L as fallback when the search stalls.
 */
class BoxQp {
 public:
  BoxQp(const SparseMatrix& M, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi)
      : M_(M), lo_(lo), hi_(hi) {
    lipschitz_ = 0.0;
    for (int c = 0; c < M_.outerSize(); ++c) {
      double col = 0.0;
      for (SparseMatrix::InnerIterator it(M_, c); it; ++it) col += std::abs(it.value());
      lipschitz_ = std::max(lipschitz_, col);
    }
  }

  int solve(const Eigen::VectorXd& c, Eigen::VectorXd& w, double tol, int max_iterations) const {
    const Eigen::Index size = w.size();
    w = clamp(w, lo_, hi_);
    std::vector<int> index(static_cast<std::size_t>(size));
    for (int it = 0; it < max_iterations; ++it) {
      const Eigen::VectorXd Mw = M_ * w;
      const Eigen::VectorXd g = Mw + c;
      // Rounding in M w limits how small the projected gradient can get.
      const double floor = 64.0 * kEps * (Mw.cwiseAbs().maxCoeff() + c.cwiseAbs().maxCoeff());
      if (projected_gradient_norm(w, g, lo_, hi_) <= std::max(tol, floor)) return it;

      std::vector<int> free;
      std::fill(index.begin(), index.end(), -1);
      for (Eigen::Index i = 0; i < size; ++i) {
        const bool held = (w[i] <= lo_[i] && g[i] > 0.0) || (w[i] >= hi_[i] && g[i] < 0.0);
        if (!held) {
          index[static_cast<std::size_t>(i)] = static_cast<int>(free.size());
          free.push_back(static_cast<int>(i));
        }
      }

      Eigen::VectorXd step = Eigen::VectorXd::Zero(size);
      if (!free.empty()) {
        std::vector<Triplet> sub;
        for (int col : free) {
          for (SparseMatrix::InnerIterator e(M_, col); e; ++e) {
            const int row = index[static_cast<std::size_t>(e.row())];
            if (row >= 0) sub.emplace_back(row, index[static_cast<std::size_t>(col)], e.value());
          }
        }
        SparseMatrix Mff(static_cast<Eigen::Index>(free.size()), static_cast<Eigen::Index>(free.size()));
        Mff.setFromTriplets(sub.begin(), sub.end());
        Eigen::VectorXd gf(static_cast<Eigen::Index>(free.size()));
        for (std::size_t i = 0; i < free.size(); ++i) gf[static_cast<Eigen::Index>(i)] = g[free[i]];
        Eigen::SimplicialLDLT<SparseMatrix> ldlt(Mff);
        if (ldlt.info() == Eigen::Success) {
          const Eigen::VectorXd df = ldlt.solve(-gf);
          for (std::size_t i = 0; i < free.size(); ++i) step[free[i]] = df[static_cast<Eigen::Index>(i)];
        }
      }

      // The change in objective is evaluated from the increment itself; differencing
      // two large objective values loses everything near the optimum.
      bool accepted = false;
      double alpha = 1.0;
      for (int ls = 0; ls < 40 && step.allFinite() && step.any(); ++ls, alpha *= 0.5) {
        const Eigen::VectorXd delta = clamp(w + alpha * step, lo_, hi_) - w;
        const double slope = g.dot(delta);
        if (slope + 0.5 * delta.dot(M_ * delta) <= 1e-4 * slope) {
          w += delta;
          accepted = true;
          if (ls == 0 && delta.cwiseAbs().maxCoeff() <= kEps * std::max(1.0, w.cwiseAbs().maxCoeff())) {
            return it + 1;
          }
          break;
        }
      }
      if (!accepted) {
        const Eigen::VectorXd delta = clamp(w - g / lipschitz_, lo_, hi_) - w;
        if (delta.cwiseAbs().maxCoeff() <= kEps * std::max(1.0, w.cwiseAbs().maxCoeff())) return it;
        w += delta;
      }
    }
    throw Error(ErrorCode::IterationLimit, "bound-constrained subproblem did not converge");
  }

 private:
  const SparseMatrix& M_;
  const Eigen::VectorXd& lo_;
  const Eigen::VectorXd& hi_;
  double lipschitz_ = 1.0;
};

}  // namespace

QpOracleResult solve_discretized_qp_detailed(const ProblemSpec& spec, const TimeGrid& grid,
                                             const QpOracleSettings& settings) {
  if (!(settings.tolerance > 0.0) || settings.max_outer_iterations < 1 || settings.max_inner_iterations < 1) {
    throw Error(ErrorCode::InvalidArgument, "oracle tolerance and iteration limits must be positive");
  }
  const SampledProblem problem(spec, grid);
  const Layout lay{spec.n, spec.m, grid.n_steps()};
  const Transcription t = transcribe(problem, lay);
  const double tol = settings.tolerance;

  Eigen::VectorXd w = Eigen::VectorXd::Zero(lay.size());
  Eigen::VectorXd y = Eigen::VectorXd::Zero(t.C.rows());
  const SparseMatrix CtC = SparseMatrix(t.C.transpose() * t.C);
  const Eigen::VectorXd Ctd = t.C.transpose() * t.d;

  constexpr double kMaxPenalty = 1e10;
  double rho = 1e4;
  double previous = kInf;
  int stalled = 0;
  QpOracleResult out;
  for (int outer = 1; outer <= settings.max_outer_iterations; ++outer) {
    const SparseMatrix M = t.H + rho * CtC;
    const Eigen::VectorXd c = t.C.transpose() * y - rho * Ctd;
    const BoxQp qp(M, t.lower, t.upper);
    out.inner_iterations += qp.solve(c, w, 1e-3 * tol, settings.max_inner_iterations);

    const Eigen::VectorXd violation = t.C * w - t.d;
    const double viol = violation.cwiseAbs().maxCoeff();
    y += rho * violation;
    const Eigen::VectorXd grad = t.H * w + t.C.transpose() * y;
    out.equality_residual = viol;
    out.kkt_residual = projected_gradient_norm(w, grad, t.lower, t.upper);
    out.outer_iterations = outer;
    if (viol <= tol && out.kkt_residual <= tol) {
      out.solution = TrajectoryPair::zeros(grid.n_nodes(), spec.n, spec.m);
      for (int k = 0; k <= lay.steps; ++k) {
        for (int i = 0; i < spec.n; ++i) out.solution.x(k, i) = w[lay.x(k, i)];
        const int kc = std::min(k, lay.steps - 1);
        for (int j = 0; j < spec.m; ++j) out.solution.u(k, j) = w[lay.u(kc, j)];
      }
      out.objective = 0.5 * w.dot(t.H * w);
      return out;
    }
    if (viol > tol && viol > 0.25 * previous) {
      if (rho >= kMaxPenalty && viol > 0.9 * previous) {
        if (++stalled >= 5) {
          std::ostringstream os;
          os << "equality residual stalls at " << viol << "; the bounds exclude every Euler trajectory";
          throw Error(ErrorCode::InfeasibleDiscretization, os.str());
        }
      }
      rho = std::min(10.0 * rho, kMaxPenalty);
    } else {
      stalled = 0;
    }
    previous = viol;
  }
  std::ostringstream os;
  os << "augmented Lagrangian stopped after " << settings.max_outer_iterations
     << " rounds (equality residual " << out.equality_residual << ", KKT residual " << out.kkt_residual << ")";
  throw Error(ErrorCode::IterationLimit, os.str());
}

TrajectoryPair solve_discretized_qp(const ProblemSpec& spec, const TimeGrid& grid, double tolerance) {
  QpOracleSettings settings;
  settings.tolerance = tolerance;
  return solve_discretized_qp_detailed(spec, grid, settings).solution;
}

}  // namespace drlq
