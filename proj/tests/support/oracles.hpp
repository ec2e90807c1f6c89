// Independent reference computations for the tests. Nothing here calls the
// projector or the DR loop.
#pragma once

#include <Eigen/Dense>

#include <random>

#include "drlq/core_model.hpp"

namespace drlq::oracle {

inline TrajectoryPair random_pair(int nodes, int n, int m, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  TrajectoryPair z = TrajectoryPair::zeros(nodes, n, m);
  for (Eigen::Index i = 0; i < z.x.size(); ++i) z.x.data()[i] = dist(rng);
  for (Eigen::Index i = 0; i < z.u.size(); ++i) z.u.data()[i] = dist(rng);
  return z;
}

inline double pair_norm(const TrajectoryPair& z, double h) { return std::sqrt(discrete_inner_product(z, z, h)); }

/**
 * Projection onto the Euler-discretized affine set as one dense KKT solve.
 *
 * Unknowns are x_0..x_N and u_0..u_{N-1}; the metric weights x_k and u_k by h for
 * k < N (x_N is pinned by the terminal condition). The last control sample repeats
 * u_{N-1}. Only for small grids.
 */
inline TrajectoryPair dense_kkt_projection(const SampledProblem& p, const TrajectoryPair& z) {
  const int n = p.n(), m = p.m(), N = p.grid().n_steps();
  const double h = p.grid().h();
  const int nx = (N + 1) * n, nv = nx + N * m, nc = (N + 2) * n;
  const auto xi = [&](int k, int i) { return k * n + i; };
  const auto ui = [&](int k, int j) { return nx + k * m + j; };

  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nv + nc, nv + nc);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nv + nc);
  for (int k = 0; k < N; ++k) {
    for (int i = 0; i < n; ++i) {
      K(xi(k, i), xi(k, i)) = h;
      rhs[xi(k, i)] = h * z.x(k, i);
    }
    for (int j = 0; j < m; ++j) {
      K(ui(k, j), ui(k, j)) = h;
      rhs[ui(k, j)] = h * z.u(k, j);
    }
  }
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(nc, nv);
  Eigen::VectorXd d = Eigen::VectorXd::Zero(nc);
  for (int i = 0; i < n; ++i) {
    C(i, xi(0, i)) = 1.0;
    d[i] = p.spec().x0[i];
    C((N + 1) * n + i, xi(N, i)) = 1.0;
    d[(N + 1) * n + i] = p.spec().xf[i];
  }
  for (int k = 0; k < N; ++k) {
    for (int i = 0; i < n; ++i) {
      const int row = (k + 1) * n + i;
      C(row, xi(k + 1, i)) = 1.0;
      C(row, xi(k, i)) -= 1.0;
      for (int c = 0; c < n; ++c) C(row, xi(k, c)) -= h * p.A(k)(i, c);
      for (int j = 0; j < m; ++j) C(row, ui(k, j)) -= h * p.B(k)(i, j);
    }
  }
  K.block(nv, 0, nc, nv) = C;
  K.block(0, nv, nv, nc) = C.transpose();
  rhs.tail(nc) = d;
  const Eigen::VectorXd sol = K.fullPivLu().solve(rhs);

  TrajectoryPair out = TrajectoryPair::zeros(N + 1, n, m);
  for (int k = 0; k <= N; ++k) {
    for (int i = 0; i < n; ++i) out.x(k, i) = sol[xi(k, i)];
    for (int j = 0; j < m; ++j) out.u(k, j) = sol[ui(std::min(k, N - 1), j)];
  }
  return out;
}

/**
 * Unconstrained LQ solution on the same grid by shooting the optimality system
 * of the transcribed problem
 *
 *   min h/2 sum_{k<N} (x'Qx + u'Ru),  x_{k+1} = x_k + h (A x_k + B u_k),
 *
 * whose stationarity conditions read u_k = -R^{-1} B' lambda_k and
 * lambda_{k-1} = (I + h A_k') lambda_k + h Q_k x_k. The map lambda_0 -> x_N is affine,
 * so n + 1 sweeps and one solve give the answer.
 */
inline TrajectoryPair unconstrained_shooting(const SampledProblem& p) {
  const int n = p.n(), m = p.m(), N = p.grid().n_steps();
  const double h = p.grid().h();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const auto sweep = [&](const Eigen::VectorXd& lambda0, TrajectoryPair* out) {
    Eigen::VectorXd x = p.spec().x0, lam = lambda0;
    for (int k = 0; k < N; ++k) {
      const Eigen::VectorXd u = -(p.B(k).transpose() * lam).cwiseQuotient(p.r(k));
      if (out) {
        out->x.row(k) = x.transpose();
        out->u.row(k) = u.transpose();
      }
      x = x + h * (p.A(k) * x + p.B(k) * u);
      lam = (I + h * p.A(k + 1).transpose()).partialPivLu().solve(lam - h * p.q(k + 1).cwiseProduct(x));
    }
    if (out) {
      out->x.row(N) = x.transpose();
      out->u.row(N) = out->u.row(N - 1);
    }
    return x;
  };
  const Eigen::VectorXd base = sweep(Eigen::VectorXd::Zero(n), nullptr);
  Eigen::MatrixXd J(n, n);
  for (int i = 0; i < n; ++i) J.col(i) = sweep(Eigen::VectorXd::Unit(n, i), nullptr) - base;
  const Eigen::VectorXd lambda0 = J.partialPivLu().solve(p.spec().xf - base);
  TrajectoryPair out = TrajectoryPair::zeros(N + 1, n, m);
  sweep(lambda0, &out);
  return out;
}

/// Sum over k < N of the quadratic cost, the quantity both DR and the oracle minimize.
inline double left_rectangle_cost(const SampledProblem& p, const TrajectoryPair& z) {
  double total = 0.0;
  for (int k = 0; k < p.grid().n_steps(); ++k) {
    for (int i = 0; i < p.n(); ++i) total += p.q(k)[i] * z.x(k, i) * z.x(k, i);
    for (int j = 0; j < p.m(); ++j) total += p.r(k)[j] * z.u(k, j) * z.u(k, j);
  }
  return 0.5 * p.grid().h() * total;
}

}  // namespace drlq::oracle
