#include "drlq/prox_box.hpp"

#include <cmath>
#include <string>

namespace drlq {

ProxParameters ProxParameters::from_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "gamma must lie in (0, 1), got " + std::to_string(gamma));
  }
  return {(1.0 - gamma) / gamma, gamma};
}

ProxParameters ProxParameters::from_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::InvalidArgument, "beta must be positive, got " + std::to_string(beta));
  }
  return {beta, 1.0 / (1.0 + beta)};
}

TrajectoryPair prox_f(const TrajectoryPair& z, const ProxParameters& params, const SampledProblem& problem) {
  problem.check_shape(z);
  const ProblemSpec& spec = problem.spec();
  TrajectoryPair out{Trajectory(z.x.rows(), z.x.cols()), Trajectory(z.u.rows(), z.u.cols())};
  for (int k = 0; k < problem.n_nodes(); ++k) {
    const Eigen::VectorXd& q = problem.q(k);
    const Eigen::VectorXd& r = problem.r(k);
    for (int i = 0; i < spec.n; ++i) {
      out.x(k, i) = prox_scalar(z.x(k, i), params.beta, q[i], spec.x_lower[i], spec.x_upper[i]);
    }
    for (int j = 0; j < spec.m; ++j) {
      out.u(k, j) = prox_scalar(z.u(k, j), params.beta, r[j], spec.u_lower[j], spec.u_upper[j]);
    }
  }
  return out;
}

TrajectoryPair prox_f(const TrajectoryPair& z, const ProxParameters& params, const ProblemSpec& spec,
                      const TimeGrid& grid) {
  return prox_f(z, params, SampledProblem(spec, grid));
}

}  // namespace drlq
