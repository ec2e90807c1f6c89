#pragma once

#include "drlq/core_model.hpp"

namespace drlq {

/// Objective weight beta and the DR parameter gamma = 1 / (1 + beta).
struct ProxParameters {
  double beta = 1.0;
  double gamma = 0.5;

  /// Throws InvalidArgument unless 0 < gamma < 1.
  static ProxParameters from_gamma(double gamma);
  /// Throws InvalidArgument unless beta > 0.
  static ProxParameters from_beta(double beta);
};

/// Scalar form of the prox: clamp(value / (beta * weight + 1), [lower, upper]).
inline double prox_scalar(double value, double beta, double weight, double lower, double upper) {
  const double scaled = value / (beta * weight + 1.0);
  return scaled < lower ? lower : (scaled > upper ? upper : scaled);
}

/**
 * Proximal mapping of f = iota_box + beta/2 (x'Qx + u'Ru).
 *
 * Pointwise in time: y_i = clamp(x_i / (beta q_i + 1)) and v_j = clamp(u_j / (beta r_j + 1)),
 * with q, r evaluated at each node. The result always lies in the box.
 */
TrajectoryPair prox_f(const TrajectoryPair& z, const ProxParameters& params, const SampledProblem& problem);

TrajectoryPair prox_f(const TrajectoryPair& z, const ProxParameters& params, const ProblemSpec& spec,
                      const TimeGrid& grid);

}  // namespace drlq
