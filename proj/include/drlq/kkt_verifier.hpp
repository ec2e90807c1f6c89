#pragma once

#include <vector>

#include "drlq/core_model.hpp"

namespace drlq {

/// Per-component max_k |clamp(-b_j' lambda_k / r_j, box_j) - u_j(t_k)|. Throws ShapeMismatch.
Eigen::VectorXd control_law_residual(const TrajectoryPair& solution, const CostateTrajectory& lambda,
                                     const SampledProblem& problem);

/// max |mu1 (x - x_upper)|, |mu2 (x_lower - x)| and negative-multiplier violations.
double complementarity_residual(const TrajectoryPair& solution, const MultiplierPair& mu, const ProblemSpec& spec);

struct AdjointResidual {
  double full = 0.0;      // every interior node
  double windowed = 0.0;  // interior nodes farther than `window` from an excluded node
};

/**
 * max |lambda_dot + Q x + A' lambda + mu1 - mu2| over interior nodes, lambda_dot by
 * central differences. Costate kinks make the difference quotient meaningless right at
 * a junction, so the windowed value skips nodes within `window` of any entry in
 * `junction_nodes`.
 */
AdjointResidual adjoint_residual(const TrajectoryPair& solution, const CostateTrajectory& lambda,
                                 const MultiplierPair& mu, const SampledProblem& problem,
                                 const std::vector<int>& junction_nodes = {}, int window = 3);

}  // namespace drlq
