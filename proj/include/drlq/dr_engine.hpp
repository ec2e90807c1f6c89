#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "drlq/affine_projector.hpp"
#include "drlq/prox_box.hpp"

namespace drlq {

struct DrSettings {
  double gamma = 0.5;
  double epsilon = 1e-8;
  int max_iterations = 200;
  /// Starting iterate; all zeros when empty.
  std::optional<TrajectoryPair> initial;
  CostateScheme scheme = CostateScheme::DiscreteAdjoint;

  /// Throws InvalidArgument on gamma outside (0,1), epsilon <= 0 or max_iterations < 1.
  void validate() const;
};

enum class Termination { ToleranceMet, IterationCap };

const char* to_string(Termination t);

struct SolveReport {
  int iterations = 0;
  Termination terminated_by = Termination::IterationCap;
  std::vector<LinfDistance> residual_history;
  double wall_time = 0.0;  // seconds, iteration loop only
  double objective_value = 0.0;
};

struct DrStepResult {
  TrajectoryPair next;
  TrajectoryPair shadow;       // prox_f(current), inside the box
  ProjectionResult reflected;  // projection of 2 * shadow - current
};

/// One application of T = Id - Prox_f + P_A (2 Prox_f - Id).
DrStepResult dr_step(const TrajectoryPair& current, const AffineProjector& projector,
                     const ProxParameters& params);

struct DrSolution {
  TrajectoryPair solution;       // last shadow iterate
  CostateTrajectory costate_dr;  // costate of the final affine projection
  SolveReport report;
};

/**
 * Douglas-Rachford iteration on trajectory pairs.
 *
 * Stops when max(|x^{k+1} - x^k|_inf, |u^{k+1} - u^k|_inf) <= epsilon or after
 * max_iterations updates, and returns the box-feasible shadow pair in both cases.
 * The projector may be shared between concurrent solves.
 */
DrSolution dr_solve(const AffineProjector& projector, const DrSettings& settings);

DrSolution dr_solve(const ProblemSpec& spec, const TimeGrid& grid, const DrSettings& settings);

}  // namespace drlq
