#pragma once

#include <vector>

#include "drlq/core_model.hpp"

namespace drlq {

/// A node counts as active when |value - bound| <= relative * |bound| + absolute.
struct ActivityTolerance {
  double relative = 1e-6;
  double absolute = 1e-9;

  bool at_bound(double value, double bound) const;
};

enum class JunctionSide { EnteringBound, LeavingBound };

/**
 * Transition of one control component between a saturated run and an interior run.
 *
 * node_index is the saturated node of the transition and interior_node its interior
 * neighbour. denominator is b_j' lambda_DR at the node used for the scale factor;
 * it stays NaN until recover_costate() evaluates it.
 */
struct JunctionPoint {
  int control_index = 0;
  int node_index = 0;
  int interior_node = 0;
  JunctionSide side = JunctionSide::LeavingBound;
  double denominator = 0.0;
};

/// Scans every control component for saturated/interior transitions, in node order.
std::vector<JunctionPoint> detect_junctions(const Trajectory& u, const ProblemSpec& spec,
                                            ActivityTolerance tol = {});

struct CostateRecovery {
  CostateTrajectory lambda;
  double alpha = 0.0;
  JunctionPoint junction;  // the junction used for alpha
};

/**
 * Rescales the projector costate: lambda = alpha * lambda_DR with
 * alpha = -r_j u_j / (b_j' lambda_DR) at a junction.
 *
 * Among usable junctions (|b_j' lambda_DR| above a relative threshold) the one with
 * the largest |b_j' lambda_DR| is chosen; the ratio is taken at its interior node,
 * where the unsaturated control law holds. Throws NoUsableJunction when none qualifies.
 */
CostateRecovery recover_costate(const CostateTrajectory& lambda_dr, const TrajectoryPair& solution,
                                const SampledProblem& problem, const std::vector<JunctionPoint>& junctions);

/// d lambda / dt by central differences, first-order one-sided at the end nodes.
Trajectory costate_derivative(const Trajectory& lambda, double h);

/**
 * State-constraint multipliers from the adjoint equation.
 *
 * residual = -Q x - A' lambda - lambda_dot; where x_i sits on its upper bound
 * mu1_i = max(residual_i, 0), on its lower bound mu2_i = max(-residual_i, 0), zero
 * elsewhere. Only one active state constraint per node is supported; more raise
 * UnsupportedActiveSet.
 */
MultiplierPair recover_multipliers(const TrajectoryPair& solution, const CostateTrajectory& lambda,
                                   const SampledProblem& problem, ActivityTolerance tol = {});

/// Nodes where some state component enters or leaves its bound.
std::vector<int> state_transition_nodes(const Trajectory& x, const ProblemSpec& spec, ActivityTolerance tol = {});

}  // namespace drlq
