#pragma once

#include "drlq/core_model.hpp"

namespace drlq {

struct QpOracleSettings {
  double tolerance = 1e-10;  // equality and projected-KKT residual targets
  int max_outer_iterations = 80;
  int max_inner_iterations = 500;
};

struct QpOracleResult {
  TrajectoryPair solution;       // u at the last node repeats u_{N-1}
  double objective = 0.0;        // h/2 sum_{k<N} (x'Qx + u'Ru)
  double equality_residual = 0.0;
  double kkt_residual = 0.0;
  int outer_iterations = 0;
  int inner_iterations = 0;
};

/**
 * Direct transcription baseline. Solves
 *
 *   min  h/2 sum_{k<N} (x_k'Q_k x_k + u_k'R_k u_k)
 *   s.t. x_0 = x0,  x_{k+1} = x_k + h (A_k x_k + B_k u_k),  x_N = xf,  box bounds,
 *
 * with an augmented Lagrangian over the equalities and a projected Newton method for the
 * bound-constrained subproblems. Throws InfeasibleDiscretization when the equality residual
 * stalls at the largest penalty and IterationLimit when the loop budget runs out.
 */
QpOracleResult solve_discretized_qp_detailed(const ProblemSpec& spec, const TimeGrid& grid,
                                             const QpOracleSettings& settings = {});

TrajectoryPair solve_discretized_qp(const ProblemSpec& spec, const TimeGrid& grid, double tolerance = 1e-10);

}  // namespace drlq
