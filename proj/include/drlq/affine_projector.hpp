#pragma once

#include <memory>
#include <string_view>

#include "drlq/core_model.hpp"
#include "drlq/dense_lu.hpp"

namespace drlq {

/**
 * How the costate is advanced alongside the explicit-Euler state step.
 *
 * DiscreteAdjoint uses the exact adjoint of the Euler state recursion,
 *   lambda_{k+1} = (I + h A_{k+1}')^{-1} (lambda_k - h (x_{k+1} - xm_{k+1})),
 * which makes the projector the orthogonal projection onto the Euler-discretized
 * affine set in discrete_inner_product(). The control sample at the last node is
 * held from the final step.
 *
 * ExplicitEuler advances [x; lambda] by h times the right-hand side of the linear
 * Hamiltonian system at the current node, for both x and lambda. It agrees with
 * DiscreteAdjoint to first order in h but is only an oblique projection.
 */
enum class CostateScheme { DiscreteAdjoint, ExplicitEuler };

const char* to_string(CostateScheme scheme);
/// Accepts "adjoint" or "euler"; anything else raises InvalidArgument.
CostateScheme parse_costate_scheme(std::string_view name);

/// Cached: shooting Jacobian computed once per problem (it depends on A, B and the
/// grid only). PerProjection: n + 1 integrations on every call.
enum class JacobianPolicy { Cached, PerProjection };

struct HamiltonianRun {
  Trajectory x;       // (N+1) x n
  Trajectory lambda;  // (N+1) x n
};

/// Integrates the state/costate system with forcing (xm, um) = (forcing.x, forcing.u)
/// from x(t0) = spec.x0 and lambda(t0) = lambda0. Throws NonFiniteState on overflow.
HamiltonianRun integrate_hamiltonian(const SampledProblem& problem, const Eigen::VectorXd& lambda0,
                                     const TrajectoryPair& forcing,
                                     CostateScheme scheme = CostateScheme::DiscreteAdjoint);

struct ShootingWorkspace {
  Eigen::VectorXd z_base;    // terminal state of the lambda0 = 0 run
  Eigen::MatrixXd jacobian;  // columns z(tf, e_i) - z(tf, 0)
  Eigen::VectorXd lambda0;   // solved initial costate
};

struct ProjectionResult {
  TrajectoryPair projection;
  CostateTrajectory costate;
  ShootingWorkspace workspace;
};

/**
 * Projection onto the set of pairs satisfying the discretized dynamics and both
 * boundary conditions, computed by single shooting on the initial costate.
 *
 * The map lambda0 -> x(tf) is affine, so one linear solve recovers the missing
 * initial condition exactly. Instances are immutable after construction and may be
 * shared between threads.
 */
class AffineProjector {
 public:
  struct Options {
    CostateScheme scheme = CostateScheme::DiscreteAdjoint;
    JacobianPolicy jacobian = JacobianPolicy::Cached;
  };

  explicit AffineProjector(std::shared_ptr<const SampledProblem> problem);
  AffineProjector(std::shared_ptr<const SampledProblem> problem, Options options);

  ProjectionResult project(const TrajectoryPair& z) const;

  const SampledProblem& problem() const { return *problem_; }
  std::shared_ptr<const SampledProblem> shared_problem() const { return problem_; }
  const Options& options() const { return options_; }
  /// Cached Jacobian (empty under JacobianPolicy::PerProjection).
  const Eigen::MatrixXd& jacobian() const { return jacobian_; }

  /// Runs the integrator from x(t0) = initial_state. forcing may be null (zero forcing).
  /// Fills the control of the projected pair when control_out is non-null.
  void integrate(const Eigen::VectorXd& initial_state, const Eigen::VectorXd& lambda0,
                 const TrajectoryPair* forcing, Trajectory& x, Trajectory& lambda,
                 Trajectory* control_out) const;

 private:
  Eigen::VectorXd terminal_state(const Eigen::VectorXd& initial_state, const Eigen::VectorXd& lambda0,
                                 const TrajectoryPair* forcing) const;
  Eigen::MatrixXd assemble_jacobian(const TrajectoryPair* forcing, const Eigen::VectorXd& z_base) const;

  std::shared_ptr<const SampledProblem> problem_;
  Options options_;
  std::vector<Eigen::MatrixXd> adjoint_step_;  // (I + h A_k')^{-1}, one entry if time-invariant
  Eigen::MatrixXd jacobian_;
  PivotedLU jacobian_lu_;
};

ProjectionResult project_affine(const ProblemSpec& spec, const TimeGrid& grid, const TrajectoryPair& z,
                                CostateScheme scheme = CostateScheme::DiscreteAdjoint);

}  // namespace drlq
