#pragma once

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include "drlq/errors.hpp"

namespace drlq {

/// Trajectory storage: one row per grid node, one column per component.
using Trajectory = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/**
 * Uniform partition of [t0, tf] into N steps (N + 1 nodes).
 *
 * Construct through build_grid(); the fields are fixed afterwards.
 */
class TimeGrid {
 public:
  double t0() const { return t0_; }
  double tf() const { return tf_; }
  int n_steps() const { return n_steps_; }
  int n_nodes() const { return n_steps_ + 1; }
  double h() const { return h_; }
  double node(int k) const { return k == n_steps_ ? tf_ : t0_ + k * h_; }
  std::vector<double> nodes() const;

 private:
  friend TimeGrid build_grid(double t0, double tf, int n_steps);
  TimeGrid(double t0, double tf, int n_steps);

  double t0_ = 0.0;
  double tf_ = 1.0;
  int n_steps_ = 2;
  double h_ = 0.5;
};

/// Throws NonIncreasingInterval when tf <= t0 and GridTooCoarse when n_steps < 2.
TimeGrid build_grid(double t0, double tf, int n_steps);

/// A matrix (or column vector) that is either constant or a function of time.
class MatrixSchedule {
 public:
  using Function = std::function<Eigen::MatrixXd(double)>;

  MatrixSchedule() = default;
  MatrixSchedule(Eigen::MatrixXd constant);  // NOLINT: implicit by intent
  template <typename Derived>
  MatrixSchedule(const Eigen::MatrixBase<Derived>& constant)  // NOLINT
      : MatrixSchedule(Eigen::MatrixXd(constant)) {}
  MatrixSchedule(Eigen::Index rows, Eigen::Index cols, Function fn);

  bool is_constant() const { return !fn_; }
  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  const Eigen::MatrixXd& constant() const { return constant_; }

  /// Evaluates at time t; a function returning the wrong shape raises ShapeMismatch.
  Eigen::MatrixXd at(double t) const;

 private:
  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
  Eigen::MatrixXd constant_;
  Function fn_;
};

/**
 * Linear-quadratic problem with box constraints:
 *
 *   min  1/2 int (x'Qx + u'Ru) dt
 *   s.t. x' = A x + B u,  x(t0) = x0,  x(tf) = xf,
 *        u_lower <= u <= u_upper,  x_lower <= x <= x_upper.
 *
 * Q and R are diagonal; q and r hold their diagonals as n x 1 and m x 1 schedules.
 * Bounds may be infinite.
 */
struct ProblemSpec {
  int n = 0;
  int m = 0;
  double t0 = 0.0;
  double tf = 1.0;
  MatrixSchedule A;
  MatrixSchedule B;
  MatrixSchedule q;
  MatrixSchedule r;
  Eigen::VectorXd x0;
  Eigen::VectorXd xf;
  Eigen::VectorXd x_lower;
  Eigen::VectorXd x_upper;
  Eigen::VectorXd u_lower;
  Eigen::VectorXd u_upper;

  /// Throws ValidationError naming the offending field. Time-varying q, r are
  /// checked when sampled on a grid.
  void validate() const;

  bool has_state_bounds() const;
  bool has_control_bounds() const;
};

/// Fills bounds with +/-inf (all components unbounded).
void set_unbounded(ProblemSpec& spec);

/// Discretized state and control samples at the grid nodes.
struct TrajectoryPair {
  Trajectory x;  // (N+1) x n
  Trajectory u;  // (N+1) x m

  static TrajectoryPair zeros(int n_nodes, int n, int m);
  int n_nodes() const { return static_cast<int>(x.rows()); }
  bool same_shape(const TrajectoryPair& other) const;
  bool all_finite() const;

  TrajectoryPair& operator+=(const TrajectoryPair& o);
  TrajectoryPair& operator-=(const TrajectoryPair& o);
  TrajectoryPair& operator*=(double s);
};

TrajectoryPair operator+(TrajectoryPair a, const TrajectoryPair& b);
TrajectoryPair operator-(TrajectoryPair a, const TrajectoryPair& b);
TrajectoryPair operator*(double s, TrajectoryPair a);

struct CostateTrajectory {
  Trajectory lambda;  // (N+1) x n
};

struct MultiplierPair {
  Trajectory mu1;  // upper-bound multipliers, (N+1) x n
  Trajectory mu2;  // lower-bound multipliers, (N+1) x n
};

struct LinfDistance {
  double dx = 0.0;
  double du = 0.0;
  double max() const { return dx > du ? dx : du; }
};

/// Discrete L-infinity distance: max over nodes and components. Throws ShapeMismatch.
LinfDistance linf_distance(const TrajectoryPair& a, const TrajectoryPair& b);

/// Left-endpoint discrete inner product h * sum_{k<N} (a.x_k.b.x_k + a.u_k.b.u_k).
/// This is the metric in which the affine projector is an orthogonal projection.
double discrete_inner_product(const TrajectoryPair& a, const TrajectoryPair& b, double h);

/**
 * Problem data evaluated at the nodes of one grid.
 *
 * Constant matrices are stored once; time-varying ones once per node. Immutable
 * after construction and shared read-only by the solver modules.
 */
class SampledProblem {
 public:
  SampledProblem(ProblemSpec spec, const TimeGrid& grid);

  const ProblemSpec& spec() const { return spec_; }
  const TimeGrid& grid() const { return grid_; }
  int n() const { return spec_.n; }
  int m() const { return spec_.m; }
  int n_nodes() const { return grid_.n_nodes(); }
  bool time_invariant() const { return time_invariant_; }

  const Eigen::MatrixXd& A(int k) const { return A_[pick(A_, k)]; }
  const Eigen::MatrixXd& B(int k) const { return B_[pick(B_, k)]; }
  const Eigen::VectorXd& q(int k) const { return q_[pick(q_, k)]; }
  const Eigen::VectorXd& r(int k) const { return r_[pick(r_, k)]; }

  /// Throws ShapeMismatch unless z has N+1 rows and n, m columns.
  void check_shape(const TrajectoryPair& z) const;

 private:
  template <typename V>
  static std::size_t pick(const V& v, int k) {
    return v.size() == 1 ? 0 : static_cast<std::size_t>(k);
  }

  ProblemSpec spec_;
  TimeGrid grid_;
  bool time_invariant_ = true;
  std::vector<Eigen::MatrixXd> A_;
  std::vector<Eigen::MatrixXd> B_;
  std::vector<Eigen::VectorXd> q_;
  std::vector<Eigen::VectorXd> r_;
};

/// Composite trapezoidal value of 1/2 int (x'Qx + u'Ru) dt on the grid.
double objective_value(const SampledProblem& problem, const TrajectoryPair& z);

/// Max over k < N of |x_{k+1} - x_k - h (A_k x_k + B_k u_k)|.
double euler_dynamics_residual(const SampledProblem& problem, const TrajectoryPair& z);

/// Max |x - clamp(x)| and |u - clamp(u)| over all entries; zero iff z is in the box.
double box_violation(const ProblemSpec& spec, const TrajectoryPair& z);

}  // namespace drlq
