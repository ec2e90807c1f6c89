#include "drlq/dual_recovery.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace drlq {

namespace {

enum class Activity { Lower, Interior, Upper };

Activity classify(double value, double lower, double upper, const ActivityTolerance& tol) {
  if (std::isfinite(upper) && tol.at_bound(value, upper)) return Activity::Upper;
  if (std::isfinite(lower) && tol.at_bound(value, lower)) return Activity::Lower;
  return Activity::Interior;
}

}  // namespace

bool ActivityTolerance::at_bound(double value, double bound) const {
  return std::isfinite(bound) && std::abs(value - bound) <= relative * std::abs(bound) + absolute;
}

std::vector<JunctionPoint> detect_junctions(const Trajectory& u, const ProblemSpec& spec, ActivityTolerance tol) {
  if (u.cols() != spec.m) throw Error(ErrorCode::ShapeMismatch, "control matrix has wrong column count");
  std::vector<JunctionPoint> out;
  for (int j = 0; j < spec.m; ++j) {
    for (Eigen::Index k = 0; k + 1 < u.rows(); ++k) {
      const Activity here = classify(u(k, j), spec.u_lower[j], spec.u_upper[j], tol);
      const Activity next = classify(u(k + 1, j), spec.u_lower[j], spec.u_upper[j], tol);
      if ((here == Activity::Interior) == (next == Activity::Interior)) continue;
      JunctionPoint jp;
      jp.control_index = j;
      jp.denominator = std::numeric_limits<double>::quiet_NaN();
      if (here == Activity::Interior) {
        jp.side = JunctionSide::EnteringBound;
        jp.node_index = static_cast<int>(k + 1);
        jp.interior_node = static_cast<int>(k);
      } else {
        jp.side = JunctionSide::LeavingBound;
        jp.node_index = static_cast<int>(k);
        jp.interior_node = static_cast<int>(k + 1);
      }
      out.push_back(jp);
    }
  }
  return out;
}

CostateRecovery recover_costate(const CostateTrajectory& lambda_dr, const TrajectoryPair& solution,
                                const SampledProblem& problem, const std::vector<JunctionPoint>& junctions) {
  problem.check_shape(solution);
  if (lambda_dr.lambda.rows() != problem.n_nodes() || lambda_dr.lambda.cols() != problem.n()) {
    throw Error(ErrorCode::ShapeMismatch, "lambda_DR does not match the grid");
  }
  double scale = 0.0;
  for (int k = 0; k < problem.n_nodes(); ++k) {
    const Eigen::VectorXd proj = problem.B(k).transpose() * lambda_dr.lambda.row(k).transpose();
    scale = std::max(scale, proj.cwiseAbs().maxCoeff());
  }
  const double threshold = std::max(1e-10 * scale, std::numeric_limits<double>::min());

  const JunctionPoint* best = nullptr;
  double best_den = 0.0;
  for (const JunctionPoint& jp : junctions) {
    const int k = jp.interior_node;
    const double den = problem.B(k).col(jp.control_index).dot(lambda_dr.lambda.row(k).transpose());
    if (std::abs(den) > threshold && std::abs(den) > std::abs(best_den)) {
      best = &jp;
      best_den = den;
    }
  }
  if (best == nullptr) {
    throw Error(ErrorCode::NoUsableJunction,
                junctions.empty() ? "no control junction on the solution"
                                  : "every junction has b_j' lambda_DR = 0");
  }
  const int k = best->interior_node;
  const int j = best->control_index;
  CostateRecovery out;
  out.alpha = -problem.r(k)[j] * solution.u(k, j) / best_den;
  out.junction = *best;
  out.junction.denominator = best_den;
  out.lambda.lambda = out.alpha * lambda_dr.lambda;
  return out;
}

Trajectory costate_derivative(const Trajectory& lambda, double h) {
  const Eigen::Index rows = lambda.rows();
  Trajectory d(rows, lambda.cols());
  if (rows < 2) return Trajectory::Zero(rows, lambda.cols());
  d.row(0) = (lambda.row(1) - lambda.row(0)) / h;
  d.row(rows - 1) = (lambda.row(rows - 1) - lambda.row(rows - 2)) / h;
  for (Eigen::Index k = 1; k + 1 < rows; ++k) d.row(k) = (lambda.row(k + 1) - lambda.row(k - 1)) / (2.0 * h);
  return d;
}

MultiplierPair recover_multipliers(const TrajectoryPair& solution, const CostateTrajectory& lambda,
                                   const SampledProblem& problem, ActivityTolerance tol) {
  problem.check_shape(solution);
  const ProblemSpec& spec = problem.spec();
  const int n = problem.n();
  const int nodes = problem.n_nodes();
  if (lambda.lambda.rows() != nodes || lambda.lambda.cols() != n) {
    throw Error(ErrorCode::ShapeMismatch, "costate does not match the grid");
  }
  MultiplierPair mu{Trajectory::Zero(nodes, n), Trajectory::Zero(nodes, n)};
  if (!spec.has_state_bounds()) return mu;

  const Trajectory lambda_dot = costate_derivative(lambda.lambda, problem.grid().h());
  for (int k = 0; k < nodes; ++k) {
    int active = 0;
    for (int i = 0; i < n; ++i) {
      const Activity a = classify(solution.x(k, i), spec.x_lower[i], spec.x_upper[i], tol);
      if (a == Activity::Interior) continue;
      if (++active > 1) {
        std::ostringstream os;
        os << "more than one state constraint active at node " << k;
        throw Error(ErrorCode::UnsupportedActiveSet, os.str());
      }
      const double residual = -problem.q(k)[i] * solution.x(k, i) -
                              problem.A(k).col(i).dot(lambda.lambda.row(k).transpose()) - lambda_dot(k, i);
      if (a == Activity::Upper) {
        mu.mu1(k, i) = std::max(residual, 0.0);
      } else {
        mu.mu2(k, i) = std::max(-residual, 0.0);
      }
    }
  }
  return mu;
}

std::vector<int> state_transition_nodes(const Trajectory& x, const ProblemSpec& spec, ActivityTolerance tol) {
  std::vector<int> out;
  for (Eigen::Index k = 0; k + 1 < x.rows(); ++k) {
    for (int i = 0; i < spec.n; ++i) {
      const bool here = classify(x(k, i), spec.x_lower[i], spec.x_upper[i], tol) != Activity::Interior;
      const bool next = classify(x(k + 1, i), spec.x_lower[i], spec.x_upper[i], tol) != Activity::Interior;
      if (here != next) {
        out.push_back(static_cast<int>(here ? k : k + 1));
        break;
      }
    }
  }
  return out;
}

}  // namespace drlq
