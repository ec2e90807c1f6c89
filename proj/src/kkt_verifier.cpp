#include "drlq/kkt_verifier.hpp"

#include <algorithm>
#include <cmath>

#include "drlq/dual_recovery.hpp"

namespace drlq {

namespace {

void check_costate(const CostateTrajectory& lambda, const SampledProblem& problem) {
  if (lambda.lambda.rows() != problem.n_nodes() || lambda.lambda.cols() != problem.n()) {
    throw Error(ErrorCode::ShapeMismatch, "costate does not match the grid");
  }
}

void check_multipliers(const MultiplierPair& mu, Eigen::Index rows, Eigen::Index cols) {
  if (mu.mu1.rows() != rows || mu.mu1.cols() != cols || mu.mu2.rows() != rows || mu.mu2.cols() != cols) {
    throw Error(ErrorCode::ShapeMismatch, "multipliers do not match the state trajectory");
  }
}

// |mu * slack| with the convention 0 * inf = 0 for an absent bound.
double product_term(double mu, double slack) {
  if (mu == 0.0) return 0.0;
  return std::abs(mu * slack);
}

}  // namespace

Eigen::VectorXd control_law_residual(const TrajectoryPair& solution, const CostateTrajectory& lambda,
                                     const SampledProblem& problem) {
  problem.check_shape(solution);
  check_costate(lambda, problem);
  const ProblemSpec& spec = problem.spec();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(problem.m());
  for (int k = 0; k < problem.n_nodes(); ++k) {
    const Eigen::VectorXd btl = problem.B(k).transpose() * lambda.lambda.row(k).transpose();
    for (int j = 0; j < problem.m(); ++j) {
      const double predicted = std::clamp(-btl[j] / problem.r(k)[j], spec.u_lower[j], spec.u_upper[j]);
      out[j] = std::max(out[j], std::abs(predicted - solution.u(k, j)));
    }
  }
  return out;
}

double complementarity_residual(const TrajectoryPair& solution, const MultiplierPair& mu, const ProblemSpec& spec) {
  check_multipliers(mu, solution.x.rows(), solution.x.cols());
  if (solution.x.cols() != spec.n) throw Error(ErrorCode::ShapeMismatch, "state trajectory has wrong width");
  double worst = 0.0;
  for (Eigen::Index k = 0; k < solution.x.rows(); ++k) {
    for (int i = 0; i < spec.n; ++i) {
      const double m1 = mu.mu1(k, i);
      const double m2 = mu.mu2(k, i);
      worst = std::max({worst, product_term(m1, solution.x(k, i) - spec.x_upper[i]),
                        product_term(m2, spec.x_lower[i] - solution.x(k, i)), -m1, -m2});
    }
  }
  return worst;
}

AdjointResidual adjoint_residual(const TrajectoryPair& solution, const CostateTrajectory& lambda,
                                 const MultiplierPair& mu, const SampledProblem& problem,
                                 const std::vector<int>& junction_nodes, int window) {
  problem.check_shape(solution);
  check_costate(lambda, problem);
  check_multipliers(mu, problem.n_nodes(), problem.n());
  const int nodes = problem.n_nodes();
  std::vector<char> excluded(static_cast<std::size_t>(nodes), 0);
  for (int j : junction_nodes) {
    for (int k = std::max(0, j - window); k <= std::min(nodes - 1, j + window); ++k) {
      excluded[static_cast<std::size_t>(k)] = 1;
    }
  }
  const Trajectory lambda_dot = costate_derivative(lambda.lambda, problem.grid().h());
  AdjointResidual out;
  for (int k = 1; k + 1 < nodes; ++k) {
    const Eigen::VectorXd lk = lambda.lambda.row(k).transpose();
    const Eigen::VectorXd res = lambda_dot.row(k).transpose() +
                                problem.q(k).cwiseProduct(solution.x.row(k).transpose()) +
                                problem.A(k).transpose() * lk + mu.mu1.row(k).transpose() -
                                mu.mu2.row(k).transpose();
    const double value = res.cwiseAbs().maxCoeff();
    out.full = std::max(out.full, value);
    if (!excluded[static_cast<std::size_t>(k)]) out.windowed = std::max(out.windowed, value);
  }
  return out;
}

}  // namespace drlq
