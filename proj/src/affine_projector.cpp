#include "drlq/affine_projector.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

namespace drlq {

const char* to_string(CostateScheme scheme) {
  return scheme == CostateScheme::DiscreteAdjoint ? "adjoint" : "euler";
}

CostateScheme parse_costate_scheme(std::string_view name) {
  if (name == "adjoint") return CostateScheme::DiscreteAdjoint;
  if (name == "euler") return CostateScheme::ExplicitEuler;
  throw Error(ErrorCode::InvalidArgument, "unknown costate scheme '" + std::string(name) + "' (adjoint or euler)");
}

bool PivotedLU::factor(const Eigen::MatrixXd& matrix, double relative_tol) {
  const Eigen::Index n = matrix.rows();
  lu_ = matrix;
  perm_.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) perm_[static_cast<std::size_t>(i)] = i;
  const double scale = n > 0 ? matrix.cwiseAbs().maxCoeff() : 0.0;
  ok_ = scale > 0.0 && std::isfinite(scale);
  min_relative_pivot_ = ok_ ? std::numeric_limits<double>::infinity() : 0.0;
  if (!ok_) return false;

  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot_row = col;
    double pivot = std::abs(lu_(col, col));
    for (Eigen::Index r = col + 1; r < n; ++r) {
      if (std::abs(lu_(r, col)) > pivot) {
        pivot = std::abs(lu_(r, col));
        pivot_row = r;
      }
    }
    min_relative_pivot_ = std::min(min_relative_pivot_, pivot / scale);
    if (pivot < relative_tol * scale) {
      ok_ = false;
      return false;
    }
    if (pivot_row != col) {
      lu_.row(col).swap(lu_.row(pivot_row));
      std::swap(perm_[static_cast<std::size_t>(col)], perm_[static_cast<std::size_t>(pivot_row)]);
    }
    for (Eigen::Index r = col + 1; r < n; ++r) {
      const double factor = lu_(r, col) / lu_(col, col);
      lu_(r, col) = factor;
      for (Eigen::Index c = col + 1; c < n; ++c) lu_(r, c) -= factor * lu_(col, c);
    }
  }
  return true;
}

Eigen::VectorXd PivotedLU::solve(const Eigen::VectorXd& rhs) const {
  const Eigen::Index n = lu_.rows();
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = rhs[perm_[static_cast<std::size_t>(i)]];
    for (Eigen::Index j = 0; j < i; ++j) s -= lu_(i, j) * y[j];
    y[i] = s;
  }
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double s = y[i];
    for (Eigen::Index j = i + 1; j < n; ++j) s -= lu_(i, j) * y[j];
    y[i] = s / lu_(i, i);
  }
  return y;
}

Eigen::MatrixXd PivotedLU::inverse() const {
  const Eigen::Index n = lu_.rows();
  Eigen::MatrixXd inv(n, n);
  for (Eigen::Index c = 0; c < n; ++c) inv.col(c) = solve(Eigen::VectorXd::Unit(n, c));
  return inv;
}

AffineProjector::AffineProjector(std::shared_ptr<const SampledProblem> problem)
    : AffineProjector(std::move(problem), Options{}) {}

AffineProjector::AffineProjector(std::shared_ptr<const SampledProblem> problem, Options options)
    : problem_(std::move(problem)), options_(options) {
  const SampledProblem& p = *problem_;
  const double h = p.grid().h();
  const int n = p.n();
  if (options_.scheme == CostateScheme::DiscreteAdjoint) {
    const bool constant_a = p.spec().A.is_constant();
    const int count = constant_a ? 1 : p.n_nodes();
    adjoint_step_.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
      PivotedLU lu;
      if (!lu.factor(Eigen::MatrixXd::Identity(n, n) + h * p.A(k).transpose())) {
        throw Error(ErrorCode::GridTooCoarse, "I + h A' is singular at node " + std::to_string(k));
      }
      adjoint_step_.push_back(lu.inverse());
    }
  }
  if (options_.jacobian == JacobianPolicy::Cached) {
    const Eigen::VectorXd z_base = terminal_state(p.spec().x0, Eigen::VectorXd::Zero(n), nullptr);
    jacobian_ = assemble_jacobian(nullptr, z_base);
    if (!jacobian_lu_.factor(jacobian_)) {
      std::ostringstream os;
      os << "shooting Jacobian is singular (min relative pivot " << jacobian_lu_.min_relative_pivot()
         << "); the system is not controllable on this grid";
      throw Error(ErrorCode::SingularShootingJacobian, os.str());
    }
  }
}

void AffineProjector::integrate(const Eigen::VectorXd& initial_state, const Eigen::VectorXd& lambda0,
                                const TrajectoryPair* forcing, Trajectory& x, Trajectory& lambda,
                                Trajectory* control_out) const {
  const SampledProblem& p = *problem_;
  const int n = p.n();
  const int m = p.m();
  const int last = p.n_nodes() - 1;
  const double h = p.grid().h();
  const bool adjoint = options_.scheme == CostateScheme::DiscreteAdjoint;

  x.resize(p.n_nodes(), n);
  lambda.resize(p.n_nodes(), n);
  if (control_out) control_out->resize(p.n_nodes(), m);

  Eigen::VectorXd xk = initial_state;
  Eigen::VectorXd lk = lambda0;
  Eigen::VectorXd vk(m), xnext(n), lnext(n), tmp(n);
  x.row(0) = xk.transpose();
  lambda.row(0) = lk.transpose();

  for (int k = 0; k < last; ++k) {
    const Eigen::MatrixXd& A = p.A(k);
    const Eigen::MatrixXd& B = p.B(k);
    // v_k = um_k - B_k' lambda_k
    vk.noalias() = -B.transpose() * lk;
    if (forcing) vk += forcing->u.row(k).transpose();
    if (control_out) control_out->row(k) = vk.transpose();

    xnext = xk;
    xnext.noalias() += h * (A * xk);
    xnext.noalias() += h * (B * vk);

    if (adjoint) {
      tmp = lk - h * xnext;
      if (forcing) tmp += h * forcing->x.row(k + 1).transpose();
      const Eigen::MatrixXd& step = adjoint_step_.size() == 1 ? adjoint_step_[0]
                                                              : adjoint_step_[static_cast<std::size_t>(k + 1)];
      lnext.noalias() = step * tmp;
    } else {
      lnext = lk - h * xk;
      lnext.noalias() -= h * (A.transpose() * lk);
      if (forcing) lnext += h * forcing->x.row(k).transpose();
    }

    xk.swap(xnext);
    lk.swap(lnext);
    if (!xk.allFinite() || !lk.allFinite()) {
      throw Error(ErrorCode::NonFiniteState, "state/costate overflow at node " + std::to_string(k + 1));
    }
    x.row(k + 1) = xk.transpose();
    lambda.row(k + 1) = lk.transpose();
  }

  if (control_out) {
    if (adjoint) {
      control_out->row(last) = control_out->row(last - 1);
    } else {
      vk.noalias() = -p.B(last).transpose() * lk;
      if (forcing) vk += forcing->u.row(last).transpose();
      control_out->row(last) = vk.transpose();
    }
  }
}

Eigen::VectorXd AffineProjector::terminal_state(const Eigen::VectorXd& initial_state,
                                                const Eigen::VectorXd& lambda0,
                                                const TrajectoryPair* forcing) const {
  Trajectory x, lambda;
  integrate(initial_state, lambda0, forcing, x, lambda, nullptr);
  return x.row(x.rows() - 1).transpose();
}

Eigen::MatrixXd AffineProjector::assemble_jacobian(const TrajectoryPair* forcing,
                                                   const Eigen::VectorXd& z_base) const {
  const int n = problem_->n();
  Eigen::MatrixXd jac(n, n);
  for (int i = 0; i < n; ++i) {
    jac.col(i) = terminal_state(problem_->spec().x0, Eigen::VectorXd::Unit(n, i), forcing) - z_base;
  }
  return jac;
}

ProjectionResult AffineProjector::project(const TrajectoryPair& z) const {
  const SampledProblem& p = *problem_;
  p.check_shape(z);
  const ProblemSpec& spec = p.spec();
  const int n = p.n();

  ProjectionResult result;
  ShootingWorkspace& ws = result.workspace;
  ws.z_base = terminal_state(spec.x0, Eigen::VectorXd::Zero(n), &z);
  const Eigen::VectorXd near_miss = ws.z_base - spec.xf;

  if (options_.jacobian == JacobianPolicy::Cached) {
    ws.jacobian = jacobian_;
    ws.lambda0 = jacobian_lu_.solve(-near_miss);
  } else {
    ws.jacobian = assemble_jacobian(&z, ws.z_base);
    PivotedLU lu;
    if (!lu.factor(ws.jacobian)) {
      throw Error(ErrorCode::SingularShootingJacobian, "shooting Jacobian is singular on this grid");
    }
    ws.lambda0 = lu.solve(-near_miss);
  }

  integrate(spec.x0, ws.lambda0, &z, result.projection.x, result.costate.lambda, &result.projection.u);
  return result;
}

HamiltonianRun integrate_hamiltonian(const SampledProblem& problem, const Eigen::VectorXd& lambda0,
                                     const TrajectoryPair& forcing, CostateScheme scheme) {
  problem.check_shape(forcing);
  if (lambda0.size() != problem.n() || !lambda0.allFinite()) {
    throw Error(ErrorCode::ShapeMismatch, "lambda0 must be a finite vector of length n");
  }
  AffineProjector integrator(std::make_shared<const SampledProblem>(problem),
                             AffineProjector::Options{scheme, JacobianPolicy::PerProjection});
  HamiltonianRun run;
  integrator.integrate(problem.spec().x0, lambda0, &forcing, run.x, run.lambda, nullptr);
  return run;
}

ProjectionResult project_affine(const ProblemSpec& spec, const TimeGrid& grid, const TrajectoryPair& z,
                                CostateScheme scheme) {
  AffineProjector projector(std::make_shared<const SampledProblem>(spec, grid),
                            AffineProjector::Options{scheme, JacobianPolicy::Cached});
  return projector.project(z);
}

}  // namespace drlq
