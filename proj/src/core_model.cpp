#include "drlq/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace drlq {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ValidationError, what); }

void check_length(const Eigen::VectorXd& v, int expected, const char* name) {
  if (v.size() != expected) {
    std::ostringstream os;
    os << name << " has length " << v.size() << ", expected " << expected;
    invalid(os.str());
  }
}

void check_schedule(const MatrixSchedule& s, Eigen::Index rows, Eigen::Index cols, const char* name) {
  if (s.rows() != rows || s.cols() != cols) {
    std::ostringstream os;
    os << name << " is " << s.rows() << "x" << s.cols() << ", expected " << rows << "x" << cols;
    invalid(os.str());
  }
}

void check_diagonal(const Eigen::VectorXd& d, bool strictly_positive, const char* name) {
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const bool ok = strictly_positive ? d[i] > 0.0 : d[i] >= 0.0;
    if (!ok || !std::isfinite(d[i])) {
      std::ostringstream os;
      os << name << "[" << i << "] = " << d[i]
         << (strictly_positive ? " must be positive" : " must be nonnegative");
      invalid(os.str());
    }
  }
}

void check_box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, const char* name) {
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (std::isnan(lo[i]) || std::isnan(hi[i]) || lo[i] > hi[i]) {
      std::ostringstream os;
      os << name << " bounds crossed at component " << i << ": [" << lo[i] << ", " << hi[i] << "]";
      invalid(os.str());
    }
  }
}

void check_inside(const Eigen::VectorXd& v, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                  const char* name) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] < lo[i] || v[i] > hi[i]) {
      std::ostringstream os;
      os << name << "[" << i << "] = " << v[i] << " lies outside the state box";
      invalid(os.str());
    }
  }
}

bool any_finite(const Eigen::VectorXd& v) {
  return std::any_of(v.data(), v.data() + v.size(), [](double a) { return std::isfinite(a); });
}

}  // namespace

TimeGrid::TimeGrid(double t0, double tf, int n_steps)
    : t0_(t0), tf_(tf), n_steps_(n_steps), h_((tf - t0) / n_steps) {}

std::vector<double> TimeGrid::nodes() const {
  std::vector<double> out(static_cast<std::size_t>(n_nodes()));
  for (int k = 0; k < n_nodes(); ++k) out[static_cast<std::size_t>(k)] = node(k);
  return out;
}

TimeGrid build_grid(double t0, double tf, int n_steps) {
  if (!(tf > t0) || !std::isfinite(t0) || !std::isfinite(tf)) {
    std::ostringstream os;
    os << "need tf > t0, got [" << t0 << ", " << tf << "]";
    throw Error(ErrorCode::NonIncreasingInterval, os.str());
  }
  if (n_steps < 2) {
    throw Error(ErrorCode::GridTooCoarse, "need at least 2 steps, got " + std::to_string(n_steps));
  }
  return TimeGrid(t0, tf, n_steps);
}

MatrixSchedule::MatrixSchedule(Eigen::MatrixXd constant)
    : rows_(constant.rows()), cols_(constant.cols()), constant_(std::move(constant)) {}

MatrixSchedule::MatrixSchedule(Eigen::Index rows, Eigen::Index cols, Function fn)
    : rows_(rows), cols_(cols), fn_(std::move(fn)) {}

Eigen::MatrixXd MatrixSchedule::at(double t) const {
  if (!fn_) return constant_;
  Eigen::MatrixXd value = fn_(t);
  if (value.rows() != rows_ || value.cols() != cols_) {
    std::ostringstream os;
    os << "schedule returned " << value.rows() << "x" << value.cols() << " at t=" << t << ", declared "
       << rows_ << "x" << cols_;
    throw Error(ErrorCode::ShapeMismatch, os.str());
  }
  return value;
}

void ProblemSpec::validate() const {
  if (n < 1 || m < 1) invalid("state and control dimensions must be positive");
  if (!(tf > t0)) invalid("horizon must satisfy tf > t0");
  check_schedule(A, n, n, "A");
  check_schedule(B, n, m, "B");
  check_schedule(q, n, 1, "q");
  check_schedule(r, m, 1, "r");
  check_length(x0, n, "x0");
  check_length(xf, n, "xf");
  check_length(x_lower, n, "x_lower");
  check_length(x_upper, n, "x_upper");
  check_length(u_lower, m, "u_lower");
  check_length(u_upper, m, "u_upper");
  if (q.is_constant()) check_diagonal(q.constant().col(0), false, "q");
  if (r.is_constant()) check_diagonal(r.constant().col(0), true, "r");
  check_box(x_lower, x_upper, "state");
  check_box(u_lower, u_upper, "control");
  check_inside(x0, x_lower, x_upper, "x0");
  check_inside(xf, x_lower, x_upper, "xf");
}

bool ProblemSpec::has_state_bounds() const { return any_finite(x_lower) || any_finite(x_upper); }

bool ProblemSpec::has_control_bounds() const { return any_finite(u_lower) || any_finite(u_upper); }

void set_unbounded(ProblemSpec& spec) {
  spec.x_lower = Eigen::VectorXd::Constant(spec.n, -kInf);
  spec.x_upper = Eigen::VectorXd::Constant(spec.n, kInf);
  spec.u_lower = Eigen::VectorXd::Constant(spec.m, -kInf);
  spec.u_upper = Eigen::VectorXd::Constant(spec.m, kInf);
}

TrajectoryPair TrajectoryPair::zeros(int n_nodes, int n, int m) {
  return {Trajectory::Zero(n_nodes, n), Trajectory::Zero(n_nodes, m)};
}

bool TrajectoryPair::same_shape(const TrajectoryPair& o) const {
  return x.rows() == o.x.rows() && x.cols() == o.x.cols() && u.rows() == o.u.rows() &&
         u.cols() == o.u.cols();
}

bool TrajectoryPair::all_finite() const { return x.allFinite() && u.allFinite(); }

TrajectoryPair& TrajectoryPair::operator+=(const TrajectoryPair& o) {
  x += o.x;
  u += o.u;
  return *this;
}

TrajectoryPair& TrajectoryPair::operator-=(const TrajectoryPair& o) {
  x -= o.x;
  u -= o.u;
  return *this;
}

TrajectoryPair& TrajectoryPair::operator*=(double s) {
  x *= s;
  u *= s;
  return *this;
}

TrajectoryPair operator+(TrajectoryPair a, const TrajectoryPair& b) { return a += b; }
TrajectoryPair operator-(TrajectoryPair a, const TrajectoryPair& b) { return a -= b; }
TrajectoryPair operator*(double s, TrajectoryPair a) { return a *= s; }

LinfDistance linf_distance(const TrajectoryPair& a, const TrajectoryPair& b) {
  if (!a.same_shape(b)) throw Error(ErrorCode::ShapeMismatch, "linf_distance: trajectories differ in shape");
  LinfDistance d;
  if (a.x.size() > 0) d.dx = (a.x - b.x).cwiseAbs().maxCoeff();
  if (a.u.size() > 0) d.du = (a.u - b.u).cwiseAbs().maxCoeff();
  return d;
}

double discrete_inner_product(const TrajectoryPair& a, const TrajectoryPair& b, double h) {
  if (!a.same_shape(b)) {
    throw Error(ErrorCode::ShapeMismatch, "discrete_inner_product: trajectories differ in shape");
  }
  const Eigen::Index n_left = a.x.rows() - 1;
  return h * (a.x.topRows(n_left).cwiseProduct(b.x.topRows(n_left)).sum() +
              a.u.topRows(n_left).cwiseProduct(b.u.topRows(n_left)).sum());
}

SampledProblem::SampledProblem(ProblemSpec spec, const TimeGrid& grid)
    : spec_(std::move(spec)), grid_(grid) {
  spec_.validate();
  time_invariant_ = spec_.A.is_constant() && spec_.B.is_constant() && spec_.q.is_constant() &&
                    spec_.r.is_constant();
  const auto sample_matrix = [&](const MatrixSchedule& s, std::vector<Eigen::MatrixXd>& out) {
    if (s.is_constant()) {
      out.push_back(s.constant());
      return;
    }
    out.reserve(static_cast<std::size_t>(grid_.n_nodes()));
    for (int k = 0; k < grid_.n_nodes(); ++k) out.push_back(s.at(grid_.node(k)));
  };
  const auto sample_diag = [&](const MatrixSchedule& s, std::vector<Eigen::VectorXd>& out, bool positive,
                               const char* name) {
    std::vector<Eigen::MatrixXd> tmp;
    sample_matrix(s, tmp);
    for (auto& d : tmp) {
      Eigen::VectorXd v = d.col(0);
      check_diagonal(v, positive, name);
      out.push_back(std::move(v));
    }
  };
  sample_matrix(spec_.A, A_);
  sample_matrix(spec_.B, B_);
  sample_diag(spec_.q, q_, false, "q");
  sample_diag(spec_.r, r_, true, "r");
}

void SampledProblem::check_shape(const TrajectoryPair& z) const {
  if (z.x.rows() != n_nodes() || z.u.rows() != n_nodes() || z.x.cols() != n() || z.u.cols() != m()) {
    std::ostringstream os;
    os << "trajectory is x:" << z.x.rows() << "x" << z.x.cols() << " u:" << z.u.rows() << "x" << z.u.cols()
       << ", grid needs x:" << n_nodes() << "x" << n() << " u:" << n_nodes() << "x" << m();
    throw Error(ErrorCode::ShapeMismatch, os.str());
  }
}

double objective_value(const SampledProblem& problem, const TrajectoryPair& z) {
  problem.check_shape(z);
  const int last = problem.n_nodes() - 1;
  double total = 0.0;
  for (int k = 0; k <= last; ++k) {
    const double w = (k == 0 || k == last) ? 0.5 : 1.0;
    double integrand = 0.0;
    for (int i = 0; i < problem.n(); ++i) integrand += problem.q(k)[i] * z.x(k, i) * z.x(k, i);
    for (int j = 0; j < problem.m(); ++j) integrand += problem.r(k)[j] * z.u(k, j) * z.u(k, j);
    total += w * integrand;
  }
  return 0.5 * problem.grid().h() * total;
}

double euler_dynamics_residual(const SampledProblem& problem, const TrajectoryPair& z) {
  problem.check_shape(z);
  const double h = problem.grid().h();
  double worst = 0.0;
  Eigen::VectorXd xk(problem.n()), uk(problem.m()), next(problem.n());
  for (int k = 0; k + 1 < problem.n_nodes(); ++k) {
    xk = z.x.row(k).transpose();
    uk = z.u.row(k).transpose();
    next = xk + h * (problem.A(k) * xk + problem.B(k) * uk);
    worst = std::max(worst, (z.x.row(k + 1).transpose() - next).cwiseAbs().maxCoeff());
  }
  return worst;
}

double box_violation(const ProblemSpec& spec, const TrajectoryPair& z) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < z.x.rows(); ++k) {
    for (int i = 0; i < spec.n; ++i) {
      const double v = z.x(k, i);
      worst = std::max({worst, spec.x_lower[i] - v, v - spec.x_upper[i]});
    }
    for (int j = 0; j < spec.m; ++j) {
      const double v = z.u(k, j);
      worst = std::max({worst, spec.u_lower[j] - v, v - spec.u_upper[j]});
    }
  }
  return worst;
}

}  // namespace drlq
