#include <gtest/gtest.h>

#include "drlq/dr_engine.hpp"
#include "drlq/problem_library.hpp"
#include "drlq/qp_oracle.hpp"
#include "oracles.hpp"

using namespace drlq;

TEST(QpOracle, UnboundedEqualsDenseKkt) {
  for (auto which : {BuiltinProblem::HarmonicOscillator, BuiltinProblem::SpringMass}) {
    auto spec = builtin_problem(which, ProblemCase::ControlConstrained).spec;
    set_unbounded(spec);
    const auto grid = build_grid(spec.t0, spec.tf, 40);
    const SampledProblem p(spec, grid);
    // With Q = R = I the QP minimizer is the projection of zero.
    const auto expected = oracle::dense_kkt_projection(p, TrajectoryPair::zeros(41, spec.n, spec.m));
    const auto got = solve_discretized_qp(spec, grid);
    EXPECT_LE(linf_distance(got, expected).max(), 1e-8);
  }
}

TEST(QpOracle, MinimumEnergyIntegrator) {
  ProblemSpec s;
  s.n = 1;
  s.m = 1;
  s.tf = 1.0;
  s.A = Eigen::MatrixXd::Zero(1, 1);
  s.B = Eigen::MatrixXd::Ones(1, 1);
  s.q = Eigen::MatrixXd::Zero(1, 1);
  s.r = Eigen::MatrixXd::Ones(1, 1);
  s.x0 = Eigen::VectorXd::Zero(1);
  s.xf = Eigen::VectorXd::Ones(1);
  set_unbounded(s);
  const auto r = solve_discretized_qp_detailed(s, build_grid(0.0, 1.0, 4));
  EXPECT_LE((r.solution.u.array() - 1.0).abs().maxCoeff(), 1e-9);
  for (int k = 0; k <= 4; ++k) EXPECT_NEAR(r.solution.x(k, 0), 0.25 * k, 1e-9);
  EXPECT_NEAR(r.objective, 0.5, 1e-9);
}

TEST(QpOracle, PhoCase1MatchesDr) {
  const auto inst = builtin_problem(BuiltinProblem::HarmonicOscillator, ProblemCase::ControlConstrained);
  const auto grid = build_grid(inst.spec.t0, inst.spec.tf, 50);
  const auto r = solve_discretized_qp_detailed(inst.spec, grid);
  DrSettings s;
  s.gamma = inst.recommended_gamma;
  s.epsilon = 1e-10;
  s.max_iterations = 2000;
  const auto dr = dr_solve(inst.spec, grid, s);
  EXPECT_EQ(dr.report.terminated_by, Termination::ToleranceMet);
  EXPECT_LE(linf_distance(r.solution, dr.solution).max(), 1e-6);

  const SampledProblem p(inst.spec, grid);
  EXPECT_LE(euler_dynamics_residual(p, r.solution), 1e-10);
  EXPECT_EQ(box_violation(inst.spec, r.solution), 0.0);
  EXPECT_LE(r.kkt_residual, 1e-10);
  EXPECT_NEAR(r.objective, oracle::left_rectangle_cost(p, r.solution), 1e-12);
}

TEST(QpOracle, NoFeasiblePairBeatsIt) {
  const auto inst = builtin_problem(BuiltinProblem::SpringMass, ProblemCase::ControlConstrained);
  const auto grid = build_grid(inst.spec.t0, inst.spec.tf, 200);
  const SampledProblem p(inst.spec, grid);
  const auto r = solve_discretized_qp_detailed(inst.spec, grid);
  // Minimizers of other weightings satisfy the same constraints; so do convex
  // combinations with the optimum.
  auto other = inst.spec;
  other.q = Eigen::MatrixXd(Eigen::Vector4d(3.0, 0.1, 2.0, 0.5));
  other.r = Eigen::MatrixXd(Eigen::Vector2d(0.2, 4.0));
  const auto w = solve_discretized_qp(other, grid);
  ASSERT_LE(euler_dynamics_residual(p, w), 1e-10);
  ASSERT_EQ(box_violation(inst.spec, w), 0.0);
  const double base = oracle::left_rectangle_cost(p, w);
  EXPECT_LT(r.objective, base);
  for (double a : {0.0, 0.01, 0.3, 0.9}) {
    const auto mix = (1.0 - a) * r.solution + a * w;
    EXPECT_LE(r.objective, oracle::left_rectangle_cost(p, mix) + 1e-10);
  }
}

TEST(QpOracle, InfeasibleBoxes) {
  ProblemSpec s;
  s.n = 1;
  s.m = 1;
  s.tf = 1.0;
  s.A = Eigen::MatrixXd::Zero(1, 1);
  s.B = Eigen::MatrixXd::Ones(1, 1);
  s.q = Eigen::MatrixXd::Ones(1, 1);
  s.r = Eigen::MatrixXd::Ones(1, 1);
  s.x0 = Eigen::VectorXd::Zero(1);
  s.xf = Eigen::VectorXd::Ones(1);
  set_unbounded(s);
  s.u_lower = Eigen::VectorXd::Constant(1, -0.5);
  s.u_upper = Eigen::VectorXd::Constant(1, 0.5);
  try {
    solve_discretized_qp(s, build_grid(0.0, 1.0, 10));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InfeasibleDiscretization);
  }
}
