#include <gtest/gtest.h>

#include <json.hpp>
#include <sstream>

#include "drlq/bench.hpp"
#include "drlq/problem_library.hpp"

using namespace drlq;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

PipelineOptions options_for(const BuiltinInstance& inst) {
  PipelineOptions o;
  o.dr.gamma = inst.recommended_gamma;
  return o;
}

}  // namespace

TEST(Pipeline, CsvAndReportForPhoCase1) {
  const auto inst = builtin_problem(BuiltinProblem::HarmonicOscillator, ProblemCase::ControlConstrained);
  const auto grid = build_grid(inst.spec.t0, inst.spec.tf, 1000);
  const auto opts = options_for(inst);
  const auto result = run_pipeline(inst.spec, grid, opts);
  EXPECT_EQ(result.dr.report.terminated_by, Termination::ToleranceMet);
  ASSERT_TRUE(result.lambda.has_value());
  EXPECT_TRUE(result.kkt.costate_error.empty());
  EXPECT_LE(result.kkt.control_law_max, 1e-2);
  EXPECT_EQ(result.kkt.complementarity, 0.0);

  const auto csv = lines(trajectory_csv(result, grid));
  ASSERT_EQ(csv.size(), 1002u);
  EXPECT_EQ(csv[0], "t,x_1,x_2,u_1,u_2,lambda_1,lambda_2,mu1_1,mu1_2,mu2_1,mu2_2");
  EXPECT_EQ(std::count(csv[500].begin(), csv[500].end(), ','), 10);

  const auto report = nlohmann::json::parse(report_json(result, inst.spec, grid, opts, {"pho", 1}));
  EXPECT_EQ(report["schema_version"], kReportSchemaVersion);
  EXPECT_EQ(report["result"]["terminated_by"], "ToleranceMet");
  EXPECT_EQ(report["settings"]["n_steps"], 1000);
  EXPECT_EQ(report["settings"]["costate_scheme"], "adjoint");
  EXPECT_EQ(report["result"]["residual_history"]["x"].size(),
            static_cast<std::size_t>(result.dr.report.iterations));
  EXPECT_FALSE(report.contains("oracle"));
}

TEST(Pipeline, PsmCase2HitsCapAndRecordsMultipliers) {
  const auto inst = builtin_problem(BuiltinProblem::SpringMass, ProblemCase::StateConstrained);
  const auto grid = build_grid(inst.spec.t0, inst.spec.tf, 1000);
  const auto opts = options_for(inst);
  const auto result = run_pipeline(inst.spec, grid, opts);
  EXPECT_EQ(result.dr.report.terminated_by, Termination::IterationCap);
  EXPECT_EQ(result.dr.report.iterations, 200);
  ASSERT_TRUE(result.mu.has_value());
  const auto report = nlohmann::json::parse(report_json(result, inst.spec, grid, opts, {"psm", 2}));
  EXPECT_EQ(report["result"]["terminated_by"], "IterationCap");
  EXPECT_EQ(report["kkt"]["multiplier_max"].size(), 4u);
}

TEST(Pipeline, DeterministicCsv) {
  const auto inst = builtin_problem(BuiltinProblem::SpringMass, ProblemCase::ControlConstrained);
  const auto grid = build_grid(inst.spec.t0, inst.spec.tf, 300);
  const auto opts = options_for(inst);
  EXPECT_EQ(trajectory_csv(run_pipeline(inst.spec, grid, opts), grid),
            trajectory_csv(run_pipeline(inst.spec, grid, opts), grid));
}

TEST(Pipeline, OracleCheck) {
  const auto inst = builtin_problem(BuiltinProblem::HarmonicOscillator, ProblemCase::ControlConstrained);
  const auto grid = build_grid(inst.spec.t0, inst.spec.tf, 100);
  auto opts = options_for(inst);
  opts.oracle_check = true;
  opts.dr.epsilon = 1e-10;
  opts.dr.max_iterations = 2000;
  const auto result = run_pipeline(inst.spec, grid, opts);
  ASSERT_TRUE(result.oracle.has_value());
  EXPECT_TRUE(result.oracle->error.empty());
  EXPECT_LE(result.oracle->distance.max(), 1e-6);
  const auto report = nlohmann::json::parse(report_json(result, inst.spec, grid, opts, {"pho", 1}));
  EXPECT_TRUE(report.contains("oracle"));
}

TEST(Pipeline, UnboundedProblemReportsMissingCostate) {
  auto spec = builtin_problem(BuiltinProblem::HarmonicOscillator, ProblemCase::ControlConstrained).spec;
  set_unbounded(spec);
  const auto grid = build_grid(spec.t0, spec.tf, 100);
  const auto result = run_pipeline(spec, grid, {});
  EXPECT_FALSE(result.lambda.has_value());
  EXPECT_FALSE(result.kkt.costate_error.empty());
  EXPECT_TRUE(std::isnan(result.kkt.alpha));
  const auto csv = lines(trajectory_csv(result, grid));
  EXPECT_NE(csv[1].find("nan"), std::string::npos);
}

TEST(Sweep, TwoPointsAreThirds) {
  const auto inst = builtin_problem(BuiltinProblem::HarmonicOscillator, ProblemCase::ControlConstrained);
  const auto grid = build_grid(inst.spec.t0, inst.spec.tf, 100);
  const auto rows = gamma_sweep(inst.spec, grid, 2, {});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_DOUBLE_EQ(rows[0].gamma, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(rows[1].gamma, 2.0 / 3.0);
  EXPECT_THROW(gamma_sweep(inst.spec, grid, 1, {}), Error);
}

TEST(Sweep, SortedAndThreadIndependent) {
  const auto inst = builtin_problem(BuiltinProblem::HarmonicOscillator, ProblemCase::ControlConstrained);
  const auto grid = build_grid(inst.spec.t0, inst.spec.tf, 200);
  const auto one = gamma_sweep(inst.spec, grid, 12, {}, 1);
  const auto many = gamma_sweep(inst.spec, grid, 12, {}, 4);
  for (std::size_t i = 1; i < one.size(); ++i) EXPECT_LT(one[i - 1].gamma, one[i].gamma);
  EXPECT_EQ(sweep_csv(one, 200), sweep_csv(many, 200));
  const auto csv = lines(sweep_csv(one, 200));
  EXPECT_EQ(csv.size(), 13u);
  EXPECT_EQ(csv[0], "gamma,n_steps,iterations,terminated_by,final_residual,kkt_residual,error");
}

TEST(Sweep, PhoCase1BestGammaNearPreset) {
  const auto inst = builtin_problem(BuiltinProblem::HarmonicOscillator, ProblemCase::ControlConstrained);
  const auto grid = build_grid(inst.spec.t0, inst.spec.tf, 200);
  const auto rows = gamma_sweep(inst.spec, grid, 50, {});
  const auto best = std::min_element(rows.begin(), rows.end(),
                                     [](const SweepRow& a, const SweepRow& b) { return a.iterations < b.iterations; });
  EXPECT_EQ(best->terminated_by, Termination::ToleranceMet);
  EXPECT_NEAR(best->gamma, 0.60, 0.15);
}

TEST(Sweep, PhoCase2AlwaysCapped) {
  const auto inst = builtin_problem(BuiltinProblem::HarmonicOscillator, ProblemCase::StateConstrained);
  const auto grid = build_grid(inst.spec.t0, inst.spec.tf, 200);
  for (const auto& row : gamma_sweep(inst.spec, grid, 9, {})) {
    EXPECT_EQ(row.terminated_by, Termination::IterationCap) << row.gamma;
    EXPECT_EQ(row.iterations, 200);
  }
}

TEST(Timing, SingleRepeat) {
  const auto inst = builtin_problem(BuiltinProblem::HarmonicOscillator, ProblemCase::ControlConstrained);
  const auto grid = build_grid(inst.spec.t0, inst.spec.tf, 200);
  DrSettings s;
  s.gamma = inst.recommended_gamma;
  const auto t = timing_report(inst.spec, grid, s, 1);
  EXPECT_EQ(t.repeats, 1);
  EXPECT_EQ(t.mean, t.min);
  EXPECT_GT(t.min, 0.0);
  EXPECT_THROW(timing_report(inst.spec, grid, s, 0), Error);
}

TEST(Timing, PhoCase1UnderOneSecond) {
  const auto inst = builtin_problem(BuiltinProblem::HarmonicOscillator, ProblemCase::ControlConstrained);
  DrSettings s;
  s.gamma = inst.recommended_gamma;
  const auto t = timing_report(inst.spec, build_grid(inst.spec.t0, inst.spec.tf, 1000), s, 20);
  EXPECT_EQ(t.samples.size(), 20u);
  EXPECT_LE(t.min, t.mean);
  EXPECT_LT(t.mean, 1.0);
}

TEST(Timing, RoughlyLinearInGridSize) {
  const auto inst = builtin_problem(BuiltinProblem::SpringMass, ProblemCase::ControlConstrained);
  DrSettings s;
  s.gamma = inst.recommended_gamma;
  const auto coarse = timing_report(inst.spec, build_grid(inst.spec.t0, inst.spec.tf, 1000), s, 5);
  const auto fine = timing_report(inst.spec, build_grid(inst.spec.t0, inst.spec.tf, 10000), s, 5);
  const double ratio = fine.min / coarse.min;
  EXPECT_GE(ratio, 2.0);
  EXPECT_LE(ratio, 50.0);
}
