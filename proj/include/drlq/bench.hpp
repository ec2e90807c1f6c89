#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "drlq/dr_engine.hpp"
#include "drlq/dual_recovery.hpp"
#include "drlq/kkt_verifier.hpp"
#include "drlq/qp_oracle.hpp"

namespace drlq {

struct PipelineOptions {
  DrSettings dr;
  ActivityTolerance activity;
  int junction_window = 3;
  bool oracle_check = false;
  double oracle_tolerance = 1e-10;
};

/// Dual recovery and optimality checks. A stage that cannot run leaves its
/// error text set and its numbers NaN.
struct KktSummary {
  std::string costate_error;
  std::string multiplier_error;
  double alpha = std::nan("");
  int junction_count = 0;
  Eigen::VectorXd control_law;  // per control component
  double control_law_max = std::nan("");
  double complementarity = std::nan("");
  AdjointResidual adjoint{std::nan(""), std::nan("")};
};

struct OracleSummary {
  std::string error;
  LinfDistance distance{std::nan(""), std::nan("")};
  double objective = std::nan("");
  double wall_time = 0.0;
};

struct PipelineResult {
  DrSolution dr;
  std::optional<CostateTrajectory> lambda;
  std::optional<MultiplierPair> mu;
  KktSummary kkt;
  std::optional<OracleSummary> oracle;
};

/// dr_solve followed by costate/multiplier recovery, the KKT checks and optionally
/// the transcription oracle. Solver errors propagate; recovery errors are recorded.
PipelineResult run_pipeline(const ProblemSpec& spec, const TimeGrid& grid, const PipelineOptions& options);

/// Header t,x_1..x_n,u_1..u_m,lambda_1..,mu1_1..,mu2_1..; one row per node, %.17g.
std::string trajectory_csv(const PipelineResult& result, const TimeGrid& grid);

struct RunInfo {
  std::string problem;  // builtin name or config path
  int problem_case = 0;  // 0 for configs
};

inline constexpr int kReportSchemaVersion = 1;

std::string report_json(const PipelineResult& result, const ProblemSpec& spec, const TimeGrid& grid,
                        const PipelineOptions& options, const RunInfo& info);

struct SweepRow {
  double gamma = 0.0;
  int iterations = 0;
  Termination terminated_by = Termination::IterationCap;
  double final_residual = std::nan("");
  double kkt_residual = std::nan("");  // control-law residual with the recovered costate
  std::string error;
};

/// gamma_i = i / (n_points + 1), i = 1..n_points, run on up to `threads` workers
/// (0 = hardware concurrency). Rows come back sorted by gamma; a failing gamma is a
/// row with `error` set. Throws InvalidArgument when n_points < 2.
std::vector<SweepRow> gamma_sweep(const ProblemSpec& spec, const TimeGrid& grid, int n_points,
                                  const DrSettings& base, int threads = 0);

std::string sweep_csv(const std::vector<SweepRow>& rows, int n_steps);

struct TimingResult {
  int repeats = 0;
  double mean = 0.0;
  double min = 0.0;
  std::vector<double> samples;  // seconds per cold solve
};

/// Each repeat samples the problem, builds the projector and runs the iteration
/// from scratch; only that work is timed. Throws InvalidArgument when repeats < 1.
TimingResult timing_report(const ProblemSpec& spec, const TimeGrid& grid, const DrSettings& settings, int repeats);

}  // namespace drlq
