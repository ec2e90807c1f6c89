#include "drlq/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <limits>
#include <thread>

#include <json.hpp>

namespace drlq {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<int> window_centres(const std::vector<JunctionPoint>& junctions, const Trajectory& x,
                                const ProblemSpec& spec, ActivityTolerance tol) {
  std::vector<int> nodes;
  for (const JunctionPoint& jp : junctions) nodes.push_back(jp.node_index);
  for (int k : state_transition_nodes(x, spec, tol)) nodes.push_back(k);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

// NaN and infinities become null; JSON has no spelling for them.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void append(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

PipelineResult run_pipeline(const ProblemSpec& spec, const TimeGrid& grid, const PipelineOptions& options) {
  options.dr.validate();
  auto problem = std::make_shared<const SampledProblem>(spec, grid);
  const AffineProjector projector(problem, AffineProjector::Options{options.dr.scheme, JacobianPolicy::Cached});

  PipelineResult out;
  out.dr = dr_solve(projector, options.dr);
  const TrajectoryPair& z = out.dr.solution;
  KktSummary& kkt = out.kkt;

  const std::vector<JunctionPoint> junctions = detect_junctions(z.u, spec, options.activity);
  kkt.junction_count = static_cast<int>(junctions.size());
  try {
    CostateRecovery rec = recover_costate(out.dr.costate_dr, z, *problem, junctions);
    kkt.alpha = rec.alpha;
    out.lambda = std::move(rec.lambda);
  } catch (const Error& e) {
    kkt.costate_error = e.what();
  }

  if (out.lambda) {
    kkt.control_law = control_law_residual(z, *out.lambda, *problem);
    kkt.control_law_max = kkt.control_law.size() > 0 ? kkt.control_law.maxCoeff() : 0.0;
    try {
      out.mu = recover_multipliers(z, *out.lambda, *problem, options.activity);
    } catch (const Error& e) {
      kkt.multiplier_error = e.what();
    }
    if (out.mu) {
      kkt.complementarity = complementarity_residual(z, *out.mu, spec);
      kkt.adjoint = adjoint_residual(z, *out.lambda, *out.mu, *problem,
                                     window_centres(junctions, z.x, spec, options.activity),
                                     options.junction_window);
    }
  }

  if (options.oracle_check) {
    OracleSummary oracle;
    const auto start = Clock::now();
    try {
      QpOracleSettings qs;
      qs.tolerance = options.oracle_tolerance;
      const QpOracleResult qp = solve_discretized_qp_detailed(spec, grid, qs);
      oracle.distance = linf_distance(z, qp.solution);
      oracle.objective = qp.objective;
    } catch (const Error& e) {
      oracle.error = e.what();
    }
    oracle.wall_time = seconds_since(start);
    out.oracle = oracle;
  }
  return out;
}

std::string trajectory_csv(const PipelineResult& result, const TimeGrid& grid) {
  const TrajectoryPair& z = result.dr.solution;
  const Eigen::Index n = z.x.cols();
  const Eigen::Index m = z.u.cols();
  std::string out = "t";
  for (Eigen::Index i = 1; i <= n; ++i) out += ",x_" + std::to_string(i);
  for (Eigen::Index j = 1; j <= m; ++j) out += ",u_" + std::to_string(j);
  for (const char* name : {"lambda_", "mu1_", "mu2_"}) {
    for (Eigen::Index i = 1; i <= n; ++i) out += "," + std::string(name) + std::to_string(i);
  }
  out += '\n';
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const auto cell = [&](const std::optional<Trajectory>& source, Eigen::Index k, Eigen::Index i) {
    out += ',';
    append(out, source ? (*source)(k, i) : nan);
  };
  const std::optional<Trajectory> lambda = result.lambda ? std::optional(result.lambda->lambda) : std::nullopt;
  const std::optional<Trajectory> mu1 = result.mu ? std::optional(result.mu->mu1) : std::nullopt;
  const std::optional<Trajectory> mu2 = result.mu ? std::optional(result.mu->mu2) : std::nullopt;
  for (Eigen::Index k = 0; k < z.x.rows(); ++k) {
    append(out, grid.node(static_cast<int>(k)));
    for (Eigen::Index i = 0; i < n; ++i) {
      out += ',';
      append(out, z.x(k, i));
    }
    for (Eigen::Index j = 0; j < m; ++j) {
      out += ',';
      append(out, z.u(k, j));
    }
    for (Eigen::Index i = 0; i < n; ++i) cell(lambda, k, i);
    for (Eigen::Index i = 0; i < n; ++i) cell(mu1, k, i);
    for (Eigen::Index i = 0; i < n; ++i) cell(mu2, k, i);
    out += '\n';
  }
  return out;
}

std::string report_json(const PipelineResult& result, const ProblemSpec& spec, const TimeGrid& grid,
                        const PipelineOptions& options, const RunInfo& info) {
  const SolveReport& rep = result.dr.report;
  json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["problem"] = {{"name", info.problem}, {"case", info.problem_case}, {"n", spec.n}, {"m", spec.m},
                    {"t0", spec.t0}, {"tf", spec.tf}};
  doc["settings"] = {{"gamma", options.dr.gamma},
                     {"beta", (1.0 - options.dr.gamma) / options.dr.gamma},
                     {"epsilon", options.dr.epsilon},
                     {"max_iterations", options.dr.max_iterations},
                     {"n_steps", grid.n_steps()},
                     {"costate_scheme", to_string(options.dr.scheme)}};

  json dx = json::array(), du = json::array();
  for (const LinfDistance& d : rep.residual_history) {
    dx.push_back(d.dx);
    du.push_back(d.du);
  }
  const LinfDistance last = rep.residual_history.empty() ? LinfDistance{} : rep.residual_history.back();
  doc["result"] = {{"iterations", rep.iterations},
                   {"terminated_by", to_string(rep.terminated_by)},
                   {"final_residual", {{"x", last.dx}, {"u", last.du}}},
                   {"residual_history", {{"x", dx}, {"u", du}}},
                   {"objective", number(rep.objective_value)},
                   {"wall_time", rep.wall_time}};

  const KktSummary& k = result.kkt;
  json control_law = json::array();
  for (Eigen::Index j = 0; j < k.control_law.size(); ++j) control_law.push_back(number(k.control_law[j]));
  doc["kkt"] = {{"junctions", k.junction_count},
                {"alpha", number(k.alpha)},
                {"costate_error", k.costate_error.empty() ? json(nullptr) : json(k.costate_error)},
                {"multiplier_error", k.multiplier_error.empty() ? json(nullptr) : json(k.multiplier_error)},
                {"control_law", control_law},
                {"control_law_max", number(k.control_law_max)},
                {"complementarity", number(k.complementarity)},
                {"adjoint", number(k.adjoint.full)},
                {"adjoint_windowed", number(k.adjoint.windowed)},
                {"junction_window", options.junction_window}};
  if (result.mu) {
    json mu_max = json::array();
    for (Eigen::Index i = 0; i < result.mu->mu1.cols(); ++i) {
      mu_max.push_back({{"mu1", result.mu->mu1.col(i).maxCoeff()}, {"mu2", result.mu->mu2.col(i).maxCoeff()}});
    }
    doc["kkt"]["multiplier_max"] = mu_max;
  }
  if (result.oracle) {
    const OracleSummary& o = *result.oracle;
    doc["oracle"] = {{"error", o.error.empty() ? json(nullptr) : json(o.error)},
                     {"linf_x", number(o.distance.dx)},
                     {"linf_u", number(o.distance.du)},
                     {"objective", number(o.objective)},
                     {"wall_time", o.wall_time}};
  }
  return doc.dump(2) + "\n";
}

std::vector<SweepRow> gamma_sweep(const ProblemSpec& spec, const TimeGrid& grid, int n_points,
                                  const DrSettings& base, int threads) {
  if (n_points < 2) throw Error(ErrorCode::InvalidArgument, "a gamma sweep needs at least 2 points");
  auto problem = std::make_shared<const SampledProblem>(spec, grid);
  const AffineProjector projector(problem, AffineProjector::Options{base.scheme, JacobianPolicy::Cached});

  std::vector<SweepRow> rows(static_cast<std::size_t>(n_points));
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int i = next++; i < n_points; i = next++) {
      SweepRow& row = rows[static_cast<std::size_t>(i)];
      row.gamma = static_cast<double>(i + 1) / (n_points + 1);
      try {
        DrSettings settings = base;
        settings.gamma = row.gamma;
        const DrSolution sol = dr_solve(projector, settings);
        row.iterations = sol.report.iterations;
        row.terminated_by = sol.report.terminated_by;
        row.final_residual = sol.report.residual_history.back().max();
        const auto junctions = detect_junctions(sol.solution.u, spec);
        const CostateRecovery rec = recover_costate(sol.costate_dr, sol.solution, *problem, junctions);
        row.kkt_residual = control_law_residual(sol.solution, rec.lambda, *problem).maxCoeff();
      } catch (const Error& e) {
        row.error = e.what();
      }
    }
  };
  int count = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  count = std::min(count, n_points);
  std::vector<std::thread> pool;
  for (int t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, int n_steps) {
  std::string out = "gamma,n_steps,iterations,terminated_by,final_residual,kkt_residual,error\n";
  for (const SweepRow& r : rows) {
    append(out, r.gamma);
    out += "," + std::to_string(n_steps) + "," + std::to_string(r.iterations) + ",";
    out += r.error.empty() || r.iterations > 0 ? to_string(r.terminated_by) : "";
    out += ',';
    append(out, r.final_residual);
    out += ',';
    append(out, r.kkt_residual);
    std::string err = r.error;
    std::replace(err.begin(), err.end(), '"', '\'');
    out += ",\"" + err + "\"\n";
  }
  return out;
}

TimingResult timing_report(const ProblemSpec& spec, const TimeGrid& grid, const DrSettings& settings, int repeats) {
  if (repeats < 1) throw Error(ErrorCode::InvalidArgument, "timing needs at least one repeat");
  settings.validate();
  TimingResult out;
  out.repeats = repeats;
  for (int r = 0; r < repeats; ++r) {
    const auto start = Clock::now();
    auto problem = std::make_shared<const SampledProblem>(spec, grid);
    const AffineProjector projector(problem, AffineProjector::Options{settings.scheme, JacobianPolicy::Cached});
    dr_solve(projector, settings);
    out.samples.push_back(seconds_since(start));
  }
  double total = 0.0;
  out.min = out.samples.front();
  for (double s : out.samples) {
    total += s;
    out.min = std::min(out.min, s);
  }
  out.mean = total / static_cast<double>(out.samples.size());
  return out;
}

}  // namespace drlq
