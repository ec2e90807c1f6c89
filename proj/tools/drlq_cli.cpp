// drlq command-line front end.
//
//   drlq solve --problem pho --case 1 --n 1000 --out run/
//   drlq solve --config problem.json --gamma 0.5 --n 100 --oracle-check
//   drlq config --problem psm --case 2 > psm2.json

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "drlq/bench.hpp"
#include "drlq/problem_library.hpp"

namespace fs = std::filesystem;

namespace {

struct SolveArgs {
  std::string problem;
  std::string config;
  int problem_case = 1;
  int n_steps = 1000;
  double gamma = std::nan("");
  double epsilon = 1e-8;
  int max_iterations = 200;
  std::string scheme = "adjoint";
  std::string out = ".";
  int sweep = 0;
  bool oracle = false;
  int timing = 0;
  int threads = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw drlq::Error(drlq::ErrorCode::InvalidArgument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw drlq::Error(drlq::ErrorCode::InvalidArgument, "cannot write " + path.string());
}

int exit_code(drlq::ErrorCode code) {
  switch (code) {
    case drlq::ErrorCode::ParseError:
    case drlq::ErrorCode::ValidationError:
    case drlq::ErrorCode::InvalidArgument:
    case drlq::ErrorCode::GridTooCoarse:
    case drlq::ErrorCode::NonIncreasingInterval:
      return 2;
    default:
      return 1;
  }
}

int run_solve(const SolveArgs& args) {
  drlq::ProblemSpec spec;
  drlq::RunInfo info;
  double gamma = 0.5;
  if (!args.config.empty()) {
    spec = drlq::load_problem_config(read_file(args.config));
    info.problem = args.config;
  } else {
    const auto inst = drlq::builtin_problem(drlq::parse_problem_name(args.problem),
                                            drlq::parse_problem_case(args.problem_case));
    spec = inst.spec;
    gamma = inst.recommended_gamma;
    info.problem = args.problem;
    info.problem_case = args.problem_case;
  }
  if (!std::isnan(args.gamma)) gamma = args.gamma;

  const drlq::TimeGrid grid = drlq::build_grid(spec.t0, spec.tf, args.n_steps);
  drlq::PipelineOptions options;
  options.dr.gamma = gamma;
  options.dr.epsilon = args.epsilon;
  options.dr.max_iterations = args.max_iterations;
  options.dr.scheme = drlq::parse_costate_scheme(args.scheme);
  options.oracle_check = args.oracle;
  options.dr.validate();

  const drlq::PipelineResult result = drlq::run_pipeline(spec, grid, options);
  nlohmann::json report = nlohmann::json::parse(drlq::report_json(result, spec, grid, options, info));

  if (args.timing > 0) {
    const drlq::TimingResult t = drlq::timing_report(spec, grid, options.dr, args.timing);
    report["timing"] = {{"repeats", t.repeats}, {"mean", t.mean}, {"min", t.min}, {"samples", t.samples}};
  }

  const fs::path out_dir(args.out);
  fs::create_directories(out_dir);
  if (args.sweep > 0) {
    const auto rows = drlq::gamma_sweep(spec, grid, args.sweep, options.dr, args.threads);
    write_file(out_dir / "sweep.csv", drlq::sweep_csv(rows, grid.n_steps()));
    const drlq::SweepRow* best = nullptr;
    for (const auto& r : rows) {
      if (r.error.empty() && (!best || r.iterations < best->iterations)) best = &r;
    }
    report["sweep"] = {{"points", args.sweep},
                       {"best_gamma", best ? nlohmann::json(best->gamma) : nlohmann::json(nullptr)},
                       {"best_iterations", best ? best->iterations : 0}};
  }
  write_file(out_dir / "trajectory.csv", drlq::trajectory_csv(result, grid));
  write_file(out_dir / "report.json", report.dump(2) + "\n");

  const auto& rep = result.dr.report;
  std::printf("%s after %d iterations, objective %.10g, solve %.3g s\n", drlq::to_string(rep.terminated_by),
              rep.iterations, rep.objective_value, rep.wall_time);
  if (!result.kkt.costate_error.empty()) {
    std::printf("costate not recovered: %s\n", result.kkt.costate_error.c_str());
  } else {
    std::printf("alpha %.10g, control-law residual %.3g, complementarity %.3g, adjoint %.3g (windowed %.3g)\n",
                result.kkt.alpha, result.kkt.control_law_max, result.kkt.complementarity, result.kkt.adjoint.full,
                result.kkt.adjoint.windowed);
  }
  if (result.oracle) {
    if (result.oracle->error.empty()) {
      std::printf("oracle distance x %.3g, u %.3g\n", result.oracle->distance.dx, result.oracle->distance.du);
    } else {
      std::printf("oracle failed: %s\n", result.oracle->error.c_str());
    }
  }
  if (args.timing > 0) {
    std::printf("timing over %d cold solves: mean %.4g s, min %.4g s\n", args.timing,
                report["timing"]["mean"].get<double>(), report["timing"]["min"].get<double>());
  }
  std::printf("wrote %s\n", out_dir.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Douglas-Rachford solver for constrained linear-quadratic optimal control"};
  app.require_subcommand(1);

  SolveArgs args;
  CLI::App* solve = app.add_subcommand("solve", "solve a problem and write trajectory.csv and report.json");
  auto* problem = solve->add_option("--problem", args.problem, "builtin problem")
                      ->check(CLI::IsMember({"pho", "psm"}, CLI::ignore_case));
  auto* config = solve->add_option("--config", args.config, "problem definition (JSON)")->check(CLI::ExistingFile);
  problem->excludes(config);
  config->excludes(problem);
  solve->add_option("--case", args.problem_case, "builtin case")->check(CLI::IsMember({1, 2}));
  solve->add_option("--n", args.n_steps, "grid steps N")->check(CLI::PositiveNumber);
  solve->add_option("--gamma", args.gamma, "gamma in (0,1); overrides the preset");
  solve->add_option("--eps", args.epsilon, "stopping tolerance")->capture_default_str();
  solve->add_option("--max-iter", args.max_iterations, "iteration cap")->capture_default_str();
  solve->add_option("--scheme", args.scheme, "costate scheme of the projector")
      ->check(CLI::IsMember({"adjoint", "euler"}))
      ->capture_default_str();
  solve->add_option("--out", args.out, "output directory")->capture_default_str();
  solve->add_option("--sweep-gamma", args.sweep, "also sweep this many gamma values, writing sweep.csv");
  solve->add_flag("--oracle-check", args.oracle, "compare against the transcription QP oracle");
  solve->add_option("--timing", args.timing, "time this many cold solves");
  solve->add_option("--threads", args.threads, "sweep worker threads (0 = all cores)");

  std::string dump_problem = "pho";
  int dump_case = 1;
  CLI::App* dump = app.add_subcommand("config", "print a builtin problem as a JSON problem definition");
  dump->add_option("--problem", dump_problem, "builtin problem")
      ->check(CLI::IsMember({"pho", "psm"}, CLI::ignore_case))
      ->capture_default_str();
  dump->add_option("--case", dump_case, "builtin case")->check(CLI::IsMember({1, 2}))->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      if (args.problem.empty() && args.config.empty()) {
        std::fprintf(stderr, "error: one of --problem or --config is required\n");
        return 2;
      }
      return run_solve(args);
    }
    const auto inst =
        drlq::builtin_problem(drlq::parse_problem_name(dump_problem), drlq::parse_problem_case(dump_case));
    std::cout << drlq::serialize_problem_config(inst.spec) << "\n";
    return 0;
  } catch (const drlq::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
