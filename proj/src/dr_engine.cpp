#include "drlq/dr_engine.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace drlq {

void DrSettings::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "gamma must lie in (0, 1), got " + std::to_string(gamma));
  }
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  if (max_iterations < 1) throw Error(ErrorCode::InvalidArgument, "max_iterations must be at least 1");
}

const char* to_string(Termination t) {
  return t == Termination::ToleranceMet ? "ToleranceMet" : "IterationCap";
}

DrStepResult dr_step(const TrajectoryPair& current, const AffineProjector& projector,
                     const ProxParameters& params) {
  DrStepResult step;
  step.shadow = prox_f(current, params, projector.problem());
  TrajectoryPair reflected = 2.0 * step.shadow - current;
  step.reflected = projector.project(reflected);
  step.next = current;
  step.next += step.reflected.projection;
  step.next -= step.shadow;
  return step;
}

DrSolution dr_solve(const AffineProjector& projector, const DrSettings& settings) {
  settings.validate();
  const SampledProblem& problem = projector.problem();
  if (projector.options().scheme != settings.scheme) {
    throw Error(ErrorCode::InvalidArgument, "projector costate scheme differs from settings.scheme");
  }
  const ProxParameters params = ProxParameters::from_gamma(settings.gamma);

  TrajectoryPair iterate = settings.initial ? *settings.initial
                                            : TrajectoryPair::zeros(problem.n_nodes(), problem.n(), problem.m());
  problem.check_shape(iterate);

  DrSolution out;
  SolveReport& report = out.report;
  report.residual_history.reserve(static_cast<std::size_t>(settings.max_iterations));

  const auto start = std::chrono::steady_clock::now();
  for (int k = 0; k < settings.max_iterations; ++k) {
    DrStepResult step = dr_step(iterate, projector, params);
    const LinfDistance change = linf_distance(step.next, iterate);
    report.residual_history.push_back(change);
    report.iterations = k + 1;
    iterate = std::move(step.next);
    out.solution = std::move(step.shadow);
    out.costate_dr = std::move(step.reflected.costate);
    if (change.max() <= settings.epsilon) {
      report.terminated_by = Termination::ToleranceMet;
      break;
    }
  }
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.objective_value = objective_value(problem, out.solution);
  return out;
}

DrSolution dr_solve(const ProblemSpec& spec, const TimeGrid& grid, const DrSettings& settings) {
  settings.validate();
  AffineProjector projector(std::make_shared<const SampledProblem>(spec, grid),
                            AffineProjector::Options{settings.scheme, JacobianPolicy::Cached});
  return dr_solve(projector, settings);
}

}  // namespace drlq
