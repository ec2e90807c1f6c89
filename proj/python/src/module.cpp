#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "drlq/bench.hpp"
#include "drlq/problem_library.hpp"

namespace py = pybind11;
using namespace drlq;

namespace {

// Row-major trajectories go out as (N+1, k) float arrays.
Eigen::MatrixXd dense(const Trajectory& t) { return t; }

DrSettings make_settings(double gamma, double epsilon, int max_iterations, const std::string& scheme) {
  DrSettings s;
  s.gamma = gamma;
  s.epsilon = epsilon;
  s.max_iterations = max_iterations;
  s.scheme = parse_costate_scheme(scheme);
  s.validate();
  return s;
}

py::dict solution_dict(const DrSolution& sol, const TimeGrid& grid) {
  py::dict d;
  d["t"] = grid.nodes();
  d["x"] = dense(sol.solution.x);
  d["u"] = dense(sol.solution.u);
  d["lambda_dr"] = dense(sol.costate_dr.lambda);
  d["iterations"] = sol.report.iterations;
  d["terminated_by"] = to_string(sol.report.terminated_by);
  d["objective"] = sol.report.objective_value;
  d["wall_time"] = sol.report.wall_time;
  std::vector<double> history;
  for (const auto& r : sol.report.residual_history) history.push_back(r.max());
  d["residual_history"] = history;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "C++ core of drlq";
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  py::class_<ProblemSpec>(m, "ProblemSpec")
      .def_readonly("n", &ProblemSpec::n)
      .def_readonly("m", &ProblemSpec::m)
      .def_readonly("t0", &ProblemSpec::t0)
      .def_readonly("tf", &ProblemSpec::tf)
      .def_readonly("x0", &ProblemSpec::x0)
      .def_readonly("xf", &ProblemSpec::xf)
      .def_readonly("x_lower", &ProblemSpec::x_lower)
      .def_readonly("x_upper", &ProblemSpec::x_upper)
      .def_readonly("u_lower", &ProblemSpec::u_lower)
      .def_readonly("u_upper", &ProblemSpec::u_upper)
      .def("__eq__", [](const ProblemSpec& a, const ProblemSpec& b) { return specs_equal(a, b); });

  m.def(
      "builtin_problem",
      [](const std::string& name, int problem_case) {
        const BuiltinInstance inst = builtin_problem(parse_problem_name(name), parse_problem_case(problem_case));
        return py::make_tuple(inst.spec, inst.recommended_gamma);
      },
      py::arg("name"), py::arg("case") = 1, "Returns (spec, recommended_gamma) for 'pho' or 'psm'.");
  m.def("load_problem_config", &load_problem_config, py::arg("text"));
  m.def("serialize_problem_config", &serialize_problem_config, py::arg("spec"));
  m.def("prox_scalar", &prox_scalar, py::arg("value"), py::arg("beta"), py::arg("weight"), py::arg("lower"),
        py::arg("upper"));

  m.def(
      "solve",
      [](const ProblemSpec& spec, int n_steps, double gamma, double epsilon, int max_iterations,
         const std::string& scheme) {
        const TimeGrid grid = build_grid(spec.t0, spec.tf, n_steps);
        const DrSettings settings = make_settings(gamma, epsilon, max_iterations, scheme);
        DrSolution sol;
        {
          py::gil_scoped_release release;
          sol = dr_solve(spec, grid, settings);
        }
        return solution_dict(sol, grid);
      },
      py::arg("spec"), py::arg("n_steps"), py::arg("gamma"), py::arg("epsilon") = 1e-8,
      py::arg("max_iterations") = 200, py::arg("scheme") = "adjoint");

  m.def(
      "run_pipeline",
      [](const ProblemSpec& spec, int n_steps, double gamma, double epsilon, int max_iterations,
         const std::string& scheme, bool oracle_check) {
        const TimeGrid grid = build_grid(spec.t0, spec.tf, n_steps);
        PipelineOptions options;
        options.dr = make_settings(gamma, epsilon, max_iterations, scheme);
        options.oracle_check = oracle_check;
        PipelineResult result;
        {
          py::gil_scoped_release release;
          result = run_pipeline(spec, grid, options);
        }
        py::dict d = solution_dict(result.dr, grid);
        d["csv"] = trajectory_csv(result, grid);
        d["report"] = report_json(result, spec, grid, options, RunInfo{"python", 0});
        d["alpha"] = result.kkt.alpha;
        d["control_law_residual"] = result.kkt.control_law_max;
        d["complementarity_residual"] = result.kkt.complementarity;
        d["adjoint_residual"] = result.kkt.adjoint.full;
        d["adjoint_residual_windowed"] = result.kkt.adjoint.windowed;
        d["lambda"] = result.lambda ? py::object(py::cast(dense(result.lambda->lambda))) : py::none();
        d["mu1"] = result.mu ? py::object(py::cast(dense(result.mu->mu1))) : py::none();
        d["mu2"] = result.mu ? py::object(py::cast(dense(result.mu->mu2))) : py::none();
        return d;
      },
      py::arg("spec"), py::arg("n_steps"), py::arg("gamma"), py::arg("epsilon") = 1e-8,
      py::arg("max_iterations") = 200, py::arg("scheme") = "adjoint", py::arg("oracle_check") = false);

  m.def(
      "solve_qp_oracle",
      [](const ProblemSpec& spec, int n_steps, double tolerance) {
        const TimeGrid grid = build_grid(spec.t0, spec.tf, n_steps);
        QpOracleSettings settings;
        settings.tolerance = tolerance;
        QpOracleResult r;
        {
          py::gil_scoped_release release;
          r = solve_discretized_qp_detailed(spec, grid, settings);
        }
        py::dict d;
        d["x"] = dense(r.solution.x);
        d["u"] = dense(r.solution.u);
        d["objective"] = r.objective;
        d["equality_residual"] = r.equality_residual;
        d["kkt_residual"] = r.kkt_residual;
        return d;
      },
      py::arg("spec"), py::arg("n_steps"), py::arg("tolerance") = 1e-10);

  m.def(
      "gamma_sweep",
      [](const ProblemSpec& spec, int n_steps, int n_points, double epsilon, int max_iterations, int threads) {
        const TimeGrid grid = build_grid(spec.t0, spec.tf, n_steps);
        const DrSettings base = make_settings(0.5, epsilon, max_iterations, "adjoint");
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = gamma_sweep(spec, grid, n_points, base, threads);
        }
        py::list out;
        for (const SweepRow& r : rows) {
          py::dict d;
          d["gamma"] = r.gamma;
          d["iterations"] = r.iterations;
          d["terminated_by"] = to_string(r.terminated_by);
          d["kkt_residual"] = r.kkt_residual;
          d["error"] = r.error;
          out.append(d);
        }
        return out;
      },
      py::arg("spec"), py::arg("n_steps"), py::arg("n_points"), py::arg("epsilon") = 1e-8,
      py::arg("max_iterations") = 200, py::arg("threads") = 0);
}
