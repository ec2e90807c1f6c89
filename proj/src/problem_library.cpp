#include "drlq/problem_library.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace drlq {

namespace {

using nlohmann::json;

ProblemSpec harmonic_oscillator() {
  ProblemSpec s;
  s.n = 2;
  s.m = 2;
  s.t0 = 0.0;
  s.tf = 2.0 * std::numbers::pi;
  Eigen::MatrixXd A(2, 2);
  A << 0.0, 1.0,
      -4.0, 0.0;
  s.A = A;
  s.B = Eigen::MatrixXd(Eigen::MatrixXd::Identity(2, 2));
  s.q = Eigen::MatrixXd(Eigen::MatrixXd::Ones(2, 1));
  s.r = Eigen::MatrixXd(Eigen::MatrixXd::Ones(2, 1));
  s.x0 = Eigen::Vector2d(0.0, 1.0);
  s.xf = Eigen::Vector2d(0.0, 0.0);
  set_unbounded(s);
  s.u_lower = Eigen::Vector2d(-0.4, -0.5);
  s.u_upper = Eigen::Vector2d(0.1, 0.1);
  return s;
}

ProblemSpec spring_mass() {
  ProblemSpec s;
  s.n = 4;
  s.m = 2;
  s.t0 = 0.0;
  s.tf = 2.0 * std::numbers::pi;
  Eigen::MatrixXd A(4, 4);
  A << 0.0, 1.0, 0.0, 0.0,
      -3.0, 0.0, 2.0, 0.0,
       0.0, 0.0, 0.0, 1.0,
       2.0, 0.0, -2.0, 0.0;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(4, 2);
  B(1, 0) = 1.0;
  B(3, 1) = 1.0;
  s.A = A;
  s.B = B;
  s.q = Eigen::MatrixXd(Eigen::MatrixXd::Ones(4, 1));
  s.r = Eigen::MatrixXd(Eigen::MatrixXd::Ones(2, 1));
  s.x0 = Eigen::Vector4d(0.0, 1.0, 1.0, -1.0);
  s.xf = Eigen::Vector4d::Zero();
  set_unbounded(s);
  s.u_lower = Eigen::Vector2d(-0.5, -0.4);
  s.u_upper = Eigen::Vector2d(0.5, 0.4);
  return s;
}

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const json& require(const json& doc, const char* field) {
  auto it = doc.find(field);
  if (it == doc.end()) parse_fail(std::string("missing field '") + field + "'");
  return *it;
}

double as_number(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_null()) return std::nan("");
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "inf" || s == "+inf" || s == "infinity") return kInf;
    if (s == "-inf" || s == "-infinity") return -kInf;
  }
  parse_fail("field '" + where + "' must be a number");
}

int as_int(const json& v, const char* field) {
  if (!v.is_number_integer()) parse_fail(std::string("field '") + field + "' must be an integer");
  return v.get<int>();
}

Eigen::VectorXd read_vector(const json& v, const char* field) {
  if (!v.is_array()) parse_fail(std::string("field '") + field + "' must be an array");
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double value = as_number(v[i], std::string(field) + "[" + std::to_string(i) + "]");
    if (std::isnan(value)) parse_fail(std::string("field '") + field + "' entries must be numbers");
    out[static_cast<Eigen::Index>(i)] = value;
  }
  return out;
}

// Bound arrays: null entries are unbounded on that side.
Eigen::VectorXd read_bounds(const json& doc, const char* field, int size, double unbounded) {
  auto it = doc.find(field);
  if (it == doc.end() || it->is_null()) return Eigen::VectorXd::Constant(size, unbounded);
  if (!it->is_array()) parse_fail(std::string("field '") + field + "' must be an array");
  Eigen::VectorXd out(static_cast<Eigen::Index>(it->size()));
  for (std::size_t i = 0; i < it->size(); ++i) {
    const double value = as_number((*it)[i], std::string(field) + "[" + std::to_string(i) + "]");
    out[static_cast<Eigen::Index>(i)] = std::isnan(value) ? unbounded : value;
  }
  return out;
}

Eigen::MatrixXd read_matrix(const json& v, const char* field) {
  if (!v.is_array()) parse_fail(std::string("field '") + field + "' must be an array of rows");
  const std::size_t rows = v.size();
  std::size_t cols = rows > 0 && v[0].is_array() ? v[0].size() : 0;
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!v[i].is_array() || v[i].size() != cols) {
      parse_fail(std::string("field '") + field + "' rows must be arrays of equal length");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      const double value =
          as_number(v[i][j], std::string(field) + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
      if (!std::isfinite(value)) parse_fail(std::string("field '") + field + "' entries must be finite");
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
    }
  }
  return out;
}

json write_vector(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::isinf(v[i])) {
      out.push_back(v[i] > 0 ? "inf" : "-inf");
    } else {
      out.push_back(v[i]);
    }
  }
  return out;
}

json write_matrix(const Eigen::MatrixXd& mtx) {
  json out = json::array();
  for (Eigen::Index i = 0; i < mtx.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < mtx.cols(); ++j) row.push_back(mtx(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

bool vectors_equal(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.size() == b.size() && (a.array() == b.array()).all();
}

bool schedules_equal(const MatrixSchedule& a, const MatrixSchedule& b) {
  return a.is_constant() && b.is_constant() && a.rows() == b.rows() && a.cols() == b.cols() &&
         (a.constant().array() == b.constant().array()).all();
}

}  // namespace

BuiltinInstance builtin_problem(BuiltinProblem problem, ProblemCase problem_case) {
  const bool state_constrained = problem_case == ProblemCase::StateConstrained;
  BuiltinInstance out;
  if (problem == BuiltinProblem::HarmonicOscillator) {
    out.spec = harmonic_oscillator();
    out.recommended_gamma = state_constrained ? 0.95 : 0.60;
    if (state_constrained) out.spec.x_lower[0] = -0.025;
  } else {
    out.spec = spring_mass();
    out.recommended_gamma = state_constrained ? 0.95 : 0.55;
    if (state_constrained) out.spec.x_lower[0] = -0.2;
  }
  out.spec.validate();
  return out;
}

BuiltinProblem parse_problem_name(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "pho") return BuiltinProblem::HarmonicOscillator;
  if (lower == "psm") return BuiltinProblem::SpringMass;
  throw Error(ErrorCode::InvalidArgument, "unknown problem '" + std::string(name) + "' (expected pho or psm)");
}

ProblemCase parse_problem_case(int value) {
  if (value == 1) return ProblemCase::ControlConstrained;
  if (value == 2) return ProblemCase::StateConstrained;
  throw Error(ErrorCode::InvalidArgument, "case must be 1 or 2, got " + std::to_string(value));
}

ProblemSpec load_problem_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line/column pair.
    const std::size_t offset = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    const auto head = text.substr(0, offset);
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(head.begin(), head.end(), '\n'));
    const std::size_t last_nl = head.rfind('\n');
    const std::size_t column = last_nl == std::string_view::npos ? offset + 1 : offset - last_nl;
    std::ostringstream os;
    os << "line " << line << ", column " << column << ": " << e.what();
    parse_fail(os.str());
  }
  if (!doc.is_object()) parse_fail("document must be a JSON object");

  ProblemSpec s;
  s.n = as_int(require(doc, "n"), "n");
  s.m = as_int(require(doc, "m"), "m");
  if (s.n < 1 || s.m < 1) throw Error(ErrorCode::ValidationError, "n and m must be positive");
  s.t0 = as_number(require(doc, "t0"), "t0");
  s.tf = as_number(require(doc, "tf"), "tf");
  s.A = read_matrix(require(doc, "A"), "A");
  s.B = read_matrix(require(doc, "B"), "B");
  s.q = Eigen::MatrixXd(read_vector(require(doc, "q"), "q"));
  s.r = Eigen::MatrixXd(read_vector(require(doc, "r"), "r"));
  s.x0 = read_vector(require(doc, "x0"), "x0");
  s.xf = read_vector(require(doc, "xf"), "xf");
  s.x_lower = read_bounds(doc, "x_lower", s.n, -kInf);
  s.x_upper = read_bounds(doc, "x_upper", s.n, kInf);
  s.u_lower = read_bounds(doc, "u_lower", s.m, -kInf);
  s.u_upper = read_bounds(doc, "u_upper", s.m, kInf);
  s.validate();
  return s;
}

std::string serialize_problem_config(const ProblemSpec& spec) {
  if (!spec.A.is_constant() || !spec.B.is_constant() || !spec.q.is_constant() || !spec.r.is_constant()) {
    throw Error(ErrorCode::InvalidArgument, "only time-invariant problems can be serialized");
  }
  json doc;
  doc["n"] = spec.n;
  doc["m"] = spec.m;
  doc["t0"] = spec.t0;
  doc["tf"] = spec.tf;
  doc["A"] = write_matrix(spec.A.constant());
  doc["B"] = write_matrix(spec.B.constant());
  doc["q"] = write_vector(spec.q.constant().col(0));
  doc["r"] = write_vector(spec.r.constant().col(0));
  doc["x0"] = write_vector(spec.x0);
  doc["xf"] = write_vector(spec.xf);
  doc["x_lower"] = write_vector(spec.x_lower);
  doc["x_upper"] = write_vector(spec.x_upper);
  doc["u_lower"] = write_vector(spec.u_lower);
  doc["u_upper"] = write_vector(spec.u_upper);
  return doc.dump(2);
}

bool specs_equal(const ProblemSpec& a, const ProblemSpec& b) {
  return a.n == b.n && a.m == b.m && a.t0 == b.t0 && a.tf == b.tf && schedules_equal(a.A, b.A) &&
         schedules_equal(a.B, b.B) && schedules_equal(a.q, b.q) && schedules_equal(a.r, b.r) &&
         vectors_equal(a.x0, b.x0) && vectors_equal(a.xf, b.xf) && vectors_equal(a.x_lower, b.x_lower) &&
         vectors_equal(a.x_upper, b.x_upper) && vectors_equal(a.u_lower, b.u_lower) &&
         vectors_equal(a.u_upper, b.u_upper);
}

}  // namespace drlq
