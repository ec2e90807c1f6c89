#include <gtest/gtest.h>

#include "drlq/problem_library.hpp"

using namespace drlq;

namespace {

ErrorCode code_of(const std::string& text) {
  try {
    load_problem_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::InvalidArgument;
}

const char* kMinimal = R"({
  "n": 2, "m": 1, "t0": 0, "tf": 1,
  "A": [[0, 1], [0, 0]],
  "B": [[0], [1]],
  "q": [1, 1], "r": [RVAL],
  "x0": [1, 0], "xf": [0, 0]
})";

std::string minimal(const std::string& r) {
  std::string s = kMinimal;
  s.replace(s.find("RVAL"), 4, r);
  return s;
}

}  // namespace

TEST(Builtin, TablePresets) {
  const auto pho1 = builtin_problem(BuiltinProblem::HarmonicOscillator, ProblemCase::ControlConstrained);
  EXPECT_EQ(pho1.recommended_gamma, 0.60);
  EXPECT_EQ(pho1.spec.u_lower, Eigen::Vector2d(-0.4, -0.5));
  EXPECT_EQ(pho1.spec.u_upper, Eigen::Vector2d(0.1, 0.1));
  EXPECT_FALSE(pho1.spec.has_state_bounds());
  EXPECT_EQ(pho1.spec.x0, Eigen::Vector2d(0.0, 1.0));
  EXPECT_EQ(pho1.spec.xf, Eigen::Vector2d::Zero());
  EXPECT_DOUBLE_EQ(pho1.spec.tf, 2.0 * M_PI);
  Eigen::Matrix2d a;
  a << 0.0, 1.0, -4.0, 0.0;
  EXPECT_EQ(pho1.spec.A.constant(), Eigen::MatrixXd(a));

  const auto pho2 = builtin_problem(BuiltinProblem::HarmonicOscillator, ProblemCase::StateConstrained);
  EXPECT_EQ(pho2.recommended_gamma, 0.95);
  EXPECT_EQ(pho2.spec.x_lower(0), -0.025);
  EXPECT_EQ(pho2.spec.x_lower(1), -kInf);

  const auto psm2 = builtin_problem(BuiltinProblem::SpringMass, ProblemCase::StateConstrained);
  EXPECT_EQ(psm2.recommended_gamma, 0.95);
  EXPECT_EQ(psm2.spec.n, 4);
  EXPECT_EQ(psm2.spec.u_lower, Eigen::Vector2d(-0.5, -0.4));
  EXPECT_EQ(psm2.spec.u_upper, Eigen::Vector2d(0.5, 0.4));
  EXPECT_EQ(psm2.spec.x_lower(0), -0.2);
  Eigen::Vector4d x0(0.0, 1.0, 1.0, -1.0);
  EXPECT_EQ(psm2.spec.x0, Eigen::VectorXd(x0));

  for (auto p : {BuiltinProblem::HarmonicOscillator, BuiltinProblem::SpringMass})
    for (auto c : {ProblemCase::ControlConstrained, ProblemCase::StateConstrained})
      EXPECT_NO_THROW(builtin_problem(p, c).spec.validate());
}

TEST(Builtin, NameParsing) {
  EXPECT_EQ(parse_problem_name("PHO"), BuiltinProblem::HarmonicOscillator);
  EXPECT_EQ(parse_problem_name("psm"), BuiltinProblem::SpringMass);
  EXPECT_THROW(parse_problem_name("mtm"), Error);
  EXPECT_EQ(parse_problem_case(2), ProblemCase::StateConstrained);
  EXPECT_THROW(parse_problem_case(3), Error);
}

TEST(Config, RoundTripBuiltins) {
  for (auto p : {BuiltinProblem::HarmonicOscillator, BuiltinProblem::SpringMass})
    for (auto c : {ProblemCase::ControlConstrained, ProblemCase::StateConstrained}) {
      const auto spec = builtin_problem(p, c).spec;
      const auto text = serialize_problem_config(spec);
      EXPECT_TRUE(specs_equal(load_problem_config(text), spec)) << text;
    }
}

TEST(Config, HandWrittenPhoCase1) {
  const char* text = R"({
    "n": 2, "m": 2, "t0": 0, "tf": 6.283185307179586,
    "A": [[0, 1], [-4, 0]],
    "B": [[1, 0], [0, 1]],
    "q": [1, 1], "r": [1, 1],
    "x0": [0, 1], "xf": [0, 0],
    "u_lower": [-0.4, -0.5], "u_upper": [0.1, 0.1]
  })";
  EXPECT_TRUE(specs_equal(load_problem_config(text),
                          builtin_problem(BuiltinProblem::HarmonicOscillator, ProblemCase::ControlConstrained).spec));
}

TEST(Config, InfiniteBoundSpellings) {
  std::string text = minimal("1");
  text.insert(text.rfind('}'), R"(, "x_lower": [null, "-inf"], "x_upper": ["inf", 2])");
  const auto spec = load_problem_config(text);
  EXPECT_EQ(spec.x_lower(0), -kInf);
  EXPECT_EQ(spec.x_lower(1), -kInf);
  EXPECT_EQ(spec.x_upper(0), kInf);
  EXPECT_EQ(spec.x_upper(1), 2.0);
  EXPECT_EQ(spec.u_lower(0), -kInf);
}

TEST(Config, Errors) {
  EXPECT_NO_THROW(load_problem_config(minimal("1")));
  EXPECT_EQ(code_of(minimal("0")), ErrorCode::ValidationError);
  EXPECT_EQ(code_of(minimal("-1")), ErrorCode::ValidationError);

  std::string bad_x0 = minimal("1");
  bad_x0.replace(bad_x0.find("\"x0\": [1, 0]"), 12, "\"x0\": [1, 0, 0]");
  EXPECT_EQ(code_of(bad_x0), ErrorCode::ValidationError);

  std::string crossed = minimal("1");
  crossed.insert(crossed.rfind('}'), R"(, "u_lower": [1], "u_upper": [0])");
  EXPECT_EQ(code_of(crossed), ErrorCode::ValidationError);

  std::string missing = minimal("1");
  missing.replace(missing.find("\"q\": [1, 1], "), 13, "");
  EXPECT_EQ(code_of(missing), ErrorCode::ParseError);

  try {
    load_problem_config("{\n  \"n\": 2,\n  \"m\": ]\n}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Config, TimeVaryingCannotSerialize) {
  auto spec = builtin_problem(BuiltinProblem::HarmonicOscillator, ProblemCase::ControlConstrained).spec;
  spec.A = MatrixSchedule(2, 2, [](double t) { return Eigen::MatrixXd::Identity(2, 2) * t; });
  EXPECT_THROW(serialize_problem_config(spec), Error);
}
