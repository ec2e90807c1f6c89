#pragma once

#include <string>
#include <string_view>

#include "drlq/core_model.hpp"

namespace drlq {

enum class BuiltinProblem { HarmonicOscillator, SpringMass };
enum class ProblemCase { ControlConstrained = 1, StateConstrained = 2 };

struct BuiltinInstance {
  ProblemSpec spec;
  double recommended_gamma = 0.5;
};

/// Harmonic oscillator (n=2, m=2) and two-mass spring system (n=4, m=2) on [0, 2 pi]
/// with Q = R = I. Case 1 bounds the controls; case 2 adds a lower bound on x_1.
BuiltinInstance builtin_problem(BuiltinProblem problem, ProblemCase problem_case);

/// "pho" / "psm", case-insensitive. Throws InvalidArgument otherwise.
BuiltinProblem parse_problem_name(std::string_view name);
/// 1 or 2. Throws InvalidArgument otherwise.
ProblemCase parse_problem_case(int value);

/**
 * Problem configuration document (JSON object):
 *
 *   n, m      integers
 *   t0, tf    numbers
 *   A         n rows of n numbers
 *   B         n rows of m numbers
 *   q, r      diagonals of Q (n, >= 0) and R (m, > 0)
 *   x0, xf    n numbers
 *   x_lower, x_upper, u_lower, u_upper
 *             optional arrays; an absent array is unbounded, and individual
 *             entries may be null, "inf" or "-inf".
 *
 * Throws ParseError (with line and column, or the field) for malformed input and
 * ValidationError for inconsistent data.
 */
ProblemSpec load_problem_config(std::string_view text);

/// Serializes a time-invariant spec in the format read by load_problem_config.
/// Infinite bounds are written as "inf"/"-inf". Throws InvalidArgument for
/// time-varying specs.
std::string serialize_problem_config(const ProblemSpec& spec);

/// Exact equality of dimensions, horizon, constant matrices and bounds.
bool specs_equal(const ProblemSpec& a, const ProblemSpec& b);

}  // namespace drlq
