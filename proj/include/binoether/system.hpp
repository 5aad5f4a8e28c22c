#pragma once

// A Hamiltonian system with a candidate symmetry generator, either read from a
// system file or taken from the built-in catalogue.
//
// System file format (UTF-8; '#' starts a comment; blank lines are ignored):
//
//   [system]
//   name = dissipative-n2
//   dof = 2
//
//   [poisson]
//   W(q1,p1) = -p1        # increasing coordinate order only
//   W(q2,p2) = -p2
//
//   [hamiltonian]
//   h = p1 + q1 + p2 + q2
//
//   [symmetry]
//   E(q1) = (p1 + q1)^2
//   E(q2) = (p2 + q2)^2
//
// Coordinates are q1..qn, p1..pn in that order. Absent components are zero.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "binoether/expr.hpp"
#include "binoether/geometry.hpp"

namespace binoether {

struct SystemSpec {
  std::string name;
  PhaseSpace space;
  MultiVectorField W;  // degree 2
  ScalarExpr h;
  MultiVectorField E;  // degree 1
};

/// Throws SystemFileError with the 1-based line and column of the problem.
SystemSpec parse_system(std::string_view text);
SystemSpec load_system(const std::filesystem::path& path);

/// Built-in systems with n degrees of freedom, 1 <= n <= 6:
///   "dissipative"        W = sum p_i d/dp_i ^ d/dq_i, h = sum (p_i + q_i),
///                        E = sum (p_i + q_i)^2 d/dq_i
///   "canonical-noether"  canonical W, h = sum (q_i^2 + p_i^2)/2,
///                        E = Hamiltonian field of (q1^2 + p1^2)/2
///   "broken-generator"   the dissipative W and h with E = sum (p_i + q_i) d/dq_i
/// Throws std::invalid_argument for an unknown name or n out of range.
SystemSpec builtin(const std::string& name, int n);

std::vector<std::string> builtin_names();

}  // namespace binoether
