#pragma once

// Problem files (.geqn): a JSON object describing a polynomial generalized
// equation. Grammar in docs/problem-format.md.

#include <string>

#include "geqn/problem.hpp"

namespace geqn {

/// Parses and validates; a known solution must have natural residual <= 1e-10.
ProblemInstance<double> parse_problem_text(const std::string& text);
ProblemInstance<double> parse_problem(const std::string& path);

/// Inverse of parse_problem_text for polynomial and extremal problems.
std::string serialize_problem(const ProblemInstance<double>& problem);

}  // namespace geqn
