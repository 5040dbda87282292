#pragma once

// Built-in test problems and the majorants they are known to satisfy.

#include <string>
#include <vector>

#include "geqn/majorant.hpp"
#include "geqn/problem.hpp"

namespace geqn {

struct CertifiedPair {
  std::string problem;
  std::string label;
  MajorantSpec<double> spec;
  Vector x0;
};

/// Registered problems, in a fixed order.
std::vector<ProblemInstance<double>> registry_problems();

const ProblemInstance<double>& registry_problem(const std::string& name);

/// (problem, majorant, start) triples expected to certify.
std::vector<CertifiedPair> certified_pairs();

/// Pairs whose majorant is too small for the problem; the majorant
/// inequality must fail.
std::vector<CertifiedPair> incompatible_pairs();

}  // namespace geqn
