#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vch/problem.hpp"

namespace vch {

class UnknownProblem : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A published design point and what evaluating it should reproduce.
struct ReferencePoint {
  std::string label;
  DecisionVector x;
  double f = 0.0;
  double tolerance = 0.0;
  bool expect_feasible = true;
};

struct BenchmarkEntry {
  Problem problem;
  DecisionVector reference_x;
  double reference_f = 0.0;
  std::string source_table;
  // reference_x/reference_f come first; extra rows follow.
  std::vector<ReferencePoint> references;
};

BenchmarkEntry himmelblau();
BenchmarkEntry spring();
BenchmarkEntry pressure_vessel();
BenchmarkEntry welded_beam();

BenchmarkEntry toy_linear();
BenchmarkEntry toy_equality();
BenchmarkEntry toy_infeasible();
std::vector<BenchmarkEntry> toy_problems();

/// The four engineering benchmarks, in the order verify-references reports them.
std::vector<BenchmarkEntry> engineering_benchmarks();

std::vector<std::string> problem_names();

/// Looks up a problem by its CLI name; throws UnknownProblem.
BenchmarkEntry find_benchmark(std::string_view name);

}  // namespace vch
