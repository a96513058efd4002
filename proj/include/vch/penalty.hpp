#pragma once

// Penalty-function constraint handlers used as baselines against the
// feasibility-rule comparator. Each maps an evaluated individual to a scalar
// fitness psi; a feasible individual always maps to its raw objective.

#include <limits>
#include <span>
#include <vector>

#include "vch/problem.hpp"

namespace vch {

enum class Ordering { AWins, BWins, Tie };

struct PenaltyLevel {
  double threshold = std::numeric_limits<double>::infinity();
  double coefficient = 1e6;
};

/// Violation bands shared by every constraint. A violation v > 0 falls in the
/// first level whose threshold is >= v (the last level catches everything above).
struct StaticPenaltyConfig {
  std::vector<PenaltyLevel> levels{PenaltyLevel{}};

  void validate() const;
};

struct DynamicPenaltyConfig {
  double C = 0.5;
  double alpha = 2.0;
  double beta = 2.0;

  void validate() const;
};

double static_penalty_fitness(const EvaluatedIndividual& ind, const StaticPenaltyConfig& cfg);

/// psi = f + (C t)^alpha * (sum A_i^beta + sum B_j)
double dynamic_penalty_fitness(double f, std::span<const double> ineq_violation,
                               std::span<const double> eq_violation, int generation,
                               const DynamicPenaltyConfig& cfg);
double dynamic_penalty_fitness(const EvaluatedIndividual& ind, int generation,
                               const DynamicPenaltyConfig& cfg);

/// Worst feasible objective in the population, or 0 when nothing is feasible.
double worst_feasible(std::span<const EvaluatedIndividual> population);

double deb_fitness(const EvaluatedIndividual& ind, double f_worst);
Ordering deb_compare(const EvaluatedIndividual& a, const EvaluatedIndividual& b, double f_worst);

}  // namespace vch
