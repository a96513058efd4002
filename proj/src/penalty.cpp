#include "vch/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vch {

void StaticPenaltyConfig::validate() const {
  if (levels.empty()) throw std::invalid_argument("static penalty: at least one level required");
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (!(levels[k].coefficient >= 0.0))
      throw std::invalid_argument("static penalty: coefficients must be >= 0");
    if (k > 0) {
      if (!(levels[k].threshold > levels[k - 1].threshold))
        throw std::invalid_argument("static penalty: thresholds must be strictly increasing");
      if (levels[k].coefficient < levels[k - 1].coefficient)
        throw std::invalid_argument("static penalty: coefficients must be non-decreasing");
    }
  }
}

void DynamicPenaltyConfig::validate() const {
  if (!(C > 0.0)) throw std::invalid_argument("dynamic penalty: C must be > 0");
}

double static_penalty_fitness(const EvaluatedIndividual& ind, const StaticPenaltyConfig& cfg) {
  if (ind.feasible) return ind.f;
  double penalty = 0.0;
  for (double g : ind.G) {
    const double v = std::max(0.0, g);
    if (v == 0.0) continue;
    auto level = std::find_if(cfg.levels.begin(), cfg.levels.end(),
                              [v](const PenaltyLevel& l) { return v <= l.threshold; });
    if (level == cfg.levels.end()) level = std::prev(cfg.levels.end());
    penalty += level->coefficient * v * v;
  }
  return ind.f + penalty;
}

double dynamic_penalty_fitness(double f, std::span<const double> ineq_violation,
                               std::span<const double> eq_violation, int generation,
                               const DynamicPenaltyConfig& cfg) {
  double svc = 0.0;
  for (double a : ineq_violation)
    if (a > 0.0) svc += std::pow(a, cfg.beta);
  for (double b : eq_violation) svc += b;
  if (svc == 0.0) return f;
  return f + std::pow(cfg.C * generation, cfg.alpha) * svc;
}

double dynamic_penalty_fitness(const EvaluatedIndividual& ind, int generation,
                               const DynamicPenaltyConfig& cfg) {
  if (ind.feasible) return ind.f;
  return dynamic_penalty_fitness(ind.f, ind.ineq_violation, ind.eq_violation, generation, cfg);
}

double worst_feasible(std::span<const EvaluatedIndividual> population) {
  bool any = false;
  double worst = 0.0;
  for (const auto& ind : population) {
    if (!ind.feasible) continue;
    worst = any ? std::max(worst, ind.f) : ind.f;
    any = true;
  }
  return worst;
}

double deb_fitness(const EvaluatedIndividual& ind, double f_worst) {
  return ind.feasible ? ind.f : f_worst + ind.cv;
}

Ordering deb_compare(const EvaluatedIndividual& a, const EvaluatedIndividual& b, double f_worst) {
  const double pa = deb_fitness(a, f_worst);
  const double pb = deb_fitness(b, f_worst);
  if (pa < pb) return Ordering::AWins;
  if (pb < pa) return Ordering::BWins;
  // f_worst + cv can round back to f_worst when cv is tiny.
  if (a.feasible != b.feasible) return a.feasible ? Ordering::AWins : Ordering::BWins;
  return Ordering::Tie;
}

}  // namespace vch
