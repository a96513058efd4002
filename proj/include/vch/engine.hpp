#pragma once

// Real-coded genetic algorithm driven by pairwise feasibility rules:
// elitism, binary tournament selection, whole arithmetic crossover,
// non-uniform mutation, infeasible-elite retention and a relative-error
// stopping rule on the best design vector.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "vch/penalty.hpp"
#include "vch/problem.hpp"

namespace vch {

using Rng = std::mt19937_64;

struct VchHandler {};
struct DebHandler {};

using Handler = std::variant<VchHandler, StaticPenaltyConfig, DynamicPenaltyConfig, DebHandler>;

/// "vch", "static-penalty", "dynamic-penalty" or "deb".
std::string handler_name(const Handler& handler);

class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class FeasibleInitExhausted : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kFeasibleInitAttempts = 10'000;

enum class MutationKind {
  Uniform,     // fresh point in the box
  NonUniform,  // shrinking perturbation of a parent
};

struct GAConfig {
  int pop_num = 100;
  int n_elite = 1;
  int n_cross = 94;
  int n_mut = 5;
  int max_generations = 500;
  double stop_tolerance = 1e-6;
  int stop_patience = 65;
  std::uint64_t max_evaluations = 50'000;
  std::uint64_t seed = 0;
  Handler handler = VchHandler{};
  bool feasible_init = false;
  int tournament_size = 2;
  MutationKind mutation = MutationKind::NonUniform;
  double nonuniform_shape = 3.0;
  // Fraction of max_generations after which non-uniform steps vanish.
  double nonuniform_horizon = 0.6;
  // The first mutants of each generation perturb the best individual; the
  // rest perturb tournament winners.
  int mutants_from_best = 2;

  void validate() const;
  int offspring_per_generation() const noexcept { return n_cross + n_mut; }
};

struct GenerationTrace {
  int generation = 0;
  double best_f = 0.0;
  bool best_feasible = false;
  double avg_cv_elites = 0.0;
  int num_feasible = 0;
  std::uint64_t evals_so_far = 0;

  bool operator==(const GenerationTrace&) const = default;
};

enum class StopReason { Converged, MaxGenerations, EvalBudget };

std::string to_string(StopReason reason);

struct RunResult {
  EvaluatedIndividual best;
  std::vector<GenerationTrace> trace;
  // pop_num + generations_run * (n_cross + n_mut); rejected feasible-init
  // samples are counted separately.
  std::uint64_t total_evaluations = 0;
  std::uint64_t init_rejection_evaluations = 0;
  int generations_run = 0;
  double wall_time_ms = 0.0;
  StopReason stop_reason = StopReason::MaxGenerations;
};

/// Equality of everything except wall time.
bool same_outcome(const RunResult& a, const RunResult& b);

Ordering compare_vch(const EvaluatedIndividual& a, const EvaluatedIndividual& b);

/// Comparator for one generation under a given handler. Penalty handlers
/// depend on the generation counter (dynamic) or the population's worst
/// feasible objective (Deb), which is captured at construction.
class Ranking {
public:
  Ranking(const Handler& handler, int generation, std::span<const EvaluatedIndividual> population);

  Ordering compare(const EvaluatedIndividual& a, const EvaluatedIndividual& b) const;
  bool better(const EvaluatedIndividual& a, const EvaluatedIndividual& b) const {
    return compare(a, b) == Ordering::AWins;
  }

private:
  const Handler* handler_;
  int generation_;
  double f_worst_ = 0.0;
};

/// Stable sort under the feasibility rules.
void sort_population(std::vector<EvaluatedIndividual>& population);
void sort_population(std::vector<EvaluatedIndividual>& population, const Ranking& ranking);

/// Tournament with replacement; ties go to the first individual drawn.
const EvaluatedIndividual& select_parent(std::span<const EvaluatedIndividual> population,
                                         int tournament_size, Rng& rng, const Ranking& ranking);
const EvaluatedIndividual& select_parent(std::span<const EvaluatedIndividual> population,
                                         int tournament_size, Rng& rng);

/// child = a*phi + b*(1 - phi), snapped to the discrete grid.
DecisionVector arithmetic_crossover(std::span<const double> a, std::span<const double> b,
                                    double phi, std::span<const VariableSpec> variables);
DecisionVector arithmetic_crossover(std::span<const double> a, std::span<const double> b,
                                    Rng& rng, std::span<const VariableSpec> variables);

/// Uniform sample in the variable box, snapped to the grid.
DecisionVector random_point(std::span<const VariableSpec> variables, Rng& rng);
DecisionVector mutate_individual(const Problem& problem, Rng& rng);

/// Non-uniform perturbation of every coordinate of `x`: each moves toward a
/// random bound by a fraction of the remaining room that shrinks to zero as
/// `progress` goes from 0 to 1.
DecisionVector perturb_individual(std::span<const double> x,
                                  std::span<const VariableSpec> variables, double progress,
                                  double shape, Rng& rng);

std::vector<EvaluatedIndividual> initialize_population(const Problem& problem,
                                                       const GAConfig& config, Rng& rng,
                                                       EvalCounter& counter,
                                                       EvalCounter& rejected);

/// Infeasible individual minimizing (cv, f), if any.
std::optional<EvaluatedIndividual> retain_infeasible_elite(
    std::span<const EvaluatedIndividual> population);

struct RunState {
  std::vector<EvaluatedIndividual> population;  // sorted under the handler
  int generation = 0;
  EvalCounter counter;
  Rng rng;
};

/// Builds the sorted generation-0 state.
RunState initial_state(const Problem& problem, const GAConfig& config, EvalCounter& rejected);

void step_generation(const Problem& problem, const GAConfig& config, RunState& state);

/// True when each of the last `patience` consecutive pairs of best vectors has
/// a maximum coordinate-wise relative change below `tolerance`.
bool has_converged(std::span<const DecisionVector> best_history, double tolerance, int patience);

std::optional<StopReason> check_stop(std::span<const DecisionVector> best_history,
                                     const GAConfig& config, int generation,
                                     std::uint64_t evaluations);

RunResult run(const Problem& problem, const GAConfig& config);

}  // namespace vch
