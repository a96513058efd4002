#include "vch/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace vch {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Ordering compare_scalar(double a, double b) {
  if (a < b) return Ordering::AWins;
  if (b < a) return Ordering::BWins;
  return Ordering::Tie;
}

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace

std::string handler_name(const Handler& handler) {
  return std::visit(Overloaded{[](const VchHandler&) { return std::string("vch"); },
                               [](const StaticPenaltyConfig&) { return std::string("static-penalty"); },
                               [](const DynamicPenaltyConfig&) { return std::string("dynamic-penalty"); },
                               [](const DebHandler&) { return std::string("deb"); }},
                    handler);
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Converged: return "converged";
    case StopReason::MaxGenerations: return "max-generations";
    case StopReason::EvalBudget: return "eval-budget";
  }
  return "unknown";
}

void GAConfig::validate() const {
  if (pop_num < 2) throw ConfigError("pop_num must be >= 2");
  if (n_elite < 1) throw ConfigError("n_elite must be >= 1");
  if (n_cross < 0 || n_mut < 0) throw ConfigError("n_cross and n_mut must be >= 0");
  if (n_elite + n_cross + n_mut != pop_num)
    throw ConfigError("n_elite + n_cross + n_mut must equal pop_num (" + std::to_string(n_elite) +
                      " + " + std::to_string(n_cross) + " + " + std::to_string(n_mut) +
                      " != " + std::to_string(pop_num) + ")");
  if (tournament_size < 2) throw ConfigError("tournament_size must be >= 2");
  if (stop_patience < 1) throw ConfigError("stop_patience must be >= 1");
  if (max_generations < 0) throw ConfigError("max_generations must be >= 0");
  if (!(stop_tolerance >= 0.0)) throw ConfigError("stop_tolerance must be >= 0");
  if (!(nonuniform_shape > 0.0)) throw ConfigError("nonuniform_shape must be > 0");
  if (!(nonuniform_horizon > 0.0 && nonuniform_horizon <= 1.0))
    throw ConfigError("nonuniform_horizon must lie in (0, 1]");
  if (mutants_from_best < 0) throw ConfigError("mutants_from_best must be >= 0");
  try {
    std::visit(Overloaded{[](const StaticPenaltyConfig& c) { c.validate(); },
                          [](const DynamicPenaltyConfig& c) { c.validate(); },
                          [](const auto&) {}},
               handler);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

bool same_outcome(const RunResult& a, const RunResult& b) {
  return a.best == b.best && a.trace == b.trace && a.total_evaluations == b.total_evaluations &&
         a.init_rejection_evaluations == b.init_rejection_evaluations &&
         a.generations_run == b.generations_run && a.stop_reason == b.stop_reason;
}

Ordering compare_vch(const EvaluatedIndividual& a, const EvaluatedIndividual& b) {
  if (a.feasible != b.feasible) return a.feasible ? Ordering::AWins : Ordering::BWins;
  if (a.feasible) return compare_scalar(a.f, b.f);
  if (auto o = compare_scalar(a.nv, b.nv); o != Ordering::Tie) return o;
  if (auto o = compare_scalar(a.cv, b.cv); o != Ordering::Tie) return o;
  return compare_scalar(a.f, b.f);
}

Ranking::Ranking(const Handler& handler, int generation,
                 std::span<const EvaluatedIndividual> population)
    : handler_(&handler), generation_(generation) {
  if (std::holds_alternative<DebHandler>(handler)) f_worst_ = worst_feasible(population);
}

Ordering Ranking::compare(const EvaluatedIndividual& a, const EvaluatedIndividual& b) const {
  return std::visit(
      Overloaded{[&](const VchHandler&) { return compare_vch(a, b); },
                 [&](const StaticPenaltyConfig& c) {
                   return compare_scalar(static_penalty_fitness(a, c), static_penalty_fitness(b, c));
                 },
                 [&](const DynamicPenaltyConfig& c) {
                   // Penalty generations count from 1.
                   const int t = generation_ + 1;
                   return compare_scalar(dynamic_penalty_fitness(a, t, c),
                                         dynamic_penalty_fitness(b, t, c));
                 },
                 [&](const DebHandler&) { return deb_compare(a, b, f_worst_); }},
      *handler_);
}

void sort_population(std::vector<EvaluatedIndividual>& population) {
  std::stable_sort(population.begin(), population.end(),
                   [](const auto& a, const auto& b) { return compare_vch(a, b) == Ordering::AWins; });
}

void sort_population(std::vector<EvaluatedIndividual>& population, const Ranking& ranking) {
  std::stable_sort(population.begin(), population.end(),
                   [&](const auto& a, const auto& b) { return ranking.better(a, b); });
}

const EvaluatedIndividual& select_parent(std::span<const EvaluatedIndividual> population,
                                         int tournament_size, Rng& rng, const Ranking& ranking) {
  std::uniform_int_distribution<std::size_t> pick(0, population.size() - 1);
  const EvaluatedIndividual* winner = &population[pick(rng)];
  for (int k = 1; k < tournament_size; ++k) {
    const EvaluatedIndividual& challenger = population[pick(rng)];
    if (ranking.better(challenger, *winner)) winner = &challenger;
  }
  return *winner;
}

const EvaluatedIndividual& select_parent(std::span<const EvaluatedIndividual> population,
                                         int tournament_size, Rng& rng) {
  static const Handler vch = VchHandler{};
  return select_parent(population, tournament_size, rng, Ranking(vch, 0, population));
}

DecisionVector arithmetic_crossover(std::span<const double> a, std::span<const double> b,
                                    double phi, std::span<const VariableSpec> variables) {
  DecisionVector child(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) child[k] = a[k] * phi + b[k] * (1.0 - phi);
  return snap_discrete(child, variables);
}

DecisionVector arithmetic_crossover(std::span<const double> a, std::span<const double> b,
                                    Rng& rng, std::span<const VariableSpec> variables) {
  return arithmetic_crossover(a, b, uniform01(rng), variables);
}

DecisionVector random_point(std::span<const VariableSpec> variables, Rng& rng) {
  DecisionVector x(variables.size());
  for (std::size_t k = 0; k < variables.size(); ++k)
    x[k] = variables[k].lower + (variables[k].upper - variables[k].lower) * uniform01(rng);
  return snap_discrete(x, variables);
}

DecisionVector mutate_individual(const Problem& problem, Rng& rng) {
  return random_point(problem.variables(), rng);
}

DecisionVector perturb_individual(std::span<const double> x,
                                  std::span<const VariableSpec> variables, double progress,
                                  double shape, Rng& rng) {
  const double exponent = std::pow(1.0 - std::clamp(progress, 0.0, 1.0), shape);
  DecisionVector y(x.begin(), x.end());
  for (std::size_t k = 0; k < y.size(); ++k) {
    const bool up = uniform01(rng) < 0.5;
    const double r = uniform01(rng);
    const double room = up ? variables[k].upper - y[k] : y[k] - variables[k].lower;
    const double delta = room * (1.0 - std::pow(r, exponent));
    y[k] = std::clamp(up ? y[k] + delta : y[k] - delta, variables[k].lower, variables[k].upper);
  }
  return snap_discrete(y, variables);
}

std::vector<EvaluatedIndividual> initialize_population(const Problem& problem,
                                                       const GAConfig& config, Rng& rng,
                                                       EvalCounter& counter,
                                                       EvalCounter& rejected) {
  std::vector<EvaluatedIndividual> population;
  population.reserve(static_cast<std::size_t>(config.pop_num));
  for (int slot = 0; slot < config.pop_num; ++slot) {
    if (!config.feasible_init) {
      population.push_back(evaluate_individual(problem, random_point(problem.variables(), rng), counter));
      continue;
    }
    int attempts = 0;
    for (;;) {
      EvalCounter probe;
      auto ind = evaluate_individual(problem, random_point(problem.variables(), rng), probe);
      if (ind.feasible) {
        counter.increment();
        population.push_back(std::move(ind));
        break;
      }
      rejected.increment();
      if (++attempts >= kFeasibleInitAttempts)
        throw FeasibleInitExhausted(problem.name() + ": no feasible point after " +
                                    std::to_string(kFeasibleInitAttempts) + " attempts for slot " +
                                    std::to_string(slot));
    }
  }
  return population;
}

std::optional<EvaluatedIndividual> retain_infeasible_elite(
    std::span<const EvaluatedIndividual> population) {
  const EvaluatedIndividual* best = nullptr;
  for (const auto& ind : population) {
    if (ind.feasible) continue;
    if (!best || ind.cv < best->cv || (ind.cv == best->cv && ind.f < best->f)) best = &ind;
  }
  if (!best) return std::nullopt;
  return *best;
}

RunState initial_state(const Problem& problem, const GAConfig& config, EvalCounter& rejected) {
  RunState state{{}, 0, {}, Rng(config.seed)};
  state.population = initialize_population(problem, config, state.rng, state.counter, rejected);
  sort_population(state.population, Ranking(config.handler, 0, state.population));
  return state;
}

void step_generation(const Problem& problem, const GAConfig& config, RunState& state) {
  const auto& old = state.population;
  const Ranking old_rank(config.handler, state.generation, old);

  std::vector<EvaluatedIndividual> next;
  next.reserve(old.size());
  next.insert(next.end(), old.begin(), old.begin() + config.n_elite);

  for (int i = 0; i < config.n_cross; ++i) {
    const auto& a = select_parent(old, config.tournament_size, state.rng, old_rank);
    const auto& b = select_parent(old, config.tournament_size, state.rng, old_rank);
    next.push_back(evaluate_individual(
        problem, arithmetic_crossover(a.x, b.x, state.rng, problem.variables()), state.counter));
  }

  const double horizon = config.nonuniform_horizon * config.max_generations;
  const double progress = horizon > 0.0 ? state.generation / horizon : 1.0;
  for (int i = 0; i < config.n_mut; ++i) {
    DecisionVector x;
    if (config.mutation == MutationKind::Uniform) {
      x = mutate_individual(problem, state.rng);
    } else {
      const auto& parent = i < config.mutants_from_best
                               ? old.front()
                               : select_parent(old, config.tournament_size, state.rng, old_rank);
      x = perturb_individual(parent.x, problem.variables(), progress, config.nonuniform_shape,
                             state.rng);
    }
    next.push_back(evaluate_individual(problem, x, state.counter));
  }

  ++state.generation;

  if (auto keep = retain_infeasible_elite(old);
      keep && next.size() > static_cast<std::size_t>(config.n_elite)) {
    const bool present = std::any_of(next.begin(), next.end(), [&](const auto& ind) {
      return !ind.feasible && (ind.cv < keep->cv || (ind.cv == keep->cv && ind.f <= keep->f));
    });
    if (!present) {
      const Ranking rank(config.handler, state.generation, next);
      auto worst = next.begin() + config.n_elite;
      for (auto it = worst + 1; it != next.end(); ++it)
        if (!rank.better(*it, *worst)) worst = it;
      *worst = std::move(*keep);
    }
  }

  sort_population(next, Ranking(config.handler, state.generation, next));
  state.population = std::move(next);
}

bool has_converged(std::span<const DecisionVector> best_history, double tolerance, int patience) {
  if (patience < 1 || best_history.size() < static_cast<std::size_t>(patience) + 1) return false;
  for (std::size_t t = best_history.size() - patience; t < best_history.size(); ++t) {
    const auto& cur = best_history[t];
    const auto& prev = best_history[t - 1];
    for (std::size_t k = 0; k < cur.size(); ++k) {
      const double rel = std::abs(cur[k] - prev[k]) / std::max(std::abs(prev[k]), 1e-12);
      if (!(rel < tolerance)) return false;
    }
  }
  return true;
}

std::optional<StopReason> check_stop(std::span<const DecisionVector> best_history,
                                     const GAConfig& config, int generation,
                                     std::uint64_t evaluations) {
  if (has_converged(best_history, config.stop_tolerance, config.stop_patience))
    return StopReason::Converged;
  if (generation >= config.max_generations) return StopReason::MaxGenerations;
  if (evaluations + static_cast<std::uint64_t>(config.offspring_per_generation()) >
      config.max_evaluations)
    return StopReason::EvalBudget;
  return std::nullopt;
}

namespace {

GenerationTrace trace_of(const RunState& state, const GAConfig& config) {
  const auto& pop = state.population;
  GenerationTrace t;
  t.generation = state.generation;
  t.best_f = pop.front().f;
  t.best_feasible = pop.front().feasible;
  double cv = 0.0;
  for (int i = 0; i < config.n_elite; ++i) cv += pop[static_cast<std::size_t>(i)].cv;
  t.avg_cv_elites = cv / config.n_elite;
  t.num_feasible = static_cast<int>(
      std::count_if(pop.begin(), pop.end(), [](const auto& ind) { return ind.feasible; }));
  t.evals_so_far = state.counter.count();
  return t;
}

void update_best(EvaluatedIndividual& best, std::span<const EvaluatedIndividual> population) {
  for (const auto& ind : population)
    if (compare_vch(ind, best) == Ordering::AWins) best = ind;
}

}  // namespace

RunResult run(const Problem& problem, const GAConfig& config) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();

  EvalCounter rejected;
  RunState state = initial_state(problem, config, rejected);

  RunResult result;
  result.best = state.population.front();
  update_best(result.best, state.population);
  result.trace.push_back(trace_of(state, config));
  std::vector<DecisionVector> history{state.population.front().x};

  for (;;) {
    if (auto reason = check_stop(history, config, state.generation, state.counter.count())) {
      result.stop_reason = *reason;
      break;
    }
    step_generation(problem, config, state);
    update_best(result.best, state.population);
    result.trace.push_back(trace_of(state, config));
    history.push_back(state.population.front().x);
  }

  result.total_evaluations = state.counter.count();
  result.init_rejection_evaluations = rejected.count();
  result.generations_run = state.generation;
  result.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace vch
