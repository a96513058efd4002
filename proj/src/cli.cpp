#include "vch/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "vch/benchmarks.hpp"
#include "vch/experiment.hpp"

namespace vch::cli {

namespace {

struct RunFlags {
  std::string problem = "spring";
  std::string handler = "vch";
  int runs = 20;
  std::uint64_t seed = 0;
  int pop = 100;
  int elites = 1;
  int cross = 94;
  int mut = 5;
  int max_gen = 500;
  std::uint64_t max_evals = 50'000;
  double tol = 1e-6;
  int patience = 65;
  int tournament = 2;
  std::string mutation = "nonuniform";
  bool feasible_init = false;
  bool parallel = false;
  std::string out = "results";
  std::string config;
};

class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

MutationKind parse_mutation(const std::string& name) {
  if (name == "nonuniform") return MutationKind::NonUniform;
  if (name == "uniform") return MutationKind::Uniform;
  throw ValidationError("unknown mutation '" + name + "'");
}

Handler parse_handler(const std::string& name) {
  if (name == "vch") return VchHandler{};
  if (name == "static-penalty") return StaticPenaltyConfig{};
  if (name == "dynamic-penalty") return DynamicPenaltyConfig{};
  if (name == "deb") return DebHandler{};
  throw ValidationError("unknown handler '" + name + "'");
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ValidationError("config key '" + key + "': expected a boolean, got '" + v + "'");
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
  std::istringstream is(v);
  T value{};
  is >> value;
  if (!is || !is.eof()) throw ValidationError("config key '" + key + "': bad value '" + v + "'");
  return value;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// key=value lines; '#' starts a comment. Keys are the long flag names.
void apply_config_file(const std::string& path, RunFlags& flags) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError(path + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "problem") flags.problem = value;
    else if (key == "handler") flags.handler = value;
    else if (key == "runs") flags.runs = parse_number<int>(key, value);
    else if (key == "seed") flags.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "pop") flags.pop = parse_number<int>(key, value);
    else if (key == "elites") flags.elites = parse_number<int>(key, value);
    else if (key == "cross") flags.cross = parse_number<int>(key, value);
    else if (key == "mut") flags.mut = parse_number<int>(key, value);
    else if (key == "max-gen") flags.max_gen = parse_number<int>(key, value);
    else if (key == "max-evals") flags.max_evals = parse_number<std::uint64_t>(key, value);
    else if (key == "tol") flags.tol = parse_number<double>(key, value);
    else if (key == "patience") flags.patience = parse_number<int>(key, value);
    else if (key == "tournament") flags.tournament = parse_number<int>(key, value);
    else if (key == "mutation") flags.mutation = value;
    else if (key == "feasible-init") flags.feasible_init = parse_bool(key, value);
    else if (key == "parallel") flags.parallel = parse_bool(key, value);
    else if (key == "out") flags.out = value;
    else throw ValidationError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
}

ExperimentConfig to_experiment(const RunFlags& f) {
  ExperimentConfig cfg;
  cfg.problem_name = f.problem;
  cfg.num_runs = f.runs;
  cfg.base_seed = f.seed;
  cfg.parallel = f.parallel;
  cfg.ga.pop_num = f.pop;
  cfg.ga.n_elite = f.elites;
  cfg.ga.n_cross = f.cross;
  cfg.ga.n_mut = f.mut;
  cfg.ga.max_generations = f.max_gen;
  cfg.ga.max_evaluations = f.max_evals;
  cfg.ga.stop_tolerance = f.tol;
  cfg.ga.stop_patience = f.patience;
  cfg.ga.tournament_size = f.tournament;
  cfg.ga.feasible_init = f.feasible_init;
  cfg.ga.mutation = parse_mutation(f.mutation);
  cfg.ga.handler = parse_handler(f.handler);
  return cfg;
}

int cmd_list(std::ostream& out) {
  for (const auto& name : problem_names()) out << name << '\n';
  return kExitOk;
}

int cmd_verify(std::ostream& out) {
  bool all_ok = true;
  out << std::left;
  for (const auto& entry : engineering_benchmarks()) {
    bool ok = true;
    std::ostringstream detail;
    for (const auto& ref : entry.references) {
      EvalCounter counter;
      const auto ind = evaluate_individual(entry.problem, ref.x, counter);
      const bool f_ok = std::abs(ind.f - ref.f) <= ref.tolerance;
      const bool feas_ok = ind.feasible == ref.expect_feasible;
      ok = ok && f_ok && feas_ok;
      detail << "    " << std::setw(40) << ref.label << " f=" << std::setprecision(10) << ind.f
             << " expected " << ref.f << " +/- " << ref.tolerance
             << (ind.feasible ? " feasible" : " infeasible") << " (expected "
             << (ref.expect_feasible ? "feasible" : "infeasible") << ")"
             << (f_ok && feas_ok ? "" : "  <-- mismatch") << '\n';
    }
    all_ok = all_ok && ok;
    out << std::setw(16) << entry.problem.name() << ' ' << std::setw(8) << entry.source_table
        << ' ' << (ok ? "PASS" : "FAIL") << '\n'
        << detail.str();
  }
  return all_ok ? kExitOk : kExitRuntime;
}

int cmd_run(RunFlags flags, const CLI::App& sub, std::ostream& out, std::ostream& err) {
  // Precedence: flags > config file > built-in defaults.
  if (!flags.config.empty()) {
    RunFlags from_file;
    apply_config_file(flags.config, from_file);
    auto pick = [&](const char* name, auto& field, const auto& file_value) {
      if (sub.count(name) == 0) field = file_value;
    };
    pick("--problem", flags.problem, from_file.problem);
    pick("--handler", flags.handler, from_file.handler);
    pick("--runs", flags.runs, from_file.runs);
    pick("--seed", flags.seed, from_file.seed);
    pick("--pop", flags.pop, from_file.pop);
    pick("--elites", flags.elites, from_file.elites);
    pick("--cross", flags.cross, from_file.cross);
    pick("--mut", flags.mut, from_file.mut);
    pick("--max-gen", flags.max_gen, from_file.max_gen);
    pick("--max-evals", flags.max_evals, from_file.max_evals);
    pick("--tol", flags.tol, from_file.tol);
    pick("--patience", flags.patience, from_file.patience);
    pick("--tournament", flags.tournament, from_file.tournament);
    pick("--mutation", flags.mutation, from_file.mutation);
    pick("--feasible-init", flags.feasible_init, from_file.feasible_init);
    pick("--parallel", flags.parallel, from_file.parallel);
    pick("--out", flags.out, from_file.out);
  }
  if (const char* env = std::getenv("VCH_SEED"); env && *env)
    flags.seed = parse_number<std::uint64_t>("VCH_SEED", env);

  const ExperimentConfig cfg = to_experiment(flags);
  const Experiment experiment = run_experiment(cfg);
  emit_results(cfg, experiment, OutputPaths::in(flags.out));

  const auto& s = experiment.summary;
  if (s.no_feasible_runs)
    err << "warning: no run ended feasible; statistics describe constraint violation\n";
  out << cfg.problem_name << " [" << handler_name(cfg.ga.handler) << "] " << s.num_runs
      << " runs, " << s.feasible_run_count << " feasible\n"
      << std::setprecision(10) << "  best " << s.best_f << "  mean " << s.mean_f << "  median "
      << s.median_f << "  worst " << s.worst_f << "  std " << s.std_f << '\n'
      << "  mean evaluations " << s.mean_evaluations << "\n"
      << "  results written to " << flags.out << '\n';
  return kExitOk;
}

}  // namespace

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Constrained optimization with a feasibility-rule genetic algorithm"};
  app.name("vch");
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list-problems", "Print the registered problem names");
  auto* verify = app.add_subcommand("verify-references",
                                    "Evaluate published reference points of every benchmark");
  auto* run_cmd = app.add_subcommand("run", "Run independent seeded GA runs and write results");

  RunFlags flags;
  run_cmd->add_option("--problem", flags.problem, "Problem name (see list-problems)");
  run_cmd->add_option("--handler", flags.handler, "vch | static-penalty | dynamic-penalty | deb");
  run_cmd->add_option("--runs", flags.runs, "Number of independent runs");
  run_cmd->add_option("--seed", flags.seed, "Base seed; run i uses seed + i (VCH_SEED overrides)");
  run_cmd->add_option("--pop", flags.pop, "Population size");
  run_cmd->add_option("--elites", flags.elites, "Elites copied unchanged");
  run_cmd->add_option("--cross", flags.cross, "Crossover children per generation");
  run_cmd->add_option("--mut", flags.mut, "Mutants per generation");
  run_cmd->add_option("--max-gen", flags.max_gen, "Maximum generations");
  run_cmd->add_option("--max-evals", flags.max_evals, "Fitness evaluation budget");
  run_cmd->add_option("--tol", flags.tol, "Relative-error tolerance on the best design vector");
  run_cmd->add_option("--patience", flags.patience, "Generations the tolerance must hold");
  run_cmd->add_option("--tournament", flags.tournament, "Tournament size");
  run_cmd->add_option("--mutation", flags.mutation, "nonuniform | uniform");
  run_cmd->add_flag("--feasible-init", flags.feasible_init, "Start from feasible points only");
  run_cmd->add_flag("--parallel", flags.parallel, "Execute runs on worker threads");
  run_cmd->add_option("--out", flags.out, "Output directory");
  run_cmd->add_option("--config", flags.config, "key=value config file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  try {
    if (list->parsed()) return cmd_list(out);
    if (verify->parsed()) return cmd_verify(out);
    return cmd_run(flags, *run_cmd, out, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const UnknownProblem& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ConfigError& e) {
    err << "error: invalid configuration: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace vch::cli
