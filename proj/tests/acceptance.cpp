// One line per acceptance criterion. Exit status is nonzero when any
// criterion fails, except those listed with --expect-fail N[,M...].

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "vch/benchmarks.hpp"
#include "vch/cli.hpp"
#include "vch/experiment.hpp"

using namespace vch;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool ok = true;
  std::ostringstream detail;
  std::string failed;

  void require(bool cond, const std::string& what) {
    if (cond) return;
    ok = false;
    failed += (failed.empty() ? "" : "; ") + what;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ExperimentConfig paper_defaults(const std::string& problem) {
  ExperimentConfig cfg;
  cfg.problem_name = problem;
  cfg.num_runs = 20;
  cfg.base_seed = 0;
  return cfg;
}

struct Study {
  ExperimentConfig cfg;
  Experiment exp;
  double seconds = 0.0;
};

Study study(const std::string& problem) {
  Study s{paper_defaults(problem), {}, 0.0};
  const auto t0 = Clock::now();
  s.exp = run_experiment(s.cfg);
  s.seconds = seconds_since(t0);
  return s;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(8) << v;
  return os.str();
}

bool all_feasible_by_oracle(const Study& s) {
  return std::all_of(s.exp.runs.begin(), s.exp.runs.end(), [&](const RunResult& r) {
    return r.best.feasible && oracle::by_name(s.cfg.problem_name, r.best.x).feasible();
  });
}

Verdict criterion1() {
  Verdict v;
  const auto t0 = Clock::now();
  std::ostringstream out, err;
  const int code = cli::parse_and_dispatch({"verify-references"}, out, err);
  v.require(code == cli::kExitOk, "verify-references exit code " + std::to_string(code));
  const auto him = himmelblau();
  const double g1 = oracle::himmelblau_g1(him.reference_x);
  v.require(g1 > 92.0, "himmelblau present-study g1 > 92");
  const double secs = seconds_since(t0);
  v.require(secs < 1.0, "under 1 s");
  v.detail << "verify-references exit " << code << ", himmelblau g1 = " << fmt(g1) << ", "
           << fmt(secs) << " s";
  return v;
}

Verdict criterion2(const Study& s) {
  Verdict v;
  const auto& sum = s.exp.summary;
  v.require(sum.best_f <= 0.0127, "best <= 0.0127");
  v.require(sum.mean_f <= 0.0131, "mean <= 0.0131");
  v.require(all_feasible_by_oracle(s), "all 20 bests feasible by oracle");
  v.require(s.seconds < 120.0, "runtime < 2 min");
  v.detail << "best " << fmt(sum.best_f) << ", mean " << fmt(sum.mean_f) << ", feasible "
           << sum.feasible_run_count << "/20, " << fmt(s.seconds) << " s";
  return v;
}

Verdict criterion3(const Study& s) {
  Verdict v;
  const auto& sum = s.exp.summary;
  v.require(sum.best_f <= 1.76, "best <= 1.76");
  v.require(sum.mean_f <= 1.80, "mean <= 1.80");
  v.require(all_feasible_by_oracle(s), "all bests feasible by oracle");
  v.detail << "best " << fmt(sum.best_f) << ", mean " << fmt(sum.mean_f) << ", worst "
           << fmt(sum.worst_f);
  return v;
}

Verdict criterion4(const Study& s) {
  Verdict v;
  const auto& sum = s.exp.summary;
  v.require(sum.best_f <= 6120.0, "best <= 6120");
  bool on_grid = true;
  for (const auto& r : s.exp.runs)
    for (std::size_t k = 0; k < 2; ++k) {
      const double steps = r.best.x[k] / 0.0625;
      on_grid = on_grid && std::abs(steps - std::round(steps)) < 1e-9;
    }
  v.require(on_grid, "x1, x2 on the 0.0625 grid");
  v.require(all_feasible_by_oracle(s), "all bests feasible by oracle");
  v.detail << "best " << fmt(sum.best_f) << ", mean " << fmt(sum.mean_f)
           << (on_grid ? ", thicknesses on grid" : "");
  return v;
}

Verdict criterion5(const Study& s) {
  Verdict v;
  const auto& sum = s.exp.summary;
  v.require(sum.feasible_run_count > 0, "a feasible run");
  v.require(sum.best_f <= -30600.0, "best <= -30600");
  v.detail << "best " << fmt(sum.best_f) << ", mean " << fmt(sum.mean_f) << ", feasible "
           << sum.feasible_run_count << "/20";
  return v;
}

Verdict criterion6(const std::vector<const Study*>& studies) {
  Verdict v;
  std::uint64_t max_evals = 0;
  for (const auto* s : studies)
    for (const auto& r : s->exp.runs) max_evals = std::max(max_evals, r.total_evaluations);
  v.require(max_evals <= 50'000, "every run <= 50000 evaluations");
  const double spring_mean = studies.front()->exp.summary.mean_evaluations;
  v.require(spring_mean <= 35'000, "spring mean evaluations <= 35000");
  v.detail << "max evaluations " << max_evals << ", spring mean " << fmt(spring_mean);
  return v;
}

Verdict criterion7(const Study& welded) {
  Verdict v;
  int settled = 0;
  for (const auto& r : welded.exp.runs) {
    auto last_violation = std::find_if(r.trace.rbegin(), r.trace.rend(),
                                       [](const GenerationTrace& t) { return t.avg_cv_elites > 0.0; });
    // Settled when the trailing zero-violation stretch is non-empty.
    settled += last_violation != r.trace.rbegin();
  }
  v.require(settled >= 19, ">= 19 of 20 runs settle at zero violation");
  v.detail << settled << "/20 runs reach avg_cv_elites = 0 and stay there";
  return v;
}

EvaluatedIndividual random_individual(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> small(0, 3);
  EvaluatedIndividual ind;
  ind.feasible = small(rng) < 2;
  ind.f = small(rng);
  if (!ind.feasible) {
    ind.nv = 0.25 * (1 + small(rng));
    ind.cv = 0.1 * (1 + small(rng));
  }
  return ind;
}

DecisionVector sample(const Problem& p, std::mt19937_64& rng) {
  DecisionVector x;
  for (const auto& var : p.variables())
    x.push_back(std::uniform_real_distribution<double>(var.lower, var.upper)(rng));
  return snap_discrete(x, p.variables());
}

bool trace_monotone(const RunResult& r) {
  bool seen = false;
  double best = 0.0;
  for (const auto& t : r.trace) {
    if (!t.best_feasible) {
      if (seen) return false;
      continue;
    }
    if (seen && t.best_f > best) return false;
    seen = true;
    best = t.best_f;
  }
  return true;
}

Verdict criterion8(const std::vector<const Study*>& studies) {
  Verdict v;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(8);

  bool preorder = true;
  for (int i = 0; i < 10'000; ++i) {
    const auto a = random_individual(rng), b = random_individual(rng), c = random_individual(rng);
    auto le = [](const auto& p, const auto& q) { return compare_vch(p, q) != Ordering::BWins; };
    preorder = preorder && compare_vch(a, a) == Ordering::Tie &&
               ((compare_vch(a, b) == Ordering::AWins) == (compare_vch(b, a) == Ordering::BWins)) &&
               (!(le(a, b) && le(b, c)) || le(a, c));
  }
  v.require(preorder, "comparator total preorder");

  bool dominance = true;
  std::uniform_real_distribution<double> wide(-1e9, 1e9), pos(1e-12, 1e3);
  for (int i = 0; i < 10'000; ++i) {
    EvaluatedIndividual a, b;
    a.f = wide(rng);
    b.f = wide(rng);
    b.cv = pos(rng);
    b.nv = 0.5;
    b.feasible = false;
    dominance = dominance && compare_vch(a, b) == Ordering::AWins;
  }
  v.require(dominance, "feasible beats infeasible");

  bool equivalence = true;
  for (const auto& e : engineering_benchmarks()) {
    EvalCounter counter;
    for (int i = 0; i < 100'000; ++i) {
      const auto ind = evaluate_individual(e.problem, sample(e.problem, rng), counter);
      equivalence = equivalence && ((ind.cv == 0.0) == (ind.nv == 0.0)) &&
                    ((ind.cv == 0.0) == ind.feasible);
    }
  }
  v.require(equivalence, "cv = 0 <=> nv = 0 <=> feasible");

  bool containment = true;
  {
    const auto e = welded_beam();
    Rng engine_rng(8);
    for (int i = 0; i < 10'000; ++i) {
      const auto a = sample(e.problem, rng), b = sample(e.problem, rng);
      const auto c = arithmetic_crossover(a, b, engine_rng, e.problem.variables());
      for (std::size_t k = 0; k < c.size(); ++k)
        containment = containment && c[k] >= std::min(a[k], b[k]) && c[k] <= std::max(a[k], b[k]);
    }
  }
  v.require(containment, "crossover box containment");

  bool monotone = true, identity = true;
  int traced = 0;
  for (const auto* s : studies)
    for (const auto& r : s->exp.runs) {
      ++traced;
      monotone = monotone && trace_monotone(r);
      identity = identity && r.total_evaluations == 100u + 99u * static_cast<std::uint64_t>(r.generations_run);
    }
  v.require(monotone, "elitism monotonicity");
  v.require(identity, "total_evals = 100 + 99 g");

  bool repeatable = true;
  for (const char* name : {"spring", "welded-beam", "pressure-vessel", "himmelblau"}) {
    GAConfig ga;
    ga.seed = 12345;
    const auto e = find_benchmark(name);
    repeatable = repeatable && same_outcome(run(e.problem, ga), run(e.problem, ga));
  }
  v.require(repeatable, "same seed, identical RunResult");

  // Toy optima, with the linear one cross-checked by feasible random sampling.
  double sampled_min = INFINITY;
  {
    const auto e = toy_linear();
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1'000'000; ++i) {
      const double x1 = u(rng), x2 = u(rng);
      if (x1 + x2 >= 1.0) sampled_min = std::min(sampled_min, x1 + x2);
    }
  }
  GAConfig ga;
  ga.seed = 1;
  const auto lin = run(toy_linear().problem, ga);
  const auto eq = run(toy_equality().problem, ga);
  const auto inf = run(toy_infeasible().problem, ga);
  const bool toys = lin.best.feasible && std::abs(lin.best.f - 1.0) <= 1e-3 &&
                    std::abs(sampled_min - 1.0) <= 1e-3 && eq.best.feasible &&
                    std::abs(eq.best.f - 0.5) <= 1e-2 && !inf.best.feasible && inf.best.cv > 0.0;
  v.require(toys, "toy oracles");

  v.detail << traced << " traced runs; toy-linear " << fmt(lin.best.f) << " (sampled "
           << fmt(sampled_min) << "), toy-equality " << fmt(eq.best.f) << ", toy-infeasible cv "
           << fmt(inf.best.cv) << "; " << fmt(seconds_since(t0)) << " s";
  return v;
}

bool valid_runs_csv(const fs::path& path, int runs, std::size_t dims) {
  std::ifstream in(path);
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) {
    const auto commas = static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
    if (commas != 9 + dims) return false;
    ++rows;
  }
  return rows == runs;
}

Verdict criterion9() {
  Verdict v;
  auto deb = paper_defaults("spring");
  deb.ga.handler = DebHandler{};
  const auto deb_exp = run_experiment(deb);
  v.require(deb_exp.summary.feasible_run_count > 0 && deb_exp.summary.best_f <= 0.0135,
            "deb best <= 0.0135");
  v.detail << "deb best " << fmt(deb_exp.summary.best_f);

  const fs::path root = fs::temp_directory_path() / "vch_acceptance_baselines";
  fs::remove_all(root);
  for (Handler h : {Handler{StaticPenaltyConfig{}}, Handler{DynamicPenaltyConfig{}}}) {
    auto cfg = paper_defaults("spring");
    cfg.ga.handler = h;
    const auto exp = run_experiment(cfg);
    const auto paths = OutputPaths::in(root / handler_name(h));
    emit_results(cfg, exp, paths);
    const bool ok = valid_runs_csv(paths.runs_csv, cfg.num_runs, 3) && fs::exists(paths.trace_csv);
    v.require(ok, handler_name(h) + " emits valid CSV");
    v.detail << ", " << handler_name(h) << " best " << fmt(exp.summary.best_f) << " ("
             << exp.summary.feasible_run_count << "/20 feasible)";
  }
  fs::remove_all(root);
  return v;
}

std::set<int> parse_expected(int argc, char** argv) {
  std::set<int> out;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--expect-fail") {
      std::istringstream is(argv[i + 1]);
      for (std::string tok; std::getline(is, tok, ',');) out.insert(std::stoi(tok));
    }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const auto expected = parse_expected(argc, argv);

  const Study spring_s = study("spring");
  const Study welded_s = study("welded-beam");
  const Study vessel_s = study("pressure-vessel");
  const Study himmel_s = study("himmelblau");
  const std::vector<const Study*> all{&spring_s, &welded_s, &vessel_s, &himmel_s};

  const std::vector<std::pair<int, Verdict>> results = [&] {
    std::vector<std::pair<int, Verdict>> r;
    r.emplace_back(1, criterion1());
    r.emplace_back(2, criterion2(spring_s));
    r.emplace_back(3, criterion3(welded_s));
    r.emplace_back(4, criterion4(vessel_s));
    r.emplace_back(5, criterion5(himmel_s));
    r.emplace_back(6, criterion6(all));
    r.emplace_back(7, criterion7(welded_s));
    r.emplace_back(8, criterion8(all));
    r.emplace_back(9, criterion9());
    return r;
  }();

  int unexpected = 0;
  for (const auto& [n, v] : results) {
    std::cout << (v.ok ? "PASS" : "FAIL") << " criterion " << n << ": " << v.detail.str();
    if (!v.ok) std::cout << " [unmet: " << v.failed << "]";
    if (!v.ok && expected.count(n)) std::cout << " (known failure)";
    if (v.ok && expected.count(n)) std::cout << " (listed as a known failure but passed)";
    std::cout << '\n';
    if (!v.ok && !expected.count(n)) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
