#include "vch/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "vch/benchmarks.hpp"

namespace vch {

SampleStats describe(std::vector<double> values) {
  SampleStats s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  s.min = values.front();
  s.max = values.back();
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  s.median = n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  if (n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return s;
}

ExperimentSummary summarize(const std::vector<RunResult>& results) {
  if (results.empty()) throw std::invalid_argument("summarize: no runs");
  ExperimentSummary out;
  out.num_runs = static_cast<int>(results.size());

  std::vector<double> feasible_f;
  std::vector<double> cvs;
  double evals = 0.0;
  double wall = 0.0;
  for (const auto& r : results) {
    if (r.best.feasible) feasible_f.push_back(r.best.f);
    cvs.push_back(r.best.cv);
    evals += static_cast<double>(r.total_evaluations);
    wall += r.wall_time_ms;
  }
  out.feasible_run_count = static_cast<int>(feasible_f.size());
  out.no_feasible_runs = feasible_f.empty();
  out.mean_evaluations = evals / static_cast<double>(results.size());
  out.mean_wall_ms = wall / static_cast<double>(results.size());

  const SampleStats s = describe(out.no_feasible_runs ? cvs : feasible_f);
  out.best_f = s.min;
  out.mean_f = s.mean;
  out.median_f = s.median;
  out.worst_f = s.max;
  out.std_f = s.stddev;
  return out;
}

Experiment run_experiment(const ExperimentConfig& cfg) {
  if (cfg.num_runs < 1) throw ConfigError("num_runs must be >= 1");
  cfg.ga.validate();
  const BenchmarkEntry entry = find_benchmark(cfg.problem_name);

  Experiment out;
  out.runs.resize(static_cast<std::size_t>(cfg.num_runs));
  auto one = [&](int i) {
    GAConfig ga = cfg.ga;
    ga.seed = cfg.seed_for_run(i);
    out.runs[static_cast<std::size_t>(i)] = run(entry.problem, ga);
  };

  const unsigned workers =
      cfg.parallel ? std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                                        static_cast<unsigned>(cfg.num_runs))
                   : 1u;
  if (workers <= 1) {
    for (int i = 0; i < cfg.num_runs; ++i) one(i);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
          for (int i = next++; i < cfg.num_runs; i = next++) {
            try {
              one(i);
            } catch (...) {
              std::lock_guard lock(failure_mutex);
              if (!failure) failure = std::current_exception();
            }
          }
        });
    }
    if (failure) std::rethrow_exception(failure);
  }

  out.summary = summarize(out.runs);
  return out;
}

OutputPaths OutputPaths::in(const std::filesystem::path& dir) {
  return {dir / "runs.csv", dir / "trace.csv", dir / "summary.json"};
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string runs_csv(const ExperimentConfig& cfg, const std::vector<RunResult>& runs) {
  std::ostringstream os;
  const std::size_t p = runs.empty() ? 0 : runs.front().best.x.size();
  os << "run_id,seed,best_f,feasible,cv,nv,evals,generations,stop_reason,wall_ms";
  for (std::size_t k = 0; k < p; ++k) os << ",x_" << k;
  os << '\n';
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const RunResult& r = runs[i];
    os << i << ',' << cfg.seed_for_run(static_cast<int>(i)) << ',' << format_double(r.best.f)
       << ',' << (r.best.feasible ? "true" : "false") << ',' << format_double(r.best.cv) << ','
       << format_double(r.best.nv) << ',' << r.total_evaluations << ',' << r.generations_run
       << ',' << to_string(r.stop_reason) << ',' << format_double(r.wall_time_ms);
    for (double v : r.best.x) os << ',' << format_double(v);
    os << '\n';
  }
  return os.str();
}

std::string trace_csv(const std::vector<RunResult>& runs) {
  std::ostringstream os;
  os << "run_id,generation,best_f,best_feasible,avg_cv_elites,num_feasible,evals_so_far\n";
  for (std::size_t i = 0; i < runs.size(); ++i)
    for (const auto& t : runs[i].trace)
      os << i << ',' << t.generation << ',' << format_double(t.best_f) << ','
         << (t.best_feasible ? "true" : "false") << ',' << format_double(t.avg_cv_elites) << ','
         << t.num_feasible << ',' << t.evals_so_far << '\n';
  return os.str();
}

std::string summary_json(const ExperimentConfig& cfg, const ExperimentSummary& s) {
  nlohmann::ordered_json j;
  j["problem"] = cfg.problem_name;
  j["handler"] = handler_name(cfg.ga.handler);
  j["num_runs"] = s.num_runs;
  j["best"] = s.best_f;
  j["mean"] = s.mean_f;
  j["median"] = s.median_f;
  j["worst"] = s.worst_f;
  j["std"] = s.std_f;
  j["mean_evals"] = s.mean_evaluations;
  j["feasible_runs"] = s.feasible_run_count;
  j["statistic"] = s.no_feasible_runs ? "cv" : "f";
  j["base_seed"] = cfg.base_seed;
  return j.dump(2) + "\n";
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot open " + path.string() + " for writing");
  out << contents;
  out.flush();
  if (!out) throw OutputError("failed writing " + path.string());
}

}  // namespace

void emit_results(const ExperimentConfig& cfg, const Experiment& experiment,
                  const OutputPaths& paths) {
  for (const auto* path : {&paths.runs_csv, &paths.trace_csv, &paths.summary_json}) {
    if (path->has_parent_path()) {
      std::error_code ec;
      std::filesystem::create_directories(path->parent_path(), ec);
      if (ec) throw OutputError("cannot create " + path->parent_path().string() + ": " + ec.message());
    }
  }
  write_file(paths.runs_csv, runs_csv(cfg, experiment.runs));
  write_file(paths.trace_csv, trace_csv(experiment.runs));
  write_file(paths.summary_json, summary_json(cfg, experiment.summary));
}

}  // namespace vch
