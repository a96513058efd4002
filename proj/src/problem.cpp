#include "vch/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace vch {

namespace {

double rhs_scale(double rhs) {
  const double s = std::abs(rhs);
  return s > 0.0 ? s : 1.0;
}

void validate_variable(const VariableSpec& v, std::size_t k) {
  const std::string where = "variable " + std::to_string(k);
  if (!std::isfinite(v.lower) || !std::isfinite(v.upper))
    throw ProblemError(where + ": bounds must be finite");
  if (!(v.lower < v.upper)) throw ProblemError(where + ": lower must be < upper");
  if (v.step < 0.0 || !std::isfinite(v.step)) throw ProblemError(where + ": step must be > 0");
  if (v.is_discrete() && (v.upper - v.lower) < v.step)
    throw ProblemError(where + ": range narrower than one step");
}

void validate_constraint(const ConstraintSpec& c, std::size_t i) {
  const std::string where = "constraint " + std::to_string(i);
  if (!c.lhs) throw ProblemError(where + ": missing evaluator");
  if (!(c.scale > 0.0) || !std::isfinite(c.scale))
    throw ProblemError(where + ": scale must be positive");
  if (c.kind == ConstraintKind::DoubleBounded) {
    if (!(c.lower < c.upper)) throw ProblemError(where + ": requires lower < upper");
    if (!(c.lower_scale > 0.0) || !std::isfinite(c.lower_scale))
      throw ProblemError(where + ": lower scale must be positive");
  }
}

}  // namespace

ConstraintSpec ConstraintSpec::less_equal(Evaluator lhs, double rhs) {
  return less_equal(std::move(lhs), rhs, rhs_scale(rhs));
}

ConstraintSpec ConstraintSpec::less_equal(Evaluator lhs, double rhs, double scale) {
  ConstraintSpec c;
  c.kind = ConstraintKind::InequalityLEQ;
  c.lhs = std::move(lhs);
  c.rhs = rhs;
  c.scale = scale;
  return c;
}

ConstraintSpec ConstraintSpec::equality(Evaluator h) {
  ConstraintSpec c;
  c.kind = ConstraintKind::Equality;
  c.lhs = std::move(h);
  return c;
}

ConstraintSpec ConstraintSpec::bounded(Evaluator g, double lower, double upper) {
  ConstraintSpec c;
  c.kind = ConstraintKind::DoubleBounded;
  c.lhs = std::move(g);
  c.lower = lower;
  c.upper = upper;
  c.scale = rhs_scale(upper);
  c.lower_scale = rhs_scale(lower);
  return c;
}

Problem::Problem(std::string name, Evaluator objective, std::vector<VariableSpec> variables,
                 std::vector<ConstraintSpec> constraints, double epsilon)
    : name_(std::move(name)),
      objective_(std::move(objective)),
      variables_(std::move(variables)),
      constraints_(std::move(constraints)),
      epsilon_(epsilon) {
  if (!objective_) throw ProblemError(name_ + ": missing objective");
  if (variables_.empty()) throw ProblemError(name_ + ": needs at least one variable");
  if (!(epsilon_ > 0.0) || !std::isfinite(epsilon_))
    throw ProblemError(name_ + ": epsilon must be positive");
  for (std::size_t k = 0; k < variables_.size(); ++k) validate_variable(variables_[k], k);
  for (std::size_t i = 0; i < constraints_.size(); ++i) validate_constraint(constraints_[i], i);
  expanded_ = expand_constraints(*this);
}

std::vector<NormalizedConstraint> expand_constraints(const Problem& problem) {
  using Source = NormalizedConstraint::Source;
  std::vector<NormalizedConstraint> out;
  const double eps = problem.epsilon();
  const auto& cs = problem.constraints();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const ConstraintSpec& c = cs[i];
    switch (c.kind) {
      case ConstraintKind::InequalityLEQ: {
        const double rhs = c.rhs, scale = c.scale;
        out.push_back({Source::Inequality, i, [rhs, scale](double g) { return (g - rhs) / scale; },
                       [rhs](double g) { return std::max(0.0, g - rhs); }});
        break;
      }
      case ConstraintKind::Equality:
        out.push_back({Source::Equality, i, [eps](double h) { return std::abs(h) / eps - 1.0; },
                       [eps](double h) { return std::abs(h) <= eps ? 0.0 : std::abs(h); }});
        break;
      case ConstraintKind::DoubleBounded: {
        const double u = c.upper, su = c.scale, l = c.lower, sl = c.lower_scale;
        out.push_back({Source::Inequality, i, [u, su](double g) { return (g - u) / su; },
                       [u](double g) { return std::max(0.0, g - u); }});
        out.push_back({Source::Inequality, i, [l, sl](double g) { return (l - g) / sl; },
                       [l](double g) { return std::max(0.0, l - g); }});
        break;
      }
    }
  }
  return out;
}

namespace {

// Raw authored-constraint values at x, one per ConstraintSpec.
std::vector<double> raw_values(const Problem& problem, std::span<const double> x) {
  std::vector<double> raw;
  raw.reserve(problem.constraints().size());
  for (const auto& c : problem.constraints()) raw.push_back(c.lhs(x));
  return raw;
}

void check_dimension(const Problem& problem, std::span<const double> x) {
  if (x.size() != problem.dimension())
    throw ProblemError(problem.name() + ": expected " + std::to_string(problem.dimension()) +
                       " variables, got " + std::to_string(x.size()));
}

}  // namespace

std::vector<double> normalized_constraints(const Problem& problem, std::span<const double> x) {
  check_dimension(problem, x);
  const auto raw = raw_values(problem, x);
  std::vector<double> G;
  G.reserve(problem.num_normalized());
  for (const auto& nc : problem.normalized()) G.push_back(nc.normalize(raw[nc.origin]));
  return G;
}

EvaluatedIndividual evaluate_individual(const Problem& problem, std::span<const double> x,
                                        EvalCounter& counter, NonFinitePolicy policy) {
  check_dimension(problem, x);
  counter.increment();

  EvaluatedIndividual ind;
  ind.x.assign(x.begin(), x.end());
  ind.f = problem.objective()(x);
  const auto raw = raw_values(problem, x);

  bool finite = std::isfinite(ind.f);
  ind.G.reserve(problem.num_normalized());
  for (const auto& nc : problem.normalized()) {
    const double r = raw[nc.origin];
    const double g = nc.normalize(r);
    finite = finite && std::isfinite(g);
    ind.G.push_back(g);
    auto& bucket = nc.source == NormalizedConstraint::Source::Equality ? ind.eq_violation
                                                                       : ind.ineq_violation;
    bucket.push_back(nc.raw_violation(r));
  }

  if (!finite) {
    if (policy == NonFinitePolicy::Throw)
      throw NonFiniteValue(problem.name() + ": non-finite objective or constraint value");
    constexpr double inf = std::numeric_limits<double>::infinity();
    ind.f = inf;
    ind.cv = inf;
    ind.nv = 1.0;
    ind.feasible = false;
    return ind;
  }

  if (ind.G.empty()) {
    ind.cv = 0.0;
    ind.nv = 0.0;
  } else {
    ind.cv = constraint_violation(ind.G);
    ind.nv = violation_count(ind.G);
  }
  ind.feasible = ind.cv == 0.0;
  return ind;
}

DecisionVector snap_discrete(std::span<const double> x, std::span<const VariableSpec> variables) {
  DecisionVector out(x.begin(), x.end());
  for (std::size_t k = 0; k < out.size() && k < variables.size(); ++k) {
    const VariableSpec& v = variables[k];
    if (!v.is_discrete()) continue;
    // Round half up on the step index.
    const double index = std::floor((out[k] - v.lower) / v.step + 0.5);
    const double snapped = v.lower + index * v.step;
    const double top = v.lower + std::floor((v.upper - v.lower) / v.step + 1e-9) * v.step;
    out[k] = std::clamp(snapped, v.lower, top);
  }
  return out;
}

double constraint_violation(std::span<const double> G) {
  double cv = 0.0;
  for (double g : G) cv += std::max(0.0, g);
  return cv;
}

double violation_count(std::span<const double> G) {
  if (G.empty()) throw EmptyConstraintSet("violation_count: empty constraint vector");
  const auto violated = std::count_if(G.begin(), G.end(), [](double g) { return g > 0.0; });
  return static_cast<double>(violated) / static_cast<double>(G.size());
}

}  // namespace vch
