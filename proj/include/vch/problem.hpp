#pragma once

// Constrained problem definition and the evaluation pipeline that turns a raw
// decision vector into an individual carrying normalized constraint values,
// total constraint violation (cv) and the fraction of violated constraints (nv).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vch {

using DecisionVector = std::vector<double>;
using Evaluator = std::function<double(std::span<const double>)>;

class ProblemError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class NonFiniteValue : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class EmptyConstraintSet : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct VariableSpec {
  double lower = 0.0;
  double upper = 1.0;
  // 0 means continuous; otherwise the coordinate lives on lower + k*step.
  double step = 0.0;

  static VariableSpec continuous(double lower, double upper) { return {lower, upper, 0.0}; }
  static VariableSpec discrete(double lower, double upper, double step) {
    return {lower, upper, step};
  }

  bool is_discrete() const noexcept { return step > 0.0; }
};

enum class ConstraintKind { InequalityLEQ, Equality, DoubleBounded };

/// One constraint as authored in problem units.
///
/// InequalityLEQ:  lhs(x) <= rhs, normalized as (lhs - rhs) / scale.
/// Equality:       lhs(x) == 0 within the problem's epsilon, normalized as |lhs|/eps - 1.
/// DoubleBounded:  lower <= lhs(x) <= upper, split into an upper and a lower part.
///
/// The default scale is |rhs| (or |bound| for the double-bounded parts), falling
/// back to 1 when the right-hand side is zero.
struct ConstraintSpec {
  ConstraintKind kind = ConstraintKind::InequalityLEQ;
  Evaluator lhs;
  double rhs = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double scale = 1.0;
  double lower_scale = 1.0;

  static ConstraintSpec less_equal(Evaluator lhs, double rhs);
  static ConstraintSpec less_equal(Evaluator lhs, double rhs, double scale);
  static ConstraintSpec equality(Evaluator h);
  static ConstraintSpec bounded(Evaluator g, double lower, double upper);
};

/// A normalized inequality G(x) <= 0 produced by expand_constraints, together
/// with the raw quantities the dynamic penalty needs.
struct NormalizedConstraint {
  enum class Source { Inequality, Equality };
  Source source = Source::Inequality;
  std::size_t origin = 0;  // index of the authored constraint
  std::function<double(double raw)> normalize;
  // Raw violation magnitude in problem units (A_i for inequalities, B_j for equalities).
  std::function<double(double raw)> raw_violation;
};

inline constexpr double kDefaultEqualityTolerance = 1e-4;

class Problem {
public:
  Problem(std::string name, Evaluator objective, std::vector<VariableSpec> variables,
          std::vector<ConstraintSpec> constraints, double epsilon = kDefaultEqualityTolerance);

  const std::string& name() const noexcept { return name_; }
  std::size_t dimension() const noexcept { return variables_.size(); }
  const std::vector<VariableSpec>& variables() const noexcept { return variables_; }
  const std::vector<ConstraintSpec>& constraints() const noexcept { return constraints_; }
  double epsilon() const noexcept { return epsilon_; }
  const Evaluator& objective() const noexcept { return objective_; }

  // n + m after equality conversion and double-bound splitting.
  std::size_t num_normalized() const noexcept { return expanded_.size(); }
  const std::vector<NormalizedConstraint>& normalized() const noexcept { return expanded_; }

private:
  std::string name_;
  Evaluator objective_;
  std::vector<VariableSpec> variables_;
  std::vector<ConstraintSpec> constraints_;
  double epsilon_;
  std::vector<NormalizedConstraint> expanded_;
};

/// Run-scoped count of fitness evaluations (objective + all constraints at one point).
class EvalCounter {
public:
  void increment() noexcept { ++count_; }
  std::uint64_t count() const noexcept { return count_; }

private:
  std::uint64_t count_ = 0;
};

struct EvaluatedIndividual {
  DecisionVector x;
  double f = 0.0;
  std::vector<double> G;
  double cv = 0.0;
  double nv = 0.0;
  bool feasible = true;
  // Raw per-constraint violation magnitudes, split by origin.
  std::vector<double> ineq_violation;
  std::vector<double> eq_violation;

  bool operator==(const EvaluatedIndividual&) const = default;
};

std::vector<NormalizedConstraint> expand_constraints(const Problem& problem);

/// Evaluates the normalized constraint vector G at x.
std::vector<double> normalized_constraints(const Problem& problem, std::span<const double> x);

enum class NonFinitePolicy { Penalize, Throw };

/// Non-finite objective or constraint values yield f = cv = +inf, nv = 1 under
/// NonFinitePolicy::Penalize, or a NonFiniteValue exception under Throw.
/// The counter is incremented exactly once in both cases.
EvaluatedIndividual evaluate_individual(const Problem& problem, std::span<const double> x,
                                        EvalCounter& counter,
                                        NonFinitePolicy policy = NonFinitePolicy::Penalize);

DecisionVector snap_discrete(std::span<const double> x, std::span<const VariableSpec> variables);

double constraint_violation(std::span<const double> G);
double violation_count(std::span<const double> G);

}  // namespace vch
