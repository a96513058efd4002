#include "vch/benchmarks.hpp"

#include <cmath>
#include <numbers>

namespace vch {

namespace {

using X = std::span<const double>;
using C = ConstraintSpec;
using V = VariableSpec;

}  // namespace

BenchmarkEntry himmelblau() {
  auto f = [](X x) {
    return 5.3578547 * x[2] * x[2] + 0.8356891 * x[0] * x[4] + 37.293239 * x[0] - 40792.141;
  };
  auto g1 = [](X x) {
    return 85.334407 + 0.0056858 * x[1] * x[4] + 0.0006262 * x[0] * x[3] - 0.0022053 * x[2] * x[4];
  };
  auto g2 = [](X x) {
    return 80.51249 + 0.0071317 * x[1] * x[4] + 0.0029955 * x[0] * x[1] + 0.0021813 * x[2] * x[2];
  };
  auto g3 = [](X x) {
    return 9.300961 + 0.0047026 * x[2] * x[4] + 0.0012547 * x[0] * x[2] + 0.0019085 * x[2] * x[3];
  };
  Problem p("himmelblau", f,
            {V::continuous(78, 102), V::continuous(33, 45), V::continuous(27, 45),
             V::continuous(27, 45), V::continuous(27, 45)},
            {C::bounded(g1, 0, 92), C::bounded(g2, 90, 110), C::bounded(g3, 20, 25)});

  // The published best point violates g1 (about 93.17 > 92).
  const DecisionVector present{78.0029, 33.080, 27.353, 44.61, 44.264};
  return {std::move(p), present, -30988.951, "Table 1",
          {{"present study (infeasible: g1 > 92)", present, -30988.95, 0.5, false},
           {"Deb (2000)", {78.0, 33.0, 29.995256025682, 45.0, 36.775812905788}, -30665.5, 1.0,
            true}}};
}

BenchmarkEntry spring() {
  auto f = [](X x) { return (x[2] + 2.0) * x[0] * x[0] * x[1]; };
  auto g1 = [](X x) { return -(x[1] * x[1] * x[1] * x[2]) / (71785.0 * std::pow(x[0], 4)); };
  auto g2 = [](X x) {
    const double x1 = x[0], x2 = x[1];
    return (4.0 * x2 * x2 - x1 * x2) / (12566.0 * (x2 * x1 * x1 * x1 - std::pow(x1, 4))) +
           1.0 / (5108.0 * x1 * x1);
  };
  auto g3 = [](X x) { return -140.45 * x[0] / (x[1] * x[1] * x[2]); };
  auto g4 = [](X x) { return (x[0] + x[1]) / 1.5; };
  Problem p("spring", f,
            {V::continuous(0.05, 2.0), V::continuous(0.25, 1.3), V::continuous(2.0, 15.0)},
            {C::less_equal(g1, -1.0), C::less_equal(g2, 1.0), C::less_equal(g3, -1.0),
             C::less_equal(g4, 1.0)});

  const DecisionVector present{0.0513412, 0.3483225, 11.80261};
  return {std::move(p), present, 0.012672, "Table 3",
          {{"present study", present, 0.012672, 1e-5, true},
           {"Coello (2000b)", {0.05148, 0.351661, 11.632201}, 0.012704, 1e-5, true}}};
}

BenchmarkEntry pressure_vessel() {
  using std::numbers::pi;
  auto f = [](X x) {
    return 0.6224 * x[0] * x[2] * x[3] + 1.7781 * x[1] * x[2] * x[2] +
           3.1661 * x[0] * x[0] * x[3] + 19.84 * x[0] * x[0] * x[2];
  };
  auto g1 = [](X x) { return -x[0] + 0.0193 * x[2]; };
  auto g2 = [](X x) { return -x[1] + 0.00954 * x[2]; };
  auto g3 = [](X x) {
    return -pi * x[2] * x[2] * x[3] - 4.0 / 3.0 * pi * x[2] * x[2] * x[2];
  };
  auto g4 = [](X x) { return x[3]; };
  constexpr double step = 0.0625;
  Problem p("pressure-vessel", f,
            {V::discrete(step, 99 * step, step), V::discrete(step, 99 * step, step),
             V::continuous(10, 200), V::continuous(10, 200)},
            {C::less_equal(g1, 0.0), C::less_equal(g2, 0.0), C::less_equal(g3, -1'296'000.0),
             C::less_equal(g4, 240.0)});

  // Table 5 prints x3 = 42.0978, x4 = 176.644; at exactly those digits g3 is
  // +3.3 (infeasible). This point rounds to the printed digits and is feasible.
  const DecisionVector present{0.8125, 0.4375, 42.09784, 176.6444};
  return {std::move(p), present, 6059.79164, "Table 5",
          {{"present study", present, 6059.79, 0.5, true},
           {"Yun (2005)", {1.125, 0.625, 58.2850, 43.725}, 7198.424, 1.0, true}}};
}

namespace welded {

constexpr double P = 6000.0;
constexpr double L = 14.0;
constexpr double E = 30e6;
constexpr double G = 12e6;
constexpr double tau_max = 13600.0;
constexpr double sigma_max = 30000.0;
constexpr double delta_max = 0.25;

double tau(X x) {
  const double x1 = x[0], x2 = x[1], x3 = x[2];
  const double tau_p = P / (std::sqrt(2.0) * x1 * x2);
  const double M = P * (L + x2 / 2.0);
  const double half = (x1 + x3) / 2.0;
  const double R = std::sqrt(x2 * x2 / 4.0 + half * half);
  const double J = 2.0 * (std::sqrt(2.0) * x1 * x2 * (x2 * x2 / 12.0 + half * half));
  const double tau_pp = M * R / J;
  return std::sqrt(tau_p * tau_p + 2.0 * tau_p * tau_pp * x2 / (2.0 * R) + tau_pp * tau_pp);
}

double sigma(X x) { return 6.0 * P * L / (x[3] * x[2] * x[2]); }

double delta(X x) { return 4.0 * P * L * L * L / (E * x[2] * x[2] * x[2] * x[3]); }

double buckling_load(X x) {
  const double x3 = x[2], x4 = x[3];
  return 4.013 * E * std::sqrt(x3 * x3 * std::pow(x4, 6) / 36.0) / (L * L) *
         (1.0 - x3 / (2.0 * L) * std::sqrt(E / (4.0 * G)));
}

}  // namespace welded

BenchmarkEntry welded_beam() {
  using namespace welded;
  auto f = [](X x) {
    return 1.1047 * x[0] * x[0] * x[1] + 0.04811 * x[2] * x[3] * (14.0 + x[1]);
  };
  auto g7 = [](X x) {
    return 0.10471 * x[0] * x[0] + 0.04811 * x[2] * x[3] * (14.0 + x[1]);
  };
  Problem p("welded-beam", f,
            {V::continuous(0.1, 2.0), V::continuous(0.1, 10.0), V::continuous(0.1, 10.0),
             V::continuous(0.1, 2.0)},
            {C::less_equal(tau, tau_max), C::less_equal(sigma, sigma_max),
             C::less_equal([](X x) { return x[0] - x[3]; }, 0.0),
             C::less_equal([](X x) { return -x[0]; }, -0.125),
             C::less_equal(delta, delta_max),
             C::less_equal([](X x) { return -buckling_load(x); }, -P),
             C::less_equal(g7, 5.0)});

  const DecisionVector present{0.20578, 3.47294, 9.02922, 0.20608};
  return {std::move(p), present, 1.726718, "Table 7",
          {{"present study", present, 1.726718, 1e-3, true},
           {"Siddall (1972)", {0.2444, 6.2189, 8.2915, 0.2444}, 2.3815, 1e-3, true}}};
}

BenchmarkEntry toy_linear() {
  Problem p("toy-linear", [](X x) { return x[0] + x[1]; },
            {V::continuous(0, 1), V::continuous(0, 1)},
            {C::less_equal([](X x) { return -x[0] - x[1]; }, -1.0)});
  return {std::move(p), {0.5, 0.5}, 1.0, "analytic", {{"optimum", {0.5, 0.5}, 1.0, 1e-12, true}}};
}

BenchmarkEntry toy_equality() {
  Problem p("toy-equality", [](X x) { return x[0] * x[0] + x[1] * x[1]; },
            {V::continuous(0, 1), V::continuous(0, 1)},
            {C::equality([](X x) { return x[0] + x[1] - 1.0; })});
  return {std::move(p), {0.5, 0.5}, 0.5, "analytic", {{"optimum", {0.5, 0.5}, 0.5, 1e-12, true}}};
}

BenchmarkEntry toy_infeasible() {
  // x1 >= 2 cannot hold on [0, 1]^2.
  Problem p("toy-infeasible", [](X x) { return x[0] + x[1]; },
            {V::continuous(0, 1), V::continuous(0, 1)},
            {C::less_equal([](X x) { return -x[0]; }, -2.0)});
  return {std::move(p), {1.0, 0.0}, 1.0, "analytic",
          {{"closest point", {1.0, 0.0}, 1.0, 1e-12, false}}};
}

std::vector<BenchmarkEntry> toy_problems() {
  std::vector<BenchmarkEntry> out;
  out.push_back(toy_linear());
  out.push_back(toy_equality());
  out.push_back(toy_infeasible());
  return out;
}

std::vector<BenchmarkEntry> engineering_benchmarks() {
  std::vector<BenchmarkEntry> out;
  out.push_back(spring());
  out.push_back(welded_beam());
  out.push_back(pressure_vessel());
  out.push_back(himmelblau());
  return out;
}

std::vector<std::string> problem_names() {
  return {"himmelblau",  "spring",       "pressure-vessel", "welded-beam",
          "toy-linear", "toy-equality", "toy-infeasible"};
}

BenchmarkEntry find_benchmark(std::string_view name) {
  if (name == "himmelblau") return himmelblau();
  if (name == "spring") return spring();
  if (name == "pressure-vessel") return pressure_vessel();
  if (name == "welded-beam") return welded_beam();
  if (name == "toy-linear") return toy_linear();
  if (name == "toy-equality") return toy_equality();
  if (name == "toy-infeasible") return toy_infeasible();
  throw UnknownProblem("unknown problem '" + std::string(name) + "'");
}

}  // namespace vch
