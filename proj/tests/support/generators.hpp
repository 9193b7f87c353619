#ifndef CONSYN_TESTS_GENERATORS_HPP
#define CONSYN_TESTS_GENERATORS_HPP

#include <random>
#include <vector>

#include "consyn/expr.hpp"

namespace consyn::testing {

// Random expression trees for property tests. Division can be excluded so
// finite-difference probes stay away from singularities.
class ExprGen {
 public:
  explicit ExprGen(std::uint64_t seed, int dimension, bool allowDivision)
      : rng_(seed), dim_(dimension), allowDivision_(allowDivision) {}

  Expr next(int maxDepth = 6) { return gen(maxDepth); }

  std::vector<double> point(double halfWidth = 1.2) {
    std::vector<double> x(static_cast<std::size_t>(dim_));
    for (auto& v : x) v = uniform(-halfWidth, halfWidth);
    return x;
  }

 private:
  double uniform01() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  int pick(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }

  Expr leaf() {
    if (pick(2) == 0) return Expr::constant(uniform(-2.0, 2.0));
    return Expr::variable(1 + pick(dim_));
  }

  Expr gen(int depth) {
    if (depth <= 0 || pick(100) < 25) return leaf();
    int choice = pick(allowDivision_ ? 6 : 5);
    switch (choice) {
      case 0:
        return gen(depth - 1) + gen(depth - 1);
      case 1:
        return gen(depth - 1) - gen(depth - 1);
      case 2:
        return gen(depth - 1) * gen(depth - 1);
      case 3:
        return -gen(depth - 1);
      case 4:
        return pow(gen(depth - 1), pick(4));
      default:
        return gen(depth - 1) / gen(depth - 1);
    }
  }

  std::mt19937_64 rng_;
  int dim_;
  bool allowDivision_;
};

inline double centralDifference(const Expr& e, int var, std::vector<double> x,
                                double h = 1e-5) {
  const std::size_t i = static_cast<std::size_t>(var - 1);
  x[i] += h;
  double hi = e.eval(x);
  x[i] -= 2.0 * h;
  double lo = e.eval(x);
  return (hi - lo) / (2.0 * h);
}

}  // namespace consyn::testing

#endif  // CONSYN_TESTS_GENERATORS_HPP
