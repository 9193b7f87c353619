#include <doctest.h>

#include <random>

#include "consyn/policy.hpp"
#include "support/case_studies.hpp"

using namespace consyn;
using consyn::testing::systemA;

TEST_CASE("saturation operator basics") {
  Eigen::Vector2d y(3, 4);
  Eigen::VectorXd clamped = sat(y, 2.0);
  CHECK(clamped[0] == doctest::Approx(1.2));
  CHECK(clamped[1] == doctest::Approx(1.6));
  CHECK(sat(y, 10.0) == y);
  Eigen::Vector2d zero(0, 0);
  CHECK(sat(zero, 1.0) == zero);
}

TEST_CASE("saturation properties on random inputs") {
  std::mt19937_64 rng(31337);
  auto uniform = [&rng](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  };
  for (int trial = 0; trial < 10000; ++trial) {
    int dim = 1 + static_cast<int>(rng() % 4);
    Eigen::VectorXd y(dim);
    for (int i = 0; i < dim; ++i) y[i] = uniform(-20.0, 20.0);
    double alpha = uniform(1e-3, 10.0);
    Eigen::VectorXd s = sat(y, alpha);

    CHECK(s.norm() <= alpha);
    if (y.norm() < alpha) CHECK(s == y);
    // Positive collinearity: s is a nonnegative multiple of y.
    if (y.norm() > 0) {
      double c = s.dot(y) / y.squaredNorm();
      CHECK(c >= 0.0);
      CHECK((s - c * y).norm() <= 1e-12 * (1.0 + y.norm()));
    }
  }
}

TEST_CASE("saturated policies at hand-evaluated states") {
  PolicyPair pair = saturatedPolicies(systemA());
  CHECK(pair.mode == PolicyMode::saturated);

  Eigen::Vector2d x(4, 2);  // 1/2 g1'Vx = 7 inside the ball, 1/2 g2'Vx = -2
  CHECK(pair.wStar(x)[0] == doctest::Approx(7.0));
  CHECK(pair.uStar(x)[0] == doctest::Approx(2.0));

  Eigen::Vector2d far(30, 30);  // 1/2 g1'Vx = 90 clamps to alpha1 = 10
  CHECK(pair.wStar(far)[0] == doctest::Approx(10.0));

  StateSampler sampler(2, 5);
  for (const auto& s : sampler.states(500)) {
    CHECK(pair.uStar(s).norm() <= systemA().spec.alpha2);
    CHECK(pair.wStar(s).norm() <= systemA().spec.alpha1);
  }
}

TEST_CASE("unsaturated policies and agreement inside X") {
  PolicyPair unsat = unsaturatedPolicies(systemA());
  PolicyPair satp = saturatedPolicies(systemA());
  CHECK(unsat.mode == PolicyMode::unsaturated);

  Eigen::Vector2d origin(0, 0);
  CHECK(unsat.uStar(origin).norm() == 0.0);
  CHECK(unsat.wStar(origin).norm() == 0.0);

  Eigen::Vector2d x(1, 0);
  CHECK(unsat.uStar(x)[0] == doctest::Approx(0.5));
  CHECK(unsat.wStar(x)[0] == doctest::Approx(0.5));

  Eigen::Vector2d probe(4, 2);  // inside X: norms 2 and 7 against bounds 20 and 10
  CHECK(unsat.uStar(probe) == satp.uStar(probe));
  CHECK(unsat.wStar(probe) == satp.wStar(probe));

  DomainX domain(systemA().spec);
  StateSampler sampler(2, 77);
  int inX = 0;
  for (const auto& s : sampler.states(500)) {
    if (!domain.contains(s)) continue;
    ++inX;
    // Inside the open region the saturation is the identity, so both
    // policy pairs coincide bit for bit.
    CHECK(unsat.uStar(s) == satp.uStar(s));
    CHECK(unsat.wStar(s) == satp.wStar(s));
  }
  CHECK(inX > 0);
}

TEST_CASE("domain X membership") {
  const ProblemSpec& spec = systemA().spec;
  CHECK(inDomainX(spec, Eigen::Vector2d(4, 2)));
  CHECK_FALSE(inDomainX(spec, Eigen::Vector2d(30, 30)));
  CHECK(inDomainX(spec, Eigen::Vector2d(0, 0)));
}
