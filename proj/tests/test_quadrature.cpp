#include <cmath>

#include "doctest.h"
#include "svx/quadrature.hpp"

using namespace svx;

TEST_CASE("gauss hermite rule integrates normal moments") {
  const auto& rule = gauss_hermite(64);
  REQUIRE(rule.nodes.size() == 64);
  double w = 0.0, m2 = 0.0, m4 = 0.0, me = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    double x = rule.nodes[i];
    w += rule.weights[i];
    m2 += rule.weights[i] * x * x;
    m4 += rule.weights[i] * x * x * x * x;
    me += rule.weights[i] * std::exp(x);
  }
  CHECK(w == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m4 == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(me == doctest::Approx(std::exp(0.5)).epsilon(1e-12));
}

TEST_CASE("rule is cached and symmetric") {
  const auto& a = gauss_hermite(48);
  const auto& b = gauss_hermite(48);
  CHECK(&a == &b);
  for (std::size_t i = 0; i < a.nodes.size(); ++i)
    CHECK(a.nodes[i] == doctest::Approx(-a.nodes[a.nodes.size() - 1 - i])
                            .epsilon(1e-12));
}

TEST_CASE("finite interval integration") {
  CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::exp(-x * x); }, -6.0, 6.0) ==
        doctest::Approx(std::sqrt(M_PI)).epsilon(1e-10));
}

TEST_CASE("upper tail integration") {
  CHECK(integrate_upper([](double z) { return 2.0 * std::pow(z, -3.0); }, 1.0) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(integrate_upper([](double x) { return std::exp(-x); }, 0.0) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(integrate_upper([](double x) { return std::exp(-x); }, 2.0) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-9));
}
