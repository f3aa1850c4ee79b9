#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support/oracles.hpp"
#include "svx/errors.hpp"
#include "svx/quadrature.hpp"
#include "svx/rng.hpp"
#include "svx/tail_model.hpp"

using namespace svx;

TEST_CASE("pareto survival quantile density") {
  auto z = TailModel::Pareto(2.0);
  CHECK(z.alpha() == 2.0);
  CHECK(z.nonnegative());
  CHECK(z.survival(2.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(z.survival(0.5) == 1.0);
  CHECK(z.cdf(1.0) == doctest::Approx(0.0));
  CHECK(z.quantile(0.99) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(z.quantile(0.75) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(z.density(2.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(z.density(0.5) == 0.0);
  CHECK(z.tail_constant() == doctest::Approx(1.0));
  CHECK(z.eta_star(10.0) == 0.0);
}

TEST_CASE("pareto mean via quadrature") {
  // E[Z] = alpha/(alpha-1) = 2 at alpha = 2
  auto z = TailModel::Pareto(2.0);
  double m = integrate_upper([&](double t) { return t * z.density(t); }, 1.0,
                             1e-10);
  CHECK(m == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("student t frozen values") {
  auto z = TailModel::StudentT(3.0);
  CHECK(z.alpha() == 3.0);
  CHECK_FALSE(z.nonnegative());
  // c_nu = Gamma(2) 3^{1/2} / (sqrt(pi) Gamma(1.5)) = 2 sqrt(3) / pi
  double c3 = 2.0 * std::sqrt(3.0) / std::numbers::pi;
  CHECK(z.tail_constant() == doctest::Approx(c3).epsilon(1e-10));
  // nu=1 is Cauchy: P(Z > z) = 1/2 - atan(z)/pi
  auto cauchy = TailModel::StudentT(1.0);
  CHECK(cauchy.survival(1.0) == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(cauchy.quantile(0.75) == doctest::Approx(1.0).epsilon(1e-8));
  // symmetric distribution
  CHECK(z.survival(-1.3) == doctest::Approx(1.0 - z.survival(1.3)).epsilon(1e-10));
  CHECK(z.quantile(0.5) == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("student t tail approaches the power asymptote") {
  auto z = TailModel::StudentT(3.0);
  double t = 100.0;
  double ratio = z.survival(t) * std::pow(t, 3.0) / z.tail_constant();
  CHECK(ratio == doctest::Approx(1.0).epsilon(1e-3));
  // envelope dominates the relative deviation on a grid
  for (double u : {5.0, 10.0, 50.0, 200.0}) {
    double dev = std::abs(z.survival(u) * std::pow(u, 3.0) / z.tail_constant() - 1.0);
    CHECK(dev <= z.eta_star(u));
  }
  // and it is nonincreasing
  CHECK(z.eta_star(10.0) <= z.eta_star(5.0));
}

TEST_CASE("quantile inverts cdf across families") {
  for (auto z : {TailModel::Pareto(1.5), TailModel::StudentT(2.0)}) {
    for (double p : {0.05, 0.3, 0.5, 0.9, 0.999}) {
      if (z.nonnegative() && p == 0.05) continue;
      CHECK(z.cdf(z.quantile(p)) == doctest::Approx(p).epsilon(1e-7));
    }
  }
}

TEST_CASE("sampling matches the survival function") {
  auto z = TailModel::Pareto(3.0);
  Rng rng(2024);
  int n = 100000, over = 0;
  for (int i = 0; i < n; ++i)
    if (z.sample(rng) > 2.0) ++over;
  // P(Z > 2) = 1/8, stderr ~ 0.001
  CHECK(static_cast<double>(over) / n == doctest::Approx(0.125).epsilon(0.03));
}

TEST_CASE("convolution survival against direct quadrature") {
  auto z = TailModel::Pareto(2.0);
  for (double t : {10.0, 100.0}) {
    double got = convolution_survival(z, 1.3, 0.7, t);
    double want = oracle::convolution_quadrature(z, 1.3, 0.7, t);
    CHECK(got == doctest::Approx(want).epsilon(1e-6));
  }
}

TEST_CASE("convolution survival basic sanity") {
  auto z = TailModel::Pareto(2.0);
  // below the support minimum u1+u2 the sum always exceeds t
  CHECK(convolution_survival(z, 1.0, 1.0, 1.5) == doctest::Approx(1.0));
  // monotone in t
  CHECK(convolution_survival(z, 1.0, 1.0, 10.0) >
        convolution_survival(z, 1.0, 1.0, 20.0));
  // dominated by either single term, bounded by their sum asymptotically
  double t = 50.0;
  double both = convolution_survival(z, 1.0, 1.0, t);
  double single = z.survival(t);
  CHECK(both > single);
  CHECK(both < 2.5 * single);
}

TEST_CASE("convolution check structure") {
  auto z = TailModel::Pareto(2.0);
  auto chk = convolution_tail_check(z, 1.3, 0.7, 10.0, 1e4, 25);
  REQUIRE(chk.t_grid.size() == 25);
  REQUIRE(chk.lhs.size() == 25);
  REQUIRE(chk.envelope.size() == 25);
  REQUIRE(chk.ratios.size() == 25);
  CHECK(chk.t_grid.front() == doctest::Approx(10.0));
  CHECK(chk.t_grid.back() == doctest::Approx(1e4).epsilon(1e-9));
  double mx = 0.0;
  for (std::size_t i = 0; i < chk.ratios.size(); ++i) {
    CHECK(chk.ratios[i] == doctest::Approx(chk.lhs[i] / chk.envelope[i]).epsilon(1e-12));
    mx = std::max(mx, chk.ratios[i]);
  }
  CHECK(chk.c_hat == doctest::Approx(mx));
  CHECK(chk.c_hat > 0.0);
  CHECK(std::isfinite(chk.late_over_early));
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(TailModel::Pareto(0.0), ConfigError);
  CHECK_THROWS_AS(TailModel::Pareto(-1.0), ConfigError);
  CHECK_THROWS_AS(TailModel::StudentT(0.0), ConfigError);
}
