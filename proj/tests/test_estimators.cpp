#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "doctest.h"
#include "svx/errors.hpp"
#include "svx/estimators.hpp"
#include "svx/rng.hpp"
#include "svx/tail_model.hpp"

using namespace svx;

namespace {

struct BruteResult {
  double u = 0.0;
  std::size_t num = 0;
  std::size_t den = 0;
  std::size_t n = 0;
};

// Independent reference: enumerate every window start whose conditioning and
// target blocks both fit, threshold by fully sorting the first n
// observations, then count memberships directly.
BruteResult brute_rho(const std::vector<double>& y, const EstimatorConfig& cfg,
                      const std::vector<Interval>& b) {
  const int h = cfg.set.dim();
  const std::size_t stride = cfg.thinned ? static_cast<std::size_t>(h) : 1;
  std::vector<std::size_t> starts;
  for (std::size_t s = 0;
       s + h <= y.size() && s + cfg.m + cfg.h_prime < y.size(); s += stride)
    starts.push_back(s);

  BruteResult r;
  r.n = starts.size();
  std::vector<double> head(y.begin(), y.begin() + r.n);
  std::sort(head.begin(), head.end());
  r.u = head[r.n - cfg.k - 1];

  for (std::size_t s : starts) {
    std::vector<double> window(y.begin() + s, y.begin() + s + h);
    if (!cfg.set.member(r.u, window)) continue;
    ++r.den;
    bool hit = true;
    for (int i = 0; i <= cfg.h_prime; ++i) {
      double v = y[s + cfg.m + i];
      if (!(v > b[i].lo && v <= b[i].hi)) hit = false;
    }
    if (hit) ++r.num;
  }
  return r;
}

std::vector<double> pareto_series(std::size_t n, double alpha,
                                  std::uint64_t seed) {
  auto tail = TailModel::Pareto(alpha);
  Rng rng(seed);
  std::vector<double> y(n);
  for (auto& v : y) v = tail.sample(rng);
  return y;
}

// Moving maximum of an iid Pareto draw. Large values arrive in runs of two,
// so multi-coordinate boxes see nonempty exceedance sets even at small k.
std::vector<double> clustered_series(std::size_t n, double alpha,
                                     std::uint64_t seed) {
  auto z = pareto_series(n + 1, alpha, seed);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = std::max(z[i], z[i + 1]);
  return y;
}

}  // namespace

TEST_CASE("k power rule") {
  CHECK(k_power_rule(100000, 0.6) == 1000);
  CHECK(k_power_rule(100000, 0.3) == 32);
  CHECK(k_power_rule(100, 0.5) == 10);
  CHECK_THROWS_AS(k_power_rule(100, 0.0), ConfigError);
  CHECK_THROWS_AS(k_power_rule(100, 1.0), ConfigError);
}

TEST_CASE("order statistic threshold") {
  CHECK(order_statistic_threshold({1.0, 5.0, 2.0, 7.0}, 1) == 5.0);
  CHECK(order_statistic_threshold({3.0, 3.0, 3.0}, 1) == 3.0);
  std::vector<double> v;
  for (int i = 1; i <= 100; ++i) v.push_back(i);
  CHECK(order_statistic_threshold(v, 10) == 90.0);
  CHECK_THROWS_AS(order_statistic_threshold({1.0, 2.0}, 2), ConfigError);
  CHECK_THROWS_AS(order_statistic_threshold({1.0, 2.0}, 0), ConfigError);
}

TEST_CASE("window counts") {
  EstimatorConfig cfg;
  cfg.set = ExtremeSet::Box(1);
  cfg.m = 1;
  cfg.k = 1;
  CHECK(window_count(5, cfg) == 4);

  EstimatorConfig sum2;
  sum2.set = ExtremeSet::SumHalfSpace(2);
  sum2.m = 2;
  sum2.k = 1;
  CHECK(window_count(5, sum2) == 3);

  sum2.thinned = true;
  CHECK(window_count(9, sum2) == 4);  // block starts 1,3,5,7

  EstimatorConfig far;
  far.set = ExtremeSet::Box(1);
  far.m = 10;
  CHECK(window_count(5, far) == 0);
  CHECK(window_count(11, far) == 1);
}

TEST_CASE("rho_hat hand trace") {
  std::vector<double> y = {1.0, 5.0, 2.0, 7.0, 3.0};
  EstimatorConfig cfg;
  cfg.set = ExtremeSet::Box(1);
  cfg.m = 1;
  cfg.k = 1;
  auto e = rho_hat(y, cfg, {Interval::upto(4.0)});
  CHECK(e.u_hat == 5.0);
  CHECK(e.denominator == 1);  // only Y_4 = 7 exceeds strictly
  CHECK(e.numerator == 1);    // its target Y_5 = 3 <= 4
  CHECK(e.value == 1.0);
  CHECK(e.k_used == 1);
}

TEST_CASE("lambda_hat hand trace") {
  std::vector<double> y = {1.0, 5.0, 2.0, 7.0, 3.0};
  auto curve = lambda_hat(y, 1, 2, {2.5});
  REQUIRE(curve.points.size() == 1);
  const auto& e = curve.points[0];
  // three windows with sums 6, 7, 9; threshold = 2nd smallest of (1,5,2) = 2;
  // all qualify; targets 2, 7, 3 of which one is <= 2.5
  CHECK(e.u_hat == 2.0);
  CHECK(e.denominator == 3);
  CHECK(e.numerator == 1);
  CHECK(e.value == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("estimator matches brute force across geometries") {
  auto y = clustered_series(400, 1.5, 1234);
  struct Case {
    ExtremeSet set;
    int m;
    int h_prime;
    bool thinned;
  };
  std::vector<Case> cases = {
      {ExtremeSet::Box(1), 1, 0, false},   {ExtremeSet::Box(1), 3, 1, false},
      {ExtremeSet::Box(2), 2, 0, false},   {ExtremeSet::Box(2), 4, 1, false},
      {ExtremeSet::SumHalfSpace(2), 2, 0, false},
      {ExtremeSet::SumHalfSpace(2), 3, 0, true},
      {ExtremeSet::Combined(), 3, 0, false},
      {ExtremeSet::Combined(), 5, 2, true},
  };
  for (const auto& c : cases) {
    std::string desc = c.set.describe();
    CAPTURE(desc);
    CAPTURE(c.m);
    CAPTURE(c.h_prime);
    CAPTURE(c.thinned);
    EstimatorConfig cfg;
    cfg.set = c.set;
    cfg.m = c.m;
    cfg.h_prime = c.h_prime;
    cfg.thinned = c.thinned;
    for (std::size_t k : {5, 40}) {
      cfg.k = k;
      std::vector<Interval> b(c.h_prime + 1, Interval::upto(2.0));
      b[0] = Interval{0.5, 3.0};
      auto want = brute_rho(y, cfg, b);
      if (want.den == 0) {
        CHECK_THROWS_AS(c.thinned ? rho_tilde(y, cfg, b) : rho_hat(y, cfg, b),
                        InputError);
        continue;
      }
      auto got = c.thinned ? rho_tilde(y, cfg, b) : rho_hat(y, cfg, b);
      CHECK(got.u_hat == want.u);
      CHECK(got.numerator == want.num);
      CHECK(got.denominator == want.den);
      CHECK(window_count(y.size(), cfg) == want.n);
    }
  }
}

TEST_CASE("psi curve equals pointwise rho_hat") {
  auto y = clustered_series(300, 2.0, 99);
  EstimatorConfig cfg;
  cfg.set = ExtremeSet::Box(2);
  cfg.m = 3;
  cfg.h_prime = 1;
  cfg.k = 12;
  std::vector<double> grid = {1.0, 2.0, 4.0, 8.0};
  auto curve = psi_hat_curve(y, cfg, grid);
  REQUIRE(curve.points.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<Interval> b(2, Interval::upto(grid[i]));
    auto e = rho_hat(y, cfg, b);
    CHECK(curve.points[i].value == e.value);
    CHECK(curve.points[i].numerator == e.numerator);
    CHECK(curve.points[i].denominator == e.denominator);
  }
  for (std::size_t i = 1; i < grid.size(); ++i)
    CHECK(curve.points[i].value >= curve.points[i - 1].value);
  auto top = psi_hat_curve(y, cfg, {1e12});
  CHECK(top.points[0].value == 1.0);
}

TEST_CASE("scaling the series and the target together changes nothing") {
  auto y = pareto_series(500, 2.0, 31);
  EstimatorConfig cfg;
  cfg.set = ExtremeSet::SumHalfSpace(2);
  cfg.m = 2;
  cfg.k = 25;
  const double c = 3.7;
  std::vector<double> scaled(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) scaled[i] = c * y[i];
  auto a = rho_hat(y, cfg, {Interval{0.5, 2.0}});
  auto b = rho_hat(scaled, cfg, {Interval{0.5 * c, 2.0 * c}});
  CHECK(a.numerator == b.numerator);
  CHECK(a.denominator == b.denominator);
  CHECK(b.u_hat == doctest::Approx(c * a.u_hat).epsilon(1e-12));
}

TEST_CASE("iid series recover the innovation law") {
  auto y = pareto_series(50000, 2.0, 2718);
  EstimatorConfig cfg;
  cfg.set = ExtremeSet::Box(1);
  cfg.m = 1;
  cfg.k = 1000;
  auto e = rho_hat(y, cfg, {Interval::upto(2.0)});
  // independence: conditional law equals marginal law F_Z(2) = 0.75
  CHECK(e.value == doctest::Approx(0.75).epsilon(0.07));
  CHECK(std::abs(e.value - 0.75) < 4.0 * e.stderr_);

  auto lam = lambda_hat(y, 1000, 2, {2.0});
  CHECK(lam.points[0].value == doctest::Approx(0.75).epsilon(0.07));
}

TEST_CASE("thinning with single-coordinate windows is a no-op") {
  auto y = pareto_series(300, 2.0, 55);
  EstimatorConfig cfg;
  cfg.set = ExtremeSet::Box(1);
  cfg.m = 2;
  cfg.k = 10;
  auto plain = rho_hat(y, cfg, {Interval::upto(1.5)});
  cfg.thinned = true;
  auto thin = rho_tilde(y, cfg, {Interval::upto(1.5)});
  CHECK(plain.value == thin.value);
  CHECK(plain.u_hat == thin.u_hat);
  CHECK(plain.denominator == thin.denominator);
}

TEST_CASE("confidence interval and restudentization") {
  auto y = pareto_series(2000, 2.0, 808);
  EstimatorConfig cfg;
  cfg.set = ExtremeSet::Box(1);
  cfg.m = 1;
  cfg.k = 100;
  auto e = rho_hat(y, cfg, {Interval::upto(2.0)});
  double d = static_cast<double>(e.denominator);
  CHECK(e.stderr_ ==
        doctest::Approx(std::sqrt(e.value * (1.0 - e.value) / d)).epsilon(1e-12));
  CHECK(e.ci_lo >= 0.0);
  CHECK(e.ci_hi <= 1.0);
  CHECK(e.ci_lo <= e.value);
  CHECK(e.ci_hi >= e.value);

  restudentize(e, 4.0);
  CHECK(e.stderr_ == doctest::Approx(std::sqrt(4.0 / d)).epsilon(1e-12));
  restudentize(e, 0.0);
  CHECK(e.stderr_ == 0.0);
  CHECK(e.ci_lo == e.value);
}

TEST_CASE("error paths") {
  auto y = pareto_series(50, 2.0, 4);
  EstimatorConfig cfg;
  cfg.set = ExtremeSet::Box(1);
  cfg.m = 1;
  cfg.k = 60;  // k >= window count
  CHECK_THROWS_AS(rho_hat(y, cfg, {Interval::upto(1.0)}), ConfigError);

  cfg.k = 5;
  CHECK_THROWS_AS(rho_hat(y, cfg, {Interval::upto(1.0), Interval::upto(1.0)}),
                  ConfigError);
  CHECK_THROWS_AS(rho_tilde(y, cfg, {Interval::upto(1.0)}), ConfigError);
  cfg.thinned = true;
  CHECK_THROWS_AS(rho_hat(y, cfg, {Interval::upto(1.0)}), ConfigError);
  cfg.thinned = false;

  cfg.m = 0;
  CHECK_THROWS_AS(rho_hat(y, cfg, {Interval::upto(1.0)}), ConfigError);
  cfg.m = 1;

  std::vector<double> tiny = {1.0, 2.0};
  CHECK_THROWS_AS(rho_hat(tiny, cfg, {Interval::upto(1.0)}), InputError);

  // constant series: nothing exceeds the threshold strictly
  std::vector<double> flat(100, 3.0);
  cfg.k = 5;
  CHECK_THROWS_AS(rho_hat(flat, cfg, {Interval::upto(1.0)}), InputError);
}
