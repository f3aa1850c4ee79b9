#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "svx/errors.hpp"
#include "svx/hermite.hpp"

using namespace svx;

TEST_CASE("hermite polynomial recurrence") {
  double x = 1.3;
  CHECK(hermite_poly(0, x) == 1.0);
  CHECK(hermite_poly(1, x) == x);
  CHECK(hermite_poly(2, x) == doctest::Approx(x * x - 1.0));
  CHECK(hermite_poly(3, x) == doctest::Approx(x * x * x - 3.0 * x));
  CHECK(hermite_poly(4, x) ==
        doctest::Approx(x * x * x * x - 6.0 * x * x + 3.0));
  CHECK_THROWS_AS(hermite_poly(-1, x), ConfigError);
}

TEST_CASE("expansion of the exponential") {
  // E[e^X H_q(X)] = e^{1/2} for every q
  auto ex = hermite_coeffs_1d([](double x) { return std::exp(x); }, 6);
  double want = std::exp(0.5);
  for (int q = 0; q <= 6; ++q)
    CHECK(ex.coeffs[q] == doctest::Approx(want).epsilon(1e-10));
  CHECK(ex.mean_square == doctest::Approx(std::exp(2.0)).epsilon(1e-10));
  CHECK(ex.rank() == 1);
}

TEST_CASE("expansion of even functions starts at degree two") {
  auto sq = hermite_coeffs_1d([](double x) { return x * x - 1.0; }, 4);
  CHECK(sq.coeffs[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(sq.coeffs[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(sq.coeffs[2] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(sq.rank() == 2);

  auto abs = hermite_coeffs_1d([](double x) { return std::fabs(x); }, 4);
  CHECK(abs.rank() == 2);
  // |x| has a kink, so the fixed quadrature is only good to ~0.5% here
  CHECK(abs.coeffs[2] ==
        doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(5e-3));
}

TEST_CASE("parseval for a cubic") {
  auto ex = hermite_coeffs_1d([](double x) { return x * x * x; }, 5);
  CHECK(ex.coeffs[1] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(ex.coeffs[3] == doctest::Approx(6.0).epsilon(1e-12));
  double parseval = 0.0, fact = 1.0;
  for (std::size_t q = 0; q < ex.coeffs.size(); ++q) {
    if (q > 0) fact *= static_cast<double>(q);
    parseval += ex.coeffs[q] * ex.coeffs[q] / fact;
  }
  CHECK(parseval == doctest::Approx(15.0).epsilon(1e-10));
  CHECK(ex.rank() == 1);
}

TEST_CASE("degenerate and tolerance behaviour of rank") {
  auto c = hermite_coeffs_1d([](double) { return 2.5; }, 4);
  CHECK(c.rank() == 0);
  auto pure3 = hermite_coeffs_1d([](double x) { return hermite_poly(3, x); }, 5);
  CHECK(pure3.rank() == 3);
  CHECK(pure3.rank(10.0) == 0);  // absurd tolerance swallows everything
}

TEST_CASE("kernel rank follows the volatility parity") {
  SvConfig cfg;
  cfg.acf = AcfModel::Ar1(0.5);
  cfg.vol = VolatilityFn::Exp();
  cfg.tail = TailModel::Pareto(2.0);
  cfg.h = 1;
  cfg.m = 1;
  cfg.h_prime = 0;
  auto set = ExtremeSet::Box(1);
  std::vector<Interval> b = {Interval::upto(1.0)};
  std::vector<double> grid = {0.5, 1.0, 2.0, 5.0};

  auto exp_ranks = rank_of_G(cfg, set, b, grid);
  CHECK(exp_ranks.tau_ab.rank == 1);
  CHECK(exp_ranks.tau_a.rank == 1);
  CHECK(exp_ranks.tau_star.rank == 1);
  CHECK_FALSE(exp_ranks.tau_a.degenerate());

  cfg.vol = VolatilityFn::AbsPower(2.0);
  auto even_ranks = rank_of_G(cfg, set, b, grid);
  CHECK(even_ranks.tau_ab.rank == 2);
  CHECK(even_ranks.tau_a.rank == 2);
  CHECK(even_ranks.tau_star.rank == 2);
}

TEST_CASE("kernel rank for a two-step conditioning window") {
  SvConfig cfg;
  cfg.acf = AcfModel::Ar1(0.5);
  cfg.vol = VolatilityFn::Exp();
  cfg.tail = TailModel::Pareto(2.0);
  cfg.h = 2;
  cfg.m = 2;
  cfg.h_prime = 0;
  auto ranks = rank_of_G(cfg, ExtremeSet::SumHalfSpace(2), {Interval::upto(1.0)},
                         {1.0});
  CHECK(ranks.tau_ab.rank == 1);
  CHECK(ranks.tau_a.rank == 1);
}

TEST_CASE("kernel rank validation") {
  SvConfig cfg;
  cfg.h = 2;
  cfg.m = 2;
  cfg.h_prime = 1;  // joint dimension 4
  CHECK_THROWS_AS(rank_of_G(cfg, ExtremeSet::Box(2),
                            {Interval::upto(1.0), Interval::upto(1.0)}, {1.0}),
                  ConfigError);
  cfg.h_prime = 0;
  cfg.m = 1;
  CHECK_THROWS_AS(rank_of_G(cfg, ExtremeSet::Box(2), {Interval::upto(1.0)}, {1.0}),
                  ConfigError);
  cfg.m = 2;
  CHECK_THROWS_AS(rank_of_G(cfg, ExtremeSet::Box(1), {Interval::upto(1.0)}, {1.0}),
                  ConfigError);
  CHECK_THROWS_AS(rank_of_G(cfg, ExtremeSet::Box(2), {Interval::upto(1.0)}, {}),
                  ConfigError);
}

TEST_CASE("variance decay of subordinated means, long memory rank one") {
  auto rep = arcones_check([](double x) { return x; }, 1, AcfModel::Fgn(0.8),
                           {512, 2048, 8192}, 120, 404);
  CHECK(rep.theory_slope == doctest::Approx(-0.4));
  CHECK(rep.slope == doctest::Approx(-0.4).epsilon(0.4));
  CHECK(std::abs(rep.slope - (-0.4)) < 0.15);
  CHECK(rep.c_fit > 0.0);
  CHECK(rep.ratio_nonincreasing);
  CHECK(rep.var_f == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("variance decay, long memory rank two") {
  auto rep = arcones_check([](double x) { return x * x - 1.0; }, 2,
                           AcfModel::Fgn(0.8), {512, 2048, 8192}, 120, 405);
  CHECK(rep.theory_slope == doctest::Approx(-0.8));
  CHECK(std::abs(rep.slope - (-0.8)) < 0.25);
  CHECK(rep.var_f == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("variance decay, summable autocovariance") {
  auto rep = arcones_check([](double x) { return x; }, 1, AcfModel::Ar1(0.5),
                           {512, 2048, 8192}, 120, 406);
  CHECK(rep.theory_slope == doctest::Approx(-1.0));
  CHECK(std::abs(rep.slope - (-1.0)) < 0.15);
  CHECK(rep.ratio_nonincreasing);
}

TEST_CASE("overstated rank trips the trend diagnostic") {
  // declaring rank 3 for a rank-1 function makes the theoretical rate decay
  // faster than the truth, so the variance/rate ratio grows with n
  auto rep = arcones_check([](double x) { return x; }, 3, AcfModel::Fgn(0.9),
                           {512, 2048, 8192}, 120, 407);
  CHECK(rep.ratio_slope > 0.15);
  CHECK_FALSE(rep.ratio_nonincreasing);
}

TEST_CASE("arcones validation") {
  auto f = [](double x) { return x; };
  CHECK_THROWS_AS(arcones_check(f, 0, AcfModel::Ar1(0.5), {64, 128}, 16, 1),
                  ConfigError);
  CHECK_THROWS_AS(arcones_check(f, 1, AcfModel::Ar1(0.5), {64}, 16, 1),
                  ConfigError);
  CHECK_THROWS_AS(arcones_check(f, 1, AcfModel::Ar1(0.5), {64, 128}, 4, 1),
                  ConfigError);
}
