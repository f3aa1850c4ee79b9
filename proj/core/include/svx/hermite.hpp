#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "svx/acf.hpp"
#include "svx/limit_functionals.hpp"

namespace svx {

/// Relative tolerance for declaring a Hermite coefficient nonzero (against
/// sqrt(E[f^2]), matching the quadrature noise floor at 128 nodes).
inline constexpr double kRankTol = 1e-7;

/// Probabilists' Hermite polynomial H_q (H_1(x) = x, H_2(x) = x^2 - 1) by
/// the three-term recurrence H_{q+1} = x H_q - q H_{q-1}.
double hermite_poly(int q, double x);

/// One-dimensional expansion f = sum_q J(q) H_q / q! against a standard
/// normal; J(q) = E[f(X) H_q(X)] unnormalized, so Parseval reads
/// sum J(q)^2 / q! = E[f^2].
struct HermiteExpansion {
  std::vector<double> coeffs;  // J(0), J(1), ..., J(q_max)
  double mean_square = 0.0;    // E[f(X)^2]

  /// Minimal q >= 1 with |J(q)|/sqrt(q!) > tol * sqrt(E[f^2]); 0 when no
  /// coefficient clears the tolerance (constant-like f, degenerate).
  int rank(double rank_tol = kRankTol) const;
};

HermiteExpansion hermite_coeffs_1d(const std::function<double(double)>& f,
                                   int q_max);

/// Hermite rank of a function of a correlated Gaussian vector with
/// covariance Sigma: the function is pulled back to iid coordinates through
/// a root L with L L' = Sigma, and the rank is the minimal total degree
/// |q| >= 1 with |E[H_q(W) f(L W)]| / sqrt(q!) above tolerance. rank = 0
/// flags a degenerate (constant-like) function.
struct RankResult {
  int rank = 0;
  bool degenerate() const { return rank == 0; }
};

/// Ranks of the limit kernel
///   G(x, x') = nu(sigma(x)^{-1} A) P(sigma(x') . Z in B)
/// with respect to the joint law of (X_1..X_h, X_m..X_{m+h'}):
///   tau_ab   for the given target event B,
///   tau_a    for B = everything (second factor 1),
///   tau_star minimized over diagonal events {all <= y}, y in y_grid.
/// Joint dimension h + h' + 1 is capped at 3 (tensor quadrature).
struct GRanks {
  RankResult tau_ab;
  RankResult tau_a;
  RankResult tau_star;
};

GRanks rank_of_G(const SvConfig& model, const ExtremeSet& set,
                 const std::vector<Interval>& b,
                 const std::vector<double>& y_grid, int q_max = 6,
                 double rank_tol = kRankTol);

/// Empirical check of the variance inequality for Gaussian subordination:
///   var( n^{-1} sum_j f(X_j) ) <= C ( n^{2 q (H-1)} or n^{-1} ) var(f(X_0))
/// with q the Hermite rank of f. For each n the variance of the sample mean
/// is estimated across replicates; the report carries the fitted log-log
/// slope, the theoretical dominant rate, the smallest constant C matching
/// the bound on the grid, and a trend check that the ratio
/// empirical / rate stays flat-or-decreasing in n.
struct ArconesReport {
  std::vector<std::size_t> n_list;
  std::vector<double> variance;   // var of the sample mean at each n
  std::vector<double> rate;       // theoretical rate factor at each n
  double slope = 0.0;             // fitted d log var / d log n
  double theory_slope = 0.0;      // max(2 q (H-1), -1); -1 for summable acfs
  double c_fit = 0.0;             // max_n variance / (rate * var f)
  double ratio_slope = 0.0;       // d log (variance/rate) / d log n
  bool ratio_nonincreasing = false;  // ratio_slope <= 0.15
  double var_f = 0.0;             // var(f(X_0)) by quadrature
};

ArconesReport arcones_check(const std::function<double(double)>& f, int rank_q,
                            const AcfModel& acf,
                            const std::vector<std::size_t>& n_list,
                            std::size_t replicates, std::uint64_t seed);

}  // namespace svx
