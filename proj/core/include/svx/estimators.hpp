#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

#include "svx/cone_sets.hpp"
#include "svx/limit_functionals.hpp"

namespace svx {

/// Empirical conditional-extremogram estimators. Windows are indexed
/// j = 1..n over the observed series Y_1..Y_L: conditioning window
/// Y_j..Y_{j+h-1}, target window Y_{j+m}..Y_{j+m+h'}. The window count is
/// maximal-fit, n = min(L-h+1, L-m-h'), so for the usual m >= h case every
/// window whose target fits is used and the series must satisfy
/// L >= n + m + h'. The exceedance threshold is the (n-k)-th order
/// statistic of Y_1..Y_n.
///
/// The thinned variant strides the conditioning windows by h (block starts
/// 1, h+1, 2h+1, ...), which makes the selected windows disjoint; n is then
/// the block count and the threshold uses Y_1..Y_n as well.
struct EstimatorConfig {
  ExtremeSet set = ExtremeSet::Box(1);
  int m = 2;
  int h_prime = 0;
  std::size_t k = 0;
  bool thinned = false;
};

/// Threshold-count rule k = ceil(n^c).
std::size_t k_power_rule(std::size_t n, double c);

/// The (n-k)-th smallest of y (1-indexed order statistics), 1 <= k < n.
double order_statistic_threshold(const std::vector<double>& y, std::size_t k);

/// Number of windows for a series of the given length (block count when
/// thinned).
std::size_t window_count(std::size_t length, const EstimatorConfig& cfg);

struct Estimate {
  double value = 0.0;
  std::size_t k_used = 0;
  double u_hat = 0.0;
  std::size_t numerator = 0;
  std::size_t denominator = 0;
  double stderr_ = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

/// Replaces the default rho(1-rho) studentization with an externally
/// computed asymptotic variance (the overlap-corrected one for sum windows)
/// and refreshes the 95% interval.
void restudentize(Estimate& e, double sigma2);

/// Empirical rho_hat(A, B, m): fraction of threshold-exceeding conditioning
/// windows whose target window lands in the interval product `b` (size
/// h'+1). Set membership is strict (>), interval membership is (lo, hi].
/// The estimator itself is defined for any m >= 1; the stderr attached here
/// is the no-overlap form sqrt(rho(1-rho)/denominator), valid when target
/// and conditioning windows separate (m >= h, box/combined geometry). Zero
/// denominator raises InputError carrying the counts.
Estimate rho_hat(const std::vector<double>& y, const EstimatorConfig& cfg,
                 const std::vector<Interval>& b);

/// Thinned variant: conditioning windows at block starts only. Requires
/// cfg.thinned = true. For h = 1 this is exactly rho_hat.
Estimate rho_tilde(const std::vector<double>& y, const EstimatorConfig& cfg,
                   const std::vector<Interval>& b);

struct EstimateCurve {
  std::vector<double> y;
  std::vector<Estimate> points;
};

/// Psi_hat(y): rho_hat over the grid of diagonal events
/// {all of Y_{j+m}..Y_{j+m+h'} <= y}, one pass over the data shared by the
/// whole grid. Nondecreasing in y by construction; terminal value 1 once y
/// covers every selected target window.
EstimateCurve psi_hat_curve(const std::vector<double>& y,
                            const EstimatorConfig& cfg,
                            const std::vector<double>& y_grid);

/// Lambda_hat(y): conditional law of Y_{j+m} given Y_j + Y_{j+1} large.
/// Exactly psi_hat_curve with the sum half-space window of length 2 and a
/// single-point target.
EstimateCurve lambda_hat(const std::vector<double>& y, std::size_t k, int m,
                         const std::vector<double>& y_grid);

}  // namespace svx
