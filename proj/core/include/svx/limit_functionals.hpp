#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "svx/cone_sets.hpp"
#include "svx/sv_model.hpp"

namespace svx {

/// One coordinate of a product-of-intervals target event (lo, hi].
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  static Interval upto(double y) { return Interval{-std::numeric_limits<double>::infinity(), y}; }
  static Interval all() { return Interval{}; }
};

struct LimitValue {
  double value = 0.0;
  double stderr_ = 0.0;
};

struct LimitCurve {
  std::vector<double> y;
  std::vector<double> value;
  std::vector<double> stderr_;
};

/// Limiting conditional law of the target window given an extreme
/// conditioning window:
///
///   rho(A, B, m) = E[ nu(sigma(X_1..X_h)^{-1} A) P(Y_{1+m}..Y_{1+m+h'} in B | X) ]
///                  / E[ nu(sigma(X_1..X_h)^{-1} A) ]
///
/// matching the estimator's windows: the target block trails the start of
/// the conditioning block by m. Monte Carlo over the joint Gaussian vector;
/// the innovations are integrated out analytically through their CDF. All
/// curve points share one sample set (common random numbers), which makes
/// CdfCurve output exactly nondecreasing; an isotonic (pool adjacent
/// violators) pass is applied as a safety net. Standard errors are
/// delta-method errors for the ratio.

/// Psi(y) = rho(A, (-inf,y]^(h'+1) diag, m) over the grid.
LimitCurve mc_psi_limit(const SvConfig& model, const ExtremeSet& set,
                        const std::vector<double>& y_grid, std::uint64_t n_mc,
                        std::uint64_t seed);

/// rho(A, B, m) for one product-of-intervals target event B (size h'+1).
LimitValue mc_rho_limit(const SvConfig& model, const ExtremeSet& set,
                        const std::vector<Interval>& b, std::uint64_t n_mc,
                        std::uint64_t seed);

/// Limiting CDF of the two-term target-window sum given the extreme
/// conditioning window (requires h_prime = 1). One innovation is integrated
/// through its CDF, the other sampled.
LimitCurve mc_sum_cdf_limit(const SvConfig& model, const ExtremeSet& set,
                            const std::vector<double>& y_grid,
                            std::uint64_t n_mc, std::uint64_t seed);

/// mu_C(A) = E[ nu(sigma(X_1..X_h)^{-1} A) ] / (E[sigma^alpha(X)])^beta,
/// the constant relating the window exceedance rate to g(k/n).
LimitValue mu_c(const SvConfig& model, const ExtremeSet& set,
                std::uint64_t n_mc, std::uint64_t seed);

/// Cross-term triple for window-overlap lag j (sum family, h = 2):
/// r_bb   = R_j(A, B, B), r_bfull = R_j(A, B, full), r_full = R_j(A, full).
struct CrossTerm {
  int j = 0;
  double r_bb = 0.0;
  double r_bfull = 0.0;
  double r_full = 0.0;
};

/// Asymptotic variance of sqrt(n g(k/n) mu_C) (rho_hat - rho):
///   sigma^2 = rho(1-rho) + sum_j { R_j(A,B) - 2 rho R_j(A,B,full)
///                                  + rho^2 R_j(A,full) }
/// The overlap sum runs over j = 2..min(h, m-h+1) and vanishes for the box
/// and combined families (two simultaneous large innovations are needed, a
/// higher-order event). For the sum family with h = 2 the single j = 2 term
/// uses the one-large-innovation overlap functional evaluated at the shared
/// latent coordinate.
struct VarianceReport {
  double rho = 0.0;
  double rho_stderr = 0.0;
  double sigma2 = 0.0;
  std::vector<CrossTerm> cross;

  double sigma2_at(double r) const {
    double s = r * (1.0 - r);
    for (const auto& c : cross) s += c.r_bb - 2.0 * r * c.r_bfull + r * r * c.r_full;
    return s;
  }
};

VarianceReport asymptotic_variance(const SvConfig& model, const ExtremeSet& set,
                                   const std::vector<Interval>& b,
                                   std::uint64_t n_mc, std::uint64_t seed);

/// E[sigma^alpha(X_0) sigma^alpha(X_m)] / (E[sigma^alpha(X)])^2, the
/// constant in P(Y_0 > t, Y_m > t) ~ c P(Y_0 > t)^2. Numerator by Monte
/// Carlo over the lag-m Gaussian pair, denominator in closed form or by
/// quadrature.
LimitValue tail_dep_constant(const VolatilityFn& vol, const AcfModel& acf,
                             double alpha, int m, std::uint64_t n_mc,
                             std::uint64_t seed);

/// Second-order error of the threshold approximation at level k of n:
///   v_n = E [ max_s | P(Y_1..Y_h in u_n s A | X) / g(k/n)
///                     - T(s) nu(sigma(X)^{-1} A) / E[sigma^alpha]^beta | ]
/// over the dilation grid `s_grid`, with u_n the 1 - k/n quantile of Y. The
/// centering is the pathwise limit of the conditional ratio (its expectation
/// is mu_C(A)), so v_n -> 0 exactly when the threshold approximation is
/// uniformly accurate.
enum class QuantileMethod {
  kMcInversion,  // empirical quantile of a simulated Y sample
  kExact,        // root of E[P(Z > u/sigma(X))] = k/n by quadrature
};

struct BiasRateReport {
  double u_n = 0.0;
  double v_n = 0.0;
  double mu = 0.0;
};

BiasRateReport bias_rate_vn(const SvConfig& model, const ExtremeSet& set,
                            double k, double n, const std::vector<double>& s_grid,
                            std::uint64_t n_mc, std::uint64_t seed,
                            QuantileMethod method = QuantileMethod::kMcInversion);

/// Default dilation grid for bias checks.
inline const std::vector<double> kDefaultSGrid = {1.0, 1.25, 1.5, 2.0, 3.0, 5.0};

}  // namespace svx
