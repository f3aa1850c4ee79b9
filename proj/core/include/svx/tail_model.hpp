#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "svx/rng.hpp"

namespace svx {

/// Innovation distribution whose right tail is regularly varying with index
/// -alpha: P(Z > z) = z^{-alpha} L(z) with L slowly varying.
///
///   - Pareto(alpha):   support [1, inf), P(Z > z) = z^{-alpha}; the tail is
///                      exactly a power law, so the second-order envelope
///                      eta* is identically zero
///   - StudentT(nu):    alpha = nu, two-sided; tail constant
///                      c_nu = Gamma((nu+1)/2) nu^{nu/2 - 1} /
///                             (sqrt(pi) Gamma(nu/2)),
///                      relative tail deviation O(z^{-2})
///   - Custom:          user survival/quantile pair with declared alpha
class TailModel {
 public:
  static TailModel Pareto(double alpha);
  static TailModel StudentT(double nu);
  static TailModel Custom(double alpha, std::function<double(double)> survival,
                          std::function<double(double)> quantile,
                          bool nonnegative);

  enum class Family { kPareto, kStudentT, kCustom };
  Family family() const { return family_; }

  double alpha() const { return alpha_; }
  bool nonnegative() const { return nonnegative_; }

  /// P(Z > z); 1 below the support, continuous and strictly decreasing on it.
  double survival(double z) const;

  /// P(Z <= z).
  double cdf(double z) const { return 1.0 - survival(z); }

  /// Left-continuous inverse of the CDF; p in (0,1) required.
  double quantile(double p) const;

  /// Inverse-CDF sampling from `rng`.
  double sample(Rng& rng) const { return quantile(rng.uniform()); }

  /// Bounded nonincreasing envelope eta*(t) -> 0 for the relative deviation
  /// of the tail from its power-law asymptote c t^{-alpha}:
  ///   |survival(t) * t^alpha / c - 1| <= integral-of eta* scale.
  /// Zero for Pareto; fitted C * min(1, t^-2) for StudentT.
  double eta_star(double t) const;

  /// lim t^alpha P(Z > t).
  double tail_constant() const;

  /// Density, available for the analytic families (needed by the
  /// convolution routines).
  double density(double z) const;
  bool has_density() const { return family_ != Family::kCustom; }

  std::string describe() const;

 private:
  TailModel(Family f, double alpha) : family_(f), alpha_(alpha) {}

  Family family_;
  double alpha_;
  bool nonnegative_ = true;
  double eta_c_ = 0.0;
  std::function<double(double)> survival_;
  std::function<double(double)> quantile_;
};

/// Report for the two-scale convolution bound
///   |P(u1 Z1 + u2 Z2 > t) - P(Z > t/u1) - P(Z > t/u2)|
///     <= C u1^{a+e} u2^{a+e} t^{-1} P(Z > t) int_0^t P(Z > s) ds
/// checked on a geometric t-grid. `ratios[i]` is lhs/envelope (with C = 1)
/// at t_grid[i]; `c_hat` is the max ratio, i.e. the fitted constant.
struct ConvolutionCheck {
  std::vector<double> t_grid;
  std::vector<double> lhs;
  std::vector<double> envelope;
  std::vector<double> ratios;
  double c_hat = 0.0;
  /// max ratio over the last decade of the grid divided by max over the
  /// first decade; bounded iff the envelope has the right order.
  double late_over_early = 0.0;
};

/// Evaluates the bound above for a nonnegative-support model (Pareto).
/// P(u1 Z1 + u2 Z2 > t) is computed by conditioning on Z2 and integrating;
/// epsilon enters only through the constant since u1, u2 are fixed.
ConvolutionCheck convolution_tail_check(const TailModel& model, double u1,
                                        double u2, double t_min, double t_max,
                                        int grid_size, double epsilon = 0.1);

/// P(u1 Z1 + u2 Z2 > t) for independent copies Z1, Z2 of `model`
/// (nonnegative support), by conditioning on Z2.
double convolution_survival(const TailModel& model, double u1, double u2,
                            double t);

}  // namespace svx
