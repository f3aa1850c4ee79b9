#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace svx {

/// Autocovariance model of a stationary, mean-zero, unit-variance Gaussian
/// sequence.
///
///   - Ar1(phi):        gamma_j = phi^|j|, |phi| < 1
///   - Fgn(hurst):      gamma_j = ((j+1)^{2H} - 2 j^{2H} + (j-1)^{2H}) / 2,
///                      the increment covariance of fractional Brownian
///                      motion; summable for H < 1/2 ... 1/2, hyperbolic
///                      decay j^{2H-2} for H > 1/2
///   - WhiteNoise():    gamma_0 = 1, gamma_j = 0 otherwise
///   - Custom(gammas):  explicit sequence, gamma_0 must equal 1; lags past
///                      the stored range are treated as zero inside
///                      covariance constructions
class AcfModel {
 public:
  enum class Family { kAr1, kFgn, kWhiteNoise, kCustom };

  static AcfModel Ar1(double phi);
  static AcfModel Fgn(double hurst);
  static AcfModel WhiteNoise();
  static AcfModel Custom(std::vector<double> gammas);

  Family family() const { return family_; }
  double param() const { return param_; }

  /// gamma_|lag|. For Custom, lag must lie inside the stored range.
  double operator()(long lag) const;

  /// Number of stored lags for Custom (0..max_lag usable); unbounded models
  /// report a large sentinel.
  std::size_t max_lag() const;

  /// True when sum |gamma_j| < infinity (Ar1, WhiteNoise, Custom, and Fgn
  /// with H <= 1/2).
  bool summable() const;

  std::string describe() const;

  /// Internal evaluation used by covariance builders: Custom lags beyond the
  /// stored range give 0 instead of throwing.
  double at_or_zero(long lag) const;

 private:
  AcfModel(Family f, double p) : family_(f), param_(p) {}
  Family family_;
  double param_ = 0.0;
  std::vector<double> gammas_;
};

}  // namespace svx
