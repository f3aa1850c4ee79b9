#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "svx/acf.hpp"
#include "svx/tail_model.hpp"

namespace svx {

/// Volatility link sigma(x) applied to the latent Gaussian state.
///
///   - Exp():        sigma(x) = exp(x)
///   - AbsPower(p):  sigma(x) = |x|^p + 1e-8 (floored away from zero so
///                   conditional probabilities stay well defined)
///   - Const(c):     sigma(x) = c, degenerate benchmark case
class VolatilityFn {
 public:
  static VolatilityFn Exp();
  static VolatilityFn AbsPower(double p);
  static VolatilityFn Const(double c);

  double operator()(double x) const;
  bool is_const() const { return family_ == Family::kConst; }
  bool is_exp() const { return family_ == Family::kExp; }
  bool is_even() const { return family_ != Family::kExp; }
  double param() const { return param_; }
  std::string describe() const;

 private:
  enum class Family { kExp, kAbsPower, kConst };
  VolatilityFn(Family f, double p) : family_(f), param_(p) {}
  Family family_;
  double param_;
};

inline constexpr double kAbsPowerFloor = 1e-8;

/// E[sigma^{order * alpha}(X)] for X standard normal. Closed form
/// exp((order*alpha)^2 / 2) for the exponential link, c^{order*alpha} for the
/// constant one, 64-point Gauss-Hermite otherwise. `order` 1 or 2.
double sigma_alpha_moment(const VolatilityFn& vol, double alpha, int order = 1);

/// Full model: Y_j = sigma(X_j) Z_j with X a stationary Gaussian sequence
/// and Z iid heavy tailed, plus the window geometry used downstream:
/// conditioning window length h, target lead m (m >= h enforced: the
/// target block starts at or past the end of the conditioning block), target
/// window length h_prime + 1.
struct SvConfig {
  AcfModel acf = AcfModel::WhiteNoise();
  VolatilityFn vol = VolatilityFn::Exp();
  TailModel tail = TailModel::Pareto(2.0);
  std::size_t n = 0;  // series length
  int h = 1;
  int m = 2;
  int h_prime = 0;

  void validate() const;
};

struct SvPath {
  std::vector<double> y;
  std::vector<double> x;
  std::vector<double> z;
};

/// Simulates the model. The latent path and the innovations draw from
/// separate streams derived from `seed`, so either can be regenerated
/// independently.
SvPath simulate_sv(const SvConfig& cfg, std::uint64_t seed);

/// As above but reusing a prepared PathSampler for the latent process
/// (replicate loops).
class SvSampler {
 public:
  explicit SvSampler(const SvConfig& cfg);
  SvPath sample(std::uint64_t seed) const;
  const SvConfig& config() const { return cfg_; }

 private:
  SvConfig cfg_;
  std::shared_ptr<class PathSampler> path_;
};

}  // namespace svx
