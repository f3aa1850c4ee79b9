#include "svx/sv_model.hpp"

#include <cmath>
#include <memory>

#include "svx/errors.hpp"
#include "svx/gaussian_path.hpp"
#include "svx/quadrature.hpp"

namespace svx {

VolatilityFn VolatilityFn::Exp() { return VolatilityFn(Family::kExp, 0.0); }

VolatilityFn VolatilityFn::AbsPower(double p) {
  if (!(p > 0.0)) throw ConfigError("AbsPower: p > 0 required");
  return VolatilityFn(Family::kAbsPower, p);
}

VolatilityFn VolatilityFn::Const(double c) {
  if (!(c > 0.0)) throw ConfigError("Const: c > 0 required");
  return VolatilityFn(Family::kConst, c);
}

double VolatilityFn::operator()(double x) const {
  switch (family_) {
    case Family::kExp:
      return std::exp(x);
    case Family::kAbsPower:
      return std::pow(std::fabs(x), param_) + kAbsPowerFloor;
    case Family::kConst:
      return param_;
  }
  return 0.0;
}

std::string VolatilityFn::describe() const {
  switch (family_) {
    case Family::kExp:
      return "exp";
    case Family::kAbsPower:
      return "abspower(" + std::to_string(param_) + ")";
    case Family::kConst:
      return "const(" + std::to_string(param_) + ")";
  }
  return "?";
}

double sigma_alpha_moment(const VolatilityFn& vol, double alpha, int order) {
  if (order != 1 && order != 2) throw ConfigError("sigma_alpha_moment: order 1 or 2");
  double k = alpha * order;
  if (vol.is_exp()) return std::exp(0.5 * k * k);
  if (vol.is_const()) return std::pow(vol.param(), k);
  const auto& rule = gauss_hermite(64);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    s += rule.weights[i] * std::pow(vol(rule.nodes[i]), k);
  if (!std::isfinite(s)) throw NumericError("sigma_alpha_moment: divergent moment");
  return s;
}

void SvConfig::validate() const {
  if (h < 1) throw ConfigError("SvConfig: h >= 1 required");
  if (h_prime < 0) throw ConfigError("SvConfig: h_prime >= 0 required");
  if (m < h)
    throw ConfigError("SvConfig: m >= h required (conditioning and target windows overlap)");
  if (n > 0 && n < static_cast<std::size_t>(m + h_prime + 1))
    throw ConfigError("SvConfig: n >= m + h_prime + 1 required");
}

SvSampler::SvSampler(const SvConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  if (cfg_.n == 0) throw ConfigError("SvSampler: n must be positive");
  path_ = std::make_shared<PathSampler>(cfg_.acf, cfg_.n);
}

SvPath SvSampler::sample(std::uint64_t seed) const {
  SvPath out;
  out.x = path_->sample(derive_seed(seed, kStreamGaussianPath));
  Rng zrng(derive_seed(seed, kStreamInnovations));
  out.z.resize(cfg_.n);
  out.y.resize(cfg_.n);
  for (std::size_t j = 0; j < cfg_.n; ++j) {
    out.z[j] = cfg_.tail.sample(zrng);
    out.y[j] = cfg_.vol(out.x[j]) * out.z[j];
  }
  return out;
}

SvPath simulate_sv(const SvConfig& cfg, std::uint64_t seed) {
  SvSampler sampler(cfg);
  return sampler.sample(seed);
}

}  // namespace svx
