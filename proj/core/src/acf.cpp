#include "svx/acf.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "svx/errors.hpp"

namespace svx {

AcfModel AcfModel::Ar1(double phi) {
  if (!(std::fabs(phi) < 1.0)) throw ConfigError("Ar1: |phi| < 1 required");
  return AcfModel(Family::kAr1, phi);
}

AcfModel AcfModel::Fgn(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw ConfigError("Fgn: hurst in (0,1) required");
  return AcfModel(Family::kFgn, hurst);
}

AcfModel AcfModel::WhiteNoise() { return AcfModel(Family::kWhiteNoise, 0.0); }

AcfModel AcfModel::Custom(std::vector<double> gammas) {
  if (gammas.empty() || std::fabs(gammas[0] - 1.0) > 1e-12)
    throw ConfigError("Custom acf: gamma_0 must equal 1");
  AcfModel m(Family::kCustom, 0.0);
  m.gammas_ = std::move(gammas);
  return m;
}

double AcfModel::operator()(long lag) const {
  long l = std::labs(lag);
  if (family_ == Family::kCustom && static_cast<std::size_t>(l) >= gammas_.size())
    throw ConfigError("Custom acf: lag beyond stored range");
  return at_or_zero(lag);
}

double AcfModel::at_or_zero(long lag) const {
  double l = static_cast<double>(std::labs(lag));
  switch (family_) {
    case Family::kAr1:
      return std::pow(param_, l);
    case Family::kFgn: {
      if (l == 0.0) return 1.0;
      double two_h = 2.0 * param_;
      return 0.5 * (std::pow(l + 1.0, two_h) - 2.0 * std::pow(l, two_h) +
                    std::pow(l - 1.0, two_h));
    }
    case Family::kWhiteNoise:
      return l == 0.0 ? 1.0 : 0.0;
    case Family::kCustom: {
      auto idx = static_cast<std::size_t>(l);
      return idx < gammas_.size() ? gammas_[idx] : 0.0;
    }
  }
  return 0.0;
}

std::size_t AcfModel::max_lag() const {
  if (family_ == Family::kCustom) return gammas_.size() - 1;
  return std::numeric_limits<std::size_t>::max();
}

bool AcfModel::summable() const {
  switch (family_) {
    case Family::kAr1:
    case Family::kWhiteNoise:
    case Family::kCustom:
      return true;
    case Family::kFgn:
      return param_ <= 0.5;
  }
  return true;
}

std::string AcfModel::describe() const {
  switch (family_) {
    case Family::kAr1:
      return "ar1(" + std::to_string(param_) + ")";
    case Family::kFgn:
      return "fgn(" + std::to_string(param_) + ")";
    case Family::kWhiteNoise:
      return "whitenoise";
    case Family::kCustom:
      return "custom[" + std::to_string(gammas_.size()) + "]";
  }
  return "?";
}

}  // namespace svx
