#include "svx/tail_model.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>

#include "svx/errors.hpp"
#include "svx/quadrature.hpp"

namespace svx {

TailModel TailModel::Pareto(double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("Pareto: alpha > 0 required");
  return TailModel(Family::kPareto, alpha);
}

TailModel TailModel::StudentT(double nu) {
  if (!(nu > 0.0)) throw ConfigError("StudentT: nu > 0 required");
  TailModel m(Family::kStudentT, nu);
  m.nonnegative_ = false;
  // Fit the second-order envelope constant on a log grid: the relative
  // deviation of the tail from c t^{-nu} decays like t^{-2}.
  double c = m.tail_constant();
  double best = 0.0;
  for (double t = 2.0; t <= 1e4; t *= 1.5) {
    double rel = std::fabs(m.survival(t) * std::pow(t, nu) / c - 1.0);
    double scaled = rel * t * t;
    if (scaled > best) best = scaled;
  }
  m.eta_c_ = best;
  return m;
}

TailModel TailModel::Custom(double alpha, std::function<double(double)> survival,
                            std::function<double(double)> quantile,
                            bool nonnegative) {
  if (!(alpha > 0.0)) throw ConfigError("Custom tail: alpha > 0 required");
  TailModel m(Family::kCustom, alpha);
  m.survival_ = std::move(survival);
  m.quantile_ = std::move(quantile);
  m.nonnegative_ = nonnegative;
  return m;
}

double TailModel::survival(double z) const {
  switch (family_) {
    case Family::kPareto:
      return z < 1.0 ? 1.0 : std::pow(z, -alpha_);
    case Family::kStudentT: {
      boost::math::students_t dist(alpha_);
      return boost::math::cdf(boost::math::complement(dist, z));
    }
    case Family::kCustom:
      return survival_(z);
  }
  return 0.0;
}

double TailModel::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("quantile: p in (0,1) required");
  switch (family_) {
    case Family::kPareto:
      return std::pow(1.0 - p, -1.0 / alpha_);
    case Family::kStudentT: {
      boost::math::students_t dist(alpha_);
      return boost::math::quantile(dist, p);
    }
    case Family::kCustom:
      return quantile_(p);
  }
  return 0.0;
}

double TailModel::eta_star(double t) const {
  switch (family_) {
    case Family::kPareto:
      return 0.0;
    case Family::kStudentT:
    case Family::kCustom:
      return eta_c_ * std::min(1.0, 1.0 / (t * t));
  }
  return 0.0;
}

double TailModel::tail_constant() const {
  switch (family_) {
    case Family::kPareto:
      return 1.0;
    case Family::kStudentT: {
      double nu = alpha_;
      return std::exp(std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) +
                      (0.5 * nu - 1.0) * std::log(nu)) /
             std::sqrt(M_PI);
    }
    case Family::kCustom: {
      double t = 1e8;
      return survival_(t) * std::pow(t, alpha_);
    }
  }
  return 1.0;
}

double TailModel::density(double z) const {
  switch (family_) {
    case Family::kPareto:
      return z < 1.0 ? 0.0 : alpha_ * std::pow(z, -alpha_ - 1.0);
    case Family::kStudentT: {
      boost::math::students_t dist(alpha_);
      return boost::math::pdf(dist, z);
    }
    case Family::kCustom:
      throw ConfigError("Custom tail: no analytic density");
  }
  return 0.0;
}

std::string TailModel::describe() const {
  switch (family_) {
    case Family::kPareto:
      return "pareto(" + std::to_string(alpha_) + ")";
    case Family::kStudentT:
      return "student_t(" + std::to_string(alpha_) + ")";
    case Family::kCustom:
      return "custom(" + std::to_string(alpha_) + ")";
  }
  return "?";
}

double convolution_survival(const TailModel& model, double u1, double u2,
                            double t) {
  if (!model.nonnegative())
    throw ConfigError("convolution_survival: nonnegative support required");
  if (!model.has_density())
    throw ConfigError("convolution_survival: analytic density required");

  // P = int f2(z) S1((t - u2 z)/u1) dz, split so each piece is smooth:
  //  - z in [lo, z_mid]: Z2 moderate, the S1 factor is a flat tail
  //  - z in [z_mid, z_star]: Z2 large; substitute w = (t - u2 z)/u1, which
  //    turns the sharp layer into a plain tail integral in w
  //  - z > z_star: S1 = 1 identically, mass F2-bar(z_star)
  // where z_star solves (t - u2 z)/u1 = lower end of Z1's support.
  const double lo = 1.0;  // support starts at 1 for the analytic families
  if (t <= u1 * lo + u2 * lo) return 1.0;
  const double z_star = (t - u1 * lo) / u2;
  const double z_mid = 0.5 * t / u2;
  double p3 = model.survival(z_star);
  double p1 = 0.0;
  if (z_mid > lo) {
    p1 = integrate(
        [&](double z) { return model.density(z) * model.survival((t - u2 * z) / u1); },
        lo, z_mid, 1e-11, 18);
  }
  const double w_hi = (t - u2 * std::max(z_mid, lo)) / u1;
  double p2 = (u1 / u2) * integrate(
                  [&](double w) {
                    return model.density((t - u1 * w) / u2) * model.survival(w);
                  },
                  lo, w_hi, 1e-11, 18);
  return p1 + p2 + p3;
}

ConvolutionCheck convolution_tail_check(const TailModel& model, double u1,
                                        double u2, double t_min, double t_max,
                                        int grid_size, double epsilon) {
  if (grid_size < 2) throw ConfigError("convolution_tail_check: grid_size >= 2");
  if (!(t_min > 0.0 && t_max > t_min))
    throw ConfigError("convolution_tail_check: need 0 < t_min < t_max");

  double alpha = model.alpha();
  double uu = std::pow(u1, alpha + epsilon) * std::pow(u2, alpha + epsilon);

  ConvolutionCheck out;
  out.t_grid.resize(grid_size);
  out.lhs.resize(grid_size);
  out.envelope.resize(grid_size);
  out.ratios.resize(grid_size);

  double log_step = std::log(t_max / t_min) / (grid_size - 1);
  for (int i = 0; i < grid_size; ++i) {
    double t = t_min * std::exp(log_step * i);
    double conv = convolution_survival(model, u1, u2, t);
    double lhs = std::fabs(conv - model.survival(t / u1) - model.survival(t / u2));
    double trunc_mean = integrate([&](double s) { return model.survival(s); },
                                  0.0, t, 1e-10, 16);
    double env = uu * (1.0 / t) * model.survival(t) * trunc_mean;
    out.t_grid[i] = t;
    out.lhs[i] = lhs;
    out.envelope[i] = env;
    out.ratios[i] = lhs / env;
    if (out.ratios[i] > out.c_hat) out.c_hat = out.ratios[i];
  }

  double first_hi = t_min * 10.0, last_lo = t_max / 10.0;
  double early = 0.0, late = 0.0;
  for (int i = 0; i < grid_size; ++i) {
    if (out.t_grid[i] <= first_hi) early = std::max(early, out.ratios[i]);
    if (out.t_grid[i] >= last_lo) late = std::max(late, out.ratios[i]);
  }
  out.late_over_early = early > 0.0 ? late / early : 0.0;
  return out;
}

}  // namespace svx
