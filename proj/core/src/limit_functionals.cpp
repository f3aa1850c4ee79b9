#include "svx/limit_functionals.hpp"

#include <algorithm>
#include <cmath>

#include "svx/errors.hpp"
#include "svx/gaussian_path.hpp"
#include "svx/quadrature.hpp"

namespace svx {

namespace {

double survival_at(const TailModel& tail, double v) {
  if (v == -std::numeric_limits<double>::infinity()) return 1.0;
  if (v == std::numeric_limits<double>::infinity()) return 0.0;
  return tail.survival(v);
}

// P(sigma Z in (lo, hi]) for one coordinate.
double interval_prob(const TailModel& tail, const Interval& iv, double sigma) {
  double lo = iv.lo == -std::numeric_limits<double>::infinity() ? iv.lo : iv.lo / sigma;
  double hi = iv.hi == std::numeric_limits<double>::infinity() ? iv.hi : iv.hi / sigma;
  double p = survival_at(tail, lo) - survival_at(tail, hi);
  return std::max(p, 0.0);
}

// Lags entering the joint law: conditioning block at 0..h-1, target block
// m..m+h', matching the estimator's windows (Y_j..Y_{j+h-1}; Y_{j+m}..).
std::vector<long> window_indices(const SvConfig& model) {
  std::vector<long> idx;
  for (int i = 0; i < model.h; ++i) idx.push_back(i);
  for (int i = 0; i <= model.h_prime; ++i) idx.push_back(model.m + i);
  return idx;
}

void check_query(const SvConfig& model, const ExtremeSet& set) {
  if (model.h < 1) throw ConfigError("window length h >= 1 required");
  if (model.h_prime < 0) throw ConfigError("h_prime >= 0 required");
  if (model.m < model.h)
    throw ConfigError("target lead m must reach past the conditioning window "
                      "(m >= h)");
  if (set.dim() != model.h)
    throw ConfigError("extreme set dimension " + std::to_string(set.dim()) +
                      " does not match window length h=" + std::to_string(model.h));
}

// Isotonic regression (pool adjacent violators), equal weights.
void pav_nondecreasing(std::vector<double>& v) {
  std::vector<double> level;
  std::vector<int> count;
  for (double x : v) {
    level.push_back(x);
    count.push_back(1);
    while (level.size() > 1 && level[level.size() - 2] > level.back()) {
      double merged = (level[level.size() - 2] * count[count.size() - 2] +
                       level.back() * count.back()) /
                      (count[count.size() - 2] + count.back());
      count[count.size() - 2] += count.back();
      level[level.size() - 2] = merged;
      level.pop_back();
      count.pop_back();
    }
  }
  std::size_t at = 0;
  for (std::size_t b = 0; b < level.size(); ++b)
    for (int c = 0; c < count[b]; ++c) v[at++] = level[b];
}

struct RatioAccum {
  double n = 0.0;
  double sum_d = 0.0, sum_d2 = 0.0;
  std::vector<double> sum_n, sum_n2, sum_nd;

  explicit RatioAccum(std::size_t points)
      : sum_n(points, 0.0), sum_n2(points, 0.0), sum_nd(points, 0.0) {}

  void merge(const RatioAccum& o) {
    n += o.n;
    sum_d += o.sum_d;
    sum_d2 += o.sum_d2;
    for (std::size_t i = 0; i < sum_n.size(); ++i) {
      sum_n[i] += o.sum_n[i];
      sum_n2[i] += o.sum_n2[i];
      sum_nd[i] += o.sum_nd[i];
    }
  }

  // Ratio estimate with delta-method standard error at point i.
  LimitValue ratio(std::size_t i) const {
    double dbar = sum_d / n;
    if (!(dbar > 0.0)) throw NumericError("limit ratio: degenerate denominator");
    double nbar = sum_n[i] / n;
    double r = nbar / dbar;
    double var_n = sum_n2[i] / n - nbar * nbar;
    double var_d = sum_d2 / n - dbar * dbar;
    double cov = sum_nd[i] / n - nbar * dbar;
    double var_r = (var_n - 2.0 * r * cov + r * r * var_d) / (n * dbar * dbar);
    return {r, std::sqrt(std::max(var_r, 0.0))};
  }
};

// Shared Monte Carlo over the joint Gaussian window; `numerators` fills the
// per-sample numerator factors (one per output point) given the sigma values
// of the conditioning window and of the target window.
template <typename Fn>
RatioAccum run_ratio_mc(const SvConfig& model, const ExtremeSet& set,
                        std::size_t points, std::uint64_t n_mc,
                        std::uint64_t seed, Fn&& numerators) {
  const int h = model.h;
  const int tgt = model.h_prime + 1;
  JointGaussianSampler sampler(model.acf, window_indices(model));
  const double alpha = model.tail.alpha();

  RatioAccum total(points);
  std::vector<double> sig_u(h), sig_t(tgt), x(h + tgt), num(points);
  auto slices = mc_slices(n_mc, seed, kStreamLimitMc);
  for (const auto& slice : slices) {
    Rng rng(slice.seed);
    RatioAccum part(points);
    for (std::uint64_t it = 0; it < slice.count; ++it) {
      sampler.sample(rng, x.data());
      for (int i = 0; i < h; ++i) sig_u[i] = model.vol(x[i]);
      for (int i = 0; i < tgt; ++i) sig_t[i] = model.vol(x[h + i]);
      double nu = nu_eval(set, alpha, sig_u);
      numerators(sig_t, rng, num);
      part.n += 1.0;
      part.sum_d += nu;
      part.sum_d2 += nu * nu;
      for (std::size_t p = 0; p < points; ++p) {
        double v = nu * num[p];
        part.sum_n[p] += v;
        part.sum_n2[p] += v * v;
        part.sum_nd[p] += v * nu;
      }
    }
    total.merge(part);
  }
  return total;
}

// Overlap cross-term for the sum family with window length 2 at lag j = 2.
// The shifted conditioning window {1,2} shares X_1 with {0,1}; one large
// innovation at position 1 drives both windows at once, so the overlap
// functional reduces to sigma^alpha(X_1). The two target windows sit at
// m..m+h' and m+1..m+h'+1; their joint law given X factorizes over the
// union of indices with coordinate-wise interval intersection.
CrossTerm cross_term_sum2(const SvConfig& model, const ExtremeSet& set,
                          const std::vector<Interval>& b, std::uint64_t n_mc,
                          std::uint64_t seed) {
  const int hp = model.h_prime;
  const TailModel& tail = model.tail;
  const double alpha = tail.alpha();

  std::vector<long> idx = {0, 1};
  for (int i = 0; i <= hp + 1; ++i) idx.push_back(model.m + i);
  JointGaussianSampler sampler(model.acf, idx);

  std::vector<Interval> merged(hp + 2);
  for (int i = 0; i <= hp + 1; ++i) {
    Interval iv;
    if (i <= hp) {
      iv.lo = std::max(iv.lo, b[i].lo);
      iv.hi = std::min(iv.hi, b[i].hi);
    }
    if (i >= 1) {
      iv.lo = std::max(iv.lo, b[i - 1].lo);
      iv.hi = std::min(iv.hi, b[i - 1].hi);
    }
    merged[i] = iv;
  }

  double sum_nu = 0.0, sum_l = 0.0, sum_bb = 0.0, sum_bf = 0.0;
  std::vector<double> x(sampler.dim()), sig(2), tgt(hp + 2);
  auto slices = mc_slices(n_mc, seed, kStreamLimitMc);
  for (const auto& slice : slices) {
    Rng rng(slice.seed);
    double p_nu = 0.0, p_l = 0.0, p_bb = 0.0, p_bf = 0.0;
    for (std::uint64_t it = 0; it < slice.count; ++it) {
      sampler.sample(rng, x.data());
      sig[0] = model.vol(x[0]);
      sig[1] = model.vol(x[1]);
      for (int i = 0; i <= hp + 1; ++i) tgt[i] = model.vol(x[2 + i]);
      double nu = nu_eval(set, alpha, sig);
      double l = std::pow(sig[1], alpha);
      double p0 = 1.0, p1 = 1.0, pj = 1.0;
      for (int i = 0; i <= hp; ++i) p0 *= interval_prob(tail, b[i], tgt[i]);
      for (int i = 0; i <= hp; ++i) p1 *= interval_prob(tail, b[i], tgt[i + 1]);
      for (int i = 0; i <= hp + 1; ++i) pj *= interval_prob(tail, merged[i], tgt[i]);
      p_nu += nu;
      p_l += l;
      p_bb += l * pj;
      p_bf += l * (p0 + p1);
    }
    sum_nu += p_nu;
    sum_l += p_l;
    sum_bb += p_bb;
    sum_bf += p_bf;
  }
  if (!(sum_nu > 0.0))
    throw NumericError("asymptotic_variance: degenerate conditioning window");

  CrossTerm ct;
  ct.j = 2;
  ct.r_bb = 2.0 * sum_bb / sum_nu;
  ct.r_bfull = sum_bf / sum_nu;
  ct.r_full = 2.0 * sum_l / sum_nu;
  return ct;
}

}  // namespace

LimitCurve mc_psi_limit(const SvConfig& model, const ExtremeSet& set,
                        const std::vector<double>& y_grid, std::uint64_t n_mc,
                        std::uint64_t seed) {
  check_query(model, set);
  if (y_grid.empty()) throw ConfigError("mc_psi_limit: empty grid");
  const int tgt = model.h_prime + 1;
  const TailModel& tail = model.tail;

  auto accum = run_ratio_mc(
      model, set, y_grid.size(), n_mc, seed,
      [&](const std::vector<double>& sig_t, Rng&, std::vector<double>& num) {
        for (std::size_t p = 0; p < num.size(); ++p) {
          double prod = 1.0;
          for (int i = 0; i < tgt; ++i) prod *= tail.cdf(y_grid[p] / sig_t[i]);
          num[p] = prod;
        }
      });

  LimitCurve curve;
  curve.y = y_grid;
  curve.value.resize(y_grid.size());
  curve.stderr_.resize(y_grid.size());
  for (std::size_t p = 0; p < y_grid.size(); ++p) {
    auto lv = accum.ratio(p);
    curve.value[p] = lv.value;
    curve.stderr_[p] = lv.stderr_;
  }
  pav_nondecreasing(curve.value);
  return curve;
}

LimitValue mc_rho_limit(const SvConfig& model, const ExtremeSet& set,
                        const std::vector<Interval>& b, std::uint64_t n_mc,
                        std::uint64_t seed) {
  check_query(model, set);
  const int tgt = model.h_prime + 1;
  if (static_cast<int>(b.size()) != tgt)
    throw ConfigError("mc_rho_limit: target event needs h_prime+1 intervals");
  const TailModel& tail = model.tail;

  auto accum = run_ratio_mc(
      model, set, 1, n_mc, seed,
      [&](const std::vector<double>& sig_t, Rng&, std::vector<double>& num) {
        double prod = 1.0;
        for (int i = 0; i < tgt; ++i) prod *= interval_prob(tail, b[i], sig_t[i]);
        num[0] = prod;
      });
  return accum.ratio(0);
}

LimitCurve mc_sum_cdf_limit(const SvConfig& model, const ExtremeSet& set,
                            const std::vector<double>& y_grid,
                            std::uint64_t n_mc, std::uint64_t seed) {
  check_query(model, set);
  if (model.h_prime != 1)
    throw ConfigError("mc_sum_cdf_limit: requires a two-term target window (h_prime = 1)");
  const TailModel& tail = model.tail;

  auto accum = run_ratio_mc(
      model, set, y_grid.size(), n_mc, seed,
      [&](const std::vector<double>& sig_t, Rng& rng, std::vector<double>& num) {
        double z = tail.sample(rng);
        for (std::size_t p = 0; p < num.size(); ++p)
          num[p] = tail.cdf((y_grid[p] - sig_t[0] * z) / sig_t[1]);
      });

  LimitCurve curve;
  curve.y = y_grid;
  curve.value.resize(y_grid.size());
  curve.stderr_.resize(y_grid.size());
  for (std::size_t p = 0; p < y_grid.size(); ++p) {
    auto lv = accum.ratio(p);
    curve.value[p] = lv.value;
    curve.stderr_[p] = lv.stderr_;
  }
  pav_nondecreasing(curve.value);
  return curve;
}

LimitValue mu_c(const SvConfig& model, const ExtremeSet& set,
                std::uint64_t n_mc, std::uint64_t seed) {
  check_query(model, set);
  const double alpha = model.tail.alpha();
  JointGaussianSampler sampler(model.acf, window_indices(model));
  const int h = model.h;

  double s = 0.0, s2 = 0.0;
  std::vector<double> x(sampler.dim());
  std::vector<double> sig(h);
  auto slices = mc_slices(n_mc, seed, kStreamLimitMc);
  for (const auto& slice : slices) {
    Rng rng(slice.seed);
    double ps = 0.0, ps2 = 0.0;
    for (std::uint64_t it = 0; it < slice.count; ++it) {
      sampler.sample(rng, x.data());
      for (int i = 0; i < h; ++i) sig[i] = model.vol(x[i]);
      double nu = nu_eval(set, alpha, sig);
      ps += nu;
      ps2 += nu * nu;
    }
    s += ps;
    s2 += ps2;
  }
  double n = static_cast<double>(n_mc);
  double mean_nu = s / n;
  if (!(mean_nu > 0.0)) throw NumericError("mu_c: degenerate set, E[nu] <= 0");
  double denom = std::pow(sigma_alpha_moment(model.vol, alpha), set.beta());
  double sd = std::sqrt(std::max(s2 / n - mean_nu * mean_nu, 0.0) / n);
  return {mean_nu / denom, sd / denom};
}

VarianceReport asymptotic_variance(const SvConfig& model, const ExtremeSet& set,
                                   const std::vector<Interval>& b,
                                   std::uint64_t n_mc, std::uint64_t seed) {
  check_query(model, set);
  const int tgt = model.h_prime + 1;
  if (static_cast<int>(b.size()) != tgt)
    throw ConfigError("asymptotic_variance: target event needs h_prime+1 intervals");

  // Overlap terms need adjacent conditioning windows to share a coordinate
  // (h >= 2) and the lead-window target to clear the shifted conditioning
  // block (m >= h + 1).
  const int j_max = std::min(model.h, model.m - model.h + 1);
  const bool overlap_family = set.family() == ExtremeSet::Family::kSum;
  VarianceReport rep;

  auto rho = mc_rho_limit(model, set, b, n_mc, seed);
  rep.rho = rho.value;
  rep.rho_stderr = rho.stderr_;

  if (overlap_family && j_max >= 2) {
    if (model.h != 2)
      throw ConfigError(
          "asymptotic_variance: overlap cross-terms available for sum windows "
          "of length 2 only");
    rep.cross.push_back(cross_term_sum2(model, set, b, n_mc, seed));
  }
  rep.sigma2 = rep.sigma2_at(rep.rho);
  return rep;
}

LimitValue tail_dep_constant(const VolatilityFn& vol, const AcfModel& acf,
                             double alpha, int m, std::uint64_t n_mc,
                             std::uint64_t seed) {
  if (m < 1) throw ConfigError("tail_dep_constant: m >= 1 required");
  JointGaussianSampler sampler(acf, {0, m});
  double s = 0.0, s2 = 0.0;
  double x[2];
  auto slices = mc_slices(n_mc, seed, kStreamLimitMc);
  for (const auto& slice : slices) {
    Rng rng(slice.seed);
    double ps = 0.0, ps2 = 0.0;
    for (std::uint64_t it = 0; it < slice.count; ++it) {
      sampler.sample(rng, x);
      double v = std::pow(vol(x[0]), alpha) * std::pow(vol(x[1]), alpha);
      ps += v;
      ps2 += v * v;
    }
    s += ps;
    s2 += ps2;
  }
  double n = static_cast<double>(n_mc);
  double num = s / n;
  double den = std::pow(sigma_alpha_moment(vol, alpha), 2);
  double sd = std::sqrt(std::max(s2 / n - num * num, 0.0) / n);
  return {num / den, sd / den};
}

namespace {

// P(Y_1..Y_h in cA | X) for threshold c given the window volatilities.
double window_cond_prob(const ExtremeSet& set, const TailModel& tail,
                        const std::vector<double>& sig, double c) {
  switch (set.family()) {
    case ExtremeSet::Family::kBox: {
      double p = 1.0;
      for (double s : sig) p *= tail.survival(c / s);
      return p;
    }
    case ExtremeSet::Family::kSum: {
      if (sig.size() == 1) return tail.survival(c / sig[0]);
      if (sig.size() == 2) return convolution_survival(tail, sig[0], sig[1], c);
      throw ConfigError("bias_rate_vn: sum windows longer than 2 unsupported");
    }
    case ExtremeSet::Family::kCombined:
      return convolution_survival(tail, sig[0], sig[1], c) * tail.survival(c / sig[2]);
  }
  return 0.0;
}

}  // namespace

BiasRateReport bias_rate_vn(const SvConfig& model, const ExtremeSet& set,
                            double k, double n, const std::vector<double>& s_grid,
                            std::uint64_t n_mc, std::uint64_t seed,
                            QuantileMethod method) {
  check_query(model, set);
  if (!(k > 0.0 && k < n)) throw ConfigError("bias_rate_vn: need 0 < k < n");
  if (s_grid.empty()) throw ConfigError("bias_rate_vn: empty dilation grid");
  const TailModel& tail = model.tail;
  const double alpha = tail.alpha();
  const double rate = k / n;

  // Marginal survival of Y by Gauss-Hermite over the volatility state.
  auto sbar_y = [&](double u) {
    const auto& rule = gauss_hermite(64);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      s += rule.weights[i] * tail.survival(u / model.vol(rule.nodes[i]));
    return s;
  };

  BiasRateReport rep;
  if (method == QuantileMethod::kExact) {
    double lo = 1e-8, hi = 1.0;
    while (sbar_y(hi) > rate) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      if (sbar_y(mid) > rate) lo = mid; else hi = mid;
    }
    rep.u_n = 0.5 * (lo + hi);
  } else {
    Rng rng(derive_seed(seed, kStreamThreshold));
    std::vector<double> sample(n_mc);
    for (auto& v : sample) v = model.vol(rng.normal()) * tail.sample(rng);
    auto pos = sample.begin() +
               static_cast<std::ptrdiff_t>(std::floor((1.0 - rate) * n_mc));
    if (pos >= sample.end()) pos = sample.end() - 1;
    std::nth_element(sample.begin(), pos, sample.end());
    rep.u_n = *pos;
  }

  const double g = std::pow(rate, set.beta());
  const double denom = std::pow(sigma_alpha_moment(model.vol, alpha), set.beta());

  // One pass, common random numbers: E[nu] for mu and the dilation error.
  JointGaussianSampler sampler(model.acf, [&] {
    std::vector<long> idx;
    for (int i = 1; i <= model.h; ++i) idx.push_back(i);
    return idx;
  }());
  double sum_nu = 0.0, sum_err = 0.0;
  std::vector<double> x(model.h), sig(model.h);
  std::vector<std::vector<double>> cond(s_grid.size());
  std::vector<double> nus;
  nus.reserve(n_mc);
  for (auto& c : cond) c.reserve(n_mc);

  auto slices = mc_slices(n_mc, seed, kStreamLimitMc);
  for (const auto& slice : slices) {
    Rng rng(slice.seed);
    for (std::uint64_t it = 0; it < slice.count; ++it) {
      sampler.sample(rng, x.data());
      for (int i = 0; i < model.h; ++i) sig[i] = model.vol(x[i]);
      nus.push_back(nu_eval(set, alpha, sig));
      for (std::size_t si = 0; si < s_grid.size(); ++si)
        cond[si].push_back(window_cond_prob(set, tail, sig, rep.u_n * s_grid[si]));
    }
  }
  for (double v : nus) sum_nu += v;
  double mu = (sum_nu / static_cast<double>(n_mc)) / denom;
  rep.mu = mu;
  for (std::size_t r = 0; r < nus.size(); ++r) {
    // Pathwise limit of the conditional ratio; its mean over draws is mu.
    double lim = nus[r] / denom;
    double worst = 0.0;
    for (std::size_t si = 0; si < s_grid.size(); ++si) {
      double t_s = homogeneity_T(set, alpha, s_grid[si]);
      double err = std::fabs(cond[si][r] / g - t_s * lim);
      if (err > worst) worst = err;
    }
    sum_err += worst;
  }
  rep.v_n = sum_err / static_cast<double>(n_mc);
  return rep;
}

}  // namespace svx
