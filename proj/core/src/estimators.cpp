#include "svx/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "svx/errors.hpp"

namespace svx {

namespace {

constexpr double kZ95 = 1.959963984540054;

void check_cfg(const EstimatorConfig& cfg) {
  if (cfg.m < 1) throw ConfigError("estimator: m >= 1 required");
  if (cfg.h_prime < 0) throw ConfigError("estimator: h_prime >= 0 required");
}

bool in_interval(double v, const Interval& iv) { return v > iv.lo && v <= iv.hi; }

struct Selection {
  std::size_t n = 0;
  double u_hat = 0.0;
  std::vector<std::size_t> starts;  // 0-based start of each selected window
};

Selection select_windows(const std::vector<double>& y,
                         const EstimatorConfig& cfg) {
  check_cfg(cfg);
  const int h = cfg.set.dim();
  const std::size_t stride = cfg.thinned ? static_cast<std::size_t>(h) : 1;

  Selection sel;
  sel.n = window_count(y.size(), cfg);
  if (sel.n < 2)
    throw InputError("estimator: series of length " + std::to_string(y.size()) +
                     " leaves fewer than 2 windows");
  if (cfg.k < 1 || cfg.k >= sel.n)
    throw ConfigError("estimator: k must satisfy 1 <= k < " +
                      std::to_string(sel.n) + ", got " + std::to_string(cfg.k));

  std::vector<double> head(y.begin(), y.begin() + sel.n);
  sel.u_hat = order_statistic_threshold(head, cfg.k);

  for (std::size_t b = 0; b < sel.n; ++b) {
    std::size_t s = b * stride;
    if (cfg.set.member(sel.u_hat, y.data() + s)) sel.starts.push_back(s);
  }
  return sel;
}

Estimate finish(std::size_t num, const Selection& sel, std::size_t k) {
  if (sel.starts.empty())
    throw InputError("estimator: no conditioning-window exceedances (k=" +
                     std::to_string(k) + ", windows=" + std::to_string(sel.n) +
                     ", denominator=0)");
  Estimate e;
  e.k_used = k;
  e.u_hat = sel.u_hat;
  e.numerator = num;
  e.denominator = sel.starts.size();
  e.value = static_cast<double>(num) / static_cast<double>(e.denominator);
  restudentize(e, e.value * (1.0 - e.value));
  return e;
}

Estimate rho_engine(const std::vector<double>& y, const EstimatorConfig& cfg,
                    const std::vector<Interval>& b) {
  if (b.size() != static_cast<std::size_t>(cfg.h_prime) + 1)
    throw ConfigError("estimator: target event needs h_prime+1 intervals");
  Selection sel = select_windows(y, cfg);
  std::size_t num = 0;
  for (std::size_t s : sel.starts) {
    bool hit = true;
    for (int i = 0; i <= cfg.h_prime && hit; ++i)
      hit = in_interval(y[s + cfg.m + i], b[i]);
    if (hit) ++num;
  }
  return finish(num, sel, cfg.k);
}

}  // namespace

std::size_t k_power_rule(std::size_t n, double c) {
  if (!(c > 0.0 && c < 1.0)) throw ConfigError("k rule: exponent in (0,1) required");
  return static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), c)));
}

double order_statistic_threshold(const std::vector<double>& y, std::size_t k) {
  const std::size_t n = y.size();
  if (k < 1 || k >= n)
    throw ConfigError("order statistic threshold: 1 <= k < n required (n=" +
                      std::to_string(n) + ", k=" + std::to_string(k) + ")");
  std::vector<double> sorted(y);
  auto pos = sorted.begin() + static_cast<std::ptrdiff_t>(n - k - 1);
  std::nth_element(sorted.begin(), pos, sorted.end());
  return *pos;
}

std::size_t window_count(std::size_t length, const EstimatorConfig& cfg) {
  check_cfg(cfg);
  const std::size_t h = static_cast<std::size_t>(cfg.set.dim());
  const std::size_t stride = cfg.thinned ? h : 1;
  const std::size_t reach =
      static_cast<std::size_t>(cfg.m + cfg.h_prime);  // target end offset
  if (length < h || length < reach + 1) return 0;
  // window b (1-based) starts at (b-1)*stride+1; both the conditioning and
  // the target window must end inside the series.
  std::size_t by_cond = (length - h) / stride + 1;
  std::size_t by_target = (length - reach - 1) / stride + 1;
  return std::min(by_cond, by_target);
}

void restudentize(Estimate& e, double sigma2) {
  if (e.denominator == 0) throw InputError("restudentize: zero denominator");
  e.stderr_ = std::sqrt(std::max(sigma2, 0.0) / static_cast<double>(e.denominator));
  e.ci_lo = std::max(0.0, e.value - kZ95 * e.stderr_);
  e.ci_hi = std::min(1.0, e.value + kZ95 * e.stderr_);
}

Estimate rho_hat(const std::vector<double>& y, const EstimatorConfig& cfg,
                 const std::vector<Interval>& b) {
  if (cfg.thinned) throw ConfigError("rho_hat: cfg.thinned must be false");
  return rho_engine(y, cfg, b);
}

Estimate rho_tilde(const std::vector<double>& y, const EstimatorConfig& cfg,
                   const std::vector<Interval>& b) {
  if (!cfg.thinned) throw ConfigError("rho_tilde: cfg.thinned must be true");
  return rho_engine(y, cfg, b);
}

EstimateCurve psi_hat_curve(const std::vector<double>& y,
                            const EstimatorConfig& cfg,
                            const std::vector<double>& y_grid) {
  if (y_grid.empty()) throw ConfigError("psi_hat_curve: empty grid");
  Selection sel = select_windows(y, cfg);
  if (sel.starts.empty())
    throw InputError("estimator: no conditioning-window exceedances (k=" +
                     std::to_string(cfg.k) + ", windows=" + std::to_string(sel.n) +
                     ", denominator=0)");

  // Target window lies in (-inf, y]^{h'+1} iff its maximum is <= y, so one
  // sorted list of per-window maxima serves the whole grid.
  std::vector<double> maxima;
  maxima.reserve(sel.starts.size());
  for (std::size_t s : sel.starts) {
    double mx = y[s + cfg.m];
    for (int i = 1; i <= cfg.h_prime; ++i)
      mx = std::max(mx, y[s + cfg.m + i]);
    maxima.push_back(mx);
  }
  std::sort(maxima.begin(), maxima.end());

  EstimateCurve curve;
  curve.y = y_grid;
  curve.points.reserve(y_grid.size());
  for (double yy : y_grid) {
    auto it = std::upper_bound(maxima.begin(), maxima.end(), yy);
    std::size_t num = static_cast<std::size_t>(it - maxima.begin());
    curve.points.push_back(finish(num, sel, cfg.k));
  }
  return curve;
}

EstimateCurve lambda_hat(const std::vector<double>& y, std::size_t k, int m,
                         const std::vector<double>& y_grid) {
  EstimatorConfig cfg;
  cfg.set = ExtremeSet::SumHalfSpace(2);
  cfg.m = m;
  cfg.h_prime = 0;
  cfg.k = k;
  return psi_hat_curve(y, cfg, y_grid);
}

}  // namespace svx
