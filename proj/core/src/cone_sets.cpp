#include "svx/cone_sets.hpp"

#include <cmath>

#include "svx/errors.hpp"

namespace svx {

int ConeIndex::ones() const {
  int c = 0;
  for (int f : flags) c += f;
  return c;
}

bool ConeIndex::contains(const std::vector<double>& z) const {
  bool any_zero_flag_positive = false;
  bool has_zero_flag = false;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (flags[i] == 1) {
      if (!(z[i] > 0.0)) return false;
    } else {
      has_zero_flag = true;
      if (z[i] > 0.0) any_zero_flag_positive = true;
    }
  }
  return !has_zero_flag || any_zero_flag_positive;
}

ExtremeSet ExtremeSet::Box(int h) {
  if (h < 1) throw ConfigError("Box: h >= 1 required");
  ConeIndex cone;
  cone.flags.assign(h, 1);
  cone.flags[0] = 0;  // one axis coordinate + h-1 flagged ones: beta = h
  return ExtremeSet(Family::kBox, std::move(cone));
}

ExtremeSet ExtremeSet::SumHalfSpace(int h) {
  if (h < 1) throw ConfigError("SumHalfSpace: h >= 1 required");
  ConeIndex cone;
  cone.flags.assign(h, 0);
  return ExtremeSet(Family::kSum, std::move(cone));
}

ExtremeSet ExtremeSet::Combined() {
  ConeIndex cone;
  cone.flags = {0, 0, 1};
  return ExtremeSet(Family::kCombined, std::move(cone));
}

bool ExtremeSet::member(double t, const double* y) const {
  switch (family_) {
    case Family::kBox: {
      for (int i = 0; i < dim(); ++i)
        if (!(y[i] > t)) return false;
      return true;
    }
    case Family::kSum: {
      double s = 0.0;
      for (int i = 0; i < dim(); ++i) s += y[i];
      return s > t;
    }
    case Family::kCombined:
      return (y[0] + y[1] > t) && (y[2] > t);
  }
  return false;
}

bool ExtremeSet::member(double t, const std::vector<double>& y) const {
  if (static_cast<int>(y.size()) != dim())
    throw ConfigError("ExtremeSet::member: window length mismatch");
  return member(t, y.data());
}

std::string ExtremeSet::describe() const {
  switch (family_) {
    case Family::kBox:
      return "box:" + std::to_string(dim());
    case Family::kSum:
      return "sum:" + std::to_string(dim());
    case Family::kCombined:
      return "combined";
  }
  return "?";
}

double nu_eval(const ExtremeSet& set, double alpha, const std::vector<double>& u) {
  if (static_cast<int>(u.size()) != set.dim())
    throw ConfigError("nu_eval: scale vector length mismatch");
  for (double ui : u)
    if (!(ui > 0.0)) throw ConfigError("nu_eval: scales must be positive");
  switch (set.family()) {
    case ExtremeSet::Family::kBox: {
      double p = 1.0;
      for (double ui : u) p *= std::pow(ui, alpha);
      return p;
    }
    case ExtremeSet::Family::kSum: {
      double s = 0.0;
      for (double ui : u) s += std::pow(ui, alpha);
      return s;
    }
    case ExtremeSet::Family::kCombined:
      return (std::pow(u[0], alpha) + std::pow(u[1], alpha)) * std::pow(u[2], alpha);
  }
  return 0.0;
}

double g_scale(const ExtremeSet& set, double t) {
  return std::pow(t, static_cast<double>(set.beta()));
}

double homogeneity_T(const ExtremeSet& set, double alpha, double s) {
  if (!(s > 0.0)) throw ConfigError("homogeneity_T: s > 0 required");
  return std::pow(s, -alpha * static_cast<double>(set.beta()));
}

namespace {

// Conditional tail draw: Z | Z > threshold via the quantile transform.
double sample_above(const TailModel& tail, double threshold, Rng& rng) {
  double sbar = tail.survival(threshold);
  double p = 1.0 - sbar * rng.uniform();
  if (p >= 1.0) p = 1.0 - 1e-16;
  return tail.quantile(p);
}

struct Proposal {
  // Coordinates that must all be large (conditioned above their exact
  // thresholds, so the indicator is automatic for them).
  std::vector<int> conj;
  std::vector<double> conj_threshold;
  // Block from which one "large" coordinate suffices; that coordinate is
  // conditioned above t/(block size * u_i), which covers the event by
  // pigeonhole.
  std::vector<int> block;
  std::vector<double> block_threshold;
};

Proposal make_proposal(const ExtremeSet& set, const std::vector<double>& u,
                       double t) {
  Proposal p;
  switch (set.family()) {
    case ExtremeSet::Family::kBox:
      for (int i = 0; i < set.dim(); ++i) {
        p.conj.push_back(i);
        p.conj_threshold.push_back(t / u[i]);
      }
      break;
    case ExtremeSet::Family::kSum:
      for (int i = 0; i < set.dim(); ++i) {
        p.block.push_back(i);
        p.block_threshold.push_back(t / (set.dim() * u[i]));
      }
      break;
    case ExtremeSet::Family::kCombined:
      p.conj = {2};
      p.conj_threshold = {t / u[2]};
      p.block = {0, 1};
      p.block_threshold = {t / (2.0 * u[0]), t / (2.0 * u[1])};
      break;
  }
  return p;
}

}  // namespace

TailRatioEstimate mc_tail_ratio(const ExtremeSet& set, const TailModel& tail,
                                const std::vector<double>& u, double t,
                                std::uint64_t n_mc, std::uint64_t seed) {
  if (static_cast<int>(u.size()) != set.dim())
    throw ConfigError("mc_tail_ratio: scale vector length mismatch");
  if (!(tail.survival(t) < 0.1))
    throw ConfigError("mc_tail_ratio: t too small for a tail estimate");

  const int h = set.dim();
  const Proposal prop = make_proposal(set, u, t);
  const std::size_t nb = prop.block.size();

  double conj_weight = 1.0;
  for (double thr : prop.conj_threshold) conj_weight *= tail.survival(thr);
  std::vector<double> block_sbar(nb);
  for (std::size_t b = 0; b < nb; ++b)
    block_sbar[b] = tail.survival(prop.block_threshold[b]);

  double sum_w = 0.0, sum_w2 = 0.0;
  std::vector<double> y(h);
  auto slices = mc_slices(n_mc, seed, kStreamLimitMc);
  for (const auto& slice : slices) {
    Rng rng(slice.seed);
    double part_w = 0.0, part_w2 = 0.0;
    for (std::uint64_t it = 0; it < slice.count; ++it) {
      // Conjunction coordinates: conditioned above threshold, weight fixed.
      for (std::size_t c = 0; c < prop.conj.size(); ++c) {
        double z = sample_above(tail, prop.conj_threshold[c], rng);
        y[prop.conj[c]] = u[prop.conj[c]] * z;
      }
      double w = conj_weight;
      if (nb > 0) {
        // Mixture: pick which block coordinate is forced large.
        std::size_t pick = rng.index(nb);
        for (std::size_t b = 0; b < nb; ++b) {
          double z = (b == pick) ? sample_above(tail, prop.block_threshold[b], rng)
                                 : tail.sample(rng);
          y[prop.block[b]] = u[prop.block[b]] * z;
        }
        // w(z) = f(z)/q(z) with q the equal-weight mixture of conditioned
        // components.
        double inv = 0.0;
        for (std::size_t b = 0; b < nb; ++b) {
          double z = y[prop.block[b]] / u[prop.block[b]];
          if (z > prop.block_threshold[b]) inv += 1.0 / (nb * block_sbar[b]);
        }
        w *= (inv > 0.0) ? 1.0 / inv : 0.0;
      }
      double contrib = set.member(t, y.data()) ? w : 0.0;
      part_w += contrib;
      part_w2 += contrib * contrib;
    }
    sum_w += part_w;
    sum_w2 += part_w2;
  }

  const double n = static_cast<double>(n_mc);
  TailRatioEstimate out;
  out.prob = sum_w / n;
  double var = (sum_w2 / n - out.prob * out.prob) / n;
  double g = g_scale(set, tail.survival(t));
  out.value = out.prob / g;
  out.stderr_ = std::sqrt(std::max(var, 0.0)) / g;
  out.ess = sum_w2 > 0.0 ? (sum_w * sum_w) / sum_w2 : n;
  out.low_precision = out.ess < 100.0;
  return out;
}

}  // namespace svx
