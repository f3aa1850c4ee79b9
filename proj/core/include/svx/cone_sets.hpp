#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "svx/tail_model.hpp"

namespace svx {

/// Cone index over R^h: a 0/1 flag per coordinate. A point belongs to the
/// cone when every coordinate flagged 1 is positive and at least one
/// coordinate flagged 0 is positive. The limit measure on the cone charges
/// exactly |j|+1 "large" coordinates (the flagged ones plus a single axis
/// from the unflagged block), so the scaling order is
///   beta = |j| + 1.
struct ConeIndex {
  std::vector<int> flags;

  int dim() const { return static_cast<int>(flags.size()); }
  int ones() const;
  int beta() const { return ones() + 1; }
  bool contains(const std::vector<double>& z) const;
};

/// Extreme event geometry A in R^h together with its cone. Membership is
/// strict (>).
///
///   - Box(h):          all of y_1..y_h exceed t; every coordinate is large,
///                      cone (0,1,..,1), beta = h,
///                      scaled measure of u^{-1}A: prod u_i^alpha
///   - SumHalfSpace(h): y_1+..+y_h exceeds t; a single large coordinate
///                      carries the event, cone (0,..,0), beta = 1,
///                      measure: sum u_i^alpha
///   - Combined():      y_1+y_2 exceeds t and y_3 exceeds t, h = 3, cone
///                      (0,0,1), beta = 2, measure: (u_1^a+u_2^a) u_3^a
class ExtremeSet {
 public:
  static ExtremeSet Box(int h);
  static ExtremeSet SumHalfSpace(int h);
  static ExtremeSet Combined();

  enum class Family { kBox, kSum, kCombined };
  Family family() const { return family_; }
  int dim() const { return cone_.dim(); }
  const ConeIndex& cone() const { return cone_; }
  int beta() const { return cone_.beta(); }

  /// Strict membership of the window `y` in the dilated set tA.
  bool member(double t, const double* y) const;
  bool member(double t, const std::vector<double>& y) const;

  std::string describe() const;

 private:
  ExtremeSet(Family f, ConeIndex cone) : family_(f), cone_(std::move(cone)) {}
  Family family_;
  ConeIndex cone_;
};

/// Closed-form value of the cone measure of u^{-1}A (all u_i > 0).
double nu_eval(const ExtremeSet& set, double alpha, const std::vector<double>& u);

/// Scaling function g(t) = t^beta describing the order of P(Z-window in tA).
double g_scale(const ExtremeSet& set, double t);

/// Dilation homogeneity T(s) = s^{-alpha beta}: nu(sA) = T(s) nu(A), s >= 1.
double homogeneity_T(const ExtremeSet& set, double alpha, double s);

/// Monte Carlo estimate of P(u . Z_{1..h} in tA) / g(P(Z > t)) under
/// importance sampling tilted toward the event; converges to nu_eval as
/// t grows. Coordinates that must individually exceed are sampled from the
/// conditional tail; "one large out of the block" coordinates through a
/// mixture that conditions one block member at a time.
struct TailRatioEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  double prob = 0.0;  // importance-sampled P(u . Z in tA)
  double ess = 0.0;   // effective sample size of the weights
  bool low_precision = false;  // ess < 100
};

TailRatioEstimate mc_tail_ratio(const ExtremeSet& set, const TailModel& tail,
                                const std::vector<double>& u, double t,
                                std::uint64_t n_mc, std::uint64_t seed);

}  // namespace svx
