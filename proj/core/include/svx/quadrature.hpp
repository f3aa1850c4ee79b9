#pragma once

#include <functional>
#include <vector>

namespace svx {

// Nodes and weights for E[f(X)] with X standard normal:
//   E[f(X)] ~= sum_i w_i f(x_i)
// (probabilists' Hermite rule; weights sum to 1). Computed by Golub-Welsch
// from the three-term recurrence and cached per order.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussHermiteRule& gauss_hermite(int n);

// Adaptive Gauss-Kronrod G7K15 on a finite interval, relative tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, int max_depth = 15);

// Integral over (a, +inf) via the substitution t = a + u/(1-u).
double integrate_upper(const std::function<double(double)>& f, double a,
                       double rel_tol = 1e-10);

}  // namespace svx
