#pragma once

#include <cstddef>
#include <vector>

namespace svx {

double normal_cdf(double x);
double normal_quantile(double p);

// Anderson-Darling statistic for a fully specified standard normal null.
double anderson_darling_statistic(std::vector<double> sample);

// P-value for the statistic above (asymptotic CDF with the finite-n
// correction of Marsaglia & Marsaglia, "Evaluating the Anderson-Darling
// Distribution").
double anderson_darling_pvalue(double a2, std::size_t n);

// One-sample Kolmogorov-Smirnov critical value at significance `alpha` for
// sample size n: solves P(sup|F_n - F| > c) = alpha from the asymptotic
// Kolmogorov series.
double ks_critical_value(double alpha, std::size_t n);

// Empirical CDF evaluated at x: #{v in sorted_sample : v <= x} / n.
double ecdf(const std::vector<double>& sorted_sample, double x);

double mean(const std::vector<double>& v);
double variance(const std::vector<double>& v);  // unbiased

// Least-squares slope of y against x.
double regression_slope(const std::vector<double>& x,
                        const std::vector<double>& y);

}  // namespace svx
