#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "svx/experiment_config.hpp"
#include "svx/hermite.hpp"
#include "svx/limit_functionals.hpp"

namespace svx {

enum class OutFormat { kCsv, kJson };
OutFormat parse_format(const std::string& name);  // "csv" | "json"

/// Seed of replicate `rep`: every replicate draws from its own stream, so
/// replicate sets are extensible without reshuffling earlier ones.
std::uint64_t replicate_seed(std::uint64_t master, std::size_t rep);

/// Seed stream used for the truth (limit-functional) computations.
inline constexpr std::uint64_t kSeedTruthStream = 0x5eedu;

/// Runs work(0..count-1) on a pool of `threads` workers. Workers own
/// disjoint index sets and write only to their own slots, so results are
/// identical for every thread count; callers aggregate in index order.
void parallel_replicates(std::size_t count, int threads,
                         const std::function<void(std::size_t)>& work);

/// Single-series estimation: a point estimate when the spec carries an
/// interval target, otherwise a curve over the spec's y grid (defaulting to
/// empirical quantiles of the series).
struct EstimateRun {
  bool is_curve = false;
  Estimate point;
  EstimateCurve curve;
  std::size_t n_windows = 0;
};

EstimateRun run_estimate(const std::vector<double>& series,
                         const ExperimentSpec& spec);
void write_estimate_outputs(const EstimateRun& run, const std::string& out_dir,
                            OutFormat format);

/// Replicated simulate-estimate study against the limit value: CI coverage
/// and normality of the studentized errors.
struct CoverageResult {
  double rho_true = 0.0;
  double sigma2_true = 0.0;   // asymptotic variance at the true rho
  double mu = 0.0;            // mu_C(A)
  double norming = 0.0;       // sqrt(n g(k/n) mu)
  std::size_t k_used = 0;
  std::size_t n_windows = 0;
  std::vector<double> estimates;    // per replicate, replicate order
  std::vector<double> stderrs;
  std::vector<double> studentized;  // norming * (est - rho) / sigma_plugin
  std::vector<int> covered;         // CI contains rho_true
  std::size_t failures = 0;         // replicates that raised (tallied, skipped)
  double coverage = 0.0;
  double ad_statistic = 0.0;
  double ad_pvalue = 0.0;
};

CoverageResult run_coverage(const ExperimentSpec& spec, int threads);
void write_coverage_outputs(const CoverageResult& result,
                            const std::string& out_dir, OutFormat format);

/// Conditional-law curve vs the marginal empirical CDF, for a dependent
/// (SV) configuration and an iid control with the same innovations: the two
/// curves separate under volatility dependence and coincide for iid data.
struct Figure1Panel {
  std::string name;
  std::vector<double> y;
  std::vector<double> psi_hat;
  std::vector<double> f_hat;
  double sup_gap = 0.0;       // sup_y |psi_hat - f_hat|
  std::size_t exceedances = 0;
  std::size_t k_used = 0;
};

struct Figure1Result {
  Figure1Panel sv;
  Figure1Panel iid;
  double ks_critical_iid = 0.0;  // level 0.01 at the iid panel's exceedances
  double gap_ratio = 0.0;        // sv.sup_gap / iid.sup_gap
};

Figure1Result run_figure1(const ExperimentSpec& spec);
void write_figure1_outputs(const Figure1Result& result,
                           const std::string& out_dir, OutFormat format);

/// Hermite diagnostics for the configured model: ranks of the limit kernel
/// and variance-rate checks for the first two Hermite polynomials.
struct HermiteRunResult {
  GRanks ranks;
  ArconesReport h1;
  ArconesReport h2;
};

HermiteRunResult run_hermite(const ExperimentSpec& spec);
void write_hermite_outputs(const HermiteRunResult& result,
                           const std::string& out_dir, OutFormat format);

/// Convolution second-order bound check plus the two-term expansion limit
///   t (P(Z1 + Z2 > t) / P(Z > t) - 2)  ->  2 alpha E[Z]   (alpha > 1).
struct AppendixAResult {
  ConvolutionCheck check;
  double u1 = 0.0, u2 = 0.0;
  double remark_t = 0.0;        // evaluation point for the limit below
  double remark_value = 0.0;    // t (conv/F - 2) at remark_t
  double remark_limit = 0.0;    // 2 alpha E[Z], NaN when E[Z] diverges
};

AppendixAResult run_appendix_a(const ExperimentSpec& spec);
void write_appendix_a_outputs(const AppendixAResult& result,
                              const std::string& out_dir, OutFormat format);

}  // namespace svx
