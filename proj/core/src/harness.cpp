#include "svx/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

#include "json.hpp"
#include "svx/csv.hpp"
#include "svx/errors.hpp"
#include "svx/stats.hpp"
#include "svx/svg.hpp"

namespace svx {

namespace {

using nlohmann::json;

constexpr std::uint64_t kReplicateStreamBase = 1ull << 20;

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open output file: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw InputError("write failed: " + path);
}

std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty()) return name;
  if (dir.back() == '/') return dir + name;
  return dir + "/" + name;
}

// Deterministic default evaluation grid: interior quantiles of the series.
std::vector<double> quantile_grid(const std::vector<double>& series,
                                  std::size_t points) {
  std::vector<double> sorted(series);
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> grid;
  grid.reserve(points);
  for (std::size_t i = 1; i <= points; ++i) {
    double p = static_cast<double>(i) / (points + 1.0);
    auto idx = static_cast<std::size_t>(p * (sorted.size() - 1));
    grid.push_back(sorted[idx]);
  }
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

EstimatorConfig resolved_estimator(const ExperimentSpec& spec,
                                   std::size_t series_len,
                                   std::size_t* n_windows_out) {
  EstimatorConfig probe = spec.estimator(2);  // k placeholder for counting
  probe.k = 1;
  std::size_t n_win = window_count(series_len, probe);
  if (n_win < 2)
    throw InputError("series too short: only " + std::to_string(n_win) +
                     " windows");
  EstimatorConfig cfg = spec.estimator(n_win);
  if (n_windows_out) *n_windows_out = n_win;
  return cfg;
}

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

OutFormat parse_format(const std::string& name) {
  if (name == "csv") return OutFormat::kCsv;
  if (name == "json") return OutFormat::kJson;
  throw ConfigError("format must be csv or json, got '" + name + "'");
}

std::uint64_t replicate_seed(std::uint64_t master, std::size_t rep) {
  return derive_seed(master, kReplicateStreamBase + rep);
}

void parallel_replicates(std::size_t count, int threads,
                         const std::function<void(std::size_t)>& work) {
  if (threads < 1) threads = 1;
  std::size_t workers = std::min<std::size_t>(threads, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) work(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) work(i);
    });
  }
  for (auto& t : pool) t.join();
}

EstimateRun run_estimate(const std::vector<double>& series,
                         const ExperimentSpec& spec) {
  spec.validate();
  EstimateRun run;
  EstimatorConfig cfg = resolved_estimator(spec, series.size(), &run.n_windows);

  if (!spec.target.empty()) {
    run.is_curve = false;
    run.point = cfg.thinned ? rho_tilde(series, cfg, spec.target)
                            : rho_hat(series, cfg, spec.target);
    return run;
  }
  run.is_curve = true;
  std::vector<double> grid =
      spec.y_grid.empty() ? quantile_grid(series, 99) : spec.y_grid;
  run.curve = psi_hat_curve(series, cfg, grid);
  return run;
}

void write_estimate_outputs(const EstimateRun& run, const std::string& out_dir,
                            OutFormat format) {
  const std::string base = join_path(out_dir, "estimate");
  if (run.is_curve) {
    if (format == OutFormat::kCsv) {
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < run.curve.points.size(); ++i) {
        const Estimate& e = run.curve.points[i];
        rows.push_back({run.curve.y[i], e.value, e.stderr_, e.ci_lo, e.ci_hi,
                        static_cast<double>(e.k_used),
                        static_cast<double>(e.denominator)});
      }
      write_csv(base + ".csv",
                {"y", "psi_hat", "stderr", "ci_lo", "ci_hi", "k", "exceedances"},
                rows);
    } else {
      json j;
      j["kind"] = "curve";
      j["n_windows"] = run.n_windows;
      for (std::size_t i = 0; i < run.curve.points.size(); ++i) {
        const Estimate& e = run.curve.points[i];
        j["points"].push_back({{"y", run.curve.y[i]},
                               {"psi_hat", e.value},
                               {"stderr", e.stderr_},
                               {"ci_lo", e.ci_lo},
                               {"ci_hi", e.ci_hi},
                               {"k", e.k_used},
                               {"exceedances", e.denominator}});
      }
      write_json_file(base + ".json", j);
    }
    return;
  }
  const Estimate& e = run.point;
  if (format == OutFormat::kCsv) {
    write_csv(base + ".csv",
              {"value", "stderr", "ci_lo", "ci_hi", "k", "u_hat", "numerator",
               "denominator"},
              {{e.value, e.stderr_, e.ci_lo, e.ci_hi,
                static_cast<double>(e.k_used), e.u_hat,
                static_cast<double>(e.numerator),
                static_cast<double>(e.denominator)}});
  } else {
    json j;
    j["kind"] = "point";
    j["value"] = e.value;
    j["stderr"] = e.stderr_;
    j["ci_lo"] = e.ci_lo;
    j["ci_hi"] = e.ci_hi;
    j["k"] = e.k_used;
    j["u_hat"] = e.u_hat;
    j["numerator"] = e.numerator;
    j["denominator"] = e.denominator;
    write_json_file(base + ".json", j);
  }
}

CoverageResult run_coverage(const ExperimentSpec& spec, int threads) {
  spec.validate();
  spec.sv.validate();
  if (spec.target.empty())
    throw ConfigError("coverage: an interval target (target.lo/hi) is required");

  CoverageResult res;
  const std::uint64_t truth_seed = derive_seed(spec.master_seed, kSeedTruthStream);
  VarianceReport truth =
      asymptotic_variance(spec.sv, spec.set, spec.target, spec.n_mc, truth_seed);
  res.rho_true = truth.rho;
  res.sigma2_true = truth.sigma2;
  res.mu = mu_c(spec.sv, spec.set, spec.n_mc, truth_seed).value;

  EstimatorConfig cfg = resolved_estimator(spec, spec.sv.n, &res.n_windows);
  res.k_used = cfg.k;
  double rate = static_cast<double>(cfg.k) / static_cast<double>(res.n_windows);
  res.norming =
      std::sqrt(static_cast<double>(res.n_windows) * g_scale(spec.set, rate) * res.mu);

  const std::size_t R = spec.replicates;
  res.estimates.assign(R, std::numeric_limits<double>::quiet_NaN());
  res.stderrs.assign(R, std::numeric_limits<double>::quiet_NaN());
  res.studentized.assign(R, std::numeric_limits<double>::quiet_NaN());
  res.covered.assign(R, 0);
  std::vector<int> ok(R, 0);

  SvSampler sampler(spec.sv);
  parallel_replicates(R, threads, [&](std::size_t r) {
    try {
      SvPath path = sampler.sample(replicate_seed(spec.master_seed, r));
      Estimate est = cfg.thinned ? rho_tilde(path.y, cfg, spec.target)
                                 : rho_hat(path.y, cfg, spec.target);
      double sigma2 = cfg.thinned ? est.value * (1.0 - est.value)
                                  : truth.sigma2_at(est.value);
      restudentize(est, sigma2);
      res.estimates[r] = est.value;
      res.stderrs[r] = est.stderr_;
      res.covered[r] =
          (est.ci_lo <= res.rho_true && res.rho_true <= est.ci_hi) ? 1 : 0;
      res.studentized[r] = res.norming * (est.value - res.rho_true) /
                           std::sqrt(std::max(sigma2, 1e-12));
      ok[r] = 1;
    } catch (const std::exception&) {
      ok[r] = 0;
    }
  });

  std::vector<double> stud;
  std::size_t cover_count = 0, done = 0;
  for (std::size_t r = 0; r < R; ++r) {
    if (!ok[r]) {
      ++res.failures;
      continue;
    }
    ++done;
    cover_count += res.covered[r];
    stud.push_back(res.studentized[r]);
  }
  if (done == 0) throw NumericError("coverage: every replicate failed");
  res.coverage = static_cast<double>(cover_count) / static_cast<double>(done);
  res.ad_statistic = anderson_darling_statistic(stud);
  res.ad_pvalue = anderson_darling_pvalue(res.ad_statistic, stud.size());
  return res;
}

void write_coverage_outputs(const CoverageResult& res,
                            const std::string& out_dir, OutFormat format) {
  if (format == OutFormat::kCsv) {
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < res.estimates.size(); ++r) {
      double lo = clamp01(res.estimates[r] - 1.959963984540054 * res.stderrs[r]);
      double hi = clamp01(res.estimates[r] + 1.959963984540054 * res.stderrs[r]);
      rows.push_back({static_cast<double>(r), res.estimates[r], res.stderrs[r],
                      lo, hi, static_cast<double>(res.covered[r]),
                      res.studentized[r]});
    }
    write_csv(join_path(out_dir, "coverage.csv"),
              {"replicate", "estimate", "stderr", "ci_lo", "ci_hi", "covered",
               "studentized"},
              rows);
    write_csv(join_path(out_dir, "coverage_summary.csv"),
              {"rho_true", "sigma2", "mu", "norming", "k", "n_windows",
               "replicates", "failures", "coverage", "ad_statistic",
               "ad_pvalue"},
              {{res.rho_true, res.sigma2_true, res.mu, res.norming,
                static_cast<double>(res.k_used),
                static_cast<double>(res.n_windows),
                static_cast<double>(res.estimates.size()),
                static_cast<double>(res.failures), res.coverage,
                res.ad_statistic, res.ad_pvalue}});
  } else {
    json j;
    j["rho_true"] = res.rho_true;
    j["sigma2"] = res.sigma2_true;
    j["mu"] = res.mu;
    j["norming"] = res.norming;
    j["k"] = res.k_used;
    j["n_windows"] = res.n_windows;
    j["replicates"] = res.estimates.size();
    j["failures"] = res.failures;
    j["coverage"] = res.coverage;
    j["ad_statistic"] = res.ad_statistic;
    j["ad_pvalue"] = res.ad_pvalue;
    j["estimates"] = res.estimates;
    j["studentized"] = res.studentized;
    j["covered"] = res.covered;
    write_json_file(join_path(out_dir, "coverage.json"), j);
  }
}

namespace {

Figure1Panel figure1_panel(const std::string& name,
                           const std::vector<double>& series,
                           const ExperimentSpec& spec) {
  Figure1Panel panel;
  panel.name = name;
  std::size_t n_win = 0;
  EstimatorConfig cfg = resolved_estimator(spec, series.size(), &n_win);
  panel.k_used = cfg.k;
  panel.y = spec.y_grid.empty() ? quantile_grid(series, 199) : spec.y_grid;
  EstimateCurve curve = psi_hat_curve(series, cfg, panel.y);

  std::vector<double> sorted(series);
  std::sort(sorted.begin(), sorted.end());
  panel.exceedances = curve.points.front().denominator;
  for (std::size_t i = 0; i < panel.y.size(); ++i) {
    panel.psi_hat.push_back(curve.points[i].value);
    panel.f_hat.push_back(ecdf(sorted, panel.y[i]));
    panel.sup_gap = std::max(
        panel.sup_gap, std::fabs(panel.psi_hat.back() - panel.f_hat.back()));
  }
  return panel;
}

}  // namespace

Figure1Result run_figure1(const ExperimentSpec& spec) {
  spec.validate();
  spec.sv.validate();

  Figure1Result res;
  SvPath sv_path = simulate_sv(spec.sv, replicate_seed(spec.master_seed, 0));
  res.sv = figure1_panel("sv", sv_path.y, spec);

  ExperimentSpec iid = spec;
  iid.sv.vol = VolatilityFn::Const(1.0);
  iid.sv.acf = AcfModel::WhiteNoise();
  SvPath iid_path = simulate_sv(iid.sv, replicate_seed(spec.master_seed, 1));
  res.iid = figure1_panel("iid", iid_path.y, iid);

  res.ks_critical_iid = ks_critical_value(0.01, res.iid.exceedances);
  res.gap_ratio = res.iid.sup_gap > 0.0
                      ? res.sv.sup_gap / res.iid.sup_gap
                      : std::numeric_limits<double>::infinity();
  return res;
}

void write_figure1_outputs(const Figure1Result& res, const std::string& out_dir,
                           OutFormat format) {
  auto panel_rows = [](const Figure1Panel& p) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < p.y.size(); ++i)
      rows.push_back({p.y[i], p.psi_hat[i], p.f_hat[i]});
    return rows;
  };
  if (format == OutFormat::kCsv) {
    write_csv(join_path(out_dir, "figure1_sv.csv"), {"y", "psi_hat", "f_hat"},
              panel_rows(res.sv));
    write_csv(join_path(out_dir, "figure1_iid.csv"), {"y", "psi_hat", "f_hat"},
              panel_rows(res.iid));
    write_csv(join_path(out_dir, "figure1_summary.csv"),
              {"sup_gap_sv", "sup_gap_iid", "gap_ratio", "ks_critical_iid",
               "exceedances_sv", "exceedances_iid", "k"},
              {{res.sv.sup_gap, res.iid.sup_gap, res.gap_ratio,
                res.ks_critical_iid, static_cast<double>(res.sv.exceedances),
                static_cast<double>(res.iid.exceedances),
                static_cast<double>(res.sv.k_used)}});
  } else {
    json j;
    for (const Figure1Panel* p : {&res.sv, &res.iid}) {
      json pj;
      pj["y"] = p->y;
      pj["psi_hat"] = p->psi_hat;
      pj["f_hat"] = p->f_hat;
      pj["sup_gap"] = p->sup_gap;
      pj["exceedances"] = p->exceedances;
      pj["k"] = p->k_used;
      j[p->name] = pj;
    }
    j["gap_ratio"] = res.gap_ratio;
    j["ks_critical_iid"] = res.ks_critical_iid;
    write_json_file(join_path(out_dir, "figure1.json"), j);
  }

  auto panel_svg = [](const Figure1Panel& p, const std::string& title) {
    SvgPanel panel;
    panel.title = title;
    SvgSeries line;
    line.x = p.y;
    line.y = p.f_hat;
    line.color = "#333333";
    line.label = "marginal ecdf";
    SvgSeries dots;
    dots.x = p.y;
    dots.y = p.psi_hat;
    dots.color = "#d62728";
    dots.points = true;
    dots.label = "conditional estimate";
    panel.series = {line, dots};
    return panel;
  };
  write_svg(join_path(out_dir, "figure1.svg"),
            {panel_svg(res.sv, "volatility-driven series"),
             panel_svg(res.iid, "iid control")});
}

HermiteRunResult run_hermite(const ExperimentSpec& spec) {
  spec.validate();
  HermiteRunResult res;
  std::vector<Interval> b = spec.target;
  if (b.empty())
    b.assign(static_cast<std::size_t>(spec.sv.h_prime) + 1, Interval::upto(1.0));
  std::vector<double> grid =
      spec.y_grid.empty() ? std::vector<double>{0.5, 1.0, 2.0, 5.0} : spec.y_grid;
  res.ranks = rank_of_G(spec.sv, spec.set, b, grid);

  std::vector<std::size_t> n_list = {512, 1024, 2048, 4096, 8192, 16384};
  res.h1 = arcones_check([](double x) { return x; }, 1, spec.sv.acf, n_list,
                         200, derive_seed(spec.master_seed, 0xa1));
  res.h2 = arcones_check([](double x) { return x * x - 1.0; }, 2, spec.sv.acf,
                         n_list, 200, derive_seed(spec.master_seed, 0xa2));
  return res;
}

void write_hermite_outputs(const HermiteRunResult& res,
                           const std::string& out_dir, OutFormat format) {
  if (format == OutFormat::kCsv) {
    write_csv(join_path(out_dir, "hermite_ranks.csv"),
              {"tau_ab", "tau_a", "tau_star"},
              {{static_cast<double>(res.ranks.tau_ab.rank),
                static_cast<double>(res.ranks.tau_a.rank),
                static_cast<double>(res.ranks.tau_star.rank)}});
    std::vector<std::vector<double>> rows;
    for (const ArconesReport* rep : {&res.h1, &res.h2}) {
      for (std::size_t i = 0; i < rep->n_list.size(); ++i)
        rows.push_back({rep == &res.h1 ? 1.0 : 2.0,
                        static_cast<double>(rep->n_list[i]), rep->variance[i],
                        rep->rate[i]});
    }
    write_csv(join_path(out_dir, "hermite_rates.csv"),
              {"rank", "n", "variance", "rate"}, rows);
    write_csv(join_path(out_dir, "hermite_slopes.csv"),
              {"rank", "slope", "theory_slope", "c_fit", "ratio_slope"},
              {{1.0, res.h1.slope, res.h1.theory_slope, res.h1.c_fit,
                res.h1.ratio_slope},
               {2.0, res.h2.slope, res.h2.theory_slope, res.h2.c_fit,
                res.h2.ratio_slope}});
  } else {
    json j;
    j["tau_ab"] = res.ranks.tau_ab.rank;
    j["tau_a"] = res.ranks.tau_a.rank;
    j["tau_star"] = res.ranks.tau_star.rank;
    for (const ArconesReport* rep : {&res.h1, &res.h2}) {
      json rj;
      rj["n"] = rep->n_list;
      rj["variance"] = rep->variance;
      rj["rate"] = rep->rate;
      rj["slope"] = rep->slope;
      rj["theory_slope"] = rep->theory_slope;
      rj["c_fit"] = rep->c_fit;
      rj["ratio_slope"] = rep->ratio_slope;
      j[rep == &res.h1 ? "h1" : "h2"] = rj;
    }
    write_json_file(join_path(out_dir, "hermite.json"), j);
  }
}

AppendixAResult run_appendix_a(const ExperimentSpec& spec) {
  AppendixAResult res;
  const TailModel& tail = spec.sv.tail;
  res.u1 = 1.3;
  res.u2 = 0.7;
  res.check = convolution_tail_check(tail, res.u1, res.u2, 10.0, 1.0e4, 25, 0.1);

  res.remark_t = 1000.0;
  double conv = convolution_survival(tail, 1.0, 1.0, res.remark_t);
  res.remark_value =
      res.remark_t * (conv / tail.survival(res.remark_t) - 2.0);
  double a = tail.alpha();
  res.remark_limit = (tail.family() == TailModel::Family::kPareto && a > 1.0)
                         ? 2.0 * a * a / (a - 1.0)
                         : std::numeric_limits<double>::quiet_NaN();
  return res;
}

void write_appendix_a_outputs(const AppendixAResult& res,
                              const std::string& out_dir, OutFormat format) {
  if (format == OutFormat::kCsv) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < res.check.t_grid.size(); ++i)
      rows.push_back({res.check.t_grid[i], res.check.lhs[i],
                      res.check.envelope[i], res.check.ratios[i]});
    write_csv(join_path(out_dir, "appendix_a.csv"),
              {"t", "lhs", "envelope", "ratio"}, rows);
    write_csv(join_path(out_dir, "appendix_a_summary.csv"),
              {"u1", "u2", "c_hat", "late_over_early", "remark_t",
               "remark_value", "remark_limit"},
              {{res.u1, res.u2, res.check.c_hat, res.check.late_over_early,
                res.remark_t, res.remark_value, res.remark_limit}});
  } else {
    json j;
    j["u1"] = res.u1;
    j["u2"] = res.u2;
    j["t"] = res.check.t_grid;
    j["lhs"] = res.check.lhs;
    j["envelope"] = res.check.envelope;
    j["ratio"] = res.check.ratios;
    j["c_hat"] = res.check.c_hat;
    j["late_over_early"] = res.check.late_over_early;
    j["remark_t"] = res.remark_t;
    j["remark_value"] = res.remark_value;
    j["remark_limit"] = res.remark_limit;
    write_json_file(join_path(out_dir, "appendix_a.json"), j);
  }
}

}  // namespace svx
