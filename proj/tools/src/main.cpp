// svx: simulate heavy tailed stochastic volatility series, estimate limiting
// conditional laws, and run the supporting diagnostics. One subcommand per
// job; every run is reproducible from the config plus --seed.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "svx/csv.hpp"
#include "svx/errors.hpp"
#include "svx/harness.hpp"
#include "svx/rng.hpp"

namespace {

struct CommonOpts {
  std::string config;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out = ".";
  std::string format = "csv";
  CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* sub, CommonOpts& c, bool config_required = true) {
  auto* cfg = sub->add_option("--config", c.config, "experiment config (TOML)");
  if (config_required) cfg->required();
  c.seed_opt = sub->add_option("--seed", c.seed, "override the config seed");
  sub->add_option("--threads", c.threads, "worker threads for replicate loops")
      ->check(CLI::PositiveNumber);
  sub->add_option("--out", c.out, "output directory");
  sub->add_option("--format", c.format, "output format: csv or json");
}

svx::ExperimentSpec load_spec(const CommonOpts& c) {
  svx::ExperimentSpec spec = svx::parse_experiment_file(c.config);
  if (c.seed_opt != nullptr && c.seed_opt->count() > 0) spec.master_seed = c.seed;
  return spec;
}

void prepare_out(const std::string& out) {
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw svx::InputError("cannot create output directory: " + out);
}

std::string joined(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

int cmd_simulate(const CommonOpts& c) {
  svx::ExperimentSpec spec = load_spec(c);
  spec.sv.validate();
  svx::OutFormat fmt = svx::parse_format(c.format);
  prepare_out(c.out);
  svx::SvPath path =
      svx::simulate_sv(spec.sv, svx::replicate_seed(spec.master_seed, 0));
  if (fmt == svx::OutFormat::kCsv) {
    std::vector<std::vector<double>> rows;
    rows.reserve(path.y.size());
    for (double v : path.y) rows.push_back({v});
    svx::write_csv(joined(c.out, "series.csv"), {"y"}, rows);
    rows.clear();
    for (std::size_t i = 0; i < path.x.size(); ++i)
      rows.push_back({path.x[i], path.z[i]});
    svx::write_csv(joined(c.out, "latent.csv"), {"x", "z"}, rows);
  } else {
    nlohmann::json j;
    j["y"] = path.y;
    j["x"] = path.x;
    j["z"] = path.z;
    std::ofstream outp(joined(c.out, "series.json"));
    if (!outp) throw svx::InputError("cannot open output file");
    outp << j.dump(2) << "\n";
  }
  std::cout << "simulated " << path.y.size() << " observations\n";
  return svx::kExitOk;
}

int cmd_estimate(const CommonOpts& c, const std::string& input) {
  svx::ExperimentSpec spec = load_spec(c);
  svx::OutFormat fmt = svx::parse_format(c.format);
  prepare_out(c.out);
  std::vector<double> series;
  if (!input.empty()) {
    series = svx::read_series_csv(input);
  } else {
    spec.sv.validate();
    series =
        svx::simulate_sv(spec.sv, svx::replicate_seed(spec.master_seed, 0)).y;
  }
  svx::EstimateRun run = svx::run_estimate(series, spec);
  svx::write_estimate_outputs(run, c.out, fmt);
  if (run.is_curve) {
    std::cout << "estimated " << run.curve.y.size() << " curve points over "
              << run.n_windows << " windows\n";
  } else {
    std::cout << "estimate " << run.point.value << " (stderr "
              << run.point.stderr_ << ", k " << run.point.k_used << ")\n";
  }
  return svx::kExitOk;
}

int cmd_limit(const CommonOpts& c) {
  svx::ExperimentSpec spec = load_spec(c);
  svx::OutFormat fmt = svx::parse_format(c.format);
  prepare_out(c.out);
  const std::uint64_t seed =
      svx::derive_seed(spec.master_seed, svx::kSeedTruthStream);
  svx::LimitValue mu = svx::mu_c(spec.sv, spec.set, spec.n_mc, seed);

  if (!spec.target.empty()) {
    svx::VarianceReport rep = svx::asymptotic_variance(spec.sv, spec.set,
                                                       spec.target, spec.n_mc,
                                                       seed);
    if (fmt == svx::OutFormat::kCsv) {
      svx::write_csv(joined(c.out, "limit.csv"),
                     {"rho", "rho_stderr", "sigma2", "mu", "mu_stderr"},
                     {{rep.rho, rep.rho_stderr, rep.sigma2, mu.value,
                       mu.stderr_}});
      if (!rep.cross.empty()) {
        std::vector<std::vector<double>> rows;
        for (const auto& ct : rep.cross)
          rows.push_back({static_cast<double>(ct.j), ct.r_bb, ct.r_bfull,
                          ct.r_full});
        svx::write_csv(joined(c.out, "limit_cross.csv"),
                       {"j", "r_bb", "r_bfull", "r_full"}, rows);
      }
    } else {
      nlohmann::json j;
      j["rho"] = rep.rho;
      j["rho_stderr"] = rep.rho_stderr;
      j["sigma2"] = rep.sigma2;
      j["mu"] = mu.value;
      j["mu_stderr"] = mu.stderr_;
      for (const auto& ct : rep.cross)
        j["cross"].push_back({{"j", ct.j},
                              {"r_bb", ct.r_bb},
                              {"r_bfull", ct.r_bfull},
                              {"r_full", ct.r_full}});
      std::ofstream outp(joined(c.out, "limit.json"));
      outp << j.dump(2) << "\n";
    }
    std::cout << "rho " << rep.rho << " sigma2 " << rep.sigma2 << " mu "
              << mu.value << "\n";
    return svx::kExitOk;
  }

  std::vector<double> grid = spec.y_grid.empty()
                                 ? std::vector<double>{0.25, 0.5, 0.75, 1.0,
                                                       1.5, 2.0, 3.0, 5.0,
                                                       8.0, 12.0}
                                 : spec.y_grid;
  svx::LimitCurve curve =
      svx::mc_psi_limit(spec.sv, spec.set, grid, spec.n_mc, seed);
  if (fmt == svx::OutFormat::kCsv) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < curve.y.size(); ++i)
      rows.push_back({curve.y[i], curve.value[i], curve.stderr_[i]});
    svx::write_csv(joined(c.out, "limit_curve.csv"), {"y", "psi", "stderr"},
                   rows);
    svx::write_csv(joined(c.out, "limit.csv"), {"mu", "mu_stderr"},
                   {{mu.value, mu.stderr_}});
  } else {
    nlohmann::json j;
    j["mu"] = mu.value;
    j["mu_stderr"] = mu.stderr_;
    j["curve"]["y"] = curve.y;
    j["curve"]["psi"] = curve.value;
    j["curve"]["stderr"] = curve.stderr_;
    std::ofstream outp(joined(c.out, "limit.json"));
    outp << j.dump(2) << "\n";
  }
  std::cout << "limit curve over " << grid.size() << " points, mu "
            << mu.value << "\n";
  return svx::kExitOk;
}

int cmd_coverage(const CommonOpts& c) {
  svx::ExperimentSpec spec = load_spec(c);
  svx::OutFormat fmt = svx::parse_format(c.format);
  prepare_out(c.out);
  svx::CoverageResult res = svx::run_coverage(spec, c.threads);
  svx::write_coverage_outputs(res, c.out, fmt);
  std::cout << "coverage " << res.coverage << " over "
            << res.estimates.size() - res.failures << " replicates (ad p "
            << res.ad_pvalue << ")\n";
  return svx::kExitOk;
}

int cmd_figure1(const CommonOpts& c) {
  svx::ExperimentSpec spec = load_spec(c);
  svx::OutFormat fmt = svx::parse_format(c.format);
  prepare_out(c.out);
  svx::Figure1Result res = svx::run_figure1(spec);
  svx::write_figure1_outputs(res, c.out, fmt);
  std::cout << "sup gap sv " << res.sv.sup_gap << " iid " << res.iid.sup_gap
            << " ratio " << res.gap_ratio << "\n";
  return svx::kExitOk;
}

int cmd_hermite(const CommonOpts& c) {
  svx::ExperimentSpec spec = load_spec(c);
  svx::OutFormat fmt = svx::parse_format(c.format);
  prepare_out(c.out);
  svx::HermiteRunResult res = svx::run_hermite(spec);
  svx::write_hermite_outputs(res, c.out, fmt);
  std::cout << "ranks tau_ab " << res.ranks.tau_ab.rank << " tau_a "
            << res.ranks.tau_a.rank << " tau_star " << res.ranks.tau_star.rank
            << "\n";
  return svx::kExitOk;
}

int cmd_appendix_a(const CommonOpts& c) {
  svx::ExperimentSpec spec = load_spec(c);
  svx::OutFormat fmt = svx::parse_format(c.format);
  prepare_out(c.out);
  svx::AppendixAResult res = svx::run_appendix_a(spec);
  svx::write_appendix_a_outputs(res, c.out, fmt);
  std::cout << "envelope c_hat " << res.check.c_hat << " expansion value "
            << res.remark_value << " limit " << res.remark_limit << "\n";
  return svx::kExitOk;
}

void emit_error(const std::string& kind, const std::string& what) {
  nlohmann::json j;
  j["error"] = what;
  j["kind"] = kind;
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heavy tailed stochastic volatility: simulation, limiting "
               "conditional laws, and tail estimators"};
  app.require_subcommand(1);

  CommonOpts c;
  std::string input;

  auto* sim = app.add_subcommand("simulate", "simulate a series from a config");
  add_common(sim, c);
  auto* est = app.add_subcommand(
      "estimate", "tail conditional estimates from a series (or simulated)");
  add_common(est, c);
  est->add_option("input", input, "series CSV, one numeric column");
  auto* lim = app.add_subcommand(
      "limit", "limiting conditional law and asymptotic variance");
  add_common(lim, c);
  auto* cov = app.add_subcommand(
      "coverage", "replicated confidence interval coverage study");
  add_common(cov, c);
  auto* fig = app.add_subcommand(
      "figure1", "conditional law vs marginal CDF, dependent vs iid");
  add_common(fig, c);
  auto* her = app.add_subcommand(
      "hermite", "Hermite ranks and variance rate diagnostics");
  add_common(her, c);
  auto* apx = app.add_subcommand(
      "check-appendix-a", "convolution tail bound and expansion check");
  add_common(apx, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("input", e.what());
    return svx::kExitInputError;
  }

  try {
    if (sim->parsed()) return cmd_simulate(c);
    if (est->parsed()) return cmd_estimate(c, input);
    if (lim->parsed()) return cmd_limit(c);
    if (cov->parsed()) return cmd_coverage(c);
    if (fig->parsed()) return cmd_figure1(c);
    if (her->parsed()) return cmd_hermite(c);
    if (apx->parsed()) return cmd_appendix_a(c);
  } catch (const svx::InputError& e) {
    emit_error("input", e.what());
    return e.exit_code();
  } catch (const svx::ConfigError& e) {
    emit_error("config", e.what());
    return e.exit_code();
  } catch (const svx::NumericError& e) {
    emit_error("numeric", e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return svx::kExitNumericError;
  }
  return svx::kExitOk;
}
