#include "svx/experiment_config.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "svx/errors.hpp"

namespace svx {

namespace {

const std::set<std::string> kKnownKeys = {
    "model.acf",        "model.acf_param", "model.vol",
    "model.vol_param",  "model.tail",      "model.tail_param",
    "model.n",          "window.set",      "window.h",
    "window.m",         "window.h_prime",  "estimator.k",
    "estimator.k_exponent", "estimator.thinned",
    "target.y",         "target.lo",       "target.hi",
    "experiment.replicates", "experiment.seed", "experiment.n_mc",
};

std::string fmt(double v) {
  if (v == std::numeric_limits<double>::infinity()) return "inf";
  if (v == -std::numeric_limits<double>::infinity()) return "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // ensure a float stays a float through the round trip
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

AcfModel parse_acf(const std::string& name, double param) {
  if (name == "ar1") return AcfModel::Ar1(param);
  if (name == "fgn") return AcfModel::Fgn(param);
  if (name == "whitenoise") return AcfModel::WhiteNoise();
  throw ConfigError("model.acf must be ar1 | fgn | whitenoise, got '" + name + "'");
}

VolatilityFn parse_vol(const std::string& name, double param) {
  if (name == "exp") return VolatilityFn::Exp();
  if (name == "abspower") return VolatilityFn::AbsPower(param);
  if (name == "const") return VolatilityFn::Const(param);
  throw ConfigError("model.vol must be exp | abspower | const, got '" + name + "'");
}

TailModel parse_tail(const std::string& name, double param) {
  if (name == "pareto") return TailModel::Pareto(param);
  if (name == "student_t") return TailModel::StudentT(param);
  throw ConfigError("model.tail must be pareto | student_t, got '" + name + "'");
}

ExtremeSet parse_set(const std::string& name, int h) {
  if (name == "box") return ExtremeSet::Box(h);
  if (name == "sum") return ExtremeSet::SumHalfSpace(h);
  if (name == "combined") {
    if (h != 3) throw ConfigError("window.set = combined requires window.h = 3");
    return ExtremeSet::Combined();
  }
  throw ConfigError("window.set must be box | sum | combined, got '" + name + "'");
}

std::string acf_name(const AcfModel& m) {
  switch (m.family()) {
    case AcfModel::Family::kAr1: return "ar1";
    case AcfModel::Family::kFgn: return "fgn";
    case AcfModel::Family::kWhiteNoise: return "whitenoise";
    case AcfModel::Family::kCustom: break;
  }
  throw ConfigError("custom acf models have no config form");
}

std::string vol_name(const VolatilityFn& v) {
  if (v.is_exp()) return "exp";
  if (v.is_const()) return "const";
  return "abspower";
}

std::string set_name(const ExtremeSet& s) {
  switch (s.family()) {
    case ExtremeSet::Family::kBox: return "box";
    case ExtremeSet::Family::kSum: return "sum";
    case ExtremeSet::Family::kCombined: return "combined";
  }
  return "box";
}

}  // namespace

EstimatorConfig ExperimentSpec::estimator(std::size_t n_windows) const {
  EstimatorConfig cfg;
  cfg.set = set;
  cfg.m = sv.m;
  cfg.h_prime = sv.h_prime;
  cfg.thinned = thinned;
  cfg.k = k > 0 ? k : k_power_rule(n_windows, k_exponent);
  return cfg;
}

void ExperimentSpec::validate() const {
  if (sv.h < 1) throw ConfigError("window.h >= 1 required");
  if (sv.h_prime < 0) throw ConfigError("window.h_prime >= 0 required");
  if (sv.m < 1) throw ConfigError("window.m >= 1 required");
  if (set.dim() != sv.h) throw ConfigError("window.set dimension must equal h");
  if (k == 0 && !(k_exponent > 0.0 && k_exponent < 1.0))
    throw ConfigError("either estimator.k >= 1 or estimator.k_exponent in (0,1) required");
  if (replicates < 1) throw ConfigError("experiment.replicates >= 1 required");
  if (n_mc < 1000) throw ConfigError("experiment.n_mc >= 1000 required");
  if (!target.empty() &&
      target.size() != static_cast<std::size_t>(sv.h_prime) + 1)
    throw ConfigError("target.lo/hi must list h_prime+1 intervals");
}

ExperimentSpec parse_experiment(const TomlDoc& doc) {
  for (const auto& key : doc.keys())
    if (!kKnownKeys.count(key)) throw ConfigError("unknown config key: " + key);

  ExperimentSpec spec;
  const std::string acf = doc.get_string("model.acf", "whitenoise");
  const std::string vol = doc.get_string("model.vol", "exp");
  const std::string tail = doc.get_string("model.tail", "pareto");
  spec.sv.acf = parse_acf(acf, doc.get_double("model.acf_param", 0.0));
  spec.sv.vol = parse_vol(vol, doc.get_double("model.vol_param", 1.0));
  spec.sv.tail = parse_tail(tail, doc.get_double("model.tail_param", 2.0));
  long long n = doc.get_int("model.n", 0);
  if (n < 0) throw ConfigError("model.n must be >= 0");
  spec.sv.n = static_cast<std::size_t>(n);

  spec.sv.h = static_cast<int>(doc.get_int("window.h", 1));
  spec.sv.m = static_cast<int>(doc.get_int("window.m", 2));
  spec.sv.h_prime = static_cast<int>(doc.get_int("window.h_prime", 0));
  spec.set = parse_set(doc.get_string("window.set", "box"), spec.sv.h);

  long long k = doc.get_int("estimator.k", 0);
  if (k < 0) throw ConfigError("estimator.k must be >= 0");
  spec.k = static_cast<std::size_t>(k);
  spec.k_exponent = doc.get_double("estimator.k_exponent", 0.0);
  spec.thinned = doc.get_bool("estimator.thinned", false);

  spec.y_grid = doc.get_double_array("target.y");
  std::vector<double> lo = doc.get_double_array("target.lo");
  std::vector<double> hi = doc.get_double_array("target.hi");
  if (lo.size() != hi.size())
    throw ConfigError("target.lo and target.hi must have equal length");
  for (std::size_t i = 0; i < lo.size(); ++i)
    spec.target.push_back(Interval{lo[i], hi[i]});

  long long reps = doc.get_int("experiment.replicates", 1);
  if (reps < 1) throw ConfigError("experiment.replicates >= 1 required");
  spec.replicates = static_cast<std::size_t>(reps);
  long long seed = doc.get_int("experiment.seed", 1);
  if (seed < 0) throw ConfigError("experiment.seed must be >= 0");
  spec.master_seed = static_cast<std::uint64_t>(seed);
  long long n_mc = doc.get_int("experiment.n_mc", 200000);
  if (n_mc < 1000) throw ConfigError("experiment.n_mc >= 1000 required");
  spec.n_mc = static_cast<std::uint64_t>(n_mc);

  spec.validate();
  return spec;
}

ExperimentSpec parse_experiment_file(const std::string& path) {
  return parse_experiment(TomlDoc::parse_file(path));
}

std::string emit_experiment(const ExperimentSpec& spec) {
  std::ostringstream out;
  out << "[model]\n";
  out << "acf = \"" << acf_name(spec.sv.acf) << "\"\n";
  out << "acf_param = " << fmt(spec.sv.acf.param()) << "\n";
  out << "vol = \"" << vol_name(spec.sv.vol) << "\"\n";
  out << "vol_param = " << fmt(spec.sv.vol.param()) << "\n";
  out << "tail = \""
      << (spec.sv.tail.family() == TailModel::Family::kPareto ? "pareto"
                                                              : "student_t")
      << "\"\n";
  out << "tail_param = " << fmt(spec.sv.tail.alpha()) << "\n";
  out << "n = " << spec.sv.n << "\n\n";

  out << "[window]\n";
  out << "set = \"" << set_name(spec.set) << "\"\n";
  out << "h = " << spec.sv.h << "\n";
  out << "m = " << spec.sv.m << "\n";
  out << "h_prime = " << spec.sv.h_prime << "\n\n";

  out << "[estimator]\n";
  out << "k = " << spec.k << "\n";
  out << "k_exponent = " << fmt(spec.k_exponent) << "\n";
  out << "thinned = " << (spec.thinned ? "true" : "false") << "\n\n";

  out << "[target]\n";
  if (!spec.y_grid.empty()) {
    out << "y = [";
    for (std::size_t i = 0; i < spec.y_grid.size(); ++i)
      out << (i ? ", " : "") << fmt(spec.y_grid[i]);
    out << "]\n";
  }
  if (!spec.target.empty()) {
    out << "lo = [";
    for (std::size_t i = 0; i < spec.target.size(); ++i)
      out << (i ? ", " : "") << fmt(spec.target[i].lo);
    out << "]\n";
    out << "hi = [";
    for (std::size_t i = 0; i < spec.target.size(); ++i)
      out << (i ? ", " : "") << fmt(spec.target[i].hi);
    out << "]\n";
  }
  out << "\n[experiment]\n";
  out << "replicates = " << spec.replicates << "\n";
  out << "seed = " << spec.master_seed << "\n";
  out << "n_mc = " << spec.n_mc << "\n";
  return out.str();
}

}  // namespace svx
