#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "svx/estimators.hpp"
#include "svx/sv_model.hpp"
#include "svx/toml_lite.hpp"

namespace svx {

/// One experiment: model, window geometry, estimator settings, target event
/// or evaluation grid, and the replication plan. Parsed from a TOML config
/// with strict (unknown-key-rejecting) validation, emitted back in canonical
/// form so parse(emit(spec)) round-trips.
struct ExperimentSpec {
  SvConfig sv;
  ExtremeSet set = ExtremeSet::Box(1);
  std::size_t k = 0;           // explicit order-statistic count, 0 = use rule
  double k_exponent = 0.0;     // k = ceil(windows^c) when k = 0
  bool thinned = false;
  std::vector<Interval> target;  // interval target (size h'+1) when non-empty
  std::vector<double> y_grid;    // curve grid otherwise
  std::size_t replicates = 1;
  std::uint64_t master_seed = 1;
  std::uint64_t n_mc = 200000;   // Monte Carlo effort for limit functionals

  /// Estimator settings resolved against a concrete window count.
  EstimatorConfig estimator(std::size_t n_windows) const;

  void validate() const;
};

ExperimentSpec parse_experiment(const TomlDoc& doc);
ExperimentSpec parse_experiment_file(const std::string& path);
std::string emit_experiment(const ExperimentSpec& spec);

}  // namespace svx
