#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pbs/graph.hpp"
#include "pbs/instance.hpp"

namespace pbs {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string model = "random";  // "random" | "semi_random"
  std::vector<std::size_t> n_values, k_values, d_values;
  std::vector<double> p_values;
  double alpha = 1.0 / 6.0;
  BipartiteTopology topology = BipartiteTopology::random_regular();
  std::vector<std::string> algorithms;  // subset of degree|sdp|subspace|certify
  int trials = 1;
  std::uint64_t master_seed = 0;
  double adversary_fraction = 0.0;  // > 0 applies RandomExtra after generation
  std::string output_path = "results.csv";
  bool timing = true;  // timing=off zeroes wall_ms so reruns are byte-identical

  void validate() const;
};

/// Flat key = value text; '#' starts a comment; grid axes are comma lists.
ExperimentConfig parse_config_file(const std::string& path);
/// Apply one "key=value" override (CLI flags win over file values).
void apply_config_override(ExperimentConfig& cfg, const std::string& assignment);

struct CellParams {
  std::size_t n = 0, k = 0, d = 0;
  double p = 0.0;
};

struct AlgorithmResult {
  std::string algorithm;
  bool success = false;   // exact recovery (or all checks green for certify)
  long long symdiff = -1; // |output symmetric-difference S|; -1 when no output
  double wall_ms = 0.0;   // excludes instance generation
  std::string diagnostics;
};

struct TrialResult {
  CellParams cell;
  int trial_index = 0;
  std::uint64_t seed = 0;
  bool generation_failed = false;
  std::string generation_error;
  std::vector<AlgorithmResult> results;
};

/// Deterministic given (config, trial seed). The certificate pipeline runs
/// on the pre-adversary instance (it analyzes the model, not the adversary);
/// recovery algorithms run on the final graph.
TrialResult run_trial(const ExperimentConfig& cfg, const CellParams& cell, int trial_index,
                      std::uint64_t seed);

struct SweepReport {
  std::vector<TrialResult> trials;
  nlohmann::json summary;
  std::size_t csv_rows = 0;
};

/// Cross product of the grid axes; trials within a cell run on the worker
/// pool, rows are written in (cell, trial) order and flushed per cell.
SweepReport run_sweep(const ExperimentConfig& cfg);

/// All k-subsets whose induced graph is connected, bipartite and d-regular,
/// in lexicographic order. Guarded by a C(n,k) <= 10^7 budget.
std::vector<std::vector<Vertex>> brute_force_recover(const Graph& g, std::size_t k, std::size_t d);

}  // namespace pbs
