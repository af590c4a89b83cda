#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bayesucb/config.hpp"
#include "bayesucb/environments.hpp"
#include "bayesucb/policies.hpp"

namespace bayesucb {

// What one run leaves behind. cum_regret holds prefix sums of the
// instantaneous regret; with diagnostics on, confidence_failed flags the
// rounds where some arm's interval missed and variance_ledger accumulates
// ||A_t||^2_{Sigma_t} for linear runs.
struct RunDiagnostics {
  std::vector<double> cum_regret;
  std::vector<std::int64_t> pulls;
  bool all_confidence_held = true;
  double variance_ledger = 0.0;
  std::vector<std::uint8_t> confidence_failed;  // per round, diagnostics only
};

struct ExperimentResult {
  std::vector<double> mean_cum_regret;
  std::vector<double> std_error;
  std::int64_t num_runs = 0;
  ExperimentConfig config_echo;
};

struct SweepPoint {
  double grid_value = 0.0;
  std::vector<std::string> policy_names;
  std::vector<ExperimentResult> results;          // one per policy
  std::vector<std::pair<std::string, double>> bound_values;
};

struct BakeoffRow {
  int num_actions = 0;
  double sigma = 0.0;
  double prior_gap = 0.0;
  double sigma0 = 0.0;
  double regret_ucb1 = 0.0;
  double regret_bayes_ucb = 0.0;
  double difference = 0.0;   // regret_ucb1 - regret_bayes_ucb
  double std_error = 0.0;    // paired, from per-run differences
};

// Plays one policy against one bound instance for n rounds. rng is the
// run-level stream; rewards come from its substream 1 so that policies
// sharing a run index face identical noise.
RunDiagnostics run_episode(const Environment& env, const PolicyConfig& policy, std::int64_t horizon,
                           RngStream rng, bool diagnostics_on);

// Bayes regret of one configured policy: runs num_runs episodes on fresh
// instances and aggregates per-round mean and standard error. The reduction
// order is fixed by run index, so results do not depend on thread count.
ExperimentResult bayes_regret(const ExperimentConfig& config, std::size_t policy_index = 0);

// One bayes_regret per grid value per policy plus the applicable bound
// leading terms, ready for the figure emitter.
std::vector<SweepPoint> sweep(const ExperimentConfig& base_config, const std::string& parameter,
                              const std::vector<double>& grid);

// The 81-instance comparison grid, paired by common random numbers and
// sorted by regret difference.
std::vector<BakeoffRow> bakeoff_grid(NoiseKind noise, std::int64_t runs_per_cell,
                                     std::uint64_t master_seed, int threads);

// Deterministic parallel map over [0, count): blocks are computed by any
// worker but merged strictly in block order.
void parallel_blocks(std::int64_t count, std::int64_t block_size, int threads,
                     const std::function<void(std::int64_t begin, std::int64_t end,
                                              std::size_t block_index)>& compute_block);

}  // namespace bayesucb
