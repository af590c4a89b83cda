#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bayesucb/core.hpp"
#include "bayesucb/environments.hpp"
#include "bayesucb/policies.hpp"

namespace bayesucb {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Family { gaussian, bernoulli, linear };
enum class NoiseKind { gaussian, rademacher };

struct SweepSpec {
  std::string parameter;      // "sigma0" or "prior_gap"
  std::vector<double> grid;

  bool operator==(const SweepSpec&) const = default;
};

// Full description of one experiment, loadable from the flat key = value
// config format and serializable back without loss.
struct ExperimentConfig {
  Family family = Family::gaussian;
  int num_actions = 10;                   // K
  int dim = 10;                           // d, linear family only
  double sigma = 1.0;
  NoiseKind noise = NoiseKind::gaussian;

  double prior_gap = 1.0;                 // Delta0 in the reference prior shape
  double sigma0 = 1.0;
  std::optional<std::vector<double>> mu0;     // explicit Gaussian prior means
  std::optional<std::vector<double>> alpha;   // Beta prior pseudo-counts
  std::optional<std::vector<double>> beta;
  std::optional<std::vector<double>> theta0;  // explicit linear prior mean

  std::vector<std::string> policies = {"bayesucb", "ucb1"};
  std::int64_t horizon = 1000;
  std::int64_t num_runs = 10000;
  std::optional<double> delta;            // defaults to 1/horizon
  std::optional<double> epsilon;          // defaults to 1/horizon
  std::uint64_t master_seed = 1;
  int threads = 0;                        // 0 = hardware concurrency
  std::int64_t mc_samples = 100000;
  std::string out_dir = ".";
  std::optional<SweepSpec> sweep;
  std::vector<std::string> bounds;        // bound names for the bounds command

  bool operator==(const ExperimentConfig&) const = default;

  static ExperimentConfig parse_string(const std::string& text);
  static ExperimentConfig parse_file(const std::string& path);
  std::string serialize() const;

  // Throws ConfigError when any field violates a module precondition.
  void validate() const;

  double resolved_delta() const;
  double resolved_epsilon() const;

  Prior build_prior() const;
  ActionSet build_action_set(RngStream rng) const;
  EnvironmentKind environment_kind() const;
  PolicyConfig policy_config(const std::string& policy_name) const;

  // Applies a sweep parameter value ("sigma0" or "prior_gap").
  ExperimentConfig with_parameter(const std::string& parameter, double value) const;
};

}  // namespace bayesucb
