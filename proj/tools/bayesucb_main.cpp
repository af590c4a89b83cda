#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "bayesucb/bounds.hpp"
#include "bayesucb/csv.hpp"
#include "bayesucb/simulator.hpp"
#include "bayesucb/svg.hpp"

namespace {

using namespace bayesucb;

constexpr std::uint64_t kBoundsRoot = 2;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> runs;
  std::optional<std::int64_t> horizon;
  std::optional<double> delta;
  std::optional<double> epsilon;
  std::optional<std::string> noise;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--seed", ov.seed, "Master seed");
  cmd->add_option("--runs", ov.runs, "Number of runs");
  cmd->add_option("--horizon", ov.horizon, "Rounds per run");
  cmd->add_option("--delta", ov.delta, "Confidence failure probability");
  cmd->add_option("--epsilon", ov.epsilon, "Gap clipping level");
  cmd->add_option("--noise", ov.noise, "Noise kind: gaussian or rademacher");
  cmd->add_option("--out", ov.out_dir, "Output directory");
  cmd->add_option("--threads", ov.threads, "Worker threads (0 = hardware)");
}

ExperimentConfig load_config(const std::string& path, const Overrides& ov) {
  ExperimentConfig config = ExperimentConfig::parse_file(path);
  if (ov.seed) config.master_seed = *ov.seed;
  if (ov.runs) config.num_runs = *ov.runs;
  if (ov.horizon) config.horizon = *ov.horizon;
  if (ov.delta) config.delta = *ov.delta;
  if (ov.epsilon) config.epsilon = *ov.epsilon;
  if (ov.noise) {
    if (*ov.noise == "gaussian") config.noise = NoiseKind::gaussian;
    else if (*ov.noise == "rademacher") config.noise = NoiseKind::rademacher;
    else throw ConfigError("unknown noise kind '" + *ov.noise + "'");
  }
  if (ov.out_dir) config.out_dir = *ov.out_dir;
  if (ov.threads) config.threads = *ov.threads;
  config.validate();
  return config;
}

std::string output_path(const ExperimentConfig& config, const std::string& name) {
  std::filesystem::create_directories(config.out_dir);
  return (std::filesystem::path(config.out_dir) / name).string();
}

std::string components_cell(const bounds::BoundEstimate& estimate) {
  std::string out;
  for (const auto& [key, value] : estimate.components) {
    if (!out.empty()) out += ';';
    out += key + "=" + format_double(value);
  }
  return out;
}

int cmd_simulate(const std::string& config_path, const Overrides& ov) {
  const ExperimentConfig config = load_config(config_path, ov);
  CsvWriter csv({"round", "policy", "mean_cum_regret", "std_error"});
  ChartSpec chart;
  chart.title = "Cumulative Bayes regret";
  chart.x_label = "round";
  chart.y_label = "mean cumulative regret";
  for (std::size_t p = 0; p < config.policies.size(); ++p) {
    const ExperimentResult result = bayes_regret(config, p);
    ChartSeries series;
    series.name = config.policies[p];
    for (std::int64_t t = 0; t < config.horizon; ++t) {
      csv.add_row({CsvWriter::cell(t + 1), config.policies[p],
                   CsvWriter::cell(result.mean_cum_regret[t]),
                   CsvWriter::cell(result.std_error[t])});
      series.x.push_back(static_cast<double>(t + 1));
      series.y.push_back(result.mean_cum_regret[t]);
      series.y_err.push_back(result.std_error[t]);
    }
    chart.series.push_back(std::move(series));
  }
  csv.write_file(output_path(config, "regret_curves.csv"));
  write_line_chart(output_path(config, "regret_curves.svg"), chart);
  return 0;
}

int cmd_sweep(const std::string& config_path, const Overrides& ov,
              const std::optional<std::string>& parameter_flag,
              const std::optional<std::vector<double>>& grid_flag) {
  ExperimentConfig config = load_config(config_path, ov);
  if (parameter_flag || grid_flag) {
    if (!config.sweep) config.sweep.emplace();
    if (parameter_flag) config.sweep->parameter = *parameter_flag;
    if (grid_flag) config.sweep->grid = *grid_flag;
  }
  if (!config.sweep) throw ConfigError("sweep: no sweep specified in config or flags");
  config.validate();

  const auto points = sweep(config, config.sweep->parameter, config.sweep->grid);
  CsvWriter csv({"grid_value", "series_name", "value", "std_error"});
  std::map<std::string, ChartSeries> series_map;
  std::vector<std::string> series_order;
  const auto append = [&](double x, const std::string& name, double value, double se) {
    csv.add_row({CsvWriter::cell(x), name, CsvWriter::cell(value), CsvWriter::cell(se)});
    if (series_map.find(name) == series_map.end()) {
      series_map[name].name = name;
      series_order.push_back(name);
    }
    series_map[name].x.push_back(x);
    series_map[name].y.push_back(value);
    series_map[name].y_err.push_back(se);
  };
  for (const auto& point : points) {
    for (std::size_t p = 0; p < point.policy_names.size(); ++p) {
      const auto& result = point.results[p];
      append(point.grid_value, "regret_" + point.policy_names[p],
             result.mean_cum_regret.back(), result.std_error.back());
    }
    for (const auto& [name, value] : point.bound_values) {
      append(point.grid_value, name, value, 0.0);
    }
  }
  csv.write_file(output_path(config, "sweep.csv"));

  ChartSpec chart;
  chart.title = "Regret and bounds vs " + config.sweep->parameter;
  chart.x_label = config.sweep->parameter;
  chart.y_label = "regret at horizon";
  for (const auto& name : series_order) chart.series.push_back(series_map[name]);
  write_line_chart(output_path(config, "sweep.svg"), chart);
  return 0;
}

std::vector<std::string> default_bounds(const ExperimentConfig& config) {
  switch (config.family) {
    case Family::gaussian:
      return {"thm1_leading", "ucb1_leading", "complexity_asymptotic", "complexity_range_sup",
              "lemma3",       "corollary2",   "appendix_c",            "thm4",
              "sqrt_karmed"};
    case Family::bernoulli:
      return {"thm5_first", "thm5_second"};
    case Family::linear:
      return {"thm6", "sqrt_linear", "lemma8_budget"};
  }
  return {};
}

int cmd_bounds(const std::string& config_path, const Overrides& ov) {
  const ExperimentConfig config = load_config(config_path, ov);
  std::vector<std::string> names = config.bounds;
  if (names.empty()) names = default_bounds(config);

  const double delta = config.resolved_delta();
  const double epsilon = config.resolved_epsilon();
  const std::int64_t n = config.horizon;
  RngStream root(config.master_seed, kBoundsRoot);
  bounds::ComplexityTermSpec asymptotic{bounds::XiMode::asymptotic, config.mc_samples};
  bounds::ComplexityTermSpec range_sup{bounds::XiMode::range_supremum, config.mc_samples};

  CsvWriter csv({"name", "value", "std_error", "components", "error"});
  std::uint64_t stream = 0;
  for (const auto& name : names) {
    bounds::BoundEstimate estimate;
    std::string error;
    try {
      RngStream rng = root.substream(stream++);
      if (config.family == Family::gaussian) {
        const auto prior = std::get<GaussianKArmedPrior>(config.build_prior());
        if (name == "thm1_leading") {
          estimate = bounds::thm1_leading_term(prior, config.sigma, delta, epsilon, n,
                                               config.mc_samples, rng);
        } else if (name == "ucb1_leading") {
          estimate = bounds::ucb1_gap_leading_term(prior, config.sigma, delta, epsilon,
                                                   config.mc_samples, rng);
        } else if (name == "complexity_asymptotic") {
          estimate = bounds::complexity_term(prior, asymptotic, n, rng);
        } else if (name == "complexity_range_sup") {
          estimate = bounds::complexity_term(prior, range_sup, n, rng);
        } else if (name == "lemma3") {
          estimate = bounds::lemma3_upper_bound(prior);
        } else if (name == "corollary2") {
          estimate = bounds::corollary2_bound(prior, config.sigma, delta, n, range_sup, rng);
        } else if (name == "appendix_c") {
          estimate = bounds::appendix_c_small_sigma0_bound(config.sigma0, delta, n,
                                                           config.num_actions);
        } else if (name == "thm4") {
          estimate = bounds::thm4_ucb1_bound(prior, config.sigma, delta, n, range_sup, rng);
        } else if (name == "sqrt_karmed") {
          estimate = bounds::sqrt_bound_karmed(config.sigma, config.sigma0, config.num_actions, n);
        } else {
          throw ConfigError("bounds: unknown bound '" + name + "' for the gaussian family");
        }
      } else if (config.family == Family::bernoulli) {
        const auto prior = std::get<BetaPerArmPrior>(config.build_prior());
        if (name == "thm5_first") {
          estimate =
              bounds::thm5_bernoulli_bounds(prior, delta, epsilon, n, asymptotic, rng).first;
        } else if (name == "thm5_second") {
          estimate =
              bounds::thm5_bernoulli_bounds(prior, delta, epsilon, n, range_sup, rng).second;
        } else {
          throw ConfigError("bounds: unknown bound '" + name + "' for the bernoulli family");
        }
      } else {
        const auto prior = std::get<LinearGaussianPrior>(config.build_prior());
        RngStream action_rng(config.master_seed, 1);
        const auto actions = std::get<FeaturizedActions>(config.build_action_set(action_rng));
        if (name == "thm6") {
          estimate = bounds::thm6_linear_bound(prior, actions, config.sigma, delta, epsilon, n,
                                               config.mc_samples, rng);
        } else if (name == "sqrt_linear") {
          estimate = bounds::sqrt_bound_linear(config.sigma, bounds::sigma0_max(prior, actions),
                                               config.dim, n, delta);
        } else if (name == "lemma8_budget") {
          estimate.value = bounds::lemma8_variance_budget(
              config.sigma, bounds::sigma0_max(prior, actions), config.dim, n);
          estimate.components["leading"] = estimate.value;
        } else {
          throw ConfigError("bounds: unknown bound '" + name + "' for the linear family");
        }
      }
    } catch (const bounds::ThresholdError&) {
      error = (name == "corollary2") ? "use_appendix_c"
              : (name == "appendix_c") ? "use_corollary2"
                                       : "threshold_violation";
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      error = e.what();
    }
    if (error.empty()) {
      csv.add_row({name, CsvWriter::cell(estimate.value), CsvWriter::cell(estimate.std_error),
                   components_cell(estimate), ""});
    } else {
      csv.add_row({name, "", "", "", error});
    }
  }
  csv.write_file(output_path(config, "bounds.csv"));
  return 0;
}

int cmd_bakeoff(const std::string& noise_name, std::int64_t runs, std::uint64_t seed,
                const std::string& out_dir, int threads) {
  NoiseKind noise;
  if (noise_name == "gaussian") noise = NoiseKind::gaussian;
  else if (noise_name == "rademacher") noise = NoiseKind::rademacher;
  else throw ConfigError("bakeoff: unknown noise kind '" + noise_name + "'");
  if (runs < 1) throw ConfigError("bakeoff: runs must be >= 1");

  const auto rows = bakeoff_grid(noise, runs, seed, threads);
  CsvWriter csv({"K", "sigma", "prior_gap", "sigma0", "regret_ucb1", "regret_bayesucb",
                 "difference", "std_error"});
  ChartSeries series;
  series.name = "regret(ucb1) - regret(bayesucb)";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    csv.add_row({CsvWriter::cell(row.num_actions), CsvWriter::cell(row.sigma),
                 CsvWriter::cell(row.prior_gap), CsvWriter::cell(row.sigma0),
                 CsvWriter::cell(row.regret_ucb1), CsvWriter::cell(row.regret_bayes_ucb),
                 CsvWriter::cell(row.difference), CsvWriter::cell(row.std_error)});
    series.x.push_back(static_cast<double>(i + 1));
    series.y.push_back(row.difference);
    series.y_err.push_back(row.std_error);
  }
  std::filesystem::create_directories(out_dir);
  csv.write_file((std::filesystem::path(out_dir) / "bakeoff.csv").string());

  ChartSpec chart;
  chart.title = std::string("Regret difference, ") + noise_name + " noise";
  chart.x_label = "instance (sorted by difference)";
  chart.y_label = "regret difference";
  chart.series.push_back(std::move(series));
  write_line_chart((std::filesystem::path(out_dir) / "bakeoff.svg").string(), chart);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian UCB bandit simulator and regret-bound calculator"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;

  auto* simulate = app.add_subcommand("simulate", "Run an experiment and emit regret curves");
  simulate->add_option("--config", config_path, "Config file")->required();
  add_override_flags(simulate, ov);

  std::optional<std::string> sweep_parameter;
  std::optional<std::vector<double>> sweep_grid;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep a prior parameter and emit regret + bounds");
  sweep_cmd->add_option("--config", config_path, "Config file")->required();
  sweep_cmd->add_option("--parameter", sweep_parameter, "sigma0 or prior_gap");
  sweep_cmd->add_option("--grid", sweep_grid, "Comma-separated grid values")->delimiter(',');
  add_override_flags(sweep_cmd, ov);

  auto* bounds_cmd = app.add_subcommand("bounds", "Evaluate every regret bound for a config");
  bounds_cmd->add_option("--config", config_path, "Config file")->required();
  add_override_flags(bounds_cmd, ov);

  std::string bakeoff_noise = "gaussian";
  std::int64_t bakeoff_runs = 1000;
  std::uint64_t bakeoff_seed = 1;
  std::string bakeoff_out = ".";
  int bakeoff_threads = 0;
  auto* bakeoff_cmd = app.add_subcommand("bakeoff", "Run the 81-instance comparison grid");
  bakeoff_cmd->add_option("--noise", bakeoff_noise, "gaussian or rademacher");
  bakeoff_cmd->add_option("--runs", bakeoff_runs, "Runs per instance");
  bakeoff_cmd->add_option("--seed", bakeoff_seed, "Master seed");
  bakeoff_cmd->add_option("--out", bakeoff_out, "Output directory");
  bakeoff_cmd->add_option("--threads", bakeoff_threads, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(config_path, ov);
    if (sweep_cmd->parsed()) return cmd_sweep(config_path, ov, sweep_parameter, sweep_grid);
    if (bounds_cmd->parsed()) return cmd_bounds(config_path, ov);
    if (bakeoff_cmd->parsed()) {
      return cmd_bakeoff(bakeoff_noise, bakeoff_runs, bakeoff_seed, bakeoff_out, bakeoff_threads);
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
