#include "bayesucb/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "bayesucb/bounds.hpp"

namespace bayesucb {

namespace {

// Substream roles, fixed across the artifact.
constexpr std::uint64_t kRunsRoot = 0;
constexpr std::uint64_t kActionSetStream = 1;
constexpr std::uint64_t kBoundsRoot = 2;

constexpr std::uint64_t kInstanceSub = 0;
constexpr std::uint64_t kRewardSub = 1;

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Streaming per-round mean/variance over runs; merge order is fixed by the
// caller so aggregation is thread-count invariant.
struct CurveAccumulator {
  std::int64_t count = 0;
  std::vector<double> mean;
  std::vector<double> m2;

  void init(std::size_t n) {
    mean.assign(n, 0.0);
    m2.assign(n, 0.0);
  }
  void add(const std::vector<double>& curve) {
    ++count;
    const double inv = 1.0 / static_cast<double>(count);
    for (std::size_t i = 0; i < curve.size(); ++i) {
      const double d1 = curve[i] - mean[i];
      mean[i] += d1 * inv;
      m2[i] += d1 * (curve[i] - mean[i]);
    }
  }
  void merge(const CurveAccumulator& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(count);
    const double nb = static_cast<double>(other.count);
    for (std::size_t i = 0; i < mean.size(); ++i) {
      const double delta = other.mean[i] - mean[i];
      mean[i] += delta * nb / (na + nb);
      m2[i] += other.m2[i] + delta * delta * na * nb / (na + nb);
    }
    count += other.count;
  }
};

struct ScalarAccumulator {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double d1 = x - mean;
    mean += d1 / static_cast<double>(count);
    m2 += d1 * (x - mean);
  }
  void merge(const ScalarAccumulator& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(count);
    const double nb = static_cast<double>(other.count);
    const double delta = other.mean - mean;
    mean += delta * nb / (na + nb);
    m2 += other.m2 + delta * delta * na * nb / (na + nb);
    count += other.count;
  }
  double std_error() const {
    if (count < 2) return 0.0;
    return std::sqrt(m2 / (static_cast<double>(count) * static_cast<double>(count - 1)));
  }
};

RngStream run_stream(const ExperimentConfig& config, std::int64_t run_index) {
  return RngStream(config.master_seed, kRunsRoot).substream(static_cast<std::uint64_t>(run_index));
}

}  // namespace

void parallel_blocks(std::int64_t count, std::int64_t block_size, int threads,
                     const std::function<void(std::int64_t, std::int64_t, std::size_t)>&
                         compute_block) {
  if (count <= 0) return;
  block_size = std::max<std::int64_t>(1, block_size);
  const std::size_t num_blocks =
      static_cast<std::size_t>((count + block_size - 1) / block_size);
  const int workers = std::min<int>(resolve_threads(threads), static_cast<int>(num_blocks));

  std::atomic<std::size_t> next_block{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t b = next_block.fetch_add(1);
      if (b >= num_blocks) return;
      const std::int64_t begin = static_cast<std::int64_t>(b) * block_size;
      const std::int64_t end = std::min<std::int64_t>(begin + block_size, count);
      compute_block(begin, end, b);
    }
  };

  if (workers <= 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

RunDiagnostics run_episode(const Environment& env, const PolicyConfig& policy_config,
                           std::int64_t horizon, RngStream rng, bool diagnostics_on) {
  if (horizon < 1) throw std::invalid_argument("run_episode: horizon must be >= 1");
  const auto policy = make_policy(policy_config, env.instance().action_set);
  RngStream reward_rng = rng.substream(kRewardSub);

  const Eigen::VectorXd means = env.instance().mean_rewards();
  const double best_mean = means.maxCoeff();
  const bool linear = std::holds_alternative<FeaturizedActions>(env.instance().action_set);

  RunDiagnostics diag;
  diag.cum_regret.resize(horizon);
  diag.pulls.assign(env.num_actions(), 0);
  if (diagnostics_on) diag.confidence_failed.assign(horizon, 0);

  double regret = 0.0;
  for (std::int64_t t = 0; t < horizon; ++t) {
    const int action = policy->select_action();
    if (diagnostics_on) {
      const bool held = policy->confidence_event_holds(env.instance());
      if (!held) {
        diag.all_confidence_held = false;
        diag.confidence_failed[t] = 1;
      }
      if (linear) diag.variance_ledger += policy->action_posterior_variance(action);
    }
    const double reward = env.sample_reward(action, reward_rng);
    policy->update(action, reward);
    regret += best_mean - means[action];
    diag.cum_regret[t] = regret;
    diag.pulls[action] += 1;
  }
  return diag;
}

ExperimentResult bayes_regret(const ExperimentConfig& config, std::size_t policy_index) {
  config.validate();
  if (policy_index >= config.policies.size()) {
    throw std::invalid_argument("bayes_regret: policy index out of range");
  }
  const Prior prior = config.build_prior();
  RngStream action_rng(config.master_seed, kActionSetStream);
  const ActionSet actions = config.build_action_set(action_rng);
  const EnvironmentKind env_kind = config.environment_kind();
  const PolicyConfig policy_config = config.policy_config(config.policies[policy_index]);

  const std::int64_t block_size = 32;
  const std::size_t num_blocks =
      static_cast<std::size_t>((config.num_runs + block_size - 1) / block_size);
  std::vector<CurveAccumulator> partials(num_blocks);

  parallel_blocks(config.num_runs, block_size, config.threads,
                  [&](std::int64_t begin, std::int64_t end, std::size_t block) {
                    CurveAccumulator acc;
                    acc.init(static_cast<std::size_t>(config.horizon));
                    for (std::int64_t r = begin; r < end; ++r) {
                      RngStream stream = run_stream(config, r);
                      RngStream instance_rng = stream.substream(kInstanceSub);
                      BanditInstance instance = sample_instance(prior, actions, instance_rng);
                      Environment env(env_kind, config.sigma, std::move(instance));
                      const RunDiagnostics diag =
                          run_episode(env, policy_config, config.horizon, stream, false);
                      acc.add(diag.cum_regret);
                    }
                    partials[block] = std::move(acc);
                  });

  CurveAccumulator total;
  total.init(static_cast<std::size_t>(config.horizon));
  for (const auto& p : partials) total.merge(p);

  ExperimentResult result;
  result.num_runs = total.count;
  result.config_echo = config;
  result.mean_cum_regret = total.mean;
  result.std_error.resize(total.mean.size());
  for (std::size_t i = 0; i < total.mean.size(); ++i) {
    result.std_error[i] =
        total.count < 2
            ? 0.0
            : std::sqrt(total.m2[i] / (static_cast<double>(total.count) *
                                       static_cast<double>(total.count - 1)));
  }
  return result;
}

std::vector<SweepPoint> sweep(const ExperimentConfig& base_config, const std::string& parameter,
                              const std::vector<double>& grid) {
  if (grid.empty()) throw ConfigError("sweep: empty grid");
  std::vector<SweepPoint> points;
  points.reserve(grid.size());
  for (const double value : grid) {
    const ExperimentConfig config = base_config.with_parameter(parameter, value);
    config.validate();
    SweepPoint point;
    point.grid_value = value;
    point.policy_names = config.policies;
    for (std::size_t p = 0; p < config.policies.size(); ++p) {
      point.results.push_back(bayes_regret(config, p));
    }

    const double delta = config.resolved_delta();
    const double epsilon = config.resolved_epsilon();
    RngStream bounds_rng(config.master_seed, kBoundsRoot);
    if (config.family == Family::gaussian || config.family == Family::bernoulli) {
      if (config.family == Family::gaussian) {
        const auto prior = std::get<GaussianKArmedPrior>(config.build_prior());
        const auto thm1 = bounds::thm1_leading_term(prior, config.sigma, delta, epsilon,
                                                    config.horizon, config.mc_samples,
                                                    bounds_rng.substream(0));
        point.bound_values.emplace_back("bound_thm1_leading", thm1.value);
        const auto ucb1 = bounds::ucb1_gap_leading_term(prior, config.sigma, delta, epsilon,
                                                        config.mc_samples, bounds_rng.substream(1));
        point.bound_values.emplace_back("bound_ucb1_leading", ucb1.value);
        const auto sqrt_bound =
            bounds::sqrt_bound_karmed(config.sigma, config.sigma0, config.num_actions,
                                      config.horizon);
        point.bound_values.emplace_back("bound_sqrt_karmed", sqrt_bound.value);
      }
    } else {
      const auto prior = std::get<LinearGaussianPrior>(config.build_prior());
      RngStream action_rng(config.master_seed, kActionSetStream);
      const auto actions = std::get<FeaturizedActions>(config.build_action_set(action_rng));
      const auto thm6 = bounds::thm6_linear_bound(prior, actions, config.sigma, delta, epsilon,
                                                  config.horizon, config.mc_samples,
                                                  bounds_rng.substream(0));
      point.bound_values.emplace_back("bound_thm6_leading", thm6.components.at("leading"));
      const double s0max = bounds::sigma0_max(prior, actions);
      const auto sqrt_bound =
          bounds::sqrt_bound_linear(config.sigma, s0max, config.dim, config.horizon, delta);
      point.bound_values.emplace_back("bound_sqrt_linear", sqrt_bound.value);
    }
    points.push_back(std::move(point));
  }
  return points;
}

std::vector<BakeoffRow> bakeoff_grid(NoiseKind noise, std::int64_t runs_per_cell,
                                     std::uint64_t master_seed, int threads) {
  if (runs_per_cell < 1) throw std::invalid_argument("bakeoff_grid: runs must be >= 1");
  const double grid_k[] = {5, 10, 20};
  const double grid_sigma[] = {0.5, 1.0, 2.0};
  const double grid_gap[] = {0.5, 1.0, 2.0};
  const double grid_sigma0[] = {0.5, 1.0, 2.0};
  constexpr std::int64_t horizon = 1000;

  std::vector<BakeoffRow> rows;
  std::uint64_t cell = 0;
  for (double k : grid_k) {
    for (double sigma : grid_sigma) {
      for (double gap : grid_gap) {
        for (double sigma0 : grid_sigma0) {
          ExperimentConfig config;
          config.family = Family::gaussian;
          config.noise = noise;
          config.num_actions = static_cast<int>(k);
          config.sigma = sigma;
          config.prior_gap = gap;
          config.sigma0 = sigma0;
          config.horizon = horizon;
          config.num_runs = runs_per_cell;
          config.master_seed = master_seed;
          config.threads = threads;

          const Prior prior = config.build_prior();
          const ActionSet actions = IndexedActions(config.num_actions);
          const PolicyConfig bayes = config.policy_config("bayesucb");
          const PolicyConfig ucb1 = config.policy_config("ucb1");
          const EnvironmentKind env_kind = config.environment_kind();

          const std::int64_t block_size = 32;
          const std::size_t num_blocks =
              static_cast<std::size_t>((runs_per_cell + block_size - 1) / block_size);
          struct CellPartial {
            ScalarAccumulator diff, bayes_regret, ucb1_regret;
          };
          std::vector<CellPartial> partials(num_blocks);
          // Per-cell run streams hang off a cell-specific root so every cell
          // sees independent draws; both policies replay the same instance
          // and noise within a run (common random numbers).
          RngStream cell_root = RngStream(master_seed, kRunsRoot).substream(0x10000 + cell);

          parallel_blocks(runs_per_cell, block_size, threads,
                          [&](std::int64_t begin, std::int64_t end, std::size_t block) {
                            CellPartial acc;
                            for (std::int64_t r = begin; r < end; ++r) {
                              RngStream stream = cell_root.substream(r);
                              RngStream instance_rng = stream.substream(kInstanceSub);
                              BanditInstance instance =
                                  sample_instance(prior, actions, instance_rng);
                              Environment env(env_kind, sigma, std::move(instance));
                              const auto diag_bayes =
                                  run_episode(env, bayes, horizon, stream, false);
                              const auto diag_ucb1 =
                                  run_episode(env, ucb1, horizon, stream, false);
                              const double rb = diag_bayes.cum_regret.back();
                              const double ru = diag_ucb1.cum_regret.back();
                              acc.bayes_regret.add(rb);
                              acc.ucb1_regret.add(ru);
                              acc.diff.add(ru - rb);
                            }
                            partials[block] = std::move(acc);
                          });

          CellPartial total;
          for (const auto& p : partials) {
            total.diff.merge(p.diff);
            total.bayes_regret.merge(p.bayes_regret);
            total.ucb1_regret.merge(p.ucb1_regret);
          }

          BakeoffRow row;
          row.num_actions = config.num_actions;
          row.sigma = sigma;
          row.prior_gap = gap;
          row.sigma0 = sigma0;
          row.regret_bayes_ucb = total.bayes_regret.mean;
          row.regret_ucb1 = total.ucb1_regret.mean;
          row.difference = total.diff.mean;
          row.std_error = total.diff.std_error();
          rows.push_back(row);
          ++cell;
        }
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const BakeoffRow& a, const BakeoffRow& b) {
    return a.difference < b.difference;
  });
  return rows;
}

}  // namespace bayesucb
