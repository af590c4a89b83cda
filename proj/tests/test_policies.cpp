#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bayesucb/environments.hpp"
#include "bayesucb/policies.hpp"
#include "oracles.hpp"

using namespace bayesucb;

namespace {

GaussianBayesUcbPolicy gaussian_policy(std::initializer_list<double> mu0, double sigma0,
                                       double sigma, double delta) {
  Eigen::VectorXd mu(static_cast<int>(mu0.size()));
  int i = 0;
  for (double m : mu0) mu[i++] = m;
  return GaussianBayesUcbPolicy(mu, sigma0, sigma, delta, false);
}

}  // namespace

TEST_CASE("Gaussian index with no data is prior mean plus prior width") {
  auto policy = gaussian_policy({0.0}, 1.0, 1.0, std::exp(-2.0));
  CHECK(policy.ucb_index(0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("Bernoulli index with no data under the uniform prior") {
  const BetaPerArmPrior prior(Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1));
  const BernoulliBayesUcbPolicy policy(prior, std::exp(-2.0));
  CHECK(policy.posterior_mean(0) == doctest::Approx(0.5));
  CHECK(policy.confidence_width(0) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("flat-prior width after two pulls") {
  GaussianBayesUcbPolicy policy(Eigen::VectorXd::Zero(1), INFINITY, 1.0, std::exp(-1.0), true);
  policy.update(0, 0.3);
  policy.update(0, -0.3);
  CHECK(policy.confidence_width(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(policy.arm_posterior(0).post_mean == doctest::Approx(0.0));
}

TEST_CASE("flat-prior index is undefined before the first pull") {
  GaussianBayesUcbPolicy policy(Eigen::VectorXd::Zero(2), INFINITY, 1.0, 0.01, true);
  CHECK_THROWS_AS(policy.ucb_index(0), std::logic_error);
  policy.update(0, 1.0);
  CHECK_NOTHROW(policy.ucb_index(0));
  CHECK_THROWS_AS(policy.ucb_index(1), std::logic_error);
}

TEST_CASE("select_action is the argmax with lowest-index ties") {
  auto policy = gaussian_policy({1.0, 2.0}, 1.0, 1.0, 0.01);
  CHECK(policy.select_action() == 1);

  auto symmetric = gaussian_policy({0.5, 0.5, 0.5}, 1.0, 1.0, 0.01);
  CHECK(symmetric.select_action() == 0);
}

TEST_CASE("forced initialization pulls arm t at round t") {
  GaussianBayesUcbPolicy policy(Eigen::VectorXd::Zero(5), INFINITY, 1.0, 0.01, true);
  for (int t = 0; t < 5; ++t) {
    const int action = policy.select_action();
    CHECK(action == t);
    policy.update(action, 10.0);  // high reward must not derail initialization
  }
  CHECK_NOTHROW(policy.select_action());
}

TEST_CASE("one Gaussian observation moves the posterior as Bayes says") {
  auto policy = gaussian_policy({0.0}, 1.0, 1.0, 0.01);
  policy.update(0, 2.0);
  const auto& arm = policy.arm_posterior(0);
  CHECK(arm.post_mean == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(arm.post_var == doctest::Approx(0.5).epsilon(1e-12));

  const auto grid = oracles::gaussian_posterior_by_grid(0.0, 1.0, 1.0, {2.0});
  CHECK(arm.post_mean == doctest::Approx(grid.mean).epsilon(1e-8));
  CHECK(arm.post_var == doctest::Approx(grid.var).epsilon(1e-8));
}

TEST_CASE("Beta counts increment on update") {
  const BetaPerArmPrior prior(Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1));
  BernoulliBayesUcbPolicy policy(prior, 0.01);
  policy.update(0, 1.0);
  CHECK(policy.arm_posterior(0).alpha == 2.0);
  CHECK(policy.arm_posterior(0).beta == 1.0);
  CHECK(policy.posterior_mean(0) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(policy.update(0, 0.5), std::invalid_argument);
}

TEST_CASE("1-d linear update equals the Gaussian arm update on the same numbers") {
  Eigen::MatrixXd features(1, 1);
  features << 1.0;
  const LinearGaussianPrior prior(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1));
  LinearBayesUcbPolicy linear(prior, FeaturizedActions(features, 1.0), 1.0, 0.01);
  linear.update(0, 2.0);
  CHECK(linear.posterior().post_mean[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(linear.posterior().post_cov(0, 0) == doctest::Approx(0.5).epsilon(1e-12));

  auto gaussian = gaussian_policy({0.0}, 1.0, 1.0, 0.01);
  gaussian.update(0, 2.0);
  CHECK(linear.posterior().post_mean[0] == doctest::Approx(gaussian.arm_posterior(0).post_mean));
  CHECK(linear.posterior().post_cov(0, 0) == doctest::Approx(gaussian.arm_posterior(0).post_var));
  CHECK(linear.ucb_index(0) == doctest::Approx(gaussian.ucb_index(0)).epsilon(1e-12));
}

TEST_CASE("conjugacy oracle: random 20-step histories match grid integration") {
  // A fast slice of the acceptance criterion; the acceptance suite runs 100.
  constexpr int histories = 8;
  constexpr int steps = 20;

  SUBCASE("gaussian") {
    for (int h = 0; h < histories; ++h) {
      RngStream rng(500 + h, 0);
      const double mu0 = 1.0 + rng.uniform01();
      const double sigma0 = 0.5 + rng.uniform01();
      const double sigma = 0.5 + rng.uniform01();
      auto policy = GaussianBayesUcbPolicy(Eigen::VectorXd::Constant(2, mu0), sigma0, sigma, 0.01,
                                           false);
      std::vector<double> rewards_arm0;
      for (int t = 0; t < steps; ++t) {
        const int action = static_cast<int>(rng.next_u64() % 2);
        const double reward = mu0 + sigma * rng.normal();
        policy.update(action, reward);
        if (action == 0) rewards_arm0.push_back(reward);
      }
      const auto grid = oracles::gaussian_posterior_by_grid(mu0, sigma0, sigma, rewards_arm0);
      const auto& arm = policy.arm_posterior(0);
      CHECK(std::abs(arm.post_mean - grid.mean) / std::abs(grid.mean) < 1e-6);
      CHECK(std::abs(arm.post_var - grid.var) / grid.var < 1e-6);
    }
  }

  SUBCASE("bernoulli") {
    for (int h = 0; h < histories; ++h) {
      RngStream rng(600 + h, 0);
      const double alpha = 1.0 + 3.0 * rng.uniform01();
      const double beta = 1.0 + 3.0 * rng.uniform01();
      BernoulliBayesUcbPolicy policy(
          BetaPerArmPrior(Eigen::VectorXd::Constant(2, alpha), Eigen::VectorXd::Constant(2, beta)),
          0.01);
      std::vector<double> rewards_arm0;
      for (int t = 0; t < steps; ++t) {
        const int action = static_cast<int>(rng.next_u64() % 2);
        const double reward = rng.uniform01() < 0.6 ? 1.0 : 0.0;
        policy.update(action, reward);
        if (action == 0) rewards_arm0.push_back(reward);
      }
      const auto grid = oracles::beta_posterior_by_grid(alpha, beta, rewards_arm0);
      const auto& arm = policy.arm_posterior(0);
      const double mean = arm.alpha / (arm.alpha + arm.beta);
      const double var = arm.alpha * arm.beta /
                         ((arm.alpha + arm.beta) * (arm.alpha + arm.beta) *
                          (arm.alpha + arm.beta + 1.0));
      CHECK(std::abs(mean - grid.mean) / grid.mean < 1e-6);
      CHECK(std::abs(var - grid.var) / grid.var < 1e-6);
    }
  }

  SUBCASE("linear d = 2") {
    for (int h = 0; h < 3; ++h) {
      RngStream rng(700 + h, 0);
      Eigen::Vector2d theta0(0.8 + rng.uniform01(), 1.2 + rng.uniform01());
      Eigen::Matrix2d cov;
      const double c = 0.3 * rng.uniform01();
      cov << 1.0, c, c, 0.8;
      Eigen::MatrixXd features(3, 2);
      features << 1.0, 0.0, 0.0, 1.0, std::sqrt(0.5), std::sqrt(0.5);
      const LinearGaussianPrior prior(theta0, cov);
      const FeaturizedActions actions(features, 1.0);
      LinearBayesUcbPolicy policy(prior, actions, 1.0, 0.01);

      std::vector<Eigen::Vector2d> taken;
      std::vector<double> rewards;
      for (int t = 0; t < steps; ++t) {
        const int action = static_cast<int>(rng.next_u64() % 3);
        const double reward = 1.0 + rng.normal();
        policy.update(action, reward);
        taken.push_back(features.row(action).transpose());
        rewards.push_back(reward);
      }
      const auto& post = policy.posterior();
      const Eigen::Vector2d halfwidth =
          12.0 * post.post_cov.diagonal().cwiseSqrt() + Eigen::Vector2d::Constant(1.0);
      const auto grid = oracles::linear_posterior_by_grid_2d(theta0, cov, 1.0, taken, rewards, 700,
                                                             post.post_mean, halfwidth);
      for (int i = 0; i < 2; ++i) {
        CHECK(std::abs(post.post_mean[i] - grid.mean[i]) / std::abs(grid.mean[i]) < 1e-6);
        CHECK(std::abs(post.post_cov(i, i) - grid.cov(i, i)) / grid.cov(i, i) < 1e-6);
      }
    }
  }
}

TEST_CASE("widths shrink as the arm's pull count grows, all else fixed") {
  auto policy = gaussian_policy({0.0, 0.0}, 2.0, 1.0, 0.01);
  double last = policy.confidence_width(0);
  CHECK(policy.arm_posterior(0).post_var <= 2.0 * 2.0);
  for (int i = 0; i < 50; ++i) {
    policy.update(0, 0.1);
    const double width = policy.confidence_width(0);
    CHECK(width < last);
    CHECK(policy.arm_posterior(0).post_var ==
          doctest::Approx(1.0 / (0.25 + policy.arm_posterior(0).n_pulls)).epsilon(1e-12));
    last = width;
  }
  // the untouched arm keeps its prior width
  CHECK(policy.confidence_width(1) == doctest::Approx(std::sqrt(2.0 * 4.0 * std::log(100.0))));

  const BetaPerArmPrior prior(Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1));
  BernoulliBayesUcbPolicy bernoulli(prior, 0.01);
  double blast = bernoulli.confidence_width(0);
  for (int i = 0; i < 50; ++i) {
    bernoulli.update(0, i % 2 == 0 ? 1.0 : 0.0);
    const double width = bernoulli.confidence_width(0);
    CHECK(width < blast);
    blast = width;
  }
}

TEST_CASE("linear policy on the canonical basis reproduces the K-armed policy") {
  constexpr int k = 4;
  const double sigma0 = 1.3, sigma = 0.9, delta = 0.02;
  Eigen::VectorXd mu0 = Eigen::VectorXd::Zero(k);
  GaussianBayesUcbPolicy karms(mu0, sigma0, sigma, delta, false);
  const LinearGaussianPrior prior(mu0, sigma0 * sigma0 * Eigen::MatrixXd::Identity(k, k));
  const FeaturizedActions basis(Eigen::MatrixXd::Identity(k, k), 1.0);
  LinearBayesUcbPolicy linear(prior, basis, sigma, delta);

  RngStream rng(31, 0);
  for (int t = 0; t < 60; ++t) {
    const int a_lin = linear.select_action();
    const int a_karm = karms.select_action();
    CHECK(a_lin == a_karm);
    for (int a = 0; a < k; ++a) {
      CHECK(linear.ucb_index(a) == doctest::Approx(karms.ucb_index(a)).epsilon(1e-10));
    }
    const double reward = 0.3 + rng.normal();
    linear.update(a_lin, reward);
    karms.update(a_lin, reward);
  }
}

TEST_CASE("shifting all prior means shifts indices by the shift and keeps choices") {
  const double shift = 2.0;
  auto base = gaussian_policy({0.4, -0.3, 0.9}, 1.0, 1.0, 0.01);
  auto shifted = gaussian_policy({0.4 + shift, -0.3 + shift, 0.9 + shift}, 1.0, 1.0, 0.01);
  RngStream rng(17, 0);
  for (int t = 0; t < 40; ++t) {
    for (int a = 0; a < 3; ++a) {
      CHECK(shifted.ucb_index(a) - base.ucb_index(a) == doctest::Approx(shift).epsilon(1e-10));
    }
    const int choice = base.select_action();
    CHECK(shifted.select_action() == choice);
    const double reward = rng.normal();
    base.update(choice, reward);
    shifted.update(choice, reward + shift);
  }
}

TEST_CASE("confidence event holds at the prior and fails on displacement") {
  auto policy = gaussian_policy({0.5, -0.5}, 1.0, 1.0, 0.01);
  Eigen::VectorXd theta(2);
  theta << 0.5, -0.5;
  CHECK(policy.confidence_event_holds(BanditInstance(theta, IndexedActions(2))));

  Eigen::VectorXd displaced(2);
  displaced << 0.5 + 10.0 * policy.confidence_width(0), -0.5;
  CHECK_FALSE(policy.confidence_event_holds(BanditInstance(displaced, IndexedActions(2))));
}

TEST_CASE("per-arm confidence failures at a fixed round stay below 2 delta") {
  // 1e5 (instance, history) pairs at t = 20.
  constexpr int pairs = 100000;
  constexpr int steps = 19;
  constexpr double delta = 0.05;
  constexpr int k = 2;
  const GaussianKArmedPrior prior(Eigen::VectorXd::Zero(k), 1.0);
  std::int64_t failures[k] = {0, 0};
  for (int p = 0; p < pairs; ++p) {
    RngStream rng(900, static_cast<std::uint64_t>(p));
    RngStream instance_rng = rng.substream(0);
    const BanditInstance inst = sample_instance(prior, IndexedActions(k), instance_rng);
    const Environment env(EnvironmentKind::gaussian_noise, 1.0, inst);
    GaussianBayesUcbPolicy policy(prior.mu0, prior.sigma0, 1.0, delta, false);
    RngStream reward_rng = rng.substream(1);
    for (int t = 0; t < steps; ++t) {
      const int action = policy.select_action();
      policy.update(action, env.sample_reward(action, reward_rng));
    }
    for (int a = 0; a < k; ++a) {
      if (std::abs(inst.theta[a] - policy.arm_posterior(a).post_mean) >
          policy.confidence_width(a)) {
        ++failures[a];
      }
    }
  }
  for (int a = 0; a < k; ++a) {
    const double freq = static_cast<double>(failures[a]) / pairs;
    const double se = std::sqrt(freq * (1.0 - freq) / pairs);
    CHECK(freq <= 2.0 * delta + 3.0 * se);
  }
}

TEST_CASE("linear posterior invariants: inverse pair and bounded spectrum") {
  RngStream rng(41, 0);
  const auto actions = std::get<FeaturizedActions>(make_linear_action_set(8, 3, rng));
  Eigen::MatrixXd cov(3, 3);
  cov << 2.0, 0.3, 0.0, 0.3, 1.0, 0.2, 0.0, 0.2, 0.5;
  const LinearGaussianPrior prior(Eigen::VectorXd::Zero(3), cov);
  LinearBayesUcbPolicy policy(prior, actions, 1.0, 0.01);
  const double lambda1_prior =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(cov).eigenvalues().maxCoeff();
  for (int t = 0; t < 40; ++t) {
    const int action = policy.select_action();
    policy.update(action, rng.normal());
    const auto& post = policy.posterior();
    const Eigen::MatrixXd should_be_identity = post.precision * post.post_cov;
    CHECK((should_be_identity - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-8);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(post.post_cov);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12);
    CHECK(es.eigenvalues().maxCoeff() <= lambda1_prior * (1.0 + 1e-10));
  }
}

TEST_CASE("policy config validation") {
  PolicyConfig config;
  config.kind = PolicyKind::ucb1;
  config.delta = 1.0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.delta = 0.5;
  config.sigma = 1.0;
  CHECK_NOTHROW(config.validate());
  config.kind = PolicyKind::bayes_ucb_gaussian;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);  // missing prior
  config.prior = GaussianKArmedPrior(Eigen::VectorXd::Zero(2), 1.0);
  CHECK_NOTHROW(config.validate());
}
