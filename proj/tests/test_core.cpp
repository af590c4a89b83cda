#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bayesucb/core.hpp"
#include "oracles.hpp"

using namespace bayesucb;

TEST_CASE("clip_gap basics") {
  CHECK(clip_gap(0.5, 0.001) == 0.5);
  CHECK(clip_gap(0.0, 0.001) == 0.001);
  CHECK(clip_gap(0.001, 0.001) == 0.001);
  CHECK_THROWS_AS(clip_gap(-0.1, 0.001), std::invalid_argument);
  CHECK_THROWS_AS(clip_gap(0.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(clip_gap(0.1, -1.0), std::invalid_argument);
}

TEST_CASE("clip_gap is idempotent and monotone") {
  RngStream rng(7, 0);
  for (int i = 0; i < 200; ++i) {
    const double delta = 2.0 * rng.uniform01();
    const double eps = 1e-6 + rng.uniform01();
    const double clipped = clip_gap(delta, eps);
    CHECK(clip_gap(clipped, eps) == clipped);
    const double bigger_delta = delta + rng.uniform01();
    CHECK(clip_gap(bigger_delta, eps) >= clipped);
    const double bigger_eps = eps + rng.uniform01();
    CHECK(clip_gap(delta, bigger_eps) >= clipped);
  }
}

TEST_CASE("gap_profile on K-armed instances") {
  Eigen::VectorXd theta(3);
  theta << 1.0, 0.0, 0.0;
  const BanditInstance inst(theta, IndexedActions(3));
  const GapProfile profile = gap_profile(inst);
  CHECK(profile.optimal_index == 0);
  CHECK(profile.gaps[0] == 0.0);
  CHECK(profile.gaps[1] == 1.0);
  CHECK(profile.gaps[2] == 1.0);
  CHECK(profile.min_gap == 1.0);
}

TEST_CASE("gap_profile breaks exact ties toward the lowest index") {
  Eigen::VectorXd theta(2);
  theta << 0.3, 0.3;
  const GapProfile profile = gap_profile(BanditInstance(theta, IndexedActions(2)));
  CHECK(profile.optimal_index == 0);
  CHECK(profile.gaps[0] == 0.0);
  CHECK(profile.gaps[1] == 0.0);
  CHECK(profile.min_gap == 0.0);
}

TEST_CASE("gap_profile for featurized actions uses dot products") {
  Eigen::MatrixXd features(2, 2);
  features << 1.0, 0.0, 0.0, 1.0;
  Eigen::VectorXd theta(2);
  theta << 1.0, -1.0;
  const GapProfile profile =
      gap_profile(BanditInstance(theta, FeaturizedActions(features, 1.0)));
  CHECK(profile.optimal_index == 0);
  CHECK(profile.gaps[1] == doctest::Approx(2.0));
}

TEST_CASE("gap_profile of a single arm has infinite min_gap") {
  Eigen::VectorXd theta(1);
  theta << 0.4;
  const GapProfile profile = gap_profile(BanditInstance(theta, IndexedActions(1)));
  CHECK(std::isinf(profile.min_gap));
  CHECK(profile.gaps[0] == 0.0);
}

TEST_CASE("prior validation") {
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(GaussianKArmedPrior(mu, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(GaussianKArmedPrior(mu, -1.0), std::invalid_argument);
  Eigen::VectorXd bad = Eigen::VectorXd::Zero(2);
  bad[0] = -0.5;
  CHECK_THROWS_AS(BetaPerArmPrior(bad, Eigen::VectorXd::Ones(2)), std::invalid_argument);
  Eigen::MatrixXd not_psd(2, 2);
  not_psd << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(LinearGaussianPrior(Eigen::VectorXd::Zero(2), not_psd), std::invalid_argument);
}

TEST_CASE("sample_instance rejects mismatched prior/action pairings") {
  RngStream rng(1, 0);
  const GaussianKArmedPrior prior(Eigen::VectorXd::Zero(3), 1.0);
  Eigen::MatrixXd features = Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(sample_instance(prior, FeaturizedActions(features, 1.0), rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_instance(prior, IndexedActions(2), rng), std::invalid_argument);
  const LinearGaussianPrior lin(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3));
  CHECK_THROWS_AS(sample_instance(lin, IndexedActions(3), rng), std::invalid_argument);
}

TEST_CASE("degenerate Gaussian prior collapses onto its mean") {
  Eigen::VectorXd mu(3);
  mu << 0.2, -1.0, 4.0;
  const GaussianKArmedPrior prior(mu, 1e-14);
  RngStream rng(3, 5);
  const BanditInstance inst = sample_instance(prior, IndexedActions(3), rng);
  for (int a = 0; a < 3; ++a) CHECK(inst.theta[a] == doctest::Approx(mu[a]).epsilon(1e-9));
}

TEST_CASE("zero prior covariance collapses the linear prior onto theta0") {
  Eigen::VectorXd theta0(2);
  theta0 << 0.7, -0.3;
  const LinearGaussianPrior prior(theta0, Eigen::MatrixXd::Zero(2, 2));
  Eigen::MatrixXd features = Eigen::MatrixXd::Identity(2, 2);
  RngStream rng(11, 0);
  const BanditInstance inst = sample_instance(prior, FeaturizedActions(features, 1.0), rng);
  CHECK(inst.theta[0] == theta0[0]);
  CHECK(inst.theta[1] == theta0[1]);
}

TEST_CASE("sample_instance replays bitwise under the same stream") {
  const GaussianKArmedPrior prior(Eigen::VectorXd::Zero(4), 2.0);
  RngStream a(42, 9);
  RngStream b(42, 9);
  const BanditInstance ia = sample_instance(prior, IndexedActions(4), a);
  const BanditInstance ib = sample_instance(prior, IndexedActions(4), b);
  for (int i = 0; i < 4; ++i) CHECK(ia.theta[i] == ib.theta[i]);

  RngStream c(42, 10);
  const BanditInstance ic = sample_instance(prior, IndexedActions(4), c);
  CHECK(ia.theta != ic.theta);
}

TEST_CASE("sampled gaps are nonnegative with a zero gap at the optimum") {
  const GaussianKArmedPrior prior(Eigen::VectorXd::Zero(6), 1.5);
  for (int trial = 0; trial < 500; ++trial) {
    RngStream rng(short{5}, static_cast<std::uint64_t>(trial));
    const BanditInstance inst = sample_instance(prior, IndexedActions(6), rng);
    const GapProfile profile = gap_profile(inst);
    CHECK(profile.gaps[profile.optimal_index] == 0.0);
    CHECK(profile.gaps.minCoeff() >= 0.0);
    CHECK(profile.min_gap >= 0.0);
  }
}

TEST_CASE("uniform Beta prior matches its moment oracle over 1e6 draws") {
  const BetaPerArmPrior prior(Eigen::VectorXd::Ones(2), Eigen::VectorXd::Ones(2));
  RngStream rng(123, 0);
  oracles::RunningStat stat;
  constexpr int draws = 1000000;
  for (int i = 0; i < draws; ++i) {
    const BanditInstance inst = sample_instance(prior, IndexedActions(2), rng);
    stat.add(inst.theta[0]);
    CHECK(inst.theta[0] >= 0.0);
    CHECK(inst.theta[0] <= 1.0);
  }
  // E = alpha / (alpha + beta) = 1/2 for Beta(1, 1).
  const double se = std::sqrt(1.0 / 12.0 / draws);
  CHECK(std::abs(stat.mean - 0.5) < 3.0 * se);
}

TEST_CASE("prior moments match over 1e6 draws for all three variants") {
  constexpr int draws = 1000000;

  SUBCASE("gaussian") {
    Eigen::VectorXd mu(2);
    mu << 1.0, -2.0;
    const GaussianKArmedPrior prior(mu, 0.7);
    RngStream rng(2024, 0);
    oracles::RunningStat stat;
    for (int i = 0; i < draws; ++i) {
      const BanditInstance inst = sample_instance(prior, IndexedActions(2), rng);
      stat.add(inst.theta[1]);
    }
    CHECK(std::abs(stat.mean - (-2.0)) < 4.0 * 0.7 / std::sqrt(double(draws)));
    CHECK(std::abs(stat.variance() - 0.49) < 4.0 * 0.49 * std::sqrt(2.0 / (draws - 1.0)));
  }

  SUBCASE("beta") {
    Eigen::VectorXd a(1), b(1);
    a << 3.0;
    b << 5.0;
    const BetaPerArmPrior prior(a, b);
    RngStream rng(2025, 0);
    oracles::RunningStat stat;
    for (int i = 0; i < draws; ++i) {
      const BanditInstance inst = sample_instance(prior, IndexedActions(1), rng);
      stat.add(inst.theta[0]);
    }
    const double mean = 3.0 / 8.0;
    const double var = 3.0 * 5.0 / (64.0 * 9.0);
    CHECK(std::abs(stat.mean - mean) < 4.0 * std::sqrt(var / draws));
    CHECK(std::abs(stat.variance() - var) < 4.0 * var * std::sqrt(2.0 / (draws - 1.0)));
  }

  SUBCASE("linear") {
    Eigen::VectorXd theta0(2);
    theta0 << 0.5, 1.5;
    Eigen::MatrixXd cov(2, 2);
    cov << 1.0, 0.6, 0.6, 2.0;
    const LinearGaussianPrior prior(theta0, cov);
    Eigen::MatrixXd features = Eigen::MatrixXd::Identity(2, 2);
    const FeaturizedActions actions(features, 1.0);
    RngStream rng(2026, 0);
    oracles::RunningStat s0, s1, cross;
    for (int i = 0; i < draws; ++i) {
      const BanditInstance inst = sample_instance(prior, actions, rng);
      s0.add(inst.theta[0]);
      s1.add(inst.theta[1]);
      cross.add((inst.theta[0] - 0.5) * (inst.theta[1] - 1.5));
    }
    CHECK(std::abs(s0.mean - 0.5) < 4.0 * std::sqrt(1.0 / draws));
    CHECK(std::abs(s1.mean - 1.5) < 4.0 * std::sqrt(2.0 / draws));
    CHECK(std::abs(s0.variance() - 1.0) < 4.0 * std::sqrt(2.0 / (draws - 1.0)));
    CHECK(std::abs(s1.variance() - 2.0) < 4.0 * 2.0 * std::sqrt(2.0 / (draws - 1.0)));
    CHECK(std::abs(cross.mean - 0.6) < 4.0 * cross.std_error());
  }
}

TEST_CASE("substreams are reproducible and distinct") {
  RngStream root(99, 4);
  RngStream a = root.substream(0);
  RngStream b = root.substream(0);
  RngStream c = root.substream(1);
  CHECK(a.next_u64() == b.next_u64());
  CHECK(a.next_u64() != c.next_u64());

  // Forking is independent of parent consumption.
  RngStream root2(99, 4);
  root2.next_u64();
  CHECK(root2.substream(0).next_u64() == root.substream(0).next_u64());
}
