#pragma once

#include <Eigen/Dense>
#include <limits>
#include <stdexcept>
#include <variant>

#include "bayesucb/rng.hpp"

namespace bayesucb {

// Independent Gaussian prior over K arm means: theta_a ~ N(mu0_a, sigma0^2).
struct GaussianKArmedPrior {
  Eigen::VectorXd mu0;
  double sigma0 = 1.0;

  GaussianKArmedPrior() : mu0(Eigen::VectorXd::Zero(1)) {}
  GaussianKArmedPrior(Eigen::VectorXd mu0_in, double sigma0_in);
  int num_arms() const { return static_cast<int>(mu0.size()); }
};

// Independent Beta(alpha_a, beta_a) prior per arm mean.
struct BetaPerArmPrior {
  Eigen::VectorXd alpha;
  Eigen::VectorXd beta;

  BetaPerArmPrior(Eigen::VectorXd alpha_in, Eigen::VectorXd beta_in);
  int num_arms() const { return static_cast<int>(alpha.size()); }
};

// Multivariate Gaussian prior over a shared linear parameter:
// theta ~ N(theta0, Sigma0). Sigma0 is symmetrized on construction and must
// be positive semi-definite.
struct LinearGaussianPrior {
  Eigen::VectorXd theta0;
  Eigen::MatrixXd sigma0;

  LinearGaussianPrior(Eigen::VectorXd theta0_in, Eigen::MatrixXd sigma0_in);
  int dim() const { return static_cast<int>(theta0.size()); }

  // Matrix square root S with S*S^T = Sigma0: Cholesky when positive
  // definite, symmetric eigen square root for singular PSD matrices.
  Eigen::MatrixXd sqrt_matrix() const;
};

using Prior = std::variant<GaussianKArmedPrior, BetaPerArmPrior, LinearGaussianPrior>;

// K arms addressed by index, no features.
struct IndexedActions {
  int num_actions = 1;

  IndexedActions() = default;
  explicit IndexedActions(int k);
};

// K feature vectors in d dimensions; rows of `features` are actions.
// `norm_bound` is the declared L with ||a||_2 <= L for every action.
struct FeaturizedActions {
  Eigen::MatrixXd features;
  double norm_bound = 1.0;

  FeaturizedActions(Eigen::MatrixXd features_in, double norm_bound_in);
  int num_actions() const { return static_cast<int>(features.rows()); }
  int dim() const { return static_cast<int>(features.cols()); }
};

using ActionSet = std::variant<IndexedActions, FeaturizedActions>;

int num_actions(const ActionSet& actions);

// One sampled bandit instance: the model parameter plus its action set.
// Mean rewards are theta_a for indexed actions and a^T theta for features.
struct BanditInstance {
  Eigen::VectorXd theta;
  ActionSet action_set;

  BanditInstance(Eigen::VectorXd theta_in, ActionSet action_set_in);

  int num_actions() const { return bayesucb::num_actions(action_set); }
  double mean_reward(int action) const;
  Eigen::VectorXd mean_rewards() const;
};

// Suboptimality gaps of one instance. gaps[optimal_index] == 0 and
// min_gap = min over non-optimal arms (+infinity when K == 1).
struct GapProfile {
  Eigen::VectorXd gaps;
  double min_gap = 0.0;
  int optimal_index = 0;
};

// max(delta, epsilon); keeps 1/gap terms finite under the prior.
double clip_gap(double delta, double epsilon);

// Draws theta from the prior. Per-arm priors pair with IndexedActions and
// the linear prior with FeaturizedActions.
BanditInstance sample_instance(const Prior& prior, const ActionSet& actions, RngStream& rng);

GapProfile gap_profile(const BanditInstance& instance);

}  // namespace bayesucb
