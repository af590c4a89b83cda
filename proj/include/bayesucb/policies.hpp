#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "bayesucb/core.hpp"

namespace bayesucb {

enum class PolicyKind {
  bayes_ucb_gaussian,
  bayes_ucb_bernoulli,
  bayes_ucb_linear,
  ucb1,
};

// ucb1 carries sigma and forced initialization but no prior; the Bayesian
// variants need a prior matching their conjugate family.
struct PolicyConfig {
  PolicyKind kind = PolicyKind::bayes_ucb_gaussian;
  double delta = 1e-3;
  double sigma = 1.0;
  std::optional<Prior> prior;

  void validate() const;
};

struct GaussianArmPosterior {
  std::int64_t n_pulls = 0;
  double sum_rewards = 0.0;
  double post_mean = 0.0;
  double post_var = 0.0;
};

struct BetaArmPosterior {
  double alpha = 1.0;
  double beta = 1.0;
};

struct LinearPosterior {
  Eigen::MatrixXd precision;     // Sigma0^{-1} + G_t
  Eigen::VectorXd weighted_sum;  // Sigma0^{-1} theta0 + sigma^{-2} sum A_l Y_l
  Eigen::VectorXd post_mean;
  Eigen::MatrixXd post_cov;
};

// One policy instance owns the sufficient statistics of a single run.
// select_action / update implement one round of the UCB loop; the index is
// posterior mean plus confidence width.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual int num_actions() const = 0;
  virtual double ucb_index(int action) const = 0;
  virtual int select_action() = 0;
  virtual void update(int action, double reward) = 0;

  // Diagnostics only: whether every arm's confidence interval covers the
  // true mean reward. The policy never reads theta when acting.
  virtual bool confidence_event_holds(const BanditInstance& instance) const = 0;

  // Posterior variance of the chosen action's mean-reward estimate,
  // ||a||^2_{Sigma_t} in the linear case; used for the variance ledger.
  virtual double action_posterior_variance(int action) const = 0;
};

class GaussianBayesUcbPolicy final : public Policy {
 public:
  // prior_mu0 empty + inv_sigma0_sq = 0 gives the flat-prior (UCB1) limit.
  GaussianBayesUcbPolicy(Eigen::VectorXd prior_mu0, double sigma0, double sigma, double delta,
                         bool forced_initialization);

  int num_actions() const override { return static_cast<int>(arms_.size()); }
  double ucb_index(int action) const override;
  int select_action() override;
  void update(int action, double reward) override;
  bool confidence_event_holds(const BanditInstance& instance) const override;
  double action_posterior_variance(int action) const override { return arms_[action].post_var; }

  const GaussianArmPosterior& arm_posterior(int action) const { return arms_[action]; }
  double confidence_width(int action) const;

 private:
  void refresh(int action);

  Eigen::VectorXd mu0_;
  double inv_sigma0_sq_;
  double inv_sigma_sq_;
  double two_log_one_over_delta_;
  bool forced_initialization_;
  std::vector<GaussianArmPosterior> arms_;
  std::vector<double> cached_index_;
};

class BernoulliBayesUcbPolicy final : public Policy {
 public:
  BernoulliBayesUcbPolicy(const BetaPerArmPrior& prior, double delta);

  int num_actions() const override { return static_cast<int>(arms_.size()); }
  double ucb_index(int action) const override;
  int select_action() override;
  void update(int action, double reward) override;
  bool confidence_event_holds(const BanditInstance& instance) const override;
  double action_posterior_variance(int action) const override;

  const BetaArmPosterior& arm_posterior(int action) const { return arms_[action]; }
  double posterior_mean(int action) const;
  double confidence_width(int action) const;

 private:
  void refresh(int action);

  double log_one_over_delta_;
  std::vector<BetaArmPosterior> arms_;
  std::vector<double> cached_index_;
};

class LinearBayesUcbPolicy final : public Policy {
 public:
  LinearBayesUcbPolicy(const LinearGaussianPrior& prior, const FeaturizedActions& actions,
                       double sigma, double delta);

  int num_actions() const override { return static_cast<int>(actions_.features.rows()); }
  double ucb_index(int action) const override;
  int select_action() override;
  void update(int action, double reward) override;
  bool confidence_event_holds(const BanditInstance& instance) const override;
  double action_posterior_variance(int action) const override;

  const LinearPosterior& posterior() const { return posterior_; }
  double confidence_width(int action) const;

 private:
  void refresh();

  FeaturizedActions actions_;
  double inv_sigma_sq_;
  double two_log_one_over_delta_;
  LinearPosterior posterior_;
};

std::unique_ptr<Policy> make_policy(const PolicyConfig& config, const ActionSet& actions);

}  // namespace bayesucb
