#include "bayesucb/policies.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bayesucb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int argmax_lowest_index(const std::vector<double>& values) {
  int best = 0;
  for (int a = 1; a < static_cast<int>(values.size()); ++a) {
    if (values[a] > values[best]) best = a;
  }
  return best;
}

}  // namespace

void PolicyConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("PolicyConfig: delta must lie in (0, 1)");
  }
  switch (kind) {
    case PolicyKind::ucb1:
      if (!(sigma > 0.0)) throw std::invalid_argument("PolicyConfig: ucb1 needs sigma > 0");
      break;
    case PolicyKind::bayes_ucb_gaussian:
      if (!(sigma > 0.0)) throw std::invalid_argument("PolicyConfig: gaussian needs sigma > 0");
      if (!prior || !std::holds_alternative<GaussianKArmedPrior>(*prior)) {
        throw std::invalid_argument("PolicyConfig: gaussian policy needs a Gaussian prior");
      }
      break;
    case PolicyKind::bayes_ucb_bernoulli:
      if (!prior || !std::holds_alternative<BetaPerArmPrior>(*prior)) {
        throw std::invalid_argument("PolicyConfig: bernoulli policy needs a Beta prior");
      }
      break;
    case PolicyKind::bayes_ucb_linear:
      if (!(sigma > 0.0)) throw std::invalid_argument("PolicyConfig: linear needs sigma > 0");
      if (!prior || !std::holds_alternative<LinearGaussianPrior>(*prior)) {
        throw std::invalid_argument("PolicyConfig: linear policy needs a linear Gaussian prior");
      }
      break;
  }
}

// ---------------------------------------------------------------------------
// Gaussian arms; UCB1 is the sigma0 = infinity limit with forced
// initialization, sharing this code path.
// ---------------------------------------------------------------------------

GaussianBayesUcbPolicy::GaussianBayesUcbPolicy(Eigen::VectorXd prior_mu0, double sigma0,
                                               double sigma, double delta,
                                               bool forced_initialization)
    : mu0_(std::move(prior_mu0)),
      inv_sigma0_sq_(std::isinf(sigma0) ? 0.0 : 1.0 / (sigma0 * sigma0)),
      inv_sigma_sq_(1.0 / (sigma * sigma)),
      two_log_one_over_delta_(2.0 * std::log(1.0 / delta)),
      forced_initialization_(forced_initialization) {
  if (mu0_.size() < 1) throw std::invalid_argument("GaussianBayesUcbPolicy: no arms");
  if (!(sigma > 0.0)) throw std::invalid_argument("GaussianBayesUcbPolicy: sigma must be positive");
  if (!(sigma0 > 0.0)) throw std::invalid_argument("GaussianBayesUcbPolicy: sigma0 must be positive");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("GaussianBayesUcbPolicy: delta must lie in (0, 1)");
  }
  arms_.resize(mu0_.size());
  cached_index_.resize(mu0_.size());
  for (int a = 0; a < num_actions(); ++a) refresh(a);
}

void GaussianBayesUcbPolicy::refresh(int action) {
  auto& arm = arms_[action];
  const double precision = inv_sigma0_sq_ + inv_sigma_sq_ * static_cast<double>(arm.n_pulls);
  if (precision == 0.0) {
    arm.post_var = kInf;
    arm.post_mean = 0.0;
    cached_index_[action] = kInf;
    return;
  }
  arm.post_var = 1.0 / precision;
  arm.post_mean = arm.post_var * (inv_sigma0_sq_ * mu0_[action] + inv_sigma_sq_ * arm.sum_rewards);
  cached_index_[action] = arm.post_mean + std::sqrt(two_log_one_over_delta_ * arm.post_var);
}

double GaussianBayesUcbPolicy::confidence_width(int action) const {
  return std::sqrt(two_log_one_over_delta_ * arms_[action].post_var);
}

double GaussianBayesUcbPolicy::ucb_index(int action) const {
  if (arms_[action].n_pulls == 0 && inv_sigma0_sq_ == 0.0) {
    throw std::logic_error("ucb_index: undefined before the arm's first pull under a flat prior");
  }
  return cached_index_[action];
}

int GaussianBayesUcbPolicy::select_action() {
  if (forced_initialization_) {
    for (int a = 0; a < num_actions(); ++a) {
      if (arms_[a].n_pulls == 0) return a;
    }
  }
  return argmax_lowest_index(cached_index_);
}

void GaussianBayesUcbPolicy::update(int action, double reward) {
  if (action < 0 || action >= num_actions()) throw std::out_of_range("update: bad action");
  if (!std::isfinite(reward)) throw std::invalid_argument("update: reward must be finite");
  arms_[action].n_pulls += 1;
  arms_[action].sum_rewards += reward;
  refresh(action);
}

bool GaussianBayesUcbPolicy::confidence_event_holds(const BanditInstance& instance) const {
  for (int a = 0; a < num_actions(); ++a) {
    if (arms_[a].n_pulls == 0 && inv_sigma0_sq_ == 0.0) continue;  // infinite width
    if (std::abs(instance.mean_reward(a) - arms_[a].post_mean) > confidence_width(a)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Beta-Bernoulli arms.
// ---------------------------------------------------------------------------

BernoulliBayesUcbPolicy::BernoulliBayesUcbPolicy(const BetaPerArmPrior& prior, double delta)
    : log_one_over_delta_(std::log(1.0 / delta)) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("BernoulliBayesUcbPolicy: delta must lie in (0, 1)");
  }
  arms_.resize(prior.num_arms());
  cached_index_.resize(prior.num_arms());
  for (int a = 0; a < num_actions(); ++a) {
    arms_[a].alpha = prior.alpha[a];
    arms_[a].beta = prior.beta[a];
    refresh(a);
  }
}

double BernoulliBayesUcbPolicy::posterior_mean(int action) const {
  const auto& arm = arms_[action];
  return arm.alpha / (arm.alpha + arm.beta);
}

double BernoulliBayesUcbPolicy::confidence_width(int action) const {
  const auto& arm = arms_[action];
  return std::sqrt(log_one_over_delta_ / (2.0 * (arm.alpha + arm.beta + 1.0)));
}

void BernoulliBayesUcbPolicy::refresh(int action) {
  cached_index_[action] = posterior_mean(action) + confidence_width(action);
}

double BernoulliBayesUcbPolicy::ucb_index(int action) const { return cached_index_[action]; }

int BernoulliBayesUcbPolicy::select_action() { return argmax_lowest_index(cached_index_); }

void BernoulliBayesUcbPolicy::update(int action, double reward) {
  if (action < 0 || action >= num_actions()) throw std::out_of_range("update: bad action");
  if (reward != 0.0 && reward != 1.0) {
    throw std::invalid_argument("update: Bernoulli rewards must be 0 or 1");
  }
  arms_[action].alpha += reward;
  arms_[action].beta += 1.0 - reward;
  refresh(action);
}

bool BernoulliBayesUcbPolicy::confidence_event_holds(const BanditInstance& instance) const {
  for (int a = 0; a < num_actions(); ++a) {
    if (std::abs(instance.mean_reward(a) - posterior_mean(a)) > confidence_width(a)) return false;
  }
  return true;
}

double BernoulliBayesUcbPolicy::action_posterior_variance(int action) const {
  const auto& arm = arms_[action];
  const double s = arm.alpha + arm.beta;
  return arm.alpha * arm.beta / (s * s * (s + 1.0));
}

// ---------------------------------------------------------------------------
// Linear-Gaussian model. The posterior is kept in precision form and
// (post_mean, post_cov) are refreshed by a symmetric solve every update.
// ---------------------------------------------------------------------------

LinearBayesUcbPolicy::LinearBayesUcbPolicy(const LinearGaussianPrior& prior,
                                           const FeaturizedActions& actions, double sigma,
                                           double delta)
    : actions_(actions),
      inv_sigma_sq_(1.0 / (sigma * sigma)),
      two_log_one_over_delta_(2.0 * std::log(1.0 / delta)) {
  if (!(sigma > 0.0)) throw std::invalid_argument("LinearBayesUcbPolicy: sigma must be positive");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("LinearBayesUcbPolicy: delta must lie in (0, 1)");
  }
  if (prior.dim() != actions_.dim()) {
    throw std::invalid_argument("LinearBayesUcbPolicy: prior/action dimension mismatch");
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(prior.sigma0);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 0.0) {
    throw std::invalid_argument("LinearBayesUcbPolicy: Sigma0 must be positive definite");
  }
  const int d = prior.dim();
  posterior_.precision = ldlt.solve(Eigen::MatrixXd::Identity(d, d));
  posterior_.precision = 0.5 * (posterior_.precision + posterior_.precision.transpose()).eval();
  posterior_.weighted_sum = posterior_.precision * prior.theta0;
  refresh();
}

void LinearBayesUcbPolicy::refresh() {
  const int d = static_cast<int>(posterior_.precision.rows());
  Eigen::LDLT<Eigen::MatrixXd> ldlt(posterior_.precision);
  posterior_.post_cov = ldlt.solve(Eigen::MatrixXd::Identity(d, d));
  posterior_.post_cov = 0.5 * (posterior_.post_cov + posterior_.post_cov.transpose()).eval();
  posterior_.post_mean = posterior_.post_cov * posterior_.weighted_sum;
}

double LinearBayesUcbPolicy::action_posterior_variance(int action) const {
  const auto a = actions_.features.row(action);
  return a * posterior_.post_cov * a.transpose();
}

double LinearBayesUcbPolicy::confidence_width(int action) const {
  return std::sqrt(two_log_one_over_delta_ * std::max(0.0, action_posterior_variance(action)));
}

double LinearBayesUcbPolicy::ucb_index(int action) const {
  return actions_.features.row(action).dot(posterior_.post_mean) + confidence_width(action);
}

int LinearBayesUcbPolicy::select_action() {
  int best = 0;
  double best_index = -kInf;
  for (int a = 0; a < num_actions(); ++a) {
    const double index = ucb_index(a);
    if (index > best_index) {
      best_index = index;
      best = a;
    }
  }
  return best;
}

void LinearBayesUcbPolicy::update(int action, double reward) {
  if (action < 0 || action >= num_actions()) throw std::out_of_range("update: bad action");
  if (!std::isfinite(reward)) throw std::invalid_argument("update: reward must be finite");
  const Eigen::VectorXd a = actions_.features.row(action).transpose();
  posterior_.precision.noalias() += inv_sigma_sq_ * a * a.transpose();
  posterior_.weighted_sum.noalias() += inv_sigma_sq_ * reward * a;
  refresh();
}

bool LinearBayesUcbPolicy::confidence_event_holds(const BanditInstance& instance) const {
  for (int a = 0; a < num_actions(); ++a) {
    const double estimate = actions_.features.row(a).dot(posterior_.post_mean);
    if (std::abs(instance.mean_reward(a) - estimate) > confidence_width(a)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

std::unique_ptr<Policy> make_policy(const PolicyConfig& config, const ActionSet& actions) {
  config.validate();
  const int k = num_actions(actions);
  switch (config.kind) {
    case PolicyKind::ucb1:
      return std::make_unique<GaussianBayesUcbPolicy>(Eigen::VectorXd::Zero(k), kInf, config.sigma,
                                                      config.delta, /*forced_initialization=*/true);
    case PolicyKind::bayes_ucb_gaussian: {
      const auto& prior = std::get<GaussianKArmedPrior>(*config.prior);
      if (prior.num_arms() != k) {
        throw std::invalid_argument("make_policy: prior arm count mismatch");
      }
      return std::make_unique<GaussianBayesUcbPolicy>(prior.mu0, prior.sigma0, config.sigma,
                                                      config.delta, /*forced_initialization=*/false);
    }
    case PolicyKind::bayes_ucb_bernoulli: {
      const auto& prior = std::get<BetaPerArmPrior>(*config.prior);
      if (prior.num_arms() != k) {
        throw std::invalid_argument("make_policy: prior arm count mismatch");
      }
      return std::make_unique<BernoulliBayesUcbPolicy>(prior, config.delta);
    }
    case PolicyKind::bayes_ucb_linear: {
      const auto& prior = std::get<LinearGaussianPrior>(*config.prior);
      const auto* feat = std::get_if<FeaturizedActions>(&actions);
      if (feat == nullptr) {
        throw std::invalid_argument("make_policy: linear policy needs featurized actions");
      }
      return std::make_unique<LinearBayesUcbPolicy>(prior, *feat, config.sigma, config.delta);
    }
  }
  throw std::logic_error("make_policy: unknown policy kind");
}

}  // namespace bayesucb
