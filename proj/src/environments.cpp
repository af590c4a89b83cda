#include "bayesucb/environments.hpp"

#include <cmath>
#include <stdexcept>

namespace bayesucb {

Environment::Environment(EnvironmentKind kind, double sigma, BanditInstance instance)
    : kind_(kind), sigma_(sigma), instance_(std::move(instance)) {
  const bool needs_sigma = kind_ != EnvironmentKind::bernoulli_reward;
  if (needs_sigma && !(sigma_ > 0.0 && std::isfinite(sigma_))) {
    throw std::invalid_argument("Environment: sigma must be positive");
  }
  const bool featurized = std::holds_alternative<FeaturizedActions>(instance_.action_set);
  if (kind_ == EnvironmentKind::linear_gaussian_noise) {
    if (!featurized) throw std::invalid_argument("Environment: linear noise needs featurized actions");
  } else if (featurized) {
    throw std::invalid_argument("Environment: K-armed environments need indexed actions");
  }
  if (kind_ == EnvironmentKind::bernoulli_reward) {
    for (int a = 0; a < instance_.num_actions(); ++a) {
      const double mean = instance_.mean_reward(a);
      if (mean < 0.0 || mean > 1.0) {
        throw std::invalid_argument("Environment: Bernoulli means must lie in [0, 1]");
      }
    }
  }
}

double Environment::sample_reward(int action, RngStream& rng) const {
  const double mean = instance_.mean_reward(action);  // throws on bad action
  switch (kind_) {
    case EnvironmentKind::gaussian_noise:
    case EnvironmentKind::linear_gaussian_noise:
      return mean + sigma_ * rng.normal();
    case EnvironmentKind::bernoulli_reward:
      return rng.uniform01() < mean ? 1.0 : 0.0;
    case EnvironmentKind::rademacher_noise:
      return mean + (rng.uniform01() < 0.5 ? sigma_ : -sigma_);
  }
  throw std::logic_error("Environment: unknown kind");
}

ActionSet make_linear_action_set(int num_actions, int dim, RngStream& rng) {
  if (dim < 1) throw std::invalid_argument("make_linear_action_set: dim must be >= 1");
  if (num_actions < dim) throw std::invalid_argument("make_linear_action_set: need K >= d");
  Eigen::MatrixXd features = Eigen::MatrixXd::Zero(num_actions, dim);
  features.topRows(dim) = Eigen::MatrixXd::Identity(dim, dim);
  for (int i = dim; i < num_actions; ++i) {
    Eigen::VectorXd v(dim);
    double norm;
    do {
      for (int j = 0; j < dim; ++j) v[j] = rng.uniform01();
      norm = v.norm();
    } while (norm == 0.0);
    features.row(i) = v / norm;
  }
  return FeaturizedActions(std::move(features), 1.0);
}

}  // namespace bayesucb
