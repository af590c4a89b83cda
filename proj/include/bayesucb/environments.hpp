#pragma once

#include "bayesucb/core.hpp"

namespace bayesucb {

enum class EnvironmentKind {
  gaussian_noise,        // Y = theta_a + N(0, sigma^2)
  bernoulli_reward,      // Y ~ Bernoulli(theta_a)
  linear_gaussian_noise, // Y = a^T theta + N(0, sigma^2)
  rademacher_noise,      // Y = theta_a +/- sigma with equal probability
};

// A reward generator bound to one sampled instance. Immutable; reward
// sampling is pure given (env, action, rng).
class Environment {
 public:
  Environment(EnvironmentKind kind, double sigma, BanditInstance instance);

  EnvironmentKind kind() const { return kind_; }
  double sigma() const { return sigma_; }
  const BanditInstance& instance() const { return instance_; }
  int num_actions() const { return instance_.num_actions(); }

  double sample_reward(int action, RngStream& rng) const;

 private:
  EnvironmentKind kind_;
  double sigma_;
  BanditInstance instance_;
};

// Action set of the linear experiments: the first d actions are the
// canonical basis of R^d, the remaining K - d are drawn coordinate-wise
// Uniform(0,1) and scaled to unit l2 norm. All entries are nonnegative and
// the declared norm bound is L = 1.
ActionSet make_linear_action_set(int num_actions, int dim, RngStream& rng);

}  // namespace bayesucb
