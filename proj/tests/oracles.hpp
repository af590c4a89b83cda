// Test-only reference computations: dense-grid Bayes rule, quadrature, and
// running statistics. Everything here is independent of the library's
// posterior and bound implementations.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracles {

struct MeanVar {
  double mean = 0.0;
  double var = 0.0;
};

struct RunningStat {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double d1 = x - mean;
    mean += d1 / static_cast<double>(count);
    m2 += d1 * (x - mean);
  }
  double variance() const { return count < 2 ? 0.0 : m2 / static_cast<double>(count - 1); }
  double std_error() const {
    return count < 2 ? 0.0 : std::sqrt(variance() / static_cast<double>(count));
  }
};

// Composite-Simpson integral of f over [lo, hi] with an even point count.
inline double simpson(const std::function<double(double)>& f, double lo, double hi,
                      int intervals) {
  if (intervals % 2 != 0) ++intervals;
  const double h = (hi - lo) / intervals;
  double sum = f(lo) + f(hi);
  for (int i = 1; i < intervals; ++i) {
    sum += f(lo + i * h) * (i % 2 == 0 ? 2.0 : 4.0);
  }
  return sum * h / 3.0;
}

// Posterior moments of a scalar parameter by normalizing prior x likelihood
// on a dense grid.
inline MeanVar grid_posterior(const std::function<double(double)>& log_prior_times_likelihood,
                              double lo, double hi, int intervals) {
  // Stabilize the exponentials around the grid maximum.
  double peak = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= intervals; ++i) {
    const double x = lo + (hi - lo) * i / intervals;
    peak = std::max(peak, log_prior_times_likelihood(x));
  }
  const auto density = [&](double x) { return std::exp(log_prior_times_likelihood(x) - peak); };
  const double z = simpson(density, lo, hi, intervals);
  const double mean =
      simpson([&](double x) { return x * density(x); }, lo, hi, intervals) / z;
  const double second =
      simpson([&](double x) { return x * x * density(x); }, lo, hi, intervals) / z;
  return {mean, second - mean * mean};
}

// Gaussian-arm posterior (known noise sigma) from raw rewards, by grid.
inline MeanVar gaussian_posterior_by_grid(double mu0, double sigma0, double sigma,
                                          const std::vector<double>& rewards) {
  double sum = 0.0;
  for (double y : rewards) sum += y;
  const double n = static_cast<double>(rewards.size());
  const double center = (mu0 / (sigma0 * sigma0) + sum / (sigma * sigma)) /
                        (1.0 / (sigma0 * sigma0) + n / (sigma * sigma));
  const double spread = 1.0 / std::sqrt(1.0 / (sigma0 * sigma0) + n / (sigma * sigma));
  const auto log_post = [&](double x) {
    double lp = -0.5 * (x - mu0) * (x - mu0) / (sigma0 * sigma0);
    for (double y : rewards) lp += -0.5 * (y - x) * (y - x) / (sigma * sigma);
    return lp;
  };
  return grid_posterior(log_post, center - 12.0 * spread, center + 12.0 * spread, 4000);
}

// Beta-Bernoulli posterior from 0/1 rewards, by grid over (0, 1).
inline MeanVar beta_posterior_by_grid(double alpha, double beta,
                                      const std::vector<double>& rewards) {
  double successes = 0.0;
  for (double y : rewards) successes += y;
  const double failures = static_cast<double>(rewards.size()) - successes;
  const auto log_post = [&](double x) {
    return (alpha + successes - 1.0) * std::log(x) + (beta + failures - 1.0) * std::log1p(-x);
  };
  constexpr double edge = 1e-9;
  return grid_posterior(log_post, edge, 1.0 - edge, 200000);
}

// Linear-Gaussian posterior moments by 2-d grid integration; d must be 2.
// Returns mean vector and covariance matrix computed from the raw density
// prior(theta) * prod_l N(y_l; a_l^T theta, sigma^2).
struct MeanCov2 {
  Eigen::Vector2d mean;
  Eigen::Matrix2d cov;
};

inline MeanCov2 linear_posterior_by_grid_2d(const Eigen::Vector2d& theta0,
                                            const Eigen::Matrix2d& sigma0, double sigma,
                                            const std::vector<Eigen::Vector2d>& actions,
                                            const std::vector<double>& rewards, int grid_points,
                                            const Eigen::Vector2d& center,
                                            const Eigen::Vector2d& halfwidth) {
  const Eigen::Matrix2d prior_inv = sigma0.inverse();
  const auto log_density = [&](const Eigen::Vector2d& th) {
    const Eigen::Vector2d d0 = th - theta0;
    double lp = -0.5 * d0.dot(prior_inv * d0);
    for (std::size_t l = 0; l < actions.size(); ++l) {
      const double r = rewards[l] - actions[l].dot(th);
      lp += -0.5 * r * r / (sigma * sigma);
    }
    return lp;
  };

  double peak = -std::numeric_limits<double>::infinity();
  const auto at = [&](int i, int j) {
    return Eigen::Vector2d(center[0] - halfwidth[0] + 2.0 * halfwidth[0] * i / (grid_points - 1),
                           center[1] - halfwidth[1] + 2.0 * halfwidth[1] * j / (grid_points - 1));
  };
  for (int i = 0; i < grid_points; i += 7) {
    for (int j = 0; j < grid_points; j += 7) {
      peak = std::max(peak, log_density(at(i, j)));
    }
  }

  double z = 0.0;
  Eigen::Vector2d first = Eigen::Vector2d::Zero();
  Eigen::Matrix2d second = Eigen::Matrix2d::Zero();
  for (int i = 0; i < grid_points; ++i) {
    for (int j = 0; j < grid_points; ++j) {
      const Eigen::Vector2d th = at(i, j);
      const double w = std::exp(log_density(th) - peak);
      z += w;
      first += w * th;
      second += w * th * th.transpose();
    }
  }
  MeanCov2 out;
  out.mean = first / z;
  out.cov = second / z - out.mean * out.mean.transpose();
  return out;
}

}  // namespace oracles
