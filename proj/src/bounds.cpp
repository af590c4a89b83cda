#include "bayesucb/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace bayesucb::bounds {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
}

void check_horizon_for_logs(std::int64_t n) {
  if (static_cast<double>(n) <= std::exp(1.0)) {
    throw std::invalid_argument("horizon must exceed e so that log log n is valid");
  }
}

// Mean and standard error of a streamed sample.
struct Welford {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double d1 = x - mean;
    mean += d1 / static_cast<double>(count);
    m2 += d1 * (x - mean);
  }
  double std_error() const {
    if (count < 2) return 0.0;
    return std::sqrt(m2 / (static_cast<double>(count) * static_cast<double>(count - 1)));
  }
};

double gaussian_pdf(double x, double mu, double sd) {
  const double z = (x - mu) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * kPi));
}

double beta_pdf(double x, double a, double b) {
  if (!(x > 0.0 && x < 1.0)) return 0.0;
  const double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  return std::exp(log_norm + (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x));
}

struct XiRange {
  double lo = 0.0;  // 1/n
  double hi = 0.0;  // 1/sqrt(log n)
};

XiRange xi_range(std::int64_t n) {
  return {1.0 / static_cast<double>(n), 1.0 / std::sqrt(std::log(static_cast<double>(n)))};
}

// sup over x in [lo, hi] of the N(mu, sd^2) density: project the mode.
double gaussian_sup(double lo, double hi, double mu, double sd) {
  return gaussian_pdf(std::clamp(mu, lo, hi), mu, sd);
}

// sup over x in [lo, hi] of the Beta(a, b) density. The density is either
// unimodal (a, b >= 1), monotone, or U-shaped, so the supremum sits at the
// projected mode or at an endpoint. The interval is clipped to the open
// support before evaluation.
double beta_sup(double lo, double hi, double a, double b) {
  constexpr double edge = 1e-12;
  lo = std::max(lo, edge);
  hi = std::min(hi, 1.0 - edge);
  if (lo > hi) return 0.0;
  if (a >= 1.0 && b >= 1.0) {
    if (a + b == 2.0) return 1.0;  // uniform
    const double mode = (a - 1.0) / (a + b - 2.0);
    return beta_pdf(std::clamp(mode, lo, hi), a, b);
  }
  if (a <= 1.0 && b <= 1.0) return std::max(beta_pdf(lo, a, b), beta_pdf(hi, a, b));
  if (a < 1.0) return beta_pdf(lo, a, b);  // decreasing
  return beta_pdf(hi, a, b);               // increasing
}

// Largest and second-largest entries with the index of the largest.
struct TopTwo {
  double max1 = -kInf;
  double max2 = -kInf;
  int argmax = -1;
};

TopTwo top_two(const Eigen::VectorXd& v) {
  TopTwo t;
  for (int i = 0; i < v.size(); ++i) {
    if (v[i] > t.max1) {
      t.max2 = t.max1;
      t.max1 = v[i];
      t.argmax = i;
    } else if (v[i] > t.max2) {
      t.max2 = v[i];
    }
  }
  return t;
}

double low_order_gaussian(double sigma_scale, int k, std::int64_t n, double delta,
                          double epsilon) {
  const double log_inv = std::log(1.0 / delta);
  return epsilon * static_cast<double>(n) +
         2.0 * (std::sqrt(2.0 * log_inv) + 2.0 * static_cast<double>(k)) * sigma_scale *
             static_cast<double>(k) * static_cast<double>(n) * delta;
}

BoundEstimate gap_leading_term_impl(const GaussianKArmedPrior& prior, double sigma, double delta,
                                    double epsilon, double inv_sigma0_sq,
                                    std::int64_t num_mc_samples, RngStream& rng) {
  check_delta(delta);
  check_epsilon(epsilon);
  if (num_mc_samples < 1) throw std::invalid_argument("need at least one Monte Carlo sample");
  const int k = prior.num_arms();
  const double log_inv = std::log(1.0 / delta);
  Welford clamped, raw;
  Eigen::VectorXd theta(k);
  for (std::int64_t s = 0; s < num_mc_samples; ++s) {
    for (int a = 0; a < k; ++a) theta[a] = prior.mu0[a] + prior.sigma0 * rng.normal();
    const TopTwo t = top_two(theta);
    double sum_clamped = 0.0;
    double sum_raw = 0.0;
    for (int a = 0; a < k; ++a) {
      if (a == t.argmax) continue;
      const double gap = clip_gap(t.max1 - theta[a], epsilon);
      const double term =
          8.0 * sigma * sigma * log_inv / gap - sigma * sigma * gap * inv_sigma0_sq;
      sum_raw += term;
      sum_clamped += std::max(0.0, term);
    }
    clamped.add(sum_clamped);
    raw.add(sum_raw);
  }
  BoundEstimate out;
  out.value = clamped.mean;
  out.std_error = clamped.std_error();
  out.num_samples = num_mc_samples;
  out.components["leading"] = clamped.mean;
  out.components["leading_unclamped"] = raw.mean;
  return out;
}

// Per-sample complexity summand sum_a h_a(theta_a^* - xi_a). The draw layout
// (K consecutive draws per sample) is part of the reproducibility contract.
template <class DrawArm, class DensitySup>
BoundEstimate complexity_mc(int k, const ComplexityTermSpec& spec, std::int64_t n, RngStream& rng,
                            DrawArm&& draw_arm, DensitySup&& density_sup) {
  check_horizon_for_logs(n);
  if (spec.num_mc_samples < 1) throw std::invalid_argument("need at least one Monte Carlo sample");
  const XiRange xi = xi_range(n);
  Welford acc;
  Eigen::VectorXd theta(k);
  for (std::int64_t s = 0; s < spec.num_mc_samples; ++s) {
    for (int a = 0; a < k; ++a) theta[a] = draw_arm(a, rng);
    const TopTwo t = top_two(theta);
    double sum = 0.0;
    for (int a = 0; a < k; ++a) {
      const double competitor = (a == t.argmax) ? t.max2 : t.max1;
      if (!std::isfinite(competitor)) continue;  // K == 1: no competing arm
      if (spec.xi_mode == XiMode::asymptotic) {
        sum += density_sup(a, competitor, competitor);
      } else {
        sum += density_sup(a, competitor - xi.hi, competitor - xi.lo);
      }
    }
    acc.add(sum);
  }
  BoundEstimate out;
  out.value = acc.mean;
  out.std_error = acc.std_error();
  out.num_samples = spec.num_mc_samples;
  out.components["leading"] = acc.mean;
  return out;
}

double corollary2_threshold(double delta, std::int64_t n) {
  const double nn = static_cast<double>(n);
  return 1.0 / (8.0 * std::log(1.0 / delta) * nn * nn * std::log(std::log(nn)));
}

}  // namespace

double sigma0_max(const LinearGaussianPrior& prior, const FeaturizedActions& actions) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(prior.sigma0, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff())) * actions.norm_bound;
}

BoundEstimate thm1_leading_term(const GaussianKArmedPrior& prior, double sigma, double delta,
                                double epsilon, std::int64_t n, std::int64_t num_mc_samples,
                                RngStream rng) {
  if (n < 1) throw std::invalid_argument("thm1_leading_term: horizon must be >= 1");
  const double inv_sigma0_sq = 1.0 / (prior.sigma0 * prior.sigma0);
  BoundEstimate out =
      gap_leading_term_impl(prior, sigma, delta, epsilon, inv_sigma0_sq, num_mc_samples, rng);
  out.components["low_order"] =
      low_order_gaussian(prior.sigma0, prior.num_arms(), n, delta, epsilon);
  return out;
}

BoundEstimate ucb1_gap_leading_term(const GaussianKArmedPrior& prior, double sigma, double delta,
                                    double epsilon, std::int64_t num_mc_samples, RngStream rng) {
  return gap_leading_term_impl(prior, sigma, delta, epsilon, 0.0, num_mc_samples, rng);
}

BoundEstimate complexity_term(const GaussianKArmedPrior& prior, const ComplexityTermSpec& spec,
                              std::int64_t n, RngStream rng) {
  const double sd = prior.sigma0;
  const auto& mu0 = prior.mu0;
  return complexity_mc(
      prior.num_arms(), spec, n, rng,
      [&](int a, RngStream& r) { return mu0[a] + sd * r.normal(); },
      [&](int a, double lo, double hi) { return gaussian_sup(lo, hi, mu0[a], sd); });
}

BoundEstimate beta_complexity_term(const BetaPerArmPrior& prior, const ComplexityTermSpec& spec,
                                   std::int64_t n, RngStream rng) {
  const auto& alpha = prior.alpha;
  const auto& beta = prior.beta;
  return complexity_mc(
      prior.num_arms(), spec, n, rng,
      [&](int a, RngStream& r) { return r.beta(alpha[a], beta[a]); },
      [&](int a, double lo, double hi) { return beta_sup(lo, hi, alpha[a], beta[a]); });
}

BoundEstimate lemma3_upper_bound(const GaussianKArmedPrior& prior) {
  const int k = prior.num_arms();
  const double s2 = prior.sigma0 * prior.sigma0;
  double sum = 0.0;
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      if (b == a) continue;
      const double diff = prior.mu0[a] - prior.mu0[b];
      sum += std::exp(-diff * diff / (4.0 * s2));
    }
  }
  BoundEstimate out;
  out.value = sum / (2.0 * std::sqrt(kPi * s2));
  out.std_error = 0.0;
  out.num_samples = 0;
  out.components["leading"] = out.value;
  return out;
}

BoundEstimate corollary2_bound(const GaussianKArmedPrior& prior, double sigma, double delta,
                               std::int64_t n, const ComplexityTermSpec& spec, RngStream rng) {
  check_delta(delta);
  check_horizon_for_logs(n);
  const double s0_sq = prior.sigma0 * prior.sigma0;
  if (s0_sq < corollary2_threshold(delta, n)) {
    throw ThresholdError(
        "corollary2_bound: sigma0^2 below the validity threshold; use the small-width branch");
  }
  const double log_inv = std::log(1.0 / delta);
  const double log_n = std::log(static_cast<double>(n));
  const double bracket =
      8.0 * sigma * sigma * log_inv * log_n - sigma * sigma / (2.0 * s0_sq * log_n);
  const BoundEstimate cx = complexity_term(prior, spec, n, rng);
  const int k = prior.num_arms();
  const double low_order = 8.0 * sigma * sigma * static_cast<double>(k) * log_inv *
                               std::sqrt(log_n) +
                           low_order_gaussian(prior.sigma0, k, n, delta, /*epsilon=*/0.0) + 1.0;
  BoundEstimate out;
  out.components["bracket_factor"] = bracket;
  out.components["complexity_term"] = cx.value;
  out.components["leading"] = bracket * cx.value;
  out.components["low_order"] = low_order;
  out.value = out.components["leading"] + low_order;
  out.std_error = std::abs(bracket) * cx.std_error;
  out.num_samples = cx.num_samples;
  return out;
}

BoundEstimate appendix_c_small_sigma0_bound(double sigma0, double delta, std::int64_t n, int k) {
  check_delta(delta);
  check_horizon_for_logs(n);
  if (k < 1) throw std::invalid_argument("appendix_c_small_sigma0_bound: need k >= 1");
  const double log_inv = std::log(1.0 / delta);
  if (sigma0 * sigma0 >= corollary2_threshold(delta, n)) {
    throw ThresholdError(
        "appendix_c_small_sigma0_bound: sigma0^2 at or above the threshold; use the main branch");
  }
  const double loglog_n = std::log(std::log(static_cast<double>(n)));
  const double failure_term = (2.0 * std::sqrt(2.0 * log_inv) + 1.0) /
                              std::sqrt(8.0 * log_inv * loglog_n) * static_cast<double>(k) * delta;
  BoundEstimate out;
  out.components["leading"] = failure_term;
  out.components["low_order"] = 1.0;
  out.value = failure_term + 1.0;
  out.std_error = 0.0;
  out.num_samples = 0;
  return out;
}

BoundEstimate thm4_ucb1_bound(const GaussianKArmedPrior& prior, double sigma, double delta,
                              std::int64_t n, const ComplexityTermSpec& spec, RngStream rng) {
  check_delta(delta);
  check_horizon_for_logs(n);
  if (spec.num_mc_samples < 1) throw std::invalid_argument("need at least one Monte Carlo sample");
  const int k = prior.num_arms();
  const double log_inv = std::log(1.0 / delta);
  const double log_n = std::log(static_cast<double>(n));
  const double factor = 8.0 * sigma * sigma * log_inv * log_n;
  const XiRange xi = xi_range(n);

  // One pass serves the complexity term and sum_a E[gap_a]; the per-sample
  // total tracks the exact standard error of their weighted sum.
  Welford cx, gap_sum, total;
  Eigen::VectorXd theta(k);
  for (std::int64_t s = 0; s < spec.num_mc_samples; ++s) {
    for (int a = 0; a < k; ++a) theta[a] = prior.mu0[a] + prior.sigma0 * rng.normal();
    const TopTwo t = top_two(theta);
    double density_sum = 0.0;
    for (int a = 0; a < k; ++a) {
      const double competitor = (a == t.argmax) ? t.max2 : t.max1;
      if (!std::isfinite(competitor)) continue;
      if (spec.xi_mode == XiMode::asymptotic) {
        density_sum += gaussian_pdf(competitor, prior.mu0[a], prior.sigma0);
      } else {
        density_sum += gaussian_sup(competitor - xi.hi, competitor - xi.lo, prior.mu0[a],
                                    prior.sigma0);
      }
    }
    const double gaps = static_cast<double>(k) * t.max1 - theta.sum();
    cx.add(density_sum);
    gap_sum.add(gaps);
    total.add(factor * density_sum + gaps);
  }
  const double constant = 8.0 * sigma * sigma * static_cast<double>(k) * log_inv *
                              std::sqrt(log_n) +
                          low_order_gaussian(sigma, k, n, delta, /*epsilon=*/0.0) + 1.0;
  BoundEstimate out;
  out.components["complexity_term"] = cx.mean;
  out.components["sum_expected_gaps"] = gap_sum.mean;
  out.components["leading"] = factor * cx.mean;
  out.components["low_order"] = constant + gap_sum.mean;
  out.value = out.components["leading"] + out.components["low_order"];
  out.std_error = total.std_error();
  out.num_samples = spec.num_mc_samples;
  return out;
}

std::pair<BoundEstimate, BoundEstimate> thm5_bernoulli_bounds(const BetaPerArmPrior& prior,
                                                              double delta, double epsilon,
                                                              std::int64_t n,
                                                              const ComplexityTermSpec& spec,
                                                              RngStream rng) {
  check_delta(delta);
  check_epsilon(epsilon);
  check_horizon_for_logs(n);
  if (spec.num_mc_samples < 1) throw std::invalid_argument("need at least one Monte Carlo sample");
  const int k = prior.num_arms();
  const double log_inv = std::log(1.0 / delta);
  const double log_n = std::log(static_cast<double>(n));
  const double loglog_n = std::log(log_n);
  const double nd = static_cast<double>(n) * delta;

  BoundEstimate first;
  {
    Welford clamped, raw;
    RngStream draw = rng.substream(0);
    Eigen::VectorXd theta(k);
    for (std::int64_t s = 0; s < spec.num_mc_samples; ++s) {
      for (int a = 0; a < k; ++a) theta[a] = draw.beta(prior.alpha[a], prior.beta[a]);
      const TopTwo t = top_two(theta);
      double sum_clamped = 0.0;
      double sum_raw = 0.0;
      for (int a = 0; a < k; ++a) {
        if (a == t.argmax) continue;
        const double gap = clip_gap(t.max1 - theta[a], epsilon);
        const double term =
            2.0 * log_inv / gap - (prior.alpha[a] + prior.beta[a] + 1.0) * gap;
        sum_raw += term;
        sum_clamped += std::max(0.0, term);
      }
      clamped.add(sum_clamped);
      raw.add(sum_raw);
    }
    const double low_order = epsilon * static_cast<double>(n) + 2.0 * static_cast<double>(k) * nd;
    first.components["leading"] = clamped.mean;
    first.components["leading_unclamped"] = raw.mean;
    first.components["low_order"] = low_order;
    first.value = clamped.mean + low_order;
    first.std_error = clamped.std_error();
    first.num_samples = spec.num_mc_samples;
  }

  BoundEstimate second;
  {
    const double lambda = (prior.alpha + prior.beta).minCoeff() + 1.0;
    const double nn = static_cast<double>(n);
    if (lambda > 2.0 * log_inv * nn * nn * loglog_n) {
      throw ThresholdError("thm5_bernoulli_bounds: pseudo-count lambda above the validity cap");
    }
    const double bracket = 2.0 * log_inv * log_n - lambda / (2.0 * log_n);
    const BoundEstimate cx = beta_complexity_term(prior, spec, n, rng.substream(1));
    const double low_order =
        2.0 * static_cast<double>(k) * log_inv * std::sqrt(log_n) +
        2.0 * static_cast<double>(k) * nd + 1.0;
    second.components["bracket_factor"] = bracket;
    second.components["complexity_term"] = cx.value;
    second.components["leading"] = bracket * cx.value;
    second.components["low_order"] = low_order;
    second.value = second.components["leading"] + low_order;
    second.std_error = std::abs(bracket) * cx.std_error;
    second.num_samples = cx.num_samples;
  }
  return {std::move(first), std::move(second)};
}

BoundEstimate thm6_linear_bound(const LinearGaussianPrior& prior, const FeaturizedActions& actions,
                                double sigma, double delta, double epsilon, std::int64_t n,
                                std::int64_t num_mc_samples, RngStream rng) {
  check_delta(delta);
  check_epsilon(epsilon);
  if (n < 1) throw std::invalid_argument("thm6_linear_bound: horizon must be >= 1");
  if (num_mc_samples < 1) throw std::invalid_argument("need at least one Monte Carlo sample");
  if (prior.dim() != actions.dim()) {
    throw std::invalid_argument("thm6_linear_bound: prior/action dimension mismatch");
  }
  const int d = prior.dim();
  const int k = actions.num_actions();
  const double log_inv = std::log(1.0 / delta);
  const double s0max = sigma0_max(prior, actions);

  Welford inv_gap;
  const Eigen::MatrixXd sqrt_cov = prior.sqrt_matrix();
  Eigen::VectorXd z(d);
  for (std::int64_t s = 0; s < num_mc_samples; ++s) {
    for (int i = 0; i < d; ++i) z[i] = rng.normal();
    const BanditInstance instance(prior.theta0 + sqrt_cov * z, actions);
    const GapProfile profile = gap_profile(instance);
    const double gap = clip_gap(profile.min_gap, epsilon);
    inv_gap.add(std::isinf(gap) ? 0.0 : 1.0 / gap);
  }

  double variance_factor = 0.0;
  if (s0max > 0.0) {
    variance_factor = s0max * s0max * static_cast<double>(d) /
                      std::log1p(s0max * s0max / (sigma * sigma)) *
                      std::log1p(s0max * s0max * static_cast<double>(n) /
                                 (sigma * sigma * static_cast<double>(d)));
  }
  const double leading_factor = 8.0 * variance_factor * log_inv;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(prior.sigma0, Eigen::EigenvaluesOnly);
  const double lambda1 = std::max(0.0, es.eigenvalues().maxCoeff());
  const double l_star = prior.theta0.norm() + 5.0 * std::sqrt(lambda1 * static_cast<double>(d));
  const double delta_star = std::exp(-8.0 * static_cast<double>(d));
  const double low_order = epsilon * static_cast<double>(n) +
                           4.0 * actions.norm_bound * l_star * static_cast<double>(k) *
                               static_cast<double>(n) * delta;

  BoundEstimate out;
  out.components["expected_inverse_min_gap"] = inv_gap.mean;
  out.components["sigma0_max"] = s0max;
  out.components["L_star"] = l_star;
  out.components["delta_star"] = delta_star;
  out.components["leading"] = leading_factor * inv_gap.mean;
  out.components["low_order"] = low_order;
  out.value = out.components["leading"] + low_order;
  out.std_error = leading_factor * inv_gap.std_error();
  out.num_samples = num_mc_samples;
  return out;
}

BoundEstimate sqrt_bound_karmed(double sigma, double sigma0, int k, std::int64_t n) {
  if (!(sigma > 0.0) || !(sigma0 > 0.0) || k < 1 || n < 1) {
    throw std::invalid_argument("sqrt_bound_karmed: all parameters must be positive");
  }
  const double nn = static_cast<double>(n);
  const double x = sigma * sigma * static_cast<double>(k) / (sigma0 * sigma0);
  // sqrt(n + x) - sqrt(x), computed without cancellation.
  const double root_gap = nn / (std::sqrt(nn + x) + std::sqrt(x));
  BoundEstimate out;
  out.value = 4.0 * std::sqrt(2.0 * sigma * sigma * static_cast<double>(k) * std::log(nn)) *
              root_gap;
  out.std_error = 0.0;
  out.num_samples = 0;
  out.components["leading"] = out.value;
  return out;
}

BoundEstimate sqrt_bound_linear(double sigma, double sigma0_max, int d, std::int64_t n,
                                double delta) {
  check_delta(delta);
  if (!(sigma > 0.0) || sigma0_max < 0.0 || d < 1 || n < 1) {
    throw std::invalid_argument("sqrt_bound_linear: all parameters must be positive");
  }
  BoundEstimate out;
  out.std_error = 0.0;
  out.num_samples = 0;
  if (sigma0_max == 0.0) {
    out.value = 0.0;
    out.components["leading"] = 0.0;
    return out;
  }
  const double nn = static_cast<double>(n);
  const double s2 = sigma0_max * sigma0_max;
  const double inside = 2.0 * s2 * static_cast<double>(d) * nn /
                        std::log1p(s2 / (sigma * sigma)) *
                        std::log1p(s2 * nn / (sigma * sigma * static_cast<double>(d))) *
                        std::log(1.0 / delta);
  out.value = 2.0 * std::sqrt(inside);
  out.components["leading"] = out.value;
  return out;
}

double lemma8_variance_budget(double sigma, double sigma0_max, int d, std::int64_t n) {
  if (!(sigma > 0.0) || sigma0_max < 0.0 || d < 1 || n < 0) {
    throw std::invalid_argument("lemma8_variance_budget: bad parameters");
  }
  if (sigma0_max == 0.0) return 0.0;
  const double s2 = sigma0_max * sigma0_max;
  return s2 * static_cast<double>(d) / std::log1p(s2 / (sigma * sigma)) *
         std::log1p(s2 * static_cast<double>(n) / (sigma * sigma * static_cast<double>(d)));
}

}  // namespace bayesucb::bounds
