#include "bayesucb/core.hpp"

#include <algorithm>
#include <cmath>

namespace bayesucb {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

GaussianKArmedPrior::GaussianKArmedPrior(Eigen::VectorXd mu0_in, double sigma0_in)
    : mu0(std::move(mu0_in)), sigma0(sigma0_in) {
  require(mu0.size() >= 1, "GaussianKArmedPrior: need at least one arm");
  require(mu0.allFinite(), "GaussianKArmedPrior: prior means must be finite");
  require(sigma0 > 0.0 && std::isfinite(sigma0), "GaussianKArmedPrior: sigma0 must be positive");
}

BetaPerArmPrior::BetaPerArmPrior(Eigen::VectorXd alpha_in, Eigen::VectorXd beta_in)
    : alpha(std::move(alpha_in)), beta(std::move(beta_in)) {
  require(alpha.size() >= 1, "BetaPerArmPrior: need at least one arm");
  require(alpha.size() == beta.size(), "BetaPerArmPrior: alpha/beta size mismatch");
  require((alpha.array() > 0.0).all() && alpha.allFinite(),
          "BetaPerArmPrior: all alpha_a must be positive");
  require((beta.array() > 0.0).all() && beta.allFinite(),
          "BetaPerArmPrior: all beta_a must be positive");
}

LinearGaussianPrior::LinearGaussianPrior(Eigen::VectorXd theta0_in, Eigen::MatrixXd sigma0_in)
    : theta0(std::move(theta0_in)), sigma0(std::move(sigma0_in)) {
  require(theta0.size() >= 1, "LinearGaussianPrior: empty mean");
  require(theta0.allFinite(), "LinearGaussianPrior: mean must be finite");
  require(sigma0.rows() == theta0.size() && sigma0.cols() == theta0.size(),
          "LinearGaussianPrior: covariance shape mismatch");
  require(sigma0.allFinite(), "LinearGaussianPrior: covariance must be finite");
  sigma0 = 0.5 * (sigma0 + sigma0.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma0, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  require(es.eigenvalues().minCoeff() >= -1e-10 * scale,
          "LinearGaussianPrior: covariance must be positive semi-definite");
}

Eigen::MatrixXd LinearGaussianPrior::sqrt_matrix() const {
  Eigen::LLT<Eigen::MatrixXd> llt(sigma0);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma0);
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.cwiseSqrt().asDiagonal();
}

IndexedActions::IndexedActions(int k) : num_actions(k) {
  require(k >= 1, "IndexedActions: need at least one action");
}

FeaturizedActions::FeaturizedActions(Eigen::MatrixXd features_in, double norm_bound_in)
    : features(std::move(features_in)), norm_bound(norm_bound_in) {
  require(features.rows() >= 1, "FeaturizedActions: need at least one action");
  require(features.cols() >= 1, "FeaturizedActions: need at least one dimension");
  require(features.allFinite(), "FeaturizedActions: features must be finite");
  require(norm_bound > 0.0, "FeaturizedActions: norm bound must be positive");
  for (int i = 0; i < features.rows(); ++i) {
    require(features.row(i).norm() <= norm_bound * (1.0 + 1e-9),
            "FeaturizedActions: action norm exceeds declared bound");
  }
}

int num_actions(const ActionSet& actions) {
  return std::visit(
      [](const auto& a) -> int {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, IndexedActions>) {
          return a.num_actions;
        } else {
          return a.num_actions();
        }
      },
      actions);
}

BanditInstance::BanditInstance(Eigen::VectorXd theta_in, ActionSet action_set_in)
    : theta(std::move(theta_in)), action_set(std::move(action_set_in)) {
  if (!theta.allFinite()) throw std::invalid_argument("BanditInstance: theta must be finite");
  if (const auto* idx = std::get_if<IndexedActions>(&action_set)) {
    require(theta.size() == idx->num_actions, "BanditInstance: theta size must equal K");
  } else {
    const auto& feat = std::get<FeaturizedActions>(action_set);
    require(theta.size() == feat.dim(), "BanditInstance: theta size must equal d");
  }
}

double BanditInstance::mean_reward(int action) const {
  if (action < 0 || action >= num_actions()) {
    throw std::out_of_range("BanditInstance: action out of range");
  }
  if (std::holds_alternative<IndexedActions>(action_set)) return theta[action];
  return std::get<FeaturizedActions>(action_set).features.row(action).dot(theta);
}

Eigen::VectorXd BanditInstance::mean_rewards() const {
  if (std::holds_alternative<IndexedActions>(action_set)) return theta;
  return std::get<FeaturizedActions>(action_set).features * theta;
}

double clip_gap(double delta, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("clip_gap: epsilon must be positive");
  if (delta < 0.0 || std::isnan(delta)) throw std::invalid_argument("clip_gap: delta must be >= 0");
  return std::max(delta, epsilon);
}

BanditInstance sample_instance(const Prior& prior, const ActionSet& actions, RngStream& rng) {
  const bool indexed = std::holds_alternative<IndexedActions>(actions);
  const int k = num_actions(actions);

  if (const auto* g = std::get_if<GaussianKArmedPrior>(&prior)) {
    if (!indexed || g->num_arms() != k) {
      throw std::invalid_argument("sample_instance: Gaussian prior needs matching indexed actions");
    }
    Eigen::VectorXd theta(k);
    for (int a = 0; a < k; ++a) theta[a] = g->mu0[a] + g->sigma0 * rng.normal();
    return BanditInstance(std::move(theta), actions);
  }
  if (const auto* b = std::get_if<BetaPerArmPrior>(&prior)) {
    if (!indexed || b->num_arms() != k) {
      throw std::invalid_argument("sample_instance: Beta prior needs matching indexed actions");
    }
    Eigen::VectorXd theta(k);
    for (int a = 0; a < k; ++a) theta[a] = rng.beta(b->alpha[a], b->beta[a]);
    return BanditInstance(std::move(theta), actions);
  }
  const auto& lin = std::get<LinearGaussianPrior>(prior);
  const auto* feat = std::get_if<FeaturizedActions>(&actions);
  if (feat == nullptr || lin.dim() != feat->dim()) {
    throw std::invalid_argument("sample_instance: linear prior needs matching featurized actions");
  }
  Eigen::VectorXd z(lin.dim());
  for (int i = 0; i < lin.dim(); ++i) z[i] = rng.normal();
  Eigen::VectorXd theta = lin.theta0 + lin.sqrt_matrix() * z;
  return BanditInstance(std::move(theta), actions);
}

GapProfile gap_profile(const BanditInstance& instance) {
  const Eigen::VectorXd means = instance.mean_rewards();
  const int k = static_cast<int>(means.size());
  int best = 0;
  for (int a = 1; a < k; ++a) {
    if (means[a] > means[best]) best = a;  // lowest index wins exact ties
  }
  GapProfile profile;
  profile.optimal_index = best;
  profile.gaps = Eigen::VectorXd::Constant(k, means[best]) - means;
  profile.min_gap = std::numeric_limits<double>::infinity();
  for (int a = 0; a < k; ++a) {
    if (a != best) profile.min_gap = std::min(profile.min_gap, profile.gaps[a]);
  }
  return profile;
}

}  // namespace bayesucb
