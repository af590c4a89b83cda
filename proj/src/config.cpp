#include "bayesucb/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bayesucb/csv.hpp"

namespace bayesucb {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  const auto end = s.find_last_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for '" + key + "': " + value);
  }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("config: bad integer value for '" + key + "': " + value);
  }
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("config: bad unsigned value for '" + key + "': " + value);
  }
  return v;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& item : split_list(value)) out.push_back(parse_double(key, item));
  return out;
}

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ",";
    out += format_double(values[i]);
  }
  return out;
}

std::string join_strings(const std::vector<std::string>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ",";
    out += values[i];
  }
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse_string(const std::string& text) {
  ExperimentConfig config;
  config.policies.clear();
  bool policies_set = false;

  std::istringstream in(text);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(line_number) + " is not 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("config: line " + std::to_string(line_number) + " has an empty key or value");
    }

    if (key == "family") {
      if (value == "gaussian") config.family = Family::gaussian;
      else if (value == "bernoulli") config.family = Family::bernoulli;
      else if (value == "linear") config.family = Family::linear;
      else throw ConfigError("config: unknown family '" + value + "'");
    } else if (key == "K") {
      config.num_actions = static_cast<int>(parse_int(key, value));
    } else if (key == "d") {
      config.dim = static_cast<int>(parse_int(key, value));
    } else if (key == "sigma") {
      config.sigma = parse_double(key, value);
    } else if (key == "noise") {
      if (value == "gaussian") config.noise = NoiseKind::gaussian;
      else if (value == "rademacher") config.noise = NoiseKind::rademacher;
      else throw ConfigError("config: unknown noise kind '" + value + "'");
    } else if (key == "prior.gap") {
      config.prior_gap = parse_double(key, value);
    } else if (key == "prior.sigma0") {
      config.sigma0 = parse_double(key, value);
    } else if (key == "prior.mu0") {
      config.mu0 = parse_double_list(key, value);
    } else if (key == "prior.alpha") {
      config.alpha = parse_double_list(key, value);
    } else if (key == "prior.beta") {
      config.beta = parse_double_list(key, value);
    } else if (key == "prior.theta0") {
      config.theta0 = parse_double_list(key, value);
    } else if (key == "policies") {
      config.policies = split_list(value);
      policies_set = true;
    } else if (key == "horizon") {
      config.horizon = parse_int(key, value);
    } else if (key == "runs") {
      config.num_runs = parse_int(key, value);
    } else if (key == "delta") {
      config.delta = parse_double(key, value);
    } else if (key == "epsilon") {
      config.epsilon = parse_double(key, value);
    } else if (key == "seed") {
      config.master_seed = parse_u64(key, value);
    } else if (key == "threads") {
      config.threads = static_cast<int>(parse_int(key, value));
    } else if (key == "mc_samples") {
      config.mc_samples = parse_int(key, value);
    } else if (key == "out") {
      config.out_dir = value;
    } else if (key == "sweep.parameter") {
      if (!config.sweep) config.sweep.emplace();
      config.sweep->parameter = value;
    } else if (key == "sweep.grid") {
      if (!config.sweep) config.sweep.emplace();
      config.sweep->grid = parse_double_list(key, value);
    } else if (key == "bounds") {
      config.bounds = split_list(value);
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  if (!policies_set) config.policies = {"bayesucb", "ucb1"};
  config.validate();
  return config;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str());
}

std::string ExperimentConfig::serialize() const {
  std::ostringstream out;
  out << "family = "
      << (family == Family::gaussian ? "gaussian"
                                     : family == Family::bernoulli ? "bernoulli" : "linear")
      << "\n";
  out << "K = " << num_actions << "\n";
  out << "d = " << dim << "\n";
  out << "sigma = " << format_double(sigma) << "\n";
  out << "noise = " << (noise == NoiseKind::gaussian ? "gaussian" : "rademacher") << "\n";
  out << "prior.gap = " << format_double(prior_gap) << "\n";
  out << "prior.sigma0 = " << format_double(sigma0) << "\n";
  if (mu0) out << "prior.mu0 = " << join_doubles(*mu0) << "\n";
  if (alpha) out << "prior.alpha = " << join_doubles(*alpha) << "\n";
  if (beta) out << "prior.beta = " << join_doubles(*beta) << "\n";
  if (theta0) out << "prior.theta0 = " << join_doubles(*theta0) << "\n";
  out << "policies = " << join_strings(policies) << "\n";
  out << "horizon = " << horizon << "\n";
  out << "runs = " << num_runs << "\n";
  if (delta) out << "delta = " << format_double(*delta) << "\n";
  if (epsilon) out << "epsilon = " << format_double(*epsilon) << "\n";
  out << "seed = " << master_seed << "\n";
  out << "threads = " << threads << "\n";
  out << "mc_samples = " << mc_samples << "\n";
  out << "out = " << out_dir << "\n";
  if (sweep) {
    out << "sweep.parameter = " << sweep->parameter << "\n";
    out << "sweep.grid = " << join_doubles(sweep->grid) << "\n";
  }
  if (!bounds.empty()) out << "bounds = " << join_strings(bounds) << "\n";
  return out.str();
}

void ExperimentConfig::validate() const {
  if (num_actions < 1) throw ConfigError("config: K must be >= 1");
  if (horizon < 1) throw ConfigError("config: horizon must be >= 1");
  if (num_runs < 1) throw ConfigError("config: runs must be >= 1");
  if (mc_samples < 1) throw ConfigError("config: mc_samples must be >= 1");
  if (threads < 0) throw ConfigError("config: threads must be >= 0");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("config: sigma must be positive");
  if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) {
    throw ConfigError("config: prior.sigma0 must be positive");
  }
  if (delta && !(*delta > 0.0 && *delta < 1.0)) {
    throw ConfigError("config: delta must lie in (0, 1)");
  }
  if (epsilon && !(*epsilon > 0.0)) throw ConfigError("config: epsilon must be positive");
  if (policies.empty()) throw ConfigError("config: need at least one policy");
  for (const auto& name : policies) {
    if (name != "bayesucb" && name != "ucb1") {
      throw ConfigError("config: unknown policy '" + name + "'");
    }
    if (name == "ucb1" && family == Family::linear) {
      throw ConfigError("config: ucb1 is a K-armed policy");
    }
  }
  if (family == Family::linear) {
    if (dim < 1) throw ConfigError("config: d must be >= 1");
    if (num_actions < dim) throw ConfigError("config: linear family needs K >= d");
    if (noise == NoiseKind::rademacher) {
      throw ConfigError("config: rademacher noise applies to the K-armed Gaussian family");
    }
    if (theta0 && static_cast<int>(theta0->size()) != dim) {
      throw ConfigError("config: prior.theta0 must have d entries");
    }
  }
  if (family == Family::bernoulli) {
    if (noise == NoiseKind::rademacher) {
      throw ConfigError("config: rademacher noise applies to the K-armed Gaussian family");
    }
    if (alpha && static_cast<int>(alpha->size()) != num_actions) {
      throw ConfigError("config: prior.alpha must have K entries");
    }
    if (beta && static_cast<int>(beta->size()) != num_actions) {
      throw ConfigError("config: prior.beta must have K entries");
    }
    if (alpha) {
      for (double v : *alpha) {
        if (!(v > 0.0)) throw ConfigError("config: prior.alpha entries must be positive");
      }
    }
    if (beta) {
      for (double v : *beta) {
        if (!(v > 0.0)) throw ConfigError("config: prior.beta entries must be positive");
      }
    }
  }
  if (family == Family::gaussian && mu0 && static_cast<int>(mu0->size()) != num_actions) {
    throw ConfigError("config: prior.mu0 must have K entries");
  }
  if (sweep) {
    if (sweep->parameter != "sigma0" && sweep->parameter != "prior_gap") {
      throw ConfigError("config: sweep.parameter must be sigma0 or prior_gap");
    }
    if (sweep->grid.empty()) throw ConfigError("config: sweep.grid must not be empty");
  }
}

double ExperimentConfig::resolved_delta() const {
  return delta ? *delta : 1.0 / static_cast<double>(horizon);
}

double ExperimentConfig::resolved_epsilon() const {
  return epsilon ? *epsilon : 1.0 / static_cast<double>(horizon);
}

Prior ExperimentConfig::build_prior() const {
  switch (family) {
    case Family::gaussian: {
      Eigen::VectorXd means;
      if (mu0) {
        means = Eigen::Map<const Eigen::VectorXd>(mu0->data(), mu0->size());
      } else {
        means = Eigen::VectorXd::Zero(num_actions);
        means[0] = prior_gap;
      }
      return GaussianKArmedPrior(std::move(means), sigma0);
    }
    case Family::bernoulli: {
      Eigen::VectorXd a = Eigen::VectorXd::Ones(num_actions);
      Eigen::VectorXd b = Eigen::VectorXd::Ones(num_actions);
      if (alpha) a = Eigen::Map<const Eigen::VectorXd>(alpha->data(), alpha->size());
      if (beta) b = Eigen::Map<const Eigen::VectorXd>(beta->data(), beta->size());
      return BetaPerArmPrior(std::move(a), std::move(b));
    }
    case Family::linear: {
      Eigen::VectorXd mean;
      if (theta0) {
        mean = Eigen::Map<const Eigen::VectorXd>(theta0->data(), theta0->size());
      } else {
        mean = Eigen::VectorXd::Constant(dim, -1.0);
        mean[0] = prior_gap;
      }
      return LinearGaussianPrior(std::move(mean),
                                 sigma0 * sigma0 * Eigen::MatrixXd::Identity(dim, dim));
    }
  }
  throw ConfigError("config: unknown family");
}

ActionSet ExperimentConfig::build_action_set(RngStream rng) const {
  if (family == Family::linear) return make_linear_action_set(num_actions, dim, rng);
  return IndexedActions(num_actions);
}

EnvironmentKind ExperimentConfig::environment_kind() const {
  switch (family) {
    case Family::gaussian:
      return noise == NoiseKind::rademacher ? EnvironmentKind::rademacher_noise
                                            : EnvironmentKind::gaussian_noise;
    case Family::bernoulli:
      return EnvironmentKind::bernoulli_reward;
    case Family::linear:
      return EnvironmentKind::linear_gaussian_noise;
  }
  throw ConfigError("config: unknown family");
}

PolicyConfig ExperimentConfig::policy_config(const std::string& policy_name) const {
  PolicyConfig pc;
  pc.delta = resolved_delta();
  pc.sigma = sigma;
  if (policy_name == "ucb1") {
    pc.kind = PolicyKind::ucb1;
    return pc;
  }
  if (policy_name != "bayesucb") throw ConfigError("config: unknown policy '" + policy_name + "'");
  switch (family) {
    case Family::gaussian:
      pc.kind = PolicyKind::bayes_ucb_gaussian;
      break;
    case Family::bernoulli:
      pc.kind = PolicyKind::bayes_ucb_bernoulli;
      break;
    case Family::linear:
      pc.kind = PolicyKind::bayes_ucb_linear;
      break;
  }
  pc.prior = build_prior();
  return pc;
}

ExperimentConfig ExperimentConfig::with_parameter(const std::string& parameter,
                                                  double value) const {
  ExperimentConfig out = *this;
  if (parameter == "sigma0") {
    if (!(value > 0.0)) throw ConfigError("sweep: sigma0 grid values must be positive");
    out.sigma0 = value;
  } else if (parameter == "prior_gap") {
    if (mu0 || theta0) {
      throw ConfigError("sweep: prior_gap sweeps need the reference prior shape, not explicit means");
    }
    out.prior_gap = value;
  } else {
    throw ConfigError("sweep: unknown parameter '" + parameter + "'");
  }
  return out;
}

}  // namespace bayesucb
