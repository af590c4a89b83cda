#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bayesucb/bounds.hpp"
#include "bayesucb/simulator.hpp"

namespace py = pybind11;
using namespace bayesucb;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bayesian UCB bandit policies, regret-bound calculators, and the simulation engine";

  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("master_seed"), py::arg("stream_id"))
      .def_property_readonly("master_seed", &RngStream::master_seed)
      .def_property_readonly("stream_id", &RngStream::stream_id)
      .def("substream", &RngStream::substream, py::arg("k"))
      .def("next_u64", &RngStream::next_u64)
      .def("uniform01", &RngStream::uniform01)
      .def("normal", &RngStream::normal)
      .def("gamma", &RngStream::gamma, py::arg("shape"))
      .def("beta", &RngStream::beta, py::arg("alpha"), py::arg("beta"));

  py::class_<GaussianKArmedPrior>(m, "GaussianKArmedPrior")
      .def(py::init<Eigen::VectorXd, double>(), py::arg("mu0"), py::arg("sigma0"))
      .def_readonly("mu0", &GaussianKArmedPrior::mu0)
      .def_readonly("sigma0", &GaussianKArmedPrior::sigma0)
      .def_property_readonly("num_arms", &GaussianKArmedPrior::num_arms);

  py::class_<BetaPerArmPrior>(m, "BetaPerArmPrior")
      .def(py::init<Eigen::VectorXd, Eigen::VectorXd>(), py::arg("alpha"), py::arg("beta"))
      .def_readonly("alpha", &BetaPerArmPrior::alpha)
      .def_readonly("beta", &BetaPerArmPrior::beta)
      .def_property_readonly("num_arms", &BetaPerArmPrior::num_arms);

  py::class_<LinearGaussianPrior>(m, "LinearGaussianPrior")
      .def(py::init<Eigen::VectorXd, Eigen::MatrixXd>(), py::arg("theta0"), py::arg("sigma0"))
      .def_readonly("theta0", &LinearGaussianPrior::theta0)
      .def_readonly("sigma0", &LinearGaussianPrior::sigma0)
      .def_property_readonly("dim", &LinearGaussianPrior::dim);

  py::class_<IndexedActions>(m, "IndexedActions")
      .def(py::init<int>(), py::arg("num_actions"))
      .def_readonly("num_actions", &IndexedActions::num_actions);

  py::class_<FeaturizedActions>(m, "FeaturizedActions")
      .def(py::init<Eigen::MatrixXd, double>(), py::arg("features"), py::arg("norm_bound"))
      .def_readonly("features", &FeaturizedActions::features)
      .def_readonly("norm_bound", &FeaturizedActions::norm_bound)
      .def_property_readonly("num_actions", &FeaturizedActions::num_actions)
      .def_property_readonly("dim", &FeaturizedActions::dim);

  py::class_<BanditInstance>(m, "BanditInstance")
      .def(py::init<Eigen::VectorXd, ActionSet>(), py::arg("theta"), py::arg("action_set"))
      .def_readonly("theta", &BanditInstance::theta)
      .def_property_readonly("num_actions", &BanditInstance::num_actions)
      .def("mean_reward", &BanditInstance::mean_reward, py::arg("action"))
      .def("mean_rewards", &BanditInstance::mean_rewards);

  py::class_<GapProfile>(m, "GapProfile")
      .def_readonly("gaps", &GapProfile::gaps)
      .def_readonly("min_gap", &GapProfile::min_gap)
      .def_readonly("optimal_index", &GapProfile::optimal_index);

  m.def("clip_gap", &clip_gap, py::arg("delta"), py::arg("epsilon"));
  m.def("sample_instance", &sample_instance, py::arg("prior"), py::arg("action_set"),
        py::arg("rng"));
  m.def("gap_profile", &gap_profile, py::arg("instance"));

  py::enum_<EnvironmentKind>(m, "EnvironmentKind")
      .value("gaussian_noise", EnvironmentKind::gaussian_noise)
      .value("bernoulli_reward", EnvironmentKind::bernoulli_reward)
      .value("linear_gaussian_noise", EnvironmentKind::linear_gaussian_noise)
      .value("rademacher_noise", EnvironmentKind::rademacher_noise);

  py::class_<Environment>(m, "Environment")
      .def(py::init<EnvironmentKind, double, BanditInstance>(), py::arg("kind"), py::arg("sigma"),
           py::arg("instance"))
      .def_property_readonly("kind", &Environment::kind)
      .def_property_readonly("sigma", &Environment::sigma)
      .def_property_readonly("instance", &Environment::instance)
      .def("sample_reward", &Environment::sample_reward, py::arg("action"), py::arg("rng"));

  m.def("make_linear_action_set", &make_linear_action_set, py::arg("num_actions"), py::arg("dim"),
        py::arg("rng"));

  py::enum_<PolicyKind>(m, "PolicyKind")
      .value("bayes_ucb_gaussian", PolicyKind::bayes_ucb_gaussian)
      .value("bayes_ucb_bernoulli", PolicyKind::bayes_ucb_bernoulli)
      .value("bayes_ucb_linear", PolicyKind::bayes_ucb_linear)
      .value("ucb1", PolicyKind::ucb1);

  py::class_<PolicyConfig>(m, "PolicyConfig")
      .def(py::init([](PolicyKind kind, double delta, double sigma, std::optional<Prior> prior) {
             PolicyConfig pc{kind, delta, sigma, std::move(prior)};
             pc.validate();
             return pc;
           }),
           py::arg("kind"), py::arg("delta"), py::arg("sigma"), py::arg("prior") = std::nullopt)
      .def_readonly("kind", &PolicyConfig::kind)
      .def_readonly("delta", &PolicyConfig::delta)
      .def_readonly("sigma", &PolicyConfig::sigma);

  py::class_<GaussianArmPosterior>(m, "GaussianArmPosterior")
      .def_readonly("n_pulls", &GaussianArmPosterior::n_pulls)
      .def_readonly("sum_rewards", &GaussianArmPosterior::sum_rewards)
      .def_readonly("post_mean", &GaussianArmPosterior::post_mean)
      .def_readonly("post_var", &GaussianArmPosterior::post_var);

  py::class_<BetaArmPosterior>(m, "BetaArmPosterior")
      .def_readonly("alpha", &BetaArmPosterior::alpha)
      .def_readonly("beta", &BetaArmPosterior::beta);

  py::class_<LinearPosterior>(m, "LinearPosterior")
      .def_readonly("precision", &LinearPosterior::precision)
      .def_readonly("weighted_sum", &LinearPosterior::weighted_sum)
      .def_readonly("post_mean", &LinearPosterior::post_mean)
      .def_readonly("post_cov", &LinearPosterior::post_cov);

  py::class_<Policy>(m, "Policy")
      .def_property_readonly("num_actions", &Policy::num_actions)
      .def("ucb_index", &Policy::ucb_index, py::arg("action"))
      .def("select_action", &Policy::select_action)
      .def("update", &Policy::update, py::arg("action"), py::arg("reward"))
      .def("confidence_event_holds", &Policy::confidence_event_holds, py::arg("instance"))
      .def("action_posterior_variance", &Policy::action_posterior_variance, py::arg("action"));

  py::class_<GaussianBayesUcbPolicy, Policy>(m, "GaussianBayesUcbPolicy")
      .def(py::init<Eigen::VectorXd, double, double, double, bool>(), py::arg("prior_mu0"),
           py::arg("sigma0"), py::arg("sigma"), py::arg("delta"),
           py::arg("forced_initialization") = false)
      .def("arm_posterior", &GaussianBayesUcbPolicy::arm_posterior, py::arg("action"),
           py::return_value_policy::copy)
      .def("confidence_width", &GaussianBayesUcbPolicy::confidence_width, py::arg("action"));

  py::class_<BernoulliBayesUcbPolicy, Policy>(m, "BernoulliBayesUcbPolicy")
      .def(py::init<const BetaPerArmPrior&, double>(), py::arg("prior"), py::arg("delta"))
      .def("arm_posterior", &BernoulliBayesUcbPolicy::arm_posterior, py::arg("action"),
           py::return_value_policy::copy)
      .def("confidence_width", &BernoulliBayesUcbPolicy::confidence_width, py::arg("action"));

  py::class_<LinearBayesUcbPolicy, Policy>(m, "LinearBayesUcbPolicy")
      .def(py::init<const LinearGaussianPrior&, const FeaturizedActions&, double, double>(),
           py::arg("prior"), py::arg("actions"), py::arg("sigma"), py::arg("delta"))
      .def("posterior", &LinearBayesUcbPolicy::posterior, py::return_value_policy::copy)
      .def("confidence_width", &LinearBayesUcbPolicy::confidence_width, py::arg("action"));

  m.def("make_policy", &make_policy, py::arg("config"), py::arg("actions"));

  // bounds --------------------------------------------------------------
  auto bounds_mod = m.def_submodule("bounds", "Regret-bound calculators");

  py::class_<bounds::BoundEstimate>(bounds_mod, "BoundEstimate")
      .def_readonly("value", &bounds::BoundEstimate::value)
      .def_readonly("std_error", &bounds::BoundEstimate::std_error)
      .def_readonly("num_samples", &bounds::BoundEstimate::num_samples)
      .def_readonly("components", &bounds::BoundEstimate::components);

  py::enum_<bounds::XiMode>(bounds_mod, "XiMode")
      .value("asymptotic", bounds::XiMode::asymptotic)
      .value("range_supremum", bounds::XiMode::range_supremum);

  py::class_<bounds::ComplexityTermSpec>(bounds_mod, "ComplexityTermSpec")
      .def(py::init([](bounds::XiMode mode, std::int64_t samples) {
             return bounds::ComplexityTermSpec{mode, samples};
           }),
           py::arg("xi_mode") = bounds::XiMode::asymptotic, py::arg("num_mc_samples") = 100000)
      .def_readonly("xi_mode", &bounds::ComplexityTermSpec::xi_mode)
      .def_readonly("num_mc_samples", &bounds::ComplexityTermSpec::num_mc_samples);

  py::register_exception<bounds::ThresholdError>(bounds_mod, "ThresholdError",
                                                 PyExc_ArithmeticError);

  bounds_mod.def("thm1_leading_term", &bounds::thm1_leading_term, py::arg("prior"),
                 py::arg("sigma"), py::arg("delta"), py::arg("epsilon"), py::arg("horizon"),
                 py::arg("num_mc_samples"), py::arg("rng"));
  bounds_mod.def("ucb1_gap_leading_term", &bounds::ucb1_gap_leading_term, py::arg("prior"),
                 py::arg("sigma"), py::arg("delta"), py::arg("epsilon"), py::arg("num_mc_samples"),
                 py::arg("rng"));
  bounds_mod.def("complexity_term", &bounds::complexity_term, py::arg("prior"), py::arg("spec"),
                 py::arg("horizon"), py::arg("rng"));
  bounds_mod.def("beta_complexity_term", &bounds::beta_complexity_term, py::arg("prior"),
                 py::arg("spec"), py::arg("horizon"), py::arg("rng"));
  bounds_mod.def("lemma3_upper_bound", &bounds::lemma3_upper_bound, py::arg("prior"));
  bounds_mod.def("corollary2_bound", &bounds::corollary2_bound, py::arg("prior"), py::arg("sigma"),
                 py::arg("delta"), py::arg("horizon"), py::arg("spec"), py::arg("rng"));
  bounds_mod.def("appendix_c_small_sigma0_bound", &bounds::appendix_c_small_sigma0_bound,
                 py::arg("sigma0"), py::arg("delta"), py::arg("horizon"), py::arg("num_actions"));
  bounds_mod.def("thm4_ucb1_bound", &bounds::thm4_ucb1_bound, py::arg("prior"), py::arg("sigma"),
                 py::arg("delta"), py::arg("horizon"), py::arg("spec"), py::arg("rng"));
  bounds_mod.def("thm5_bernoulli_bounds", &bounds::thm5_bernoulli_bounds, py::arg("prior"),
                 py::arg("delta"), py::arg("epsilon"), py::arg("horizon"), py::arg("spec"),
                 py::arg("rng"));
  bounds_mod.def("thm6_linear_bound", &bounds::thm6_linear_bound, py::arg("prior"),
                 py::arg("actions"), py::arg("sigma"), py::arg("delta"), py::arg("epsilon"),
                 py::arg("horizon"), py::arg("num_mc_samples"), py::arg("rng"));
  bounds_mod.def("sqrt_bound_karmed", &bounds::sqrt_bound_karmed, py::arg("sigma"),
                 py::arg("sigma0"), py::arg("num_actions"), py::arg("horizon"));
  bounds_mod.def("sqrt_bound_linear", &bounds::sqrt_bound_linear, py::arg("sigma"),
                 py::arg("sigma0_max"), py::arg("dim"), py::arg("horizon"), py::arg("delta"));
  bounds_mod.def("lemma8_variance_budget", &bounds::lemma8_variance_budget, py::arg("sigma"),
                 py::arg("sigma0_max"), py::arg("dim"), py::arg("horizon"));
  bounds_mod.def("sigma0_max", &bounds::sigma0_max, py::arg("prior"), py::arg("actions"));

  // simulator -----------------------------------------------------------
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::enum_<Family>(m, "Family")
      .value("gaussian", Family::gaussian)
      .value("bernoulli", Family::bernoulli)
      .value("linear", Family::linear);

  py::enum_<NoiseKind>(m, "NoiseKind")
      .value("gaussian", NoiseKind::gaussian)
      .value("rademacher", NoiseKind::rademacher);

  py::class_<SweepSpec>(m, "SweepSpec")
      .def(py::init<>())
      .def_readwrite("parameter", &SweepSpec::parameter)
      .def_readwrite("grid", &SweepSpec::grid);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("family", &ExperimentConfig::family)
      .def_readwrite("num_actions", &ExperimentConfig::num_actions)
      .def_readwrite("dim", &ExperimentConfig::dim)
      .def_readwrite("sigma", &ExperimentConfig::sigma)
      .def_readwrite("noise", &ExperimentConfig::noise)
      .def_readwrite("prior_gap", &ExperimentConfig::prior_gap)
      .def_readwrite("sigma0", &ExperimentConfig::sigma0)
      .def_readwrite("mu0", &ExperimentConfig::mu0)
      .def_readwrite("alpha", &ExperimentConfig::alpha)
      .def_readwrite("beta", &ExperimentConfig::beta)
      .def_readwrite("theta0", &ExperimentConfig::theta0)
      .def_readwrite("policies", &ExperimentConfig::policies)
      .def_readwrite("horizon", &ExperimentConfig::horizon)
      .def_readwrite("num_runs", &ExperimentConfig::num_runs)
      .def_readwrite("delta", &ExperimentConfig::delta)
      .def_readwrite("epsilon", &ExperimentConfig::epsilon)
      .def_readwrite("master_seed", &ExperimentConfig::master_seed)
      .def_readwrite("threads", &ExperimentConfig::threads)
      .def_readwrite("mc_samples", &ExperimentConfig::mc_samples)
      .def_readwrite("out_dir", &ExperimentConfig::out_dir)
      .def_readwrite("sweep", &ExperimentConfig::sweep)
      .def_readwrite("bounds", &ExperimentConfig::bounds)
      .def_static("parse_string", &ExperimentConfig::parse_string, py::arg("text"))
      .def_static("parse_file", &ExperimentConfig::parse_file, py::arg("path"))
      .def("serialize", &ExperimentConfig::serialize)
      .def("validate", &ExperimentConfig::validate)
      .def("resolved_delta", &ExperimentConfig::resolved_delta)
      .def("resolved_epsilon", &ExperimentConfig::resolved_epsilon)
      .def("build_prior", &ExperimentConfig::build_prior)
      .def("__eq__", [](const ExperimentConfig& a, const ExperimentConfig& b) { return a == b; });

  py::class_<RunDiagnostics>(m, "RunDiagnostics")
      .def_readonly("cum_regret", &RunDiagnostics::cum_regret)
      .def_readonly("pulls", &RunDiagnostics::pulls)
      .def_readonly("all_confidence_held", &RunDiagnostics::all_confidence_held)
      .def_readonly("variance_ledger", &RunDiagnostics::variance_ledger)
      .def_readonly("confidence_failed", &RunDiagnostics::confidence_failed);

  py::class_<ExperimentResult>(m, "ExperimentResult")
      .def_readonly("mean_cum_regret", &ExperimentResult::mean_cum_regret)
      .def_readonly("std_error", &ExperimentResult::std_error)
      .def_readonly("num_runs", &ExperimentResult::num_runs)
      .def_readonly("config_echo", &ExperimentResult::config_echo);

  py::class_<SweepPoint>(m, "SweepPoint")
      .def_readonly("grid_value", &SweepPoint::grid_value)
      .def_readonly("policy_names", &SweepPoint::policy_names)
      .def_readonly("results", &SweepPoint::results)
      .def_readonly("bound_values", &SweepPoint::bound_values);

  py::class_<BakeoffRow>(m, "BakeoffRow")
      .def_readonly("num_actions", &BakeoffRow::num_actions)
      .def_readonly("sigma", &BakeoffRow::sigma)
      .def_readonly("prior_gap", &BakeoffRow::prior_gap)
      .def_readonly("sigma0", &BakeoffRow::sigma0)
      .def_readonly("regret_ucb1", &BakeoffRow::regret_ucb1)
      .def_readonly("regret_bayes_ucb", &BakeoffRow::regret_bayes_ucb)
      .def_readonly("difference", &BakeoffRow::difference)
      .def_readonly("std_error", &BakeoffRow::std_error);

  m.def("run_episode", &run_episode, py::arg("env"), py::arg("policy_config"), py::arg("horizon"),
        py::arg("rng"), py::arg("diagnostics_on") = false);
  m.def("bayes_regret", &bayes_regret, py::arg("config"), py::arg("policy_index") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("sweep", &sweep, py::arg("config"), py::arg("parameter"), py::arg("grid"),
        py::call_guard<py::gil_scoped_release>());
  m.def("bakeoff_grid", &bakeoff_grid, py::arg("noise"), py::arg("runs_per_cell"),
        py::arg("master_seed"), py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>());
}
