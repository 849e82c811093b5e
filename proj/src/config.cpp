#include "hypbayes/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "hypbayes/error.hpp"
#include "hypbayes/format.hpp"

namespace hypbayes {

using json = nlohmann::json;

const char* to_string(ExperimentId id) {
  switch (id) {
    case ExperimentId::exp1: return "exp1";
    case ExperimentId::exp2: return "exp2";
    case ExperimentId::exp3: return "exp3";
  }
  return "?";
}

ExperimentId parse_experiment_id(const std::string& s) {
  if (s == "exp1") return ExperimentId::exp1;
  if (s == "exp2") return ExperimentId::exp2;
  if (s == "exp3") return ExperimentId::exp3;
  throw ConfigError("experiment: unknown id '" + s + "' (expected exp1, exp2 or exp3)");
}

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

ExperimentConfig preset(ExperimentId id) {
  ExperimentConfig c;
  c.experiment = id;
  switch (id) {
    case ExperimentId::exp1:
      c.param_names = {"delta_1", "delta_2", "sigma_0"};
      c.x_min = -1.0;
      c.x_max = 1.0;
      c.cells = 128;
      c.T = 1.0;
      c.prior_mean = vec({0.1, -0.1, -0.1});
      c.window_centers = {-0.5, -0.25, 0.35, 0.5, 0.65};
      c.window_half_width = 0.05;
      c.ground_truth = Vector::Zero(3);
      c.chain_length = 2500;
      c.burn_in = 500;
      c.thinning = 20;
      c.schedule = {0.05, 0.001, 250};
      break;
    case ExperimentId::exp2:
      c.param_names = {"delta", "a"};
      c.x_min = -1.0;
      c.x_max = 1.0;
      c.cells = 128;
      c.T = 1.0;
      c.lambda = 0.4;
      c.prior_mean = vec({0.1, 0.9});
      c.window_centers = {-0.5, 0.1, 0.3, 0.5, 0.7, 0.9};
      c.window_half_width = 0.075;
      c.ground_truth = vec({0.0, 1.0});
      c.chain_length = 2500;
      c.burn_in = 500;
      c.thinning = 20;
      c.schedule = {0.05, 0.001, 250};
      c.study_dx.reference_cells = 256;
      break;
    case ExperimentId::exp3:
      c.param_names = {"delta_L", "gamma_L", "beta_L", "delta_R", "gamma_R", "beta_R"};
      c.x_min = 0.0;
      c.x_max = 1.0;
      c.cells = 128;
      c.T = 0.2;
      c.prior_mean = vec({-0.1, 0.1, -0.1, 0.1, 0.1, 0.1});
      c.window_centers = {0.1, 0.25, 0.5, 0.75, 0.9};
      c.window_half_width = 0.05;
      c.ground_truth = Vector::Zero(6);
      c.chain_length = 1500;
      c.burn_in = 500;
      c.thinning = 10;
      c.schedule = BetaSchedule::constant(0.0005);
      c.study_chain.lengths = {250, 500, 1000};
      c.study_chain.reference_length = 1500;
      c.study_dx.cells = {16, 32, 64};
      c.study_dx.reference_cells = 128;
      c.study_dx.chain_length = 1500;
      c.study_stability.chain_length = 1500;
      break;
  }
  return c;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& msg) {
    throw ConfigError("config field '" + field + "': " + msg);
  };
  const std::size_t expected_dim = experiment == ExperimentId::exp1 ? 3 : (experiment == ExperimentId::exp2 ? 2 : 6);
  if (param_dim() != expected_dim) {
    fail("prior.mean", "expected " + std::to_string(expected_dim) + " components for " + to_string(experiment));
  }
  if (static_cast<std::size_t>(ground_truth.size()) != expected_dim) {
    fail("ground_truth", "expected " + std::to_string(expected_dim) + " components");
  }
  if (param_names.size() != expected_dim) fail("param_names", "expected " + std::to_string(expected_dim) + " names");
  if (!(x_max > x_min)) fail("domain", "upper bound must exceed lower bound");
  if (cells == 0) fail("cells", "must be positive");
  if (!(T >= 0.0)) fail("T", "must be nonnegative");
  if (!(cfl > 0.0 && cfl <= 1.0)) fail("cfl", "must lie in (0, 1]");
  if (!(lambda > 0.0)) fail("lambda", "must be positive");
  if (!(prior_phi > 0.0)) fail("prior.phi", "must be positive");
  if (!(noise_gamma > 0.0)) fail("noise_gamma", "must be positive");
  if (window_centers.empty()) fail("windows.centers", "need at least one window");
  if (!(window_half_width > 0.0)) fail("windows.half_width", "must be positive");
  for (double c : window_centers) {
    if (c - window_half_width < x_min || c + window_half_width > x_max) {
      fail("windows.centers", "window around " + fmt_g17(c) + " leaves the domain");
    }
  }
  if (chain_length == 0) fail("chain.length", "must be positive");
  if (burn_in > chain_length) fail("chain.burn_in", "must not exceed chain.length");
  if (thinning == 0) fail("chain.thinning", "must be >= 1");
  if (!(schedule.beta1 > 0.0) || !(schedule.beta0 >= schedule.beta1)) fail("chain.beta0/beta1", "need beta0 >= beta1 > 0");
  if (schedule.k_b == 0) fail("chain.k_b", "must be positive");
  if (ensemble_size == 0) fail("ensemble_size", "must be positive");
  if (histogram_bins == 0) fail("histogram_bins", "must be positive");
  if (study_chain.lengths.empty()) fail("study_chain.lengths", "must not be empty");
  for (auto n : study_chain.lengths) {
    if (n == 0 || n >= study_chain.reference_length) fail("study_chain.lengths", "each length must lie in (0, reference_length)");
  }
  if (study_chain.ensemble_size == 0) fail("study_chain.ensemble_size", "must be positive");
  if (study_dx.cells.empty()) fail("study_dx.cells", "must not be empty");
  for (auto n : study_dx.cells) {
    if (n == 0 || n >= study_dx.reference_cells) fail("study_dx.cells", "each cell count must lie in (0, reference_cells)");
  }
  if (study_dx.ensemble_size == 0 || study_dx.chain_length == 0) fail("study_dx", "ensemble_size and chain_length must be positive");
  if (study_stability.deltas.empty()) fail("study_stability.deltas", "must not be empty");
  for (auto c : study_stability.components) {
    if (c >= observation_dim()) fail("study_stability.components", "component " + std::to_string(c) + " out of range");
  }
  if (study_stability.ensemble_size == 0 || study_stability.chain_length == 0) {
    fail("study_stability", "ensemble_size and chain_length must be positive");
  }
}

namespace {

json to_json_vec(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

template <class T>
void read(const json& j, const char* key, const std::string& path, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config field '" + path + key + "': " + e.what());
  }
}

void read_vec(const json& j, const char* key, const std::string& path, Vector& out) {
  if (!j.contains(key)) return;
  std::vector<double> v;
  read(j, key, path, v);
  out = Eigen::Map<Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  std::string id = "exp1";
  read(j, "experiment", "", id);
  ExperimentConfig c = preset(parse_experiment_id(id));

  static const char* known[] = {"experiment", "param_names", "domain", "cells", "T", "cfl", "lambda",
                                "numerical_flux", "prior", "noise_gamma", "windows", "ground_truth", "chain",
                                "ensemble_size", "seeds", "histogram_bins", "study_chain", "study_dx",
                                "study_stability"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }

  read(j, "param_names", "", c.param_names);
  if (j.contains("domain")) {
    std::vector<double> d;
    read(j, "domain", "", d);
    if (d.size() != 2) throw ConfigError("config field 'domain': expected [x_min, x_max]");
    c.x_min = d[0];
    c.x_max = d[1];
  }
  read(j, "cells", "", c.cells);
  read(j, "T", "", c.T);
  read(j, "cfl", "", c.cfl);
  read(j, "lambda", "", c.lambda);
  if (j.contains("numerical_flux")) {
    std::string f;
    read(j, "numerical_flux", "", f);
    if (f == "rusanov") {
      c.numerical_flux = NumericalFlux::rusanov;
    } else if (f == "lax_friedrichs") {
      c.numerical_flux = NumericalFlux::lax_friedrichs;
    } else {
      throw ConfigError("config field 'numerical_flux': expected rusanov or lax_friedrichs");
    }
  }
  if (j.contains("prior")) {
    const json& p = j.at("prior");
    read_vec(p, "mean", "prior.", c.prior_mean);
    read(p, "phi", "prior.", c.prior_phi);
  }
  read(j, "noise_gamma", "", c.noise_gamma);
  if (j.contains("windows")) {
    const json& w = j.at("windows");
    read(w, "centers", "windows.", c.window_centers);
    read(w, "half_width", "windows.", c.window_half_width);
    read(w, "weight", "windows.", c.window_weight);
  }
  read_vec(j, "ground_truth", "", c.ground_truth);
  if (j.contains("chain")) {
    const json& ch = j.at("chain");
    read(ch, "length", "chain.", c.chain_length);
    read(ch, "burn_in", "chain.", c.burn_in);
    read(ch, "thinning", "chain.", c.thinning);
    read(ch, "beta0", "chain.", c.schedule.beta0);
    read(ch, "beta1", "chain.", c.schedule.beta1);
    read(ch, "k_b", "chain.", c.schedule.k_b);
  }
  read(j, "ensemble_size", "", c.ensemble_size);
  if (j.contains("seeds")) {
    read(j.at("seeds"), "data", "seeds.", c.data_seed);
    read(j.at("seeds"), "chain", "seeds.", c.chain_seed);
  }
  read(j, "histogram_bins", "", c.histogram_bins);
  if (j.contains("study_chain")) {
    const json& s = j.at("study_chain");
    read(s, "lengths", "study_chain.", c.study_chain.lengths);
    read(s, "reference_length", "study_chain.", c.study_chain.reference_length);
    read(s, "ensemble_size", "study_chain.", c.study_chain.ensemble_size);
  }
  if (j.contains("study_dx")) {
    const json& s = j.at("study_dx");
    read(s, "cells", "study_dx.", c.study_dx.cells);
    read(s, "reference_cells", "study_dx.", c.study_dx.reference_cells);
    read(s, "chain_length", "study_dx.", c.study_dx.chain_length);
    read(s, "ensemble_size", "study_dx.", c.study_dx.ensemble_size);
  }
  if (j.contains("study_stability")) {
    const json& s = j.at("study_stability");
    read(s, "deltas", "study_stability.", c.study_stability.deltas);
    read(s, "components", "study_stability.", c.study_stability.components);
    read(s, "chain_length", "study_stability.", c.study_stability.chain_length);
    read(s, "ensemble_size", "study_stability.", c.study_stability.ensemble_size);
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const ExperimentConfig& c) {
  json j;
  j["experiment"] = to_string(c.experiment);
  j["param_names"] = c.param_names;
  j["domain"] = {c.x_min, c.x_max};
  j["cells"] = c.cells;
  j["T"] = c.T;
  j["cfl"] = c.cfl;
  j["lambda"] = c.lambda;
  j["numerical_flux"] = c.numerical_flux == NumericalFlux::rusanov ? "rusanov" : "lax_friedrichs";
  j["prior"] = {{"mean", to_json_vec(c.prior_mean)}, {"phi", c.prior_phi}};
  j["noise_gamma"] = c.noise_gamma;
  j["windows"] = {{"centers", c.window_centers}, {"half_width", c.window_half_width}, {"weight", c.window_weight}};
  j["ground_truth"] = to_json_vec(c.ground_truth);
  j["chain"] = {{"length", c.chain_length}, {"burn_in", c.burn_in}, {"thinning", c.thinning},
                {"beta0", c.schedule.beta0}, {"beta1", c.schedule.beta1}, {"k_b", c.schedule.k_b}};
  j["ensemble_size"] = c.ensemble_size;
  j["seeds"] = {{"data", c.data_seed}, {"chain", c.chain_seed}};
  j["histogram_bins"] = c.histogram_bins;
  j["study_chain"] = {{"lengths", c.study_chain.lengths},
                      {"reference_length", c.study_chain.reference_length},
                      {"ensemble_size", c.study_chain.ensemble_size}};
  j["study_dx"] = {{"cells", c.study_dx.cells},
                   {"reference_cells", c.study_dx.reference_cells},
                   {"chain_length", c.study_dx.chain_length},
                   {"ensemble_size", c.study_dx.ensemble_size}};
  j["study_stability"] = {{"deltas", c.study_stability.deltas},
                          {"components", c.study_stability.components},
                          {"chain_length", c.study_stability.chain_length},
                          {"ensemble_size", c.study_stability.ensemble_size}};
  return j.dump(2);
}

}  // namespace hypbayes
