#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hypbayes/bayes.hpp"
#include "hypbayes/mcmc.hpp"
#include "hypbayes/scalar_fv.hpp"

namespace hypbayes {

enum class ExperimentId { exp1, exp2, exp3 };

const char* to_string(ExperimentId id);
ExperimentId parse_experiment_id(const std::string& s);

struct ChainStudySettings {
  std::vector<std::size_t> lengths{250, 500, 1000, 2000};
  std::size_t reference_length = 4000;
  std::size_t ensemble_size = 10;
};

struct DxStudySettings {
  std::vector<std::size_t> cells{16, 32, 64, 128};
  std::size_t reference_cells = 256;
  std::size_t chain_length = 2500;
  std::size_t ensemble_size = 10;
};

struct StabilityStudySettings {
  std::vector<double> deltas{0.01, 0.02, 0.04};
  std::vector<std::size_t> components{0};
  std::size_t chain_length = 4000;
  std::size_t ensemble_size = 10;
};

/// Everything needed to reproduce one experiment and its studies. JSON keys
/// mirror the member names; see README for the full list.
struct ExperimentConfig {
  ExperimentId experiment = ExperimentId::exp1;
  std::vector<std::string> param_names;

  // Forward solver.
  double x_min = -1.0;
  double x_max = 1.0;
  std::size_t cells = 128;
  double T = 1.0;
  double cfl = 0.5;      // exp1 (scalar scheme) and exp3 (Euler)
  double lambda = 0.4;   // exp2 (fixed lambda)
  NumericalFlux numerical_flux = NumericalFlux::rusanov;

  // Bayesian model.
  Vector prior_mean;
  double prior_phi = 0.15;
  double noise_gamma = 0.05;
  std::vector<double> window_centers;
  double window_half_width = 0.05;
  double window_weight = 10.0;
  Vector ground_truth;

  // Sampler.
  std::size_t chain_length = 2500;
  std::size_t burn_in = 500;
  std::size_t thinning = 20;
  BetaSchedule schedule{};
  std::size_t ensemble_size = 1;
  std::uint64_t data_seed = 1;
  std::uint64_t chain_seed = 2;

  std::size_t histogram_bins = 40;

  ChainStudySettings study_chain;
  DxStudySettings study_dx;
  StabilityStudySettings study_stability;

  std::size_t param_dim() const noexcept { return static_cast<std::size_t>(prior_mean.size()); }
  std::size_t observation_dim() const noexcept {
    return window_centers.size() * (experiment == ExperimentId::exp3 ? 3 : 1);
  }

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

ExperimentConfig preset(ExperimentId id);

/// Parses a JSON config. Keys not present keep the values of the preset
/// named by "experiment" (default exp1).
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string dump_config(const ExperimentConfig& config);

}  // namespace hypbayes
