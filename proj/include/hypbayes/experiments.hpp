#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hypbayes/config.hpp"
#include "hypbayes/mcmc.hpp"

namespace hypbayes {

struct RunOptions {
  std::size_t workers = 1;
  /// Artifacts are written here when nonempty.
  std::filesystem::path out;
  /// Record wall time in summary.json (breaks byte-identical reruns).
  bool record_runtime = false;
  /// Directory for cached reference ensembles; defaults to out/cache.
  std::filesystem::path cache_dir;
  /// Central marker of study errors: mean (default) or median of per-chain W1.
  bool use_median = false;
};

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> counts;
};

/// Equal-width bins on [lo, hi]; the last bin is closed. Values outside are
/// not counted.
Histogram histogram(std::span<const double> values, double lo, double hi, std::size_t bins);

struct ExperimentResult {
  Vector data;
  Ensemble ensemble;
  Samples pooled;
  Summary summary;
  double acceptance_rate = 0.0;
  double runtime_seconds = 0.0;
};

/// Synthesizes data from the ground truth, runs config.ensemble_size chains
/// and writes chain_XXX.csv, samples_XXX.csv, histograms.json, summary.json.
ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options);

/// Least-squares slope of log y against log x. nullopt with fewer than two points.
std::optional<double> loglog_slope(std::span<const double> x, std::span<const double> y);

struct StudyPoint {
  double axis = 0.0;
  /// Per marginal: central value and quartiles of the per-chain W1 errors.
  std::vector<double> error;
  std::vector<double> q25;
  std::vector<double> q75;
  /// per_chain[k][marginal]
  std::vector<std::vector<double>> per_chain;
};

struct StudyResult {
  std::string axis_name;
  std::vector<StudyPoint> points;
  /// Per marginal, fitted over every point.
  std::vector<std::optional<double>> slopes;
  /// Per marginal, fitted over the points before saturation.
  std::vector<std::optional<double>> slopes_before_saturation;
  /// Per marginal, index of the first saturated point (points.size() if none).
  std::vector<std::size_t> saturation_index;
};

/// Ensemble W1 error against the pooled reference ensemble of length N* for
/// each chain length. Burn-in scales as b N / config.chain_length.
StudyResult study_chain_length(const ExperimentConfig& config, const RunOptions& options);

/// Ensemble W1 error of posteriors on coarse grids against a fine-grid
/// reference, all chains sharing seeds across resolutions.
StudyResult study_dx(const ExperimentConfig& config, const RunOptions& options);

struct StabilityRow {
  std::size_t component = 0;
  double delta = 0.0;
  /// |y - y'|
  double data_distance = 0.0;
  std::vector<double> w1;
  std::vector<double> ratio;
};

/// W1 between pooled posteriors for y and y + delta e_c with common random
/// numbers, per marginal.
std::vector<StabilityRow> study_posterior_stability(const ExperimentConfig& config,
                                                    const RunOptions& options);

enum class RiemannCase { shock, rarefaction, constant };

struct RateCheckRow {
  std::size_t cells = 0;
  double dx = 0.0;
  double l1_error = 0.0;
};

struct RateCheckResult {
  RiemannCase which = RiemannCase::shock;
  double ul = 0.0;
  double ur = 0.0;
  std::vector<RateCheckRow> rows;
  std::optional<double> order;
};

/// L1 error of the Burgers scheme against the exact Riemann solution at T on
/// [x_min, x_max] with the jump at 0; order is minus the log-log slope against
/// 1/cells. nullopt order for the constant case (zero errors).
RateCheckResult fv_rate_check(RiemannCase which, std::span<const std::size_t> cells,
                              const SchemeConfig& scheme, double x_min = -1.0, double x_max = 1.0,
                              double T = 0.5);

const char* to_string(RiemannCase which);

/// Artifact writers used by the CLI.
void write_study(const StudyResult& result, const ExperimentConfig& config,
                 const std::filesystem::path& dir, const std::string& stem);
void write_stability(std::span<const StabilityRow> rows, const ExperimentConfig& config,
                     const std::filesystem::path& dir);
void write_rate_checks(std::span<const RateCheckResult> results, const std::filesystem::path& dir);

}  // namespace hypbayes
