#include "hypbayes/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <numeric>
#include <sstream>

#include "hypbayes/error.hpp"
#include "hypbayes/format.hpp"
#include "hypbayes/problems.hpp"
#include "hypbayes/wasserstein.hpp"

namespace hypbayes {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

json vec_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write '" + path.string() + "'");
  os << text;
}

std::string chain_name(const char* prefix, std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%03zu.csv", prefix, k);
  return buf;
}

std::size_t scaled_burn_in(const ExperimentConfig& config, std::size_t length) {
  return config.burn_in * length / config.chain_length;
}

ChainConfig chain_config(const ExperimentConfig& config, std::size_t length, std::uint64_t seed) {
  ChainConfig c;
  c.length = length;
  c.burn_in = scaled_burn_in(config, length);
  c.thinning = config.thinning;
  c.seed = seed;
  return c;
}

std::vector<Samples> retained(const Ensemble& ens, const ChainConfig& cc) {
  std::vector<Samples> out;
  out.reserve(ens.chains.size());
  for (const auto& ch : ens.chains) out.push_back(retain(ch, cc.burn_in, cc.thinning));
  return out;
}

Samples pool(std::span<const Samples> parts) {
  Samples all;
  for (const auto& s : parts) all.append(s);
  return all;
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  const std::size_t j = std::min(i + 1, v.size() - 1);
  return v[i] + (pos - static_cast<double>(i)) * (v[j] - v[i]);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Samples read_samples_csv(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  Samples s;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    s.points.push_back(Eigen::Map<Vector>(row.data(), static_cast<Eigen::Index>(row.size())));
    s.neg_log_posts.push_back(0.0);
  }
  return s;
}

/// Pooled retained samples of a reference ensemble, cached on disk by a hash
/// of everything that determines them.
Samples reference_samples(const ExperimentConfig& config, std::size_t cells, std::size_t length,
                          std::size_t chains, std::uint64_t base_seed, const Vector& data,
                          const RunOptions& options) {
  const ChainConfig cc = chain_config(config, length, base_seed);
  fs::path cache_file;
  const fs::path cache_dir = !options.cache_dir.empty() ? options.cache_dir
                             : !options.out.empty()     ? options.out / "cache"
                                                        : fs::path{};
  if (!cache_dir.empty()) {
    std::string key = dump_config(config) + "|cells=" + std::to_string(cells) + "|N=" + std::to_string(length) +
                      "|K=" + std::to_string(chains) + "|seed=" + std::to_string(base_seed) + "|y=";
    for (Eigen::Index i = 0; i < data.size(); ++i) key += fmt_g17(data[i]) + ",";
    char name[40];
    std::snprintf(name, sizeof name, "ref_%016llx.csv", static_cast<unsigned long long>(fnv1a(key)));
    cache_file = cache_dir / name;
    if (fs::exists(cache_file)) return read_samples_csv(cache_file);
  }
  const PosteriorModel post = make_posterior(config, cells, data);
  const Ensemble ens = run_ensemble(post, cc, config.schedule, chains, options.workers);
  Samples all = pool(retained(ens, cc));
  if (!cache_file.empty()) {
    fs::create_directories(cache_dir);
    std::ostringstream os;
    write_samples_csv(os, all);
    write_text(cache_file, os.str());
  }
  return all;
}

std::vector<EmpiricalDistribution> marginals(const Samples& s) {
  std::vector<EmpiricalDistribution> out;
  for (std::size_t k = 0; k < s.dim(); ++k) out.emplace_back(s.marginal(k));
  return out;
}

StudyPoint study_point(double axis, std::span<const Samples> per_chain, const Samples& reference,
                       bool use_median) {
  const auto ref = marginals(reference);
  StudyPoint p;
  p.axis = axis;
  for (const auto& s : per_chain) {
    std::vector<double> row;
    for (std::size_t k = 0; k < ref.size(); ++k) row.push_back(w1(EmpiricalDistribution(s.marginal(k)), ref[k]));
    p.per_chain.push_back(std::move(row));
  }
  for (std::size_t k = 0; k < ref.size(); ++k) {
    std::vector<double> v;
    for (const auto& row : p.per_chain) v.push_back(row[k]);
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    p.error.push_back(use_median ? quantile(v, 0.5) : mean);
    p.q25.push_back(quantile(v, 0.25));
    p.q75.push_back(quantile(v, 0.75));
  }
  return p;
}

/// Points ordered from coarsest to finest; saturation starts at the first
/// point whose error does not improve on its predecessor.
void fit_slopes(StudyResult& r) {
  const std::size_t d = r.points.empty() ? 0 : r.points[0].error.size();
  std::vector<double> axis;
  for (const auto& p : r.points) axis.push_back(p.axis);
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<double> err;
    for (const auto& p : r.points) err.push_back(p.error[k]);
    r.slopes.push_back(loglog_slope(axis, err));
    std::size_t sat = err.size();
    for (std::size_t i = 1; i < err.size(); ++i) {
      if (err[i] >= err[i - 1]) {
        sat = i;
        break;
      }
    }
    r.saturation_index.push_back(sat);
    r.slopes_before_saturation.push_back(
        loglog_slope(std::span(axis).first(sat), std::span<const double>(err).first(sat)));
  }
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

Histogram histogram(std::span<const double> values, double lo, double hi, std::size_t bins) {
  if (bins == 0) throw ConfigError("histogram: need at least one bin");
  if (!(hi > lo)) throw ConfigError("histogram: empty range");
  Histogram h{lo, hi, std::vector<std::size_t>(bins, 0)};
  for (double v : values) {
    if (v < lo || v > hi) continue;
    auto i = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
    ++h.counts[std::min(i, bins - 1)];
  }
  return h;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentResult r;
  r.data = synthesize(config);
  const PosteriorModel post = make_posterior(config, config.cells, r.data);
  const ChainConfig cc = chain_config(config, config.chain_length, config.chain_seed);
  r.ensemble = run_ensemble(post, cc, config.schedule, config.ensemble_size, options.workers);
  const auto parts = retained(r.ensemble, cc);
  r.pooled = pool(parts);
  r.summary = summarize(r.pooled);
  for (const auto& ch : r.ensemble.chains) r.acceptance_rate += ch.acceptance_rate();
  r.acceptance_rate /= static_cast<double>(r.ensemble.chains.size());
  r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (options.out.empty()) return r;
  fs::create_directories(options.out);
  json seeds = {{"data", config.data_seed}, {"chain_base", config.chain_seed}, {"chains", json::array()}};
  for (std::size_t k = 0; k < r.ensemble.chains.size(); ++k) {
    std::ostringstream chain_os;
    write_chain_csv(chain_os, r.ensemble.chains[k]);
    write_text(options.out / chain_name("chain", k), chain_os.str());
    std::ostringstream samples_os;
    write_samples_csv(samples_os, parts[k]);
    write_text(options.out / chain_name("samples", k), samples_os.str());
    seeds["chains"].push_back(r.ensemble.chains[k].seed);
  }

  json hist = {{"experiment", to_string(config.experiment)},
               {"bins", config.histogram_bins},
               {"retained_samples", r.pooled.size()},
               {"marginals", json::array()}};
  for (std::size_t k = 0; k < r.pooled.dim(); ++k) {
    const auto values = r.pooled.marginal(k);
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    const double centre = r.summary.mean[static_cast<Eigen::Index>(k)];
    const double lo = std::min(centre - 4.0 * config.prior_phi, *mn);
    const double hi = std::max(centre + 4.0 * config.prior_phi, *mx);
    const Histogram h = histogram(values, lo, hi, config.histogram_bins);
    hist["marginals"].push_back({{"param", config.param_names[k]},
                                 {"lo", h.lo},
                                 {"hi", h.hi},
                                 {"counts", h.counts},
                                 {"prior_mean", config.prior_mean[static_cast<Eigen::Index>(k)]},
                                 {"prior_std", config.prior_phi},
                                 {"ground_truth", config.ground_truth[static_cast<Eigen::Index>(k)]}});
  }
  write_text(options.out / "histograms.json", hist.dump(2) + "\n");

  json summary = {{"experiment", to_string(config.experiment)},
                  {"params", config.param_names},
                  {"posterior_mean", vec_json(r.summary.mean)},
                  {"posterior_map", vec_json(r.summary.map_estimate)},
                  {"map_neg_log_post", r.summary.map_neg_log_post},
                  {"acceptance_rate", r.acceptance_rate},
                  {"runtime_seconds", options.record_runtime ? json(r.runtime_seconds) : json(nullptr)},
                  {"seeds", seeds},
                  {"ground_truth", vec_json(config.ground_truth)},
                  {"data", vec_json(r.data)},
                  {"chains", r.ensemble.chains.size()},
                  {"retained_samples", r.pooled.size()}};
  write_text(options.out / "summary.json", summary.dump(2) + "\n");
  return r;
}

std::optional<double> loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ConfigError("loglog_slope: size mismatch");
  if (x.size() < 2) return std::nullopt;
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::nullopt;
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

StudyResult study_chain_length(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const auto& s = config.study_chain;
  const Vector y = synthesize(config);
  const Samples reference = reference_samples(config, config.cells, s.reference_length, s.ensemble_size,
                                              derive_seed(config.chain_seed, 0, 1), y, options);
  const PosteriorModel post = make_posterior(config, config.cells, y);
  StudyResult r;
  r.axis_name = "N";
  for (std::size_t n : s.lengths) {
    const ChainConfig cc = chain_config(config, n, config.chain_seed);
    const auto parts = retained(run_ensemble(post, cc, config.schedule, s.ensemble_size, options.workers), cc);
    r.points.push_back(study_point(static_cast<double>(n), parts, reference, options.use_median));
  }
  fit_slopes(r);
  return r;
}

StudyResult study_dx(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const auto& s = config.study_dx;
  const Vector y = synthesize(config);
  const Samples reference =
      reference_samples(config, s.reference_cells, s.chain_length, s.ensemble_size, config.chain_seed, y, options);
  StudyResult r;
  r.axis_name = "dx";
  const ChainConfig cc = chain_config(config, s.chain_length, config.chain_seed);
  for (std::size_t cells : s.cells) {
    const PosteriorModel post = make_posterior(config, cells, y);
    const auto parts = retained(run_ensemble(post, cc, config.schedule, s.ensemble_size, options.workers), cc);
    r.points.push_back(
        study_point((config.x_max - config.x_min) / static_cast<double>(cells), parts, reference, options.use_median));
  }
  fit_slopes(r);
  return r;
}

std::vector<StabilityRow> study_posterior_stability(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const auto& s = config.study_stability;
  const Vector y = synthesize(config);
  const ChainConfig cc = chain_config(config, s.chain_length, config.chain_seed);
  auto pooled_for = [&](const Vector& data) {
    const PosteriorModel post = make_posterior(config, config.cells, data);
    return marginals(pool(retained(run_ensemble(post, cc, config.schedule, s.ensemble_size, options.workers), cc)));
  };
  const auto base = pooled_for(y);
  std::vector<StabilityRow> rows;
  for (std::size_t c : s.components) {
    for (double delta : s.deltas) {
      Vector y2 = y;
      y2[static_cast<Eigen::Index>(c)] += delta;
      const auto perturbed = pooled_for(y2);
      StabilityRow row;
      row.component = c;
      row.delta = delta;
      row.data_distance = (y2 - y).norm();
      for (std::size_t k = 0; k < base.size(); ++k) {
        row.w1.push_back(w1(base[k], perturbed[k]));
        row.ratio.push_back(row.data_distance > 0.0 ? row.w1.back() / row.data_distance
                                                    : std::numeric_limits<double>::quiet_NaN());
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

const char* to_string(RiemannCase which) {
  switch (which) {
    case RiemannCase::shock: return "shock";
    case RiemannCase::rarefaction: return "rarefaction";
    case RiemannCase::constant: return "constant";
  }
  return "?";
}

RateCheckResult fv_rate_check(RiemannCase which, std::span<const std::size_t> cells, const SchemeConfig& scheme,
                              double x_min, double x_max, double T) {
  RateCheckResult r;
  r.which = which;
  switch (which) {
    case RiemannCase::shock: r.ul = 1.0; r.ur = 0.0; break;
    case RiemannCase::rarefaction: r.ul = 0.0; r.ur = 1.0; break;
    case RiemannCase::constant: r.ul = 1.0; r.ur = 1.0; break;
  }
  const ScalarFlux flux = ScalarFlux::burgers();
  std::vector<double> dxs;
  std::vector<double> errs;
  for (std::size_t n : cells) {
    const MeshPtr mesh = make_mesh(Grid1D(x_min, x_max, n));
    const CellField w = solve(project(StepFunction{{0.0}, {r.ul, r.ur}}, mesh), flux, T, scheme);
    const double err = riemann_l1_error(w, r.ul, r.ur, 0.0, T);
    r.rows.push_back({n, mesh->max_width(), err});
    dxs.push_back(mesh->max_width());
    errs.push_back(err);
  }
  if (which != RiemannCase::constant) r.order = loglog_slope(dxs, errs);
  return r;
}

void write_study(const StudyResult& result, const ExperimentConfig& config, const fs::path& dir,
                 const std::string& stem) {
  fs::create_directories(dir);
  std::ostringstream csv;
  csv << result.axis_name << ",param,error,q25,q75\n";
  for (const auto& p : result.points) {
    for (std::size_t k = 0; k < p.error.size(); ++k) {
      csv << fmt_g17(p.axis) << ',' << config.param_names[k] << ',' << fmt_g17(p.error[k]) << ','
          << fmt_g17(p.q25[k]) << ',' << fmt_g17(p.q75[k]) << '\n';
    }
  }
  write_text(dir / (stem + ".csv"), csv.str());

  json j = {{"experiment", to_string(config.experiment)}, {"axis", result.axis_name}, {"params", config.param_names}};
  json marg = json::array();
  for (std::size_t k = 0; k < result.slopes.size(); ++k) {
    marg.push_back({{"param", config.param_names[k]},
                    {"slope", optional_json(result.slopes[k])},
                    {"slope_before_saturation", optional_json(result.slopes_before_saturation[k])},
                    {"saturation_index", result.saturation_index[k]}});
  }
  j["marginals"] = marg;
  json pts = json::array();
  for (const auto& p : result.points) {
    pts.push_back({{"axis", p.axis}, {"error", p.error}, {"q25", p.q25}, {"q75", p.q75}, {"per_chain", p.per_chain}});
  }
  j["points"] = pts;
  write_text(dir / (stem + ".json"), j.dump(2) + "\n");
}

void write_stability(std::span<const StabilityRow> rows, const ExperimentConfig& config, const fs::path& dir) {
  fs::create_directories(dir);
  std::ostringstream csv;
  csv << "component,delta,data_distance,param,w1,ratio\n";
  json j = {{"experiment", to_string(config.experiment)}, {"rows", json::array()}};
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < r.w1.size(); ++k) {
      csv << r.component << ',' << fmt_g17(r.delta) << ',' << fmt_g17(r.data_distance) << ','
          << config.param_names[k] << ',' << fmt_g17(r.w1[k]) << ',' << fmt_g17(r.ratio[k]) << '\n';
    }
    j["rows"].push_back({{"component", r.component},
                         {"delta", r.delta},
                         {"data_distance", r.data_distance},
                         {"w1", r.w1},
                         {"ratio", r.ratio}});
  }
  write_text(dir / "stability.csv", csv.str());
  write_text(dir / "stability.json", j.dump(2) + "\n");
}

void write_rate_checks(std::span<const RateCheckResult> results, const fs::path& dir) {
  fs::create_directories(dir);
  std::ostringstream csv;
  csv << "case,cells,dx,l1_error\n";
  json j = json::array();
  for (const auto& r : results) {
    for (const auto& row : r.rows) {
      csv << to_string(r.which) << ',' << row.cells << ',' << fmt_g17(row.dx) << ',' << fmt_g17(row.l1_error) << '\n';
    }
    j.push_back({{"case", to_string(r.which)}, {"ul", r.ul}, {"ur", r.ur}, {"order", optional_json(r.order)}});
  }
  write_text(dir / "rate_check.csv", csv.str());
  write_text(dir / "rate_check.json", j.dump(2) + "\n");
}

}  // namespace hypbayes
