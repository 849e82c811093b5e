#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

#include "hypbayes/bayes.hpp"
#include "hypbayes/error.hpp"
#include "hypbayes/parallel.hpp"
#include "hypbayes/rng.hpp"

namespace hypbayes {

/// Anything the random-walk sampler can target: an unnormalized negative
/// log density I(u) and a Gaussian prior whose covariance shapes proposals.
template <class T>
concept SamplingTarget = requires(const T& t, const Vector& u) {
  { t.neg_log_posterior(u) } -> std::convertible_to<double>;
  { t.prior() } -> std::convertible_to<const GaussianPrior&>;
};

/// Step size beta(k): linear from beta0 down to beta1 over k_b steps, then flat.
struct BetaSchedule {
  double beta0 = 0.05;
  double beta1 = 0.001;
  std::size_t k_b = 250;

  static BetaSchedule constant(double beta) { return {beta, beta, 1}; }
  void validate() const;
};

double beta_at(const BetaSchedule& schedule, std::size_t k);

struct ChainConfig {
  std::size_t length = 2500;  // N transitions
  std::size_t burn_in = 500;
  std::size_t thinning = 20;
  std::uint64_t seed = 0;
  std::optional<Vector> initial;  // prior mean when unset

  void validate() const;
};

/// states[0..N]; accepted[n] refers to the transition states[n] -> states[n+1].
struct Chain {
  std::vector<Vector> states;
  std::vector<std::uint8_t> accepted;
  std::vector<double> neg_log_posts;
  std::uint64_t seed = 0;

  std::size_t length() const noexcept { return accepted.size(); }
  double acceptance_rate() const;
};

struct MhStep {
  Vector next;
  double neg_log_post = 0.0;
  bool accepted = false;
  double acceptance_probability = 0.0;
};

/// I(u), with forward-solver failures mapped to +infinity.
template <SamplingTarget T>
double safe_neg_log_posterior(const T& target, const Vector& u) {
  try {
    const double v = target.neg_log_posterior(u);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  } catch (const ForwardError&) {
    return std::numeric_limits<double>::infinity();
  }
}

/// One random-walk Metropolis-Hastings transition: v = u + beta xi with
/// xi ~ N(0, C), accepted with probability min(1, exp(I(u) - I(v))).
/// Always consumes dim normals and one uniform from `rng`.
template <SamplingTarget T>
MhStep mh_step(const T& target, const Vector& u, double current_nlp, double beta, Rng& rng) {
  std::normal_distribution<double> normal;
  Vector z(u.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normal(rng);
  const double uniform = std::uniform_real_distribution<double>(0.0, 1.0)(rng);

  Vector proposal = u + beta * target.prior().correlate(z);
  const double proposal_nlp = safe_neg_log_posterior(target, proposal);
  const double log_ratio = current_nlp - proposal_nlp;
  const double prob = std::isfinite(proposal_nlp) ? (log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio)) : 0.0;
  if (uniform < prob) return {std::move(proposal), proposal_nlp, true, prob};
  return {u, current_nlp, false, prob};
}

template <SamplingTarget T>
MhStep mh_step(const T& target, const Vector& u, double beta, Rng& rng) {
  return mh_step(target, u, safe_neg_log_posterior(target, u), beta, rng);
}

template <SamplingTarget T>
Chain run_chain(const T& target, const ChainConfig& config, const BetaSchedule& schedule) {
  config.validate();
  schedule.validate();
  Chain chain;
  chain.seed = config.seed;
  chain.states.reserve(config.length + 1);
  chain.accepted.reserve(config.length);
  chain.neg_log_posts.reserve(config.length + 1);

  Vector u = config.initial ? *config.initial : target.prior().mean();
  if (static_cast<std::size_t>(u.size()) != target.prior().dim()) {
    throw ConfigError("run_chain: initial state has the wrong dimension");
  }
  double nlp = safe_neg_log_posterior(target, u);
  if (!std::isfinite(nlp)) throw ConfigError("run_chain: initial state has infinite I(u)");
  chain.states.push_back(u);
  chain.neg_log_posts.push_back(nlp);

  Rng rng(config.seed);
  for (std::size_t n = 0; n < config.length; ++n) {
    MhStep s = mh_step(target, u, nlp, beta_at(schedule, n), rng);
    u = std::move(s.next);
    nlp = s.neg_log_post;
    chain.states.push_back(u);
    chain.neg_log_posts.push_back(nlp);
    chain.accepted.push_back(s.accepted ? 1 : 0);
  }
  return chain;
}

/// Retained states b, b+tau, ... with their I values.
struct Samples {
  std::vector<Vector> points;
  std::vector<double> neg_log_posts;

  std::size_t size() const noexcept { return points.size(); }
  std::size_t dim() const noexcept { return points.empty() ? 0 : static_cast<std::size_t>(points[0].size()); }
  /// Values of parameter k across samples.
  std::vector<double> marginal(std::size_t k) const;
  void append(const Samples& other);
};

/// floor((N - b)/tau) + 1 states, starting with index b.
Samples retain(const Chain& chain, std::size_t burn_in, std::size_t thinning);

struct Summary {
  Vector mean;
  Vector map_estimate;
  double map_neg_log_post = 0.0;
};

/// Throws ConfigError on empty samples.
Summary summarize(const Samples& samples);

struct Ensemble {
  std::vector<Chain> chains;
};

/// Seed of chain k in an ensemble with base seed `base`.
inline std::uint64_t chain_seed(std::uint64_t base, std::size_t k) { return derive_seed(base, k); }

/// K chains with seeds chain_seed(base_config.seed, k); identical results for
/// any worker count.
template <SamplingTarget T>
Ensemble run_ensemble(const T& target, const ChainConfig& base_config, const BetaSchedule& schedule,
                      std::size_t chains, std::size_t workers = 1) {
  if (chains == 0) throw ConfigError("run_ensemble: need at least one chain");
  Ensemble out;
  out.chains.resize(chains);
  parallel_for(chains, workers, [&](std::size_t k) {
    ChainConfig cfg = base_config;
    cfg.seed = chain_seed(base_config.seed, k);
    out.chains[k] = run_chain(target, cfg, schedule);
  });
  return out;
}

/// Header `step,param_0,...,param_{d-1},accepted,neg_log_post`. Row n holds
/// states[n]; `accepted` is the flag of the transition that produced it
/// (0 for the initial row).
void write_chain_csv(std::ostream& os, const Chain& chain);
/// Header `param_0,...,param_{d-1}`.
void write_samples_csv(std::ostream& os, const Samples& samples);

}  // namespace hypbayes
