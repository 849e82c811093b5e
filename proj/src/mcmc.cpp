#include "hypbayes/mcmc.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "hypbayes/format.hpp"

namespace hypbayes {

void BetaSchedule::validate() const {
  if (!(beta1 > 0.0) || !(beta0 >= beta1)) {
    throw ConfigError("BetaSchedule: need beta0 >= beta1 > 0, got (" + fmt_g17(beta0) + ", " +
                      fmt_g17(beta1) + ")");
  }
  if (k_b == 0) throw ConfigError("BetaSchedule: k_b must be positive");
}

double beta_at(const BetaSchedule& schedule, std::size_t k) {
  if (k >= schedule.k_b) return schedule.beta1;
  return schedule.beta0 -
         (schedule.beta0 - schedule.beta1) * static_cast<double>(k) / static_cast<double>(schedule.k_b);
}

void ChainConfig::validate() const {
  if (burn_in > length) {
    throw ConfigError("ChainConfig: burn-in " + std::to_string(burn_in) + " exceeds chain length " +
                      std::to_string(length));
  }
  if (thinning == 0) throw ConfigError("ChainConfig: thinning must be >= 1");
}

double Chain::acceptance_rate() const {
  if (accepted.empty()) return 0.0;
  std::size_t n = 0;
  for (auto a : accepted) n += a;
  return static_cast<double>(n) / static_cast<double>(accepted.size());
}

std::vector<double> Samples::marginal(std::size_t k) const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p[static_cast<Eigen::Index>(k)]);
  return out;
}

void Samples::append(const Samples& other) {
  points.insert(points.end(), other.points.begin(), other.points.end());
  neg_log_posts.insert(neg_log_posts.end(), other.neg_log_posts.begin(), other.neg_log_posts.end());
}

Samples retain(const Chain& chain, std::size_t burn_in, std::size_t thinning) {
  if (thinning == 0) throw ConfigError("retain: thinning must be >= 1");
  if (burn_in >= chain.states.size()) {
    throw ConfigError("retain: burn-in " + std::to_string(burn_in) + " exceeds chain length " +
                      std::to_string(chain.length()));
  }
  Samples s;
  for (std::size_t i = burn_in; i < chain.states.size(); i += thinning) {
    s.points.push_back(chain.states[i]);
    s.neg_log_posts.push_back(chain.neg_log_posts[i]);
  }
  return s;
}

Summary summarize(const Samples& samples) {
  if (samples.points.empty()) throw ConfigError("summarize: no samples");
  Summary out;
  out.mean = Vector::Zero(samples.points[0].size());
  for (const auto& p : samples.points) out.mean += p;
  out.mean /= static_cast<double>(samples.points.size());
  const auto best = std::min_element(samples.neg_log_posts.begin(), samples.neg_log_posts.end());
  const auto idx = static_cast<std::size_t>(best - samples.neg_log_posts.begin());
  out.map_estimate = samples.points[idx];
  out.map_neg_log_post = *best;
  return out;
}

void write_chain_csv(std::ostream& os, const Chain& chain) {
  const auto d = chain.states.empty() ? 0 : chain.states[0].size();
  os << "step";
  for (Eigen::Index k = 0; k < d; ++k) os << ",param_" << k;
  os << ",accepted,neg_log_post\n";
  for (std::size_t n = 0; n < chain.states.size(); ++n) {
    os << n;
    for (Eigen::Index k = 0; k < d; ++k) os << ',' << fmt_g17(chain.states[n][k]);
    os << ',' << (n == 0 ? 0 : static_cast<int>(chain.accepted[n - 1])) << ','
       << fmt_g17(chain.neg_log_posts[n]) << '\n';
  }
}

void write_samples_csv(std::ostream& os, const Samples& samples) {
  const auto d = static_cast<Eigen::Index>(samples.dim());
  for (Eigen::Index k = 0; k < d; ++k) os << (k ? ",param_" : "param_") << k;
  os << '\n';
  for (const auto& p : samples.points) {
    for (Eigen::Index k = 0; k < d; ++k) os << (k ? "," : "") << fmt_g17(p[k]);
    os << '\n';
  }
}

}  // namespace hypbayes
