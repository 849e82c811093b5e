#include "hypbayes/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hypbayes/error.hpp"
#include "hypbayes/format.hpp"

namespace hypbayes {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw ConfigError("EmpiricalDistribution: no samples");
  for (double v : samples_) {
    if (!std::isfinite(v)) throw ConfigError("EmpiricalDistribution: non-finite sample " + fmt_g17(v));
  }
  std::sort(samples_.begin(), samples_.end());
}

double EmpiricalDistribution::mean() const {
  return std::accumulate(samples_.begin(), samples_.end(), 0.0) / static_cast<double>(samples_.size());
}

double w1_equal(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  if (a.size() != b.size()) {
    throw ConfigError("w1_equal: sizes differ (" + std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()) + "); use w1_general");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a.samples()[i] - b.samples()[i]);
  return sum / static_cast<double>(a.size());
}

namespace {

std::vector<WeightedAtom> sorted_checked(std::span<const WeightedAtom> atoms, const char* name) {
  if (atoms.empty()) throw ConfigError(std::string("w1_general: ") + name + " is empty");
  double total = 0.0;
  for (const auto& at : atoms) {
    if (!(at.weight > 0.0) || !std::isfinite(at.x)) {
      throw ConfigError(std::string("w1_general: ") + name + " has a nonpositive weight or non-finite atom");
    }
    total += at.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ConfigError(std::string("w1_general: ") + name + " weights sum to " + fmt_g17(total) +
                      ", expected 1");
  }
  std::vector<WeightedAtom> out(atoms.begin(), atoms.end());
  std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.x < r.x; });
  return out;
}

}  // namespace

double w1_general(std::span<const WeightedAtom> a, std::span<const WeightedAtom> b) {
  const auto sa = sorted_checked(a, "a");
  const auto sb = sorted_checked(b, "b");
  // Sweep the merged breakpoints; between consecutive ones both CDFs are flat.
  std::size_t i = 0;
  std::size_t j = 0;
  double fa = 0.0;
  double fb = 0.0;
  double x = std::min(sa[0].x, sb[0].x);
  double total = 0.0;
  while (i < sa.size() || j < sb.size()) {
    const double next = std::min(i < sa.size() ? sa[i].x : INFINITY, j < sb.size() ? sb[j].x : INFINITY);
    total += std::abs(fa - fb) * (next - x);
    x = next;
    while (i < sa.size() && sa[i].x == x) fa += sa[i++].weight;
    while (j < sb.size() && sb[j].x == x) fb += sb[j++].weight;
  }
  return total;
}

double w1(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  if (a.size() == b.size()) return w1_equal(a, b);
  auto atoms = [](const EmpiricalDistribution& d) {
    std::vector<WeightedAtom> out;
    const double w = 1.0 / static_cast<double>(d.size());
    for (double x : d.samples()) out.push_back({x, w});
    return out;
  };
  return w1_general(atoms(a), atoms(b));
}

double w1_brute(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ConfigError("w1_brute: sizes differ");
  if (a.empty()) throw ConfigError("w1_brute: empty input");
  if (a.size() > 6) throw ConfigError("w1_brute: refusing n = " + std::to_string(a.size()) + " > 6");
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double cost = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) cost += std::abs(a[i] - b[perm[i]]);
    best = std::min(best, cost);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(a.size());
}

double ensemble_w1_error(std::span<const EmpiricalDistribution> chains,
                         const EmpiricalDistribution& reference) {
  if (chains.empty()) throw ConfigError("ensemble_w1_error: no chains");
  double sum = 0.0;
  for (const auto& c : chains) sum += w1(c, reference);
  return sum / static_cast<double>(chains.size());
}

}  // namespace hypbayes
