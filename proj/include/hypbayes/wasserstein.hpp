#pragma once

#include <span>
#include <vector>

namespace hypbayes {

/// Sorted, finite, nonempty sample set with equal weights.
class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::vector<double> samples);

  const std::vector<double>& samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double mean() const;

 private:
  std::vector<double> samples_;
};

struct WeightedAtom {
  double x = 0.0;
  double weight = 0.0;
};

/// W1 between equal-size equal-weight distributions: mean |a_(i) - b_(i)|.
/// Throws ConfigError on a size mismatch (use w1_general).
double w1_equal(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

/// W1 = integral |F_a - F_b| for weighted atoms; weights must be positive
/// and sum to 1 within 1e-9.
double w1_general(std::span<const WeightedAtom> a, std::span<const WeightedAtom> b);

/// Equal-weight distributions of any sizes through w1_general.
double w1(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

/// Minimum over all permutation couplings; inputs need not be sorted.
/// Refuses n > 6.
double w1_brute(std::span<const double> a, std::span<const double> b);

/// (1/K) sum_k W1(chain_k, reference).
double ensemble_w1_error(std::span<const EmpiricalDistribution> chains,
                         const EmpiricalDistribution& reference);

}  // namespace hypbayes
