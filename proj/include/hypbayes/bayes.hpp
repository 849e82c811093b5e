#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hypbayes/euler_fv.hpp"
#include "hypbayes/fields.hpp"
#include "hypbayes/rng.hpp"

namespace hypbayes {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// N(m, C) with a stored Cholesky factor C = R R^T.
class GaussianPrior {
 public:
  GaussianPrior(Vector mean, Matrix covariance);
  static GaussianPrior isotropic(Vector mean, double phi);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(mean_.size()); }
  const Vector& mean() const noexcept { return mean_; }
  const Matrix& covariance() const noexcept { return cov_; }
  const Matrix& factor() const noexcept { return chol_; }

  /// 1/2 |C^{-1/2}(u - m)|^2
  double quadratic(const Vector& u) const;
  /// R z for a standard-normal z, i.e. a draw from N(0, C).
  Vector correlate(const Vector& z) const { return chol_ * z; }
  Vector sample(Rng& rng) const;

 private:
  Vector mean_;
  Matrix cov_;
  Matrix chol_;
};

/// Additive Gaussian noise N(0, Gamma).
class NoiseModel {
 public:
  explicit NoiseModel(Matrix covariance);
  static NoiseModel isotropic(std::size_t dim, double gamma);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(cov_.rows()); }
  const Matrix& covariance() const noexcept { return cov_; }
  /// |Gamma^{-1/2} r|^2
  double whitened_norm_sq(const Vector& r) const;
  Vector correlate(const Vector& z) const { return chol_ * z; }

 private:
  Matrix cov_;
  Matrix chol_;
};

/// weight * integral over [center - half_width, center + half_width].
struct ObservationWindow {
  double center = 0.0;
  double half_width = 0.05;
  double weight = 10.0;
};

std::vector<ObservationWindow> make_windows(std::span<const double> centers, double half_width,
                                            double weight);

/// Exact window integrals of a piecewise-constant field. Throws ConfigError
/// when a window leaves the domain.
Vector observe(const CellField& field, std::span<const ObservationWindow> windows);

/// Window integrals of (rho, rho v, E), component-major: all rho windows first.
Vector observe(const EulerField& field, std::span<const ObservationWindow> windows);

using ForwardMap = std::function<Vector(const Vector&)>;

/// Unnormalized posterior: exp(-Phi(u)) times the Gaussian prior.
class PosteriorModel {
 public:
  PosteriorModel(GaussianPrior prior, NoiseModel noise, ForwardMap forward, Vector data);

  const GaussianPrior& prior() const noexcept { return prior_; }
  const NoiseModel& noise() const noexcept { return noise_; }
  const ForwardMap& forward() const noexcept { return forward_; }
  const Vector& data() const noexcept { return data_; }
  std::size_t dim() const noexcept { return prior_.dim(); }

  /// Phi(u) = 1/2 |y - G(u)|_Gamma^2. ForwardError from G propagates.
  double phi(const Vector& u) const;
  /// I(u) = Phi(u) + 1/2 |C^{-1/2}(u - m)|^2.
  double neg_log_posterior(const Vector& u) const;

  /// Same prior, noise and forward map with different data.
  PosteriorModel with_data(Vector data) const;

 private:
  GaussianPrior prior_;
  NoiseModel noise_;
  ForwardMap forward_;
  Vector data_;
};

/// y = G(u*) + Gamma^{1/2} xi, deterministic in `seed`.
Vector synthesize_data(const ForwardMap& forward, const NoiseModel& noise, const Vector& u_star,
                       std::uint64_t seed, bool noiseless = false);

/// Burgers Riemann datum: 1 + d1 left of sigma0, d2 right; u = (d1, d2, sigma0).
StepFunction exp1_datum(const Vector& u);

struct Exp2Datum {
  StepFunction datum;  // 0.5 + delta left of -0.5, 2 right
  double transport_speed = 1.0;
};
/// u = (delta, a).
Exp2Datum exp2_datum(const Vector& u);

struct Exp3Datum {
  Primitive left;
  Primitive right;
  double x0 = 0.5;
};
/// Sod states perturbed by u = (dL, gL, bL, dR, gR, bR):
/// left (1 + dL, gL, 1 + bL), right (0.125 + dR, gR, 0.1 + bR).
/// Throws PositivityError when a density or pressure is nonpositive.
Exp3Datum exp3_datum(const Vector& u);

}  // namespace hypbayes
