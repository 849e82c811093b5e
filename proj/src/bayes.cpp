#include "hypbayes/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hypbayes/error.hpp"
#include "hypbayes/format.hpp"

namespace hypbayes {

namespace {

Matrix cholesky_factor(const Matrix& cov, const char* who) {
  if (cov.rows() != cov.cols()) throw ConfigError(std::string(who) + ": covariance must be square");
  if (!cov.isApprox(cov.transpose(), 1e-12)) {
    throw ConfigError(std::string(who) + ": covariance must be symmetric");
  }
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw ConfigError(std::string(who) + ": covariance is not positive definite");
  }
  return llt.matrixL();
}

Vector standard_normal(std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal;
  Vector z(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normal(rng);
  return z;
}

}  // namespace

GaussianPrior::GaussianPrior(Vector mean, Matrix covariance)
    : mean_(std::move(mean)), cov_(std::move(covariance)) {
  if (cov_.rows() != mean_.size()) throw ConfigError("GaussianPrior: mean/covariance size mismatch");
  chol_ = cholesky_factor(cov_, "GaussianPrior");
}

GaussianPrior GaussianPrior::isotropic(Vector mean, double phi) {
  if (!(phi > 0.0)) throw ConfigError("GaussianPrior: phi must be positive");
  const auto n = mean.size();
  return GaussianPrior(std::move(mean), Matrix::Identity(n, n) * (phi * phi));
}

double GaussianPrior::quadratic(const Vector& u) const {
  const Vector white = chol_.triangularView<Eigen::Lower>().solve(u - mean_);
  return 0.5 * white.squaredNorm();
}

Vector GaussianPrior::sample(Rng& rng) const { return mean_ + correlate(standard_normal(dim(), rng)); }

NoiseModel::NoiseModel(Matrix covariance) : cov_(std::move(covariance)) {
  chol_ = cholesky_factor(cov_, "NoiseModel");
}

NoiseModel NoiseModel::isotropic(std::size_t dim, double gamma) {
  if (!(gamma > 0.0)) throw ConfigError("NoiseModel: gamma must be positive");
  const auto n = static_cast<Eigen::Index>(dim);
  return NoiseModel(Matrix::Identity(n, n) * (gamma * gamma));
}

double NoiseModel::whitened_norm_sq(const Vector& r) const {
  if (r.size() != cov_.rows()) throw ConfigError("NoiseModel: residual dimension mismatch");
  return chol_.triangularView<Eigen::Lower>().solve(r).squaredNorm();
}

std::vector<ObservationWindow> make_windows(std::span<const double> centers, double half_width,
                                            double weight) {
  if (!(half_width > 0.0)) throw ConfigError("make_windows: half_width must be positive");
  std::vector<ObservationWindow> out;
  out.reserve(centers.size());
  for (double c : centers) out.push_back({c, half_width, weight});
  return out;
}

namespace {

template <class ValueAt>
double window_integral(const Mesh1D& mesh, const ObservationWindow& win, ValueAt value_at) {
  const double a = win.center - win.half_width;
  const double b = win.center + win.half_width;
  const double slack = 1e-12 * (mesh.x_max() - mesh.x_min());
  if (!(win.half_width > 0.0)) throw ConfigError("observe: half_width must be positive");
  if (a < mesh.x_min() - slack || b > mesh.x_max() + slack) {
    throw ConfigError("observe: window [" + fmt_g17(a) + ", " + fmt_g17(b) + "] leaves the domain [" +
                      fmt_g17(mesh.x_min()) + ", " + fmt_g17(mesh.x_max()) + "]");
  }
  double sum = 0.0;
  for (std::size_t j = mesh.locate(a); j < mesh.n_cells() && mesh.left(j) < b; ++j) {
    const double overlap = std::min(b, mesh.right(j)) - std::max(a, mesh.left(j));
    if (overlap > 0.0) sum += value_at(j) * overlap;
  }
  return win.weight * sum;
}

}  // namespace

Vector observe(const CellField& field, std::span<const ObservationWindow> windows) {
  Vector out(static_cast<Eigen::Index>(windows.size()));
  for (std::size_t i = 0; i < windows.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] =
        window_integral(field.mesh(), windows[i], [&](std::size_t j) { return field[j]; });
  }
  return out;
}

Vector observe(const EulerField& field, std::span<const ObservationWindow> windows) {
  const auto m = static_cast<Eigen::Index>(windows.size());
  Vector out(3 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& win = windows[static_cast<std::size_t>(i)];
    out[i] = window_integral(field.mesh(), win, [&](std::size_t j) { return field[j].rho; });
    out[m + i] = window_integral(field.mesh(), win, [&](std::size_t j) { return field[j].mom; });
    out[2 * m + i] = window_integral(field.mesh(), win, [&](std::size_t j) { return field[j].ener; });
  }
  return out;
}

PosteriorModel::PosteriorModel(GaussianPrior prior, NoiseModel noise, ForwardMap forward, Vector data)
    : prior_(std::move(prior)), noise_(std::move(noise)), forward_(std::move(forward)), data_(std::move(data)) {
  if (!forward_) throw ConfigError("PosteriorModel: forward map is empty");
  if (static_cast<std::size_t>(data_.size()) != noise_.dim()) {
    throw ConfigError("PosteriorModel: data dimension " + std::to_string(data_.size()) +
                      " != noise dimension " + std::to_string(noise_.dim()));
  }
}

double PosteriorModel::phi(const Vector& u) const {
  if (static_cast<std::size_t>(u.size()) != dim()) {
    throw ConfigError("phi: parameter dimension " + std::to_string(u.size()) + " != prior dimension " +
                      std::to_string(dim()));
  }
  const Vector g = forward_(u);
  if (g.size() != data_.size()) {
    throw ConfigError("phi: forward map returned " + std::to_string(g.size()) + " observations, data has " +
                      std::to_string(data_.size()));
  }
  return 0.5 * noise_.whitened_norm_sq(data_ - g);
}

double PosteriorModel::neg_log_posterior(const Vector& u) const { return phi(u) + prior_.quadratic(u); }

PosteriorModel PosteriorModel::with_data(Vector data) const {
  return PosteriorModel(prior_, noise_, forward_, std::move(data));
}

Vector synthesize_data(const ForwardMap& forward, const NoiseModel& noise, const Vector& u_star,
                       std::uint64_t seed, bool noiseless) {
  Vector g = forward(u_star);
  if (static_cast<std::size_t>(g.size()) != noise.dim()) {
    throw ConfigError("synthesize_data: forward output dimension != noise dimension");
  }
  if (noiseless) return g;
  Rng rng(seed);
  return g + noise.correlate(standard_normal(noise.dim(), rng));
}

namespace {

void require_dim(const Vector& u, Eigen::Index n, const char* who) {
  if (u.size() != n) {
    throw ConfigError(std::string(who) + ": expected " + std::to_string(n) + " parameters, got " +
                      std::to_string(u.size()));
  }
}

}  // namespace

StepFunction exp1_datum(const Vector& u) {
  require_dim(u, 3, "exp1_datum");
  return StepFunction{{u[2]}, {1.0 + u[0], u[1]}};
}

Exp2Datum exp2_datum(const Vector& u) {
  require_dim(u, 2, "exp2_datum");
  return {StepFunction{{-0.5}, {0.5 + u[0], 2.0}}, u[1]};
}

Exp3Datum exp3_datum(const Vector& u) {
  require_dim(u, 6, "exp3_datum");
  Exp3Datum d{{1.0 + u[0], u[1], 1.0 + u[2]}, {0.125 + u[3], u[4], 0.1 + u[5]}, 0.5};
  if (!(d.left.rho > 0.0) || !(d.left.p > 0.0) || !(d.right.rho > 0.0) || !(d.right.p > 0.0)) {
    throw PositivityError("exp3_datum: parameters give nonpositive density or pressure (rho_L = " +
                          fmt_g17(d.left.rho) + ", p_L = " + fmt_g17(d.left.p) + ", rho_R = " +
                          fmt_g17(d.right.rho) + ", p_R = " + fmt_g17(d.right.p) + ")");
  }
  return d;
}

}  // namespace hypbayes
