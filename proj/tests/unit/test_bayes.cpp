#include <doctest.h>

#include <cmath>
#include <random>

#include "hypbayes/bayes.hpp"
#include "hypbayes/error.hpp"
#include "hypbayes/problems.hpp"
#include "hypbayes/scalar_fv.hpp"

using namespace hypbayes;

namespace {

Vector v3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

ForwardMap zero_map(std::size_t m) {
  return [m](const Vector&) { return Vector::Zero(static_cast<Eigen::Index>(m)).eval(); };
}

}  // namespace

TEST_CASE("gaussian prior") {
  const auto prior = GaussianPrior::isotropic(v3(0.1, -0.1, -0.1), 0.15);
  CHECK(prior.dim() == 3);
  CHECK(prior.quadratic(prior.mean()) == 0.0);
  Vector u = prior.mean();
  u[0] += 0.15;
  CHECK(prior.quadratic(u) == doctest::Approx(0.5).epsilon(1e-14));
  Matrix bad = Matrix::Identity(2, 2);
  bad(1, 1) = -1.0;
  CHECK_THROWS_AS(GaussianPrior(Vector::Zero(2), bad), ConfigError);
  CHECK_THROWS_AS(GaussianPrior(Vector::Zero(3), Matrix::Identity(2, 2)), ConfigError);

  // correlated covariance: quadratic equals 1/2 r^T C^{-1} r
  Matrix c(2, 2);
  c << 2.0, 0.5, 0.5, 1.0;
  const GaussianPrior g(Vector::Zero(2), c);
  Vector r(2);
  r << 0.3, -0.7;
  CHECK(g.quadratic(r) == doctest::Approx(0.5 * r.dot(c.inverse() * r)).epsilon(1e-13));
  CHECK((g.factor() * g.factor().transpose() - c).norm() <= 1e-14);
}

TEST_CASE("prior samples have the right moments") {
  const auto prior = GaussianPrior::isotropic(v3(1.0, 0.0, -2.0), 0.5);
  Rng rng(9);
  const int n = 20000;
  Vector sum = Vector::Zero(3);
  Vector sq = Vector::Zero(3);
  for (int i = 0; i < n; ++i) {
    const Vector s = prior.sample(rng) - prior.mean();
    sum += s;
    sq += s.cwiseProduct(s);
  }
  for (int k = 0; k < 3; ++k) {
    CHECK(std::abs(sum[k] / n) < 3 * 0.5 / std::sqrt(n));
    CHECK(sq[k] / n == doctest::Approx(0.25).epsilon(0.05));
  }
}

TEST_CASE("observation windows") {
  SUBCASE("exact shock at 0.5") {
    const auto mesh = make_mesh(Grid1D(-1.0, 1.0, 128));
    const CellField f = project(StepFunction{{0.5}, {1.0, 0.0}}, mesh);
    const std::vector<double> centers{-0.5, -0.25, 0.35, 0.5, 0.65};
    const Vector y = observe(f, make_windows(centers, 0.05, 10.0));
    CHECK(y[0] == doctest::Approx(1.0));
    CHECK(y[1] == doctest::Approx(1.0));
    CHECK(y[2] == doctest::Approx(1.0));
    CHECK(y[3] == doctest::Approx(0.5));
    CHECK(y[4] == doctest::Approx(0.0));
  }
  SUBCASE("weighted average of a constant") {
    const CellField f(make_mesh(Grid1D(0.0, 1.0, 7)), std::vector<double>(7, 3.25));
    const std::vector<ObservationWindow> w{{0.43, 0.11, 1.0 / 0.22}};
    CHECK(observe(f, w)[0] == doctest::Approx(3.25).epsilon(1e-14));
  }
  SUBCASE("partial cells") {
    const CellField f(make_mesh(Grid1D(-1.0, 1.0, 2)), {1.0, 0.0});
    const std::vector<ObservationWindow> w{{0.0, 0.1, 5.0}};
    CHECK(observe(f, w)[0] == doctest::Approx(0.5));
  }
  SUBCASE("window outside the domain") {
    const CellField f(make_mesh(Grid1D(-1.0, 1.0, 2)), {1.0, 0.0});
    const std::vector<ObservationWindow> w{{0.97, 0.05, 1.0}};
    CHECK_THROWS_AS(observe(f, w), ConfigError);
  }
  SUBCASE("linearity") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n;
    const auto mesh = make_mesh(Grid1D(-1.0, 1.0, 33));
    const auto windows = make_windows(std::vector<double>{-0.6, 0.01, 0.33}, 0.07, 10.0);
    for (int t = 0; t < 50; ++t) {
      std::vector<double> a(33), b(33), c(33);
      const double al = n(rng), be = n(rng);
      for (int j = 0; j < 33; ++j) {
        a[j] = n(rng);
        b[j] = n(rng);
        c[j] = al * a[j] + be * b[j];
      }
      const Vector lhs = observe(CellField(mesh, c), windows);
      const Vector rhs = al * observe(CellField(mesh, a), windows) + be * observe(CellField(mesh, b), windows);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, rhs.cwiseAbs().maxCoeff()));
    }
  }
  SUBCASE("euler windows are component major") {
    const auto f = project_riemann({1.0, 0.0, 1.0}, {0.125, 0.0, 0.1}, 0.5, make_mesh(Grid1D(0.0, 1.0, 128)));
    const auto windows = make_windows(std::vector<double>{0.1, 0.9}, 0.05, 10.0);
    const Vector y = observe(f, windows);
    REQUIRE(y.size() == 6);
    CHECK(y[0] == doctest::Approx(1.0));
    CHECK(y[1] == doctest::Approx(0.125));
    CHECK(y[2] == doctest::Approx(0.0));
    CHECK(y[4] == doctest::Approx(2.5));
    CHECK(y[5] == doctest::Approx(0.25));
  }
}

TEST_CASE("potential and posterior") {
  SUBCASE("scalar misfit") {
    Vector y(1);
    y << 1.0;
    const PosteriorModel m(GaussianPrior::isotropic(Vector::Zero(1), 1.0), NoiseModel::isotropic(1, 0.05),
                           zero_map(1), y);
    CHECK(m.phi(Vector::Zero(1)) == doctest::Approx(200.0));
  }
  SUBCASE("one whitened unit") {
    const ForwardMap g = [](const Vector& u) { return (2.0 * u).eval(); };
    const Vector u = v3(0.3, -0.2, 0.1);
    Vector y = g(u);
    y[0] += 0.05;
    const PosteriorModel m(GaussianPrior::isotropic(Vector::Zero(3), 1.0), NoiseModel::isotropic(3, 0.05), g, y);
    CHECK(m.phi(u) == doctest::Approx(0.5));
    CHECK(m.with_data(g(u)).phi(u) == 0.0);
  }
  SUBCASE("zero potential") {
    const auto prior = GaussianPrior::isotropic(v3(0.1, -0.1, -0.1), 0.15);
    const PosteriorModel m(prior, NoiseModel::isotropic(2, 0.05), zero_map(2), Vector::Zero(2));
    CHECK(m.neg_log_posterior(prior.mean()) == 0.0);
    Vector u = prior.mean();
    u[0] += 0.15;
    CHECK(m.neg_log_posterior(u) == doctest::Approx(0.5));
  }
  SUBCASE("I minus phi is the prior quadratic") {
    const auto cfg = preset(ExperimentId::exp1);
    const PosteriorModel m = make_posterior(cfg, 64, synthesize(cfg));
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
      const Vector u = m.prior().sample(rng);
      CHECK(std::abs(m.neg_log_posterior(u) - m.phi(u) - m.prior().quadratic(u)) <= 1e-12 * std::max(1.0, m.phi(u)));
      CHECK(m.phi(u) >= 0.0);
    }
  }
}

TEST_CASE("noiseless exp1 data gives I(u*) = prior quadratic") {
  const auto cfg = preset(ExperimentId::exp1);
  const ForwardMap g = make_forward(cfg, cfg.cells);
  const NoiseModel noise = NoiseModel::isotropic(cfg.observation_dim(), cfg.noise_gamma);
  const Vector y = synthesize_data(g, noise, cfg.ground_truth, 1, true);
  CHECK(y == g(cfg.ground_truth));
  const PosteriorModel m(GaussianPrior::isotropic(cfg.prior_mean, cfg.prior_phi), noise, g, y);
  CHECK(m.phi(cfg.ground_truth) == 0.0);
  CHECK(m.neg_log_posterior(cfg.ground_truth) == doctest::Approx(m.prior().quadratic(cfg.ground_truth)));
  CHECK(synthesize_data(g, noise, cfg.ground_truth, 5) == synthesize_data(g, noise, cfg.ground_truth, 5));
  CHECK(synthesize_data(g, noise, cfg.ground_truth, 5) != synthesize_data(g, noise, cfg.ground_truth, 6));
}

TEST_CASE("datum builders") {
  const StepFunction d1 = exp1_datum(v3(0.0, 0.0, 0.0));
  CHECK(d1(-0.1) == 1.0);
  CHECK(d1(0.1) == 0.0);
  Vector u2(2);
  u2 << 0.0, 1.0;
  const Exp2Datum d2 = exp2_datum(u2);
  CHECK(d2.datum(-0.6) == 0.5);
  CHECK(d2.datum(-0.4) == 2.0);
  CHECK(d2.transport_speed == 1.0);
  const Exp3Datum d3 = exp3_datum(Vector::Zero(6));
  CHECK(d3.left.rho == 1.0);
  CHECK(d3.left.p == 1.0);
  CHECK(d3.right.rho == 0.125);
  CHECK(d3.right.p == 0.1);
  Vector bad = Vector::Zero(6);
  bad[3] = -0.2;
  CHECK_THROWS_AS(exp3_datum(bad), PositivityError);
  CHECK_THROWS_AS(exp1_datum(Vector::Zero(2)), ConfigError);
}

TEST_CASE("forward failures surface as ForwardError") {
  auto cfg = preset(ExperimentId::exp2);
  Vector u(2);
  u << 0.0, -0.5;
  CHECK_THROWS_AS(make_forward(cfg, 64)(u), ForwardError);
  u << -0.7, 1.0;
  CHECK_THROWS_AS(make_forward(cfg, 64)(u), ForwardError);
  auto cfg3 = preset(ExperimentId::exp3);
  Vector w = Vector::Zero(6);
  w[5] = -0.2;
  CHECK_THROWS_AS(make_forward(cfg3, 64)(w), ForwardError);
}

TEST_CASE("exp1 forward map is locally Lipschitz and affinely bounded") {
  const auto cfg = preset(ExperimentId::exp1);
  const ForwardMap g = make_forward(cfg, 64);
  const auto prior = GaussianPrior::isotropic(cfg.prior_mean, cfg.prior_phi);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> box(-3.0, 3.0);
  auto draw = [&] {
    Vector u = prior.mean();
    for (int k = 0; k < 3; ++k) u[k] += box(rng) * cfg.prior_phi;
    return u;
  };
  std::vector<double> ks;
  for (int t = 0; t < 100; ++t) {
    const Vector a = draw();
    const Vector b = draw();
    ks.push_back((g(a) - g(b)).norm() / (a - b).norm());
    // |G(u)| <= C1 |w|_inf + C2 with |w|_inf <= 1 + |u|: five windows of mass 10 * 0.1
    CHECK(g(a).norm() <= std::sqrt(5.0) * (1.0 + a.cwiseAbs().maxCoeff()) + 1e-12);
  }
  std::sort(ks.begin(), ks.end());
  CHECK(std::isfinite(ks.back()));
  CHECK(ks.back() < 100.0);
}
