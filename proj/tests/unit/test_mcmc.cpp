#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hypbayes/mcmc.hpp"

using namespace hypbayes;

namespace {

// Gaussian prior N(m, phi^2 I) with an arbitrary potential.
struct Stub {
  GaussianPrior p;
  std::function<double(const Vector&)> potential;
  double neg_log_posterior(const Vector& u) const { return potential(u) + p.quadratic(u); }
  const GaussianPrior& prior() const { return p; }
};

Stub zero_potential(Vector mean, double phi) {
  return {GaussianPrior::isotropic(std::move(mean), phi), [](const Vector&) { return 0.0; }};
}

// Mean and batch-means standard error of an autocorrelated series.
std::pair<double, double> mean_and_se(const std::vector<double>& x, std::size_t batches = 50) {
  const std::size_t len = x.size() / batches;
  double mean = 0.0;
  std::vector<double> bm(batches, 0.0);
  for (std::size_t b = 0; b < batches; ++b) {
    for (std::size_t i = 0; i < len; ++i) bm[b] += x[b * len + i];
    bm[b] /= static_cast<double>(len);
    mean += bm[b] / static_cast<double>(batches);
  }
  double var = 0.0;
  for (double v : bm) var += (v - mean) * (v - mean);
  var /= static_cast<double>(batches - 1);
  return {mean, std::sqrt(var / static_cast<double>(batches))};
}

}  // namespace

TEST_CASE("beta schedule") {
  const BetaSchedule s{0.05, 0.001, 250};
  CHECK(beta_at(s, 0) == 0.05);
  CHECK(beta_at(s, 250) == doctest::Approx(0.001).epsilon(1e-15));
  CHECK(beta_at(s, 125) == doctest::Approx(0.0255).epsilon(1e-14));
  CHECK(beta_at(s, 10000) == 0.001);
  CHECK(std::abs(beta_at(s, 249) - beta_at(s, 250)) < 0.001);
  CHECK(beta_at(BetaSchedule::constant(0.0005), 7) == 0.0005);
  CHECK_THROWS_AS((BetaSchedule{0.001, 0.05, 250}.validate()), ConfigError);
  CHECK_THROWS_AS((BetaSchedule{0.05, 0.0, 250}.validate()), ConfigError);
}

TEST_CASE("retain and summarize") {
  Chain c;
  for (int i = 0; i <= 2500; ++i) {
    c.states.push_back(Vector::Constant(2, i));
    c.neg_log_posts.push_back(std::abs(i - 1000.0));
    if (i) c.accepted.push_back(1);
  }
  CHECK(retain(c, 500, 20).size() == 101);
  CHECK(retain(c, 2500, 20).size() == 1);
  CHECK_THROWS_AS(retain(c, 2501, 1), ConfigError);

  Chain small;
  for (int i = 0; i <= 10; ++i) small.states.push_back(Vector::Constant(1, i)), small.neg_log_posts.push_back(0.0);
  small.accepted.assign(10, 0);
  const Samples all = retain(small, 0, 1);
  CHECK(all.size() == 11);
  CHECK(all.points[0][0] == 0.0);

  const Summary s = summarize(retain(c, 500, 20));
  CHECK(s.mean[0] == doctest::Approx(1500.0));
  CHECK(s.map_estimate[0] == 1000.0);
  const Summary one = summarize(retain(c, 2500, 1));
  CHECK(one.mean == one.map_estimate);
  CHECK_THROWS_AS(summarize(Samples{}), ConfigError);
}

TEST_CASE("acceptance is certain for downhill moves") {
  const Stub flat = zero_potential(Vector::Zero(2), 1.0);
  const Stub uphill{GaussianPrior::isotropic(Vector::Zero(1), 1.0), [](const Vector& u) { return -1e6 * std::abs(u[0]); }};
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto s = mh_step(uphill, Vector::Zero(1), 0.3, rng);
    CHECK(s.acceptance_probability == 1.0);
    CHECK(s.accepted);
  }
  (void)flat;
}

TEST_CASE("acceptance probability one half") {
  const Vector u0 = Vector::Zero(2);
  const Stub target{GaussianPrior::isotropic(Vector::Zero(2), 1.0),
                    [&](const Vector& u) { return u == u0 ? 0.0 : std::log(2.0) - 0.5 * u.squaredNorm(); }};
  Rng rng(77);
  int accepted = 0;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) {
    const auto s = mh_step(target, u0, 0.0, 0.1, rng);
    CHECK(s.acceptance_probability == doctest::Approx(0.5).epsilon(1e-12));
    accepted += s.accepted;
  }
  CHECK(std::abs(accepted / double(trials) - 0.5) <= 0.02);
}

TEST_CASE("tiny steps are nearly always accepted") {
  const Stub target = zero_potential(Vector::Zero(3), 1.0);
  ChainConfig cfg{4000, 0, 1, 3, {}};
  const Chain c = run_chain(target, cfg, BetaSchedule::constant(1e-7));
  CHECK(c.acceptance_rate() > 0.999);
}

TEST_CASE("chain bookkeeping") {
  const Stub target{GaussianPrior::isotropic(Vector::Zero(2), 1.0),
                    [](const Vector& u) {
                      if (u[0] > 0.5) throw ForwardError("stub failure");
                      return 2.0 * u.squaredNorm();
                    }};
  ChainConfig cfg{3000, 100, 5, 42, {}};
  const Chain c = run_chain(target, cfg, BetaSchedule{1.0, 0.3, 500});
  REQUIRE(c.states.size() == 3001);
  REQUIRE(c.accepted.size() == 3000);
  REQUIRE(c.neg_log_posts.size() == 3001);
  CHECK(c.states[0] == Vector::Zero(2));
  for (std::size_t n = 0; n < c.accepted.size(); ++n) {
    if (!c.accepted[n]) {
      CHECK(c.states[n + 1] == c.states[n]);
      CHECK(c.neg_log_posts[n + 1] == c.neg_log_posts[n]);
    }
    CHECK(c.states[n + 1][0] <= 0.5);
  }
  for (std::size_t n = 0; n < c.states.size(); n += 97) {
    CHECK(c.neg_log_posts[n] == target.neg_log_posterior(c.states[n]));
  }
  const Chain again = run_chain(target, cfg, BetaSchedule{1.0, 0.3, 500});
  CHECK(again.states == c.states);
  CHECK(again.accepted == c.accepted);

  Vector start(2);
  start << 0.9, 0.0;
  cfg.initial = start;
  CHECK_THROWS_AS(run_chain(target, cfg, BetaSchedule{1.0, 0.3, 500}), ConfigError);
}

TEST_CASE("prior recovery with zero potential") {
  Vector m(3);
  m << 0.1, -0.1, -0.1;
  const Stub target = zero_potential(m, 0.15);
  ChainConfig cfg{20000, 1000, 1, 5, {}};
  const Chain c = run_chain(target, cfg, BetaSchedule::constant(0.8));
  const Samples s = retain(c, cfg.burn_in, cfg.thinning);
  for (int k = 0; k < 3; ++k) {
    const auto [mean, se] = mean_and_se(s.marginal(k));
    CHECK(std::abs(mean - m[k]) <= 3.0 * se);
  }
}

TEST_CASE("gaussian posterior moments") {
  // prior N(0, 1), potential (u - 1)^2: posterior N(2/3, 1/3)
  const Stub target{GaussianPrior::isotropic(Vector::Zero(1), 1.0), [](const Vector& u) { return (u[0] - 1.0) * (u[0] - 1.0); }};
  ChainConfig cfg{60000, 2000, 1, 8, {}};
  const Chain c = run_chain(target, cfg, BetaSchedule::constant(1.2));
  const auto x = retain(c, cfg.burn_in, 1).marginal(0);
  const auto [mean, se] = mean_and_se(x);
  CHECK(std::abs(mean - 2.0 / 3.0) <= 3.0 * se);
  std::vector<double> sq;
  for (double v : x) sq.push_back((v - 2.0 / 3.0) * (v - 2.0 / 3.0));
  const auto [var, var_se] = mean_and_se(sq);
  CHECK(std::abs(var - 1.0 / 3.0) <= 3.0 * var_se);
}

TEST_CASE("empirical acceptance matches the formula by bucket") {
  const Stub target{GaussianPrior::isotropic(Vector::Zero(1), 1.0), [](const Vector& u) { return 3.0 * u[0] * u[0]; }};
  Rng rng(101);
  std::array<double, 10> prob_sum{};
  std::array<double, 10> acc{};
  std::array<double, 10> count{};
  Vector u = Vector::Zero(1);
  double nlp = target.neg_log_posterior(u);
  for (int i = 0; i < 40000; ++i) {
    const auto s = mh_step(target, u, nlp, 1.0, rng);
    const auto b = std::min<std::size_t>(9, static_cast<std::size_t>(s.acceptance_probability * 10));
    prob_sum[b] += s.acceptance_probability;
    acc[b] += s.accepted;
    count[b] += 1;
    u = s.next;
    nlp = s.neg_log_post;
  }
  for (int b = 0; b < 10; ++b) {
    if (count[b] < 100) continue;
    const double p = prob_sum[b] / count[b];
    const double sigma = std::sqrt(std::max(p * (1 - p), 1e-4) / count[b]);
    CHECK(std::abs(acc[b] / count[b] - p) <= 3.0 * sigma + 0.05 / 10);
  }
}

TEST_CASE("ensembles are independent of worker count") {
  const Stub target{GaussianPrior::isotropic(Vector::Zero(2), 0.5), [](const Vector& u) { return u.squaredNorm(); }};
  ChainConfig cfg{500, 100, 5, 1234, {}};
  const Ensemble e1 = run_ensemble(target, cfg, BetaSchedule{0.5, 0.1, 100}, 6, 1);
  for (std::size_t w : {4, 8}) {
    const Ensemble ew = run_ensemble(target, cfg, BetaSchedule{0.5, 0.1, 100}, 6, w);
    for (std::size_t k = 0; k < 6; ++k) CHECK(ew.chains[k].states == e1.chains[k].states);
  }
  ChainConfig single = cfg;
  single.seed = chain_seed(cfg.seed, 0);
  CHECK(run_chain(target, single, BetaSchedule{0.5, 0.1, 100}).states == e1.chains[0].states);
  CHECK(e1.chains[0].seed != e1.chains[1].seed);
  CHECK_THROWS_AS(run_ensemble(target, cfg, BetaSchedule{}, 0, 1), ConfigError);
}

TEST_CASE("csv writers") {
  Chain c;
  c.states = {Vector::Constant(2, 0.5), Vector::Constant(2, 0.25)};
  c.neg_log_posts = {1.0, 2.0};
  c.accepted = {1};
  std::ostringstream os;
  write_chain_csv(os, c);
  CHECK(os.str() == "step,param_0,param_1,accepted,neg_log_post\n0,0.5,0.5,0,1\n1,0.25,0.25,1,2\n");
  std::ostringstream ss;
  write_samples_csv(ss, retain(c, 0, 1));
  CHECK(ss.str() == "param_0,param_1\n0.5,0.5\n0.25,0.25\n");
}
