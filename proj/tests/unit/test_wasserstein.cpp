#include <doctest.h>

#include <cmath>
#include <random>

#include "hypbayes/error.hpp"
#include "hypbayes/wasserstein.hpp"

using namespace hypbayes;

namespace {

// Independent oracle: integral of |F_a - F_b| on a fine grid of breakpoints.
double cdf_integral(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pts(a);
  pts.insert(pts.end(), b.begin(), b.end());
  std::sort(pts.begin(), pts.end());
  auto cdf = [](const std::vector<double>& s, double x) {
    return static_cast<double>(std::count_if(s.begin(), s.end(), [x](double v) { return v <= x; })) / s.size();
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) total += std::abs(cdf(a, pts[i]) - cdf(b, pts[i])) * (pts[i + 1] - pts[i]);
  return total;
}

std::vector<double> draw(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST_CASE("examples") {
  const EmpiricalDistribution a({0.0, 1.0});
  const EmpiricalDistribution b({0.5, 1.5});
  CHECK(w1_equal(a, b) == 0.5);
  CHECK(w1_equal(a, a) == 0.0);
  CHECK(w1_equal(EmpiricalDistribution({3.0, 1.0, 2.0}), EmpiricalDistribution({2.0, 3.0, 1.0})) == 0.0);
  CHECK(w1(EmpiricalDistribution({0.0}), EmpiricalDistribution({0.0, 1.0})) == doctest::Approx(0.5));
  const std::vector<WeightedAtom> p{{0.0, 0.5}, {1.0, 0.5}};
  const std::vector<WeightedAtom> q{{0.0, 1.0}};
  CHECK(w1_general(p, q) == doctest::Approx(0.5));
  CHECK_THROWS_AS(w1_equal(a, EmpiricalDistribution({1.0})), ConfigError);
  CHECK_THROWS_AS(EmpiricalDistribution({}), ConfigError);
  CHECK_THROWS_AS(EmpiricalDistribution({NAN}), ConfigError);
  const std::vector<WeightedAtom> bad{{0.0, 0.4}, {1.0, 0.4}};
  CHECK_THROWS_AS(w1_general(bad, q), ConfigError);
  CHECK_THROWS_AS(w1_brute(std::vector<double>(7, 0.0), std::vector<double>(7, 0.0)), ConfigError);
}

TEST_CASE("sorted coupling equals brute force") {
  std::mt19937_64 rng(123);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 6;
    const auto a = draw(rng, n);
    const auto b = draw(rng, n);
    CHECK(std::abs(w1_equal(EmpiricalDistribution(a), EmpiricalDistribution(b)) - w1_brute(a, b)) <= 1e-12);
  }
}

TEST_CASE("cdf sweep matches the oracle for unequal sizes") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto a = draw(rng, 1 + t % 7);
    const auto b = draw(rng, 1 + (t * 3) % 11);
    CHECK(w1(EmpiricalDistribution(a), EmpiricalDistribution(b)) == doctest::Approx(cdf_integral(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("metric axioms and moment bound") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + t % 9;
    const auto va = draw(rng, n), vb = draw(rng, n), vc = draw(rng, n);
    const EmpiricalDistribution a(va), b(vb), c(vc);
    const double ab = w1(a, b);
    CHECK(ab >= 0.0);
    CHECK(w1(a, a) == 0.0);
    CHECK(std::abs(ab - w1(b, a)) <= 1e-12);
    CHECK(w1(a, c) <= ab + w1(b, c) + 1e-12);
    // |E_a[x] - E_b[x]| <= W1(a, b)
    CHECK(std::abs(a.mean() - b.mean()) <= ab + 1e-12);
  }
}

TEST_CASE("ensemble error") {
  const EmpiricalDistribution ref({0.0, 1.0});
  const std::vector<EmpiricalDistribution> chains{EmpiricalDistribution({0.0, 1.0}), EmpiricalDistribution({1.0, 2.0})};
  CHECK(ensemble_w1_error(chains, ref) == doctest::Approx(0.5));
  CHECK(ensemble_w1_error(std::vector<EmpiricalDistribution>{ref}, ref) == 0.0);
  CHECK_THROWS_AS(ensemble_w1_error(std::vector<EmpiricalDistribution>{}, ref), ConfigError);
}

TEST_CASE("more examples and translation") {
  CHECK(w1_equal(EmpiricalDistribution({0.0, 0.0}), EmpiricalDistribution({1.0, 1.0})) == 1.0);
  CHECK(w1_equal(EmpiricalDistribution({0.0, 1.0, 2.0}), EmpiricalDistribution({0.5, 1.5, 2.5})) == 0.5);
  CHECK(w1_brute(std::vector<double>{0.0, 1.0}, std::vector<double>{1.0, 0.0}) == 0.0);
  CHECK(w1_brute(std::vector<double>{0.0}, std::vector<double>{-2.5}) == 2.5);
  const std::vector<WeightedAtom> d0{{0.0, 1.0}};
  const std::vector<WeightedAtom> mix{{0.0, 0.5}, {2.0, 0.5}};
  CHECK(w1_general(d0, mix) == 1.0);
  CHECK(w1_general(mix, mix) == 0.0);

  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    auto a = draw(rng, 5), b = draw(rng, 5);
    const double c = 0.25 * (t % 8);  // exactly representable shifts
    std::vector<double> as, bs;
    for (double x : a) as.push_back(x + c);
    for (double x : b) bs.push_back(x + c);
    CHECK(w1(EmpiricalDistribution(as), EmpiricalDistribution(bs)) ==
          doctest::Approx(w1(EmpiricalDistribution(a), EmpiricalDistribution(b))).epsilon(1e-14));
    CHECK(w1(EmpiricalDistribution(a), EmpiricalDistribution(as)) == doctest::Approx(c).epsilon(1e-14));
    std::vector<WeightedAtom> wa, wb;
    for (double x : a) wa.push_back({x, 0.2});
    for (double x : b) wb.push_back({x, 0.2});
    CHECK(std::abs(w1_general(wa, wb) - w1_equal(EmpiricalDistribution(a), EmpiricalDistribution(b))) <= 1e-12);
  }
}
