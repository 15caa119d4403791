#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

#include "stable_limits/detail/special.hpp"
#include "stable_limits/errors.hpp"
#include "stable_limits/stable.hpp"
#include "stable_limits/stats.hpp"

using namespace stable_limits;

TEST_SUITE("stats") {

TEST_CASE("KS on the exact quantile lattice is 0.5/N") {
  const std::size_t n = 1000;
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i)
    xs[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  const double d = ks_distance(xs, [](double x) { return x; });
  CHECK(d == doctest::Approx(0.5 / static_cast<double>(n)).epsilon(1e-12));
}

TEST_CASE("KS of samples outside the support saturates") {
  std::vector<double> xs(100, -5.0);
  const double d =
      ks_distance(xs, [](double x) { return std::clamp(x, 0.0, 1.0); });
  CHECK(d > 0.99);
}

TEST_CASE("uniform draws pass KS at the 1% critical value") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = 100000;
  std::vector<double> xs(n);
  for (double& x : xs) x = u(rng);
  CHECK(ks_distance(xs, [](double x) { return x; }) <
        1.63 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("KS is invariant under joint strictly increasing transforms") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> xs(5000);
  for (double& x : xs) x = g(rng);
  const double d1 = ks_distance(xs, [](double x) { return detail::normal_cdf(x); });
  std::vector<double> ys(xs);
  for (double& y : ys) y = std::exp(y);
  const double d2 =
      ks_distance(ys, [](double y) { return detail::normal_cdf(std::log(y)); });
  CHECK(d1 == doctest::Approx(d2).epsilon(1e-12));
}

TEST_CASE("two-sample KS basics") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> a(50000), b(50000);
  for (double& x : a) x = g(rng);
  for (double& x : b) x = g(rng);
  CHECK(ks_two_sample(a, b) < 1.63 * std::sqrt(2.0 / 50000.0));
  std::vector<double> lo(1000, -1.0), hi(1000, 1.0);
  CHECK(ks_two_sample(lo, hi) == 1.0);
  CHECK_THROWS_AS(ks_two_sample(std::vector<double>{}, a), error);
}

TEST_CASE("ECF distance of a sample set against its own empirical CF is zero") {
  UniformStream s(StreamKind::pseudo_random, 90);
  auto xs = sample_stable({1.4, 1.0}, s, 20000);
  std::vector<double> grid = {0.25, 0.5, 1.0, 2.0};
  auto self_ecf = [&](std::span<const double> t) {
    double acc = 0.0;
    for (double x : xs) acc += std::cos(t[0] * x);
    return acc / static_cast<double>(xs.size());
  };
  // same pairwise reduction on both sides is not guaranteed, so allow fp dust
  const double d = ecf_distance(xs, 1, self_ecf, grid);
  CHECK(d < 1e-9);
}

TEST_CASE("ECF distance against the exact CF obeys the Monte-Carlo bound") {
  UniformStream s(StreamKind::pseudo_random, 91);
  const std::size_t n = 100000;
  auto xs = sample_stable({1.3, 1.0}, s, n);
  std::vector<double> grid = {0.5, 1.0, 2.0};
  const double d = ecf_distance(
      xs, 1, [](std::span<const double> t) { return stable_cf({1.3, 1.0}, t[0]); }, grid);
  CHECK(d < 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("Cauchy samples against the Gaussian CF show the known gap at t=2") {
  UniformStream s(StreamKind::pseudo_random, 92);
  auto xs = sample_stable({1.0, 1.0}, s, 100000);
  std::vector<double> grid = {2.0};
  const double d = ecf_distance(
      xs, 1, [](std::span<const double> t) { return stable_cf({2.0, 1.0}, t[0]); }, grid);
  CHECK(d == doctest::Approx(0.11701964434787851).epsilon(0.09));
}

TEST_CASE("ECF distance is bounded by 2 and permutation invariant") {
  UniformStream s(StreamKind::pseudo_random, 93);
  auto xs = sample_stable({0.8, 2.0}, s, 30000);
  std::vector<double> grid = {0.5, 5.0};
  auto cf = [](std::span<const double> t) { return stable_cf({1.9, 0.5}, t[0]); };
  const double d = ecf_distance(xs, 1, cf, grid);
  CHECK(d <= 2.0);
  std::vector<double> shuffled(xs);
  std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937_64(4));
  CHECK(std::abs(ecf_distance(shuffled, 1, cf, grid) - d) < 1e-9);
}

TEST_CASE("Gaussian fit: recovery, equivariance, degeneracy") {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> xs(100000);
  for (double& x : xs) x = g(rng);
  auto [mean, sd] = fit_gaussian(xs);
  CHECK(std::abs(mean) < 0.02);
  CHECK(sd == doctest::Approx(1.0).epsilon(0.01));
  std::vector<double> ys(xs);
  for (double& y : ys) y = -2.0 * y + 3.0;
  auto [m2, s2] = fit_gaussian(ys);
  CHECK(m2 == doctest::Approx(-2.0 * mean + 3.0).epsilon(1e-12));
  CHECK(s2 == doctest::Approx(2.0 * sd).epsilon(1e-12));
  CHECK_THROWS_AS(fit_gaussian(std::vector<double>{1.0, 1.0}), error);
  CHECK_THROWS_AS(fit_gaussian(std::vector<double>{1.0}), error);
}

TEST_CASE("stable MLE recovers synthetic parameters") {
  UniformStream s(StreamKind::pseudo_random, 94);
  auto xs = sample_stable({1.7, 1.0}, s, 100000);
  FitReport r = fit_stable_mle(xs);
  CHECK(r.alpha_hat == doctest::Approx(1.7).epsilon(0.03));
  CHECK(r.sigma_hat == doctest::Approx(1.0).epsilon(0.02));
  CHECK(r.converged);
  CHECK(std::isfinite(r.log_likelihood));
}

TEST_CASE("stable MLE on Cauchy data") {
  UniformStream s(StreamKind::pseudo_random, 95);
  auto xs = sample_stable({1.0, 1.0}, s, 100000);
  FitReport r = fit_stable_mle(xs);
  CHECK(std::abs(r.alpha_hat - 1.0) < 0.05);
  CHECK(r.sigma_hat == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("Gaussian data drives alpha to the closed boundary") {
  UniformStream s(StreamKind::pseudo_random, 96);
  auto xs = sample_stable({2.0, 1.0}, s, 100000);
  FitReport r = fit_stable_mle(xs);
  CHECK(r.alpha_hat >= 1.95);
  CHECK(r.alpha_hat <= 2.0);
}

TEST_CASE("stable MLE input gates") {
  CHECK_THROWS_AS(fit_stable_mle(std::vector<double>(50, 1.0)), error);  // too few
  try {
    fit_stable_mle(std::vector<double>(500, 3.25));
    CHECK(false);
  } catch (const error& e) {
    CHECK(e.code() == errc::degenerate_data);
  }
}

TEST_CASE("PIT histogram is flat under the generating model") {
  UniformStream s(StreamKind::pseudo_random, 97);
  const double alpha = 1.5;
  auto xs = sample_stable({alpha, 1.0}, s, 100000);
  auto u = stable_cdf_bulk(alpha, 1.0, xs);
  PitResult r = pit_histogram(u, [](double v) { return v; }, 50);
  CHECK(r.p_value > 0.01);
  std::uint64_t total = 0;
  for (auto c : r.counts) total += c;
  CHECK(total == xs.size());
}

TEST_CASE("Gaussian misfit on Cauchy data inflates both PIT tails") {
  UniformStream s(StreamKind::pseudo_random, 98);
  auto xs = sample_stable({1.0, 1.0}, s, 100000);
  // Moment fitting degenerates on unbounded heavy tails (the sample sd blows
  // up and the PIT collapses to the middle bins), so the Gaussian reference is
  // matched to the quartiles, the standard robust Gaussianization.
  std::vector<double> sorted(xs);
  std::sort(sorted.begin(), sorted.end());
  const double q1 = sorted[sorted.size() / 4];
  const double q3 = sorted[3 * sorted.size() / 4];
  const double mean = sorted[sorted.size() / 2];
  const double sd = (q3 - q1) / 1.3489795003921634;
  PitResult r = pit_histogram(
      xs, [&](double x) { return detail::normal_cdf(x, mean, sd); }, 50);
  const double expected = 100000.0 / 50.0;
  CHECK(static_cast<double>(r.counts.front()) > expected + 3.0 * std::sqrt(expected));
  CHECK(static_cast<double>(r.counts.back()) > expected + 3.0 * std::sqrt(expected));
  CHECK(r.p_value < 1e-6);
}

TEST_CASE("PIT input gates") {
  CHECK_THROWS_AS(pit_histogram(std::vector<double>{}, [](double) { return 0.5; }, 50), error);
  CHECK_THROWS_AS(pit_histogram(std::vector<double>{1.0}, [](double) { return 0.5; }, 1), error);
}

TEST_CASE("bulk cdf agrees with the pointwise cdf") {
  std::vector<double> xs;
  for (double x = -30.0; x <= 30.0; x += 0.37) xs.push_back(x);
  xs.push_back(2000.0);
  xs.push_back(-2000.0);
  for (double alpha : {0.8, 1.7}) {
    auto bulk = stable_cdf_bulk(alpha, 1.3, xs);
    for (std::size_t i = 0; i < xs.size(); ++i)
      CHECK(std::abs(bulk[i] - stable_cdf({alpha, 1.3}, xs[i])) < 1e-6);
  }
  CHECK_THROWS_AS(stable_cdf_bulk(0.4, 1.0, xs), error);
}

TEST_CASE("chi-square survival and normal cdf against reference values") {
  CHECK(detail::chi_square_sf(49.0, 49) == doctest::Approx(0.47312829565476522).epsilon(1e-10));
  CHECK(detail::chi_square_sf(74.92, 49) ==
        doctest::Approx(0.0099989295771790209).epsilon(1e-9));
  CHECK(detail::chi_square_sf(30.0, 49) == doctest::Approx(0.98519317811159621).epsilon(1e-10));
  CHECK(detail::chi_square_sf(85.35, 49) ==
        doctest::Approx(0.0010001336326608787).epsilon(1e-9));
  CHECK(detail::normal_cdf(0.0) == 0.5);
  CHECK(detail::normal_cdf(1.4142135623730951) ==
        doctest::Approx(0.92135039647485743).epsilon(1e-12));
}

TEST_CASE("likelihood reduction is independent of the worker count") {
  UniformStream s(StreamKind::pseudo_random, 99);
  auto xs = sample_stable({1.4, 1.0}, s, 20000);
  setenv("STABLE_LIMITS_THREADS", "1", 1);
  FitReport a = fit_stable_mle(xs);
  setenv("STABLE_LIMITS_THREADS", "5", 1);
  FitReport b = fit_stable_mle(xs);
  unsetenv("STABLE_LIMITS_THREADS");
  CHECK(a.alpha_hat == b.alpha_hat);
  CHECK(a.sigma_hat == b.sigma_hat);
  CHECK(a.log_likelihood == b.log_likelihood);
}

}  // TEST_SUITE
