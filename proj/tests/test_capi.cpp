#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "stable_limits.h"
#include "stable_limits/stable.hpp"
#include "stable_limits/stream.hpp"

TEST_SUITE("capi") {

TEST_CASE("streams and scalar sampling mirror the C++ core bit for bit") {
  sl_stream* stream = nullptr;
  REQUIRE(sl_stream_new("pseudo", 321, 2, &stream) == SL_OK);
  std::vector<double> via_c(1000);
  REQUIRE(sl_sample_stable(1.5, 1.0, stream, via_c.size(), via_c.data()) == SL_OK);
  sl_stream_free(stream);
  stable_limits::UniformStream s(stable_limits::StreamKind::pseudo_random, 321);
  auto via_cpp = stable_limits::sample_stable({1.5, 1.0}, s, 1000);
  CHECK(via_c == via_cpp);
}

TEST_CASE("status codes carry the failure category and a message") {
  sl_stream* stream = nullptr;
  REQUIRE(sl_stream_new("pseudo", 1, 2, &stream) == SL_OK);
  double out = 0.0;
  CHECK(sl_sample_stable(3.0, 1.0, stream, 1, &out) == SL_ERR_DOMAIN);
  CHECK(std::strlen(sl_last_error()) > 0);
  CHECK(sl_stable_pdf(0.3, 1.0, 1.0, &out) == SL_ERR_RANGE);
  CHECK(sl_frac_abs_moment(1.5, 1.0, 1.5, &out) == SL_ERR_MOMENT);
  CHECK(sl_stream_new("weird", 1, 2, &stream) == SL_ERR_DOMAIN);
  CHECK(sl_sample_stable(1.5, 1.0, nullptr, 1, &out) == SL_ERR_DOMAIN);
  sl_stream_free(stream);
}

TEST_CASE("cf, pdf, cdf values through the C surface") {
  double v = 0.0;
  REQUIRE(sl_stable_cf(1.0, 1.0, 1.0, &v) == SL_OK);
  CHECK(v == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  REQUIRE(sl_stable_pdf(1.5, 1.0, 0.0, &v) == SL_OK);
  CHECK(v == doctest::Approx(0.28735275145216445).epsilon(1e-10));
  REQUIRE(sl_stable_cdf(2.0, 1.0, 2.0, &v) == SL_OK);
  CHECK(v == doctest::Approx(0.92135039647485743).epsilon(1e-10));
}

TEST_CASE("measure lifecycle, JSON round trip, queries") {
  const double dirs[4] = {1.0, 1.0, -0.5, 1.0};
  const double wts[2] = {2.0, 1.25};
  sl_measure* m = nullptr;
  REQUIRE(sl_measure_new(2, dirs, wts, 2, &m) == SL_OK);
  CHECK(sl_measure_dim(m) == 2);
  CHECK(sl_measure_atom_count(m) == 2);
  CHECK(sl_measure_total_mass(m) == doctest::Approx(3.25).epsilon(1e-14));
  double scale = 0.0;
  REQUIRE(sl_measure_marginal_scale(m, 2.0, 2, &scale) == SL_OK);
  CHECK(scale == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  char* json = nullptr;
  REQUIRE(sl_measure_to_json(m, &json) == SL_OK);
  sl_measure* back = nullptr;
  REQUIRE(sl_measure_from_json(json, &back) == SL_OK);
  CHECK(sl_measure_atom_count(back) == 2);
  sl_string_free(json);
  sl_measure* sym = nullptr;
  REQUIRE(sl_measure_symmetrize(m, &sym) == SL_OK);
  CHECK(sl_measure_atom_count(sym) == 4);
  CHECK(sl_measure_total_mass(sym) == doctest::Approx(3.25).epsilon(1e-14));
  const double t[2] = {1.0, -0.5};
  double cf = 0.0;
  REQUIRE(sl_measure_cf(m, 1.5, t, &cf) == SL_OK);
  CHECK(cf > 0.0);
  CHECK(cf <= 1.0);
  sl_stream* stream = nullptr;
  REQUIRE(sl_stream_new("pseudo", 5, 2, &stream) == SL_OK);
  std::vector<double> draws(100 * 2);
  REQUIRE(sl_measure_sample(m, 1.5, stream, 100, draws.data()) == SL_OK);
  sl_stream_free(stream);
  sl_measure_free(back);
  sl_measure_free(sym);
  sl_measure_free(m);
  CHECK(sl_measure_from_json("definitely not json", &back) == SL_ERR_PARSE);
}

TEST_CASE("envelope verdicts through the C surface") {
  int accepted = -1;
  char* reason = nullptr;
  REQUIRE(sl_validate_envelope("tanh", 1.5, &accepted, &reason) == SL_OK);
  CHECK(accepted == 1);
  CHECK(reason == nullptr);
  REQUIRE(sl_validate_envelope("relu", 1.5, &accepted, &reason) == SL_OK);
  CHECK(accepted == 0);
  REQUIRE(reason != nullptr);
  CHECK(std::strlen(reason) > 0);
  sl_string_free(reason);
  CHECK(sl_validate_envelope("swish", 1.5, &accepted, &reason) == SL_ERR_DOMAIN);
}

TEST_CASE("forward passes and the envelope/config errors") {
  sl_net_config cfg{1, 2, 20, 1.5, 1.0, 1.0, "tanh"};
  const double x[1] = {1.0};
  const int units[1] = {1};
  std::vector<double> out(200);
  size_t flagged = 99;
  REQUIRE(sl_forward_network(&cfg, x, 1, "pseudo", 7, 2, units, 1, 200, out.data(),
                             &flagged) == SL_OK);
  CHECK(flagged == 0);
  std::vector<double> cond(200);
  REQUIRE(sl_forward_conditional(&cfg, x, 1, "pseudo", 7, 2, 200, cond.data(), &flagged) ==
          SL_OK);
  CHECK(sl_forward_network(&cfg, x, 1, "pseudo", 7, 5, units, 1, 10, out.data(), &flagged) ==
        SL_ERR_DOMAIN);  // layer beyond depth
  sl_net_config relu = cfg;
  relu.activation = "relu";
  CHECK(sl_forward_network(&relu, x, 1, "pseudo", 7, 2, units, 1, 10, out.data(), &flagged) ==
        SL_ERR_ENVELOPE);
}

TEST_CASE("recursions through the C surface") {
  const double x[1] = {1.0};
  sl_recursion* rec = nullptr;
  REQUIRE(sl_sigma_recursion(1.5, 1.0, 1.0, x, 1, "tanh", 4, 5000, "pseudo", 11, &rec) ==
          SL_OK);
  CHECK(sl_recursion_depth(rec) == 4);
  CHECK(sl_recursion_is_multivariate(rec) == 0);
  double sigma = 0.0, se = -1.0;
  REQUIRE(sl_recursion_sigma(rec, 1, &sigma, &se) == SL_OK);
  CHECK(sigma == doctest::Approx(1.5874010519681995).epsilon(1e-12));
  CHECK(se == 0.0);
  sl_measure* m = nullptr;
  CHECK(sl_recursion_measure(rec, 1, &m) == SL_ERR_SHAPE);  // univariate result
  char* json = nullptr;
  REQUIRE(sl_recursion_to_json(rec, &json) == SL_OK);
  CHECK(std::string(json).find("\"mode\"") != std::string::npos);
  sl_string_free(json);
  sl_recursion_free(rec);

  const double xx[2] = {-0.5, 1.0};
  REQUIRE(sl_gamma_recursion(1.5, 1.0, 1.0, xx, 1, 2, "tanh", 3, 500, "pseudo", 12, &rec) ==
          SL_OK);
  CHECK(sl_recursion_is_multivariate(rec) == 1);
  REQUIRE(sl_recursion_measure(rec, 3, &m) == SL_OK);
  CHECK(sl_measure_dim(m) == 2);
  CHECK(sl_measure_atom_count(m) <= 501);
  CHECK(sl_recursion_sigma(rec, 1, &sigma, nullptr) == SL_ERR_SHAPE);
  sl_measure_free(m);
  sl_recursion_free(rec);
}

TEST_CASE("Gaussian recursion through the C surface") {
  const double x[2] = {1.0, 0.0};
  const double xp[2] = {1.0, 0.0};
  std::vector<double> out(5 * 4);
  REQUIRE(sl_gaussian_recursion(1.0, 1.0, x, xp, 2, "tanh", 5, 64, out.data()) == SL_OK);
  CHECK(out[0] == doctest::Approx(2.0).epsilon(1e-14));   // q_x layer 1
  CHECK(out[3] == doctest::Approx(1.0).epsilon(1e-10));   // rho layer 1
  CHECK(out[4 * 4 + 3] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("statistics helpers through the C surface") {
  sl_stream* stream = nullptr;
  REQUIRE(sl_stream_new("pseudo", 13, 2, &stream) == SL_OK);
  std::vector<double> xs(20000);
  REQUIRE(sl_sample_stable(1.5, 1.0, stream, xs.size(), xs.data()) == SL_OK);
  sl_stream_free(stream);

  double d = 0.0;
  REQUIRE(sl_ks_stable(xs.data(), xs.size(), 1.5, 1.0, &d) == SL_OK);
  CHECK(d < 0.015);
  REQUIRE(sl_ks_two_sample(xs.data(), 10000, xs.data() + 10000, 10000, &d) == SL_OK);
  CHECK(d < 1.63 * std::sqrt(2.0 / 10000.0));

  sl_fit_report fit{};
  REQUIRE(sl_fit_stable_mle(xs.data(), xs.size(), &fit) == SL_OK);
  CHECK(fit.alpha_hat == doctest::Approx(1.5).epsilon(0.05));
  CHECK(fit.sigma_hat == doctest::Approx(1.0).epsilon(0.05));

  double mean = 0.0, sd = 0.0;
  REQUIRE(sl_fit_gaussian(xs.data(), xs.size(), &mean, &sd) == SL_OK);
  CHECK(sd > 0.0);

  std::vector<uint64_t> counts(20);
  double chi2 = 0.0, p = 0.0;
  REQUIRE(sl_pit_stable(xs.data(), xs.size(), 1.5, 1.0, 20, counts.data(), &chi2, &p) == SL_OK);
  CHECK(p > 0.001);
  REQUIRE(sl_pit_normal(xs.data(), xs.size(), mean, sd, 20, counts.data(), &chi2, &p) == SL_OK);

  // ecf vs a one-atom k=1 measure equivalent to St(1.5, 1)
  const double dir[1] = {1.0};
  const double w[1] = {1.0};
  sl_measure* m = nullptr;
  REQUIRE(sl_measure_new(1, dir, w, 1, &m) == SL_OK);
  const double grid[3] = {0.5, 1.0, 2.0};
  double per_point[3] = {0, 0, 0};
  REQUIRE(sl_ecf_distance_measure(xs.data(), xs.size(), 1, m, 1.5, grid, 3, per_point, &d) ==
          SL_OK);
  CHECK(d < 3.0 / std::sqrt(20000.0));
  CHECK(per_point[0] <= d);
  sl_measure_free(m);
}

TEST_CASE("identical C-API calls reproduce output bit for bit") {
  sl_net_config cfg{1, 2, 30, 1.2, 1.0, 1.0, "tanh"};
  const double x[1] = {0.5};
  const int units[1] = {1};
  std::vector<double> a(500), b(500);
  size_t fa = 0, fb = 0;
  REQUIRE(sl_forward_network(&cfg, x, 1, "pseudo", 123, 2, units, 1, 500, a.data(), &fa) ==
          SL_OK);
  REQUIRE(sl_forward_network(&cfg, x, 1, "pseudo", 123, 2, units, 1, 500, b.data(), &fb) ==
          SL_OK);
  CHECK(a == b);
}

}  // TEST_SUITE
