#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <vector>

#include "stable_limits/errors.hpp"
#include "stable_limits/netsim.hpp"
#include "stable_limits/stats.hpp"

using namespace stable_limits;

namespace {

NetworkConfig tanh_config(int input_dim, int depth, int width, double alpha, double sw,
                          double sb) {
  return NetworkConfig{input_dim, depth, width, StableParams{alpha, sw},
                       StableParams{alpha, sb}, ActivationSpec::tanh()};
}

std::vector<double> column(const ForwardResult& r, std::size_t unit, int coord) {
  std::vector<double> out(r.repeats);
  const std::size_t stride = r.units * static_cast<std::size_t>(r.k);
  for (std::size_t i = 0; i < r.repeats; ++i)
    out[i] = r.values[i * stride + unit * static_cast<std::size_t>(r.k) +
                      static_cast<std::size_t>(coord)];
  return out;
}

}  // namespace

TEST_SUITE("netsim") {

TEST_CASE("envelope gate: tanh passes, linear growth cannot") {
  for (double alpha : {0.5, 0.8, 1.0, 1.3, 1.5, 1.8, 2.0}) {
    CHECK(validate_envelope(ActivationSpec::tanh(), alpha).accepted);
    const EnvelopeReport relu = validate_envelope(ActivationSpec::relu(), alpha);
    CHECK_FALSE(relu.accepted);
    CHECK(relu.reason.find("degree") != std::string::npos);
    CHECK_FALSE(validate_envelope(ActivationSpec::identity(), alpha).accepted);
  }
}

TEST_CASE("envelope gate: witness constraints and the verification grid") {
  // gamma >= 1/alpha rejected
  auto a1 = ActivationSpec::custom("a1", [](double s) { return std::sin(s); },
                                   EnvelopeWitness{1.0, 1.0, 1.0, 0.8});
  CHECK_FALSE(validate_envelope(a1, 1.5).accepted);  // 0.8 >= 1/1.5
  CHECK(validate_envelope(a1, 1.2).accepted);        // 0.8 < 1/1.2, |sin| <= 1
  // beta >= 1/gamma rejected
  auto a2 = ActivationSpec::custom("a2", [](double s) { return std::sin(s); },
                                   EnvelopeWitness{1.0, 1.0, 3.0, 0.45});
  CHECK_FALSE(validate_envelope(a2, 1.5).accepted);
  // witness passes the algebra but the evaluator breaks the bound on the grid
  auto a3 = ActivationSpec::custom("a3", [](double s) { return s; },
                                   EnvelopeWitness{1.0, 1.0, 1.0, 0.9});
  const EnvelopeReport rep = validate_envelope(a3, 1.05);
  CHECK_FALSE(rep.accepted);
  CHECK(rep.reason.find("bound fails") != std::string::npos);
  // nonpositive witness parameters
  auto a4 = ActivationSpec::custom("a4", [](double s) { return std::sin(s); },
                                   EnvelopeWitness{0.0, 1.0, 1.0, 0.45});
  CHECK_FALSE(validate_envelope(a4, 1.5).accepted);
}

TEST_CASE("network config validation") {
  NetworkConfig bad = tanh_config(1, 2, 10, 1.5, 1.0, 1.0);
  bad.bias_params.alpha = 1.4;  // one alpha for the whole network
  CHECK_THROWS_AS(bad.validate(), error);
  NetworkConfig relu{1, 2, 10, StableParams{1.5, 1.0}, StableParams{1.5, 1.0},
                     ActivationSpec::relu()};
  try {
    relu.validate();
    CHECK(false);
  } catch (const error& e) {
    CHECK(e.code() == errc::envelope);
  }
  CHECK_THROWS_AS(InputBatch(1, 1, {std::nan("")}), error);
}

TEST_CASE("layer-1 marginal follows the exact stable law") {
  const double alpha = 1.3, sw = 0.8, sb = 0.6;
  const std::vector<double> x = {0.5, -1.0, 2.0};
  NetworkConfig cfg = tanh_config(3, 1, 50, alpha, sw, sb);
  UniformStream stream(StreamKind::pseudo_random, 41);
  const int unit = 1;
  ForwardResult r = forward_network(cfg, InputBatch::single(x), stream, 1, {&unit, 1}, 100000);
  CHECK(r.flagged == 0);
  double sum = 0.0;
  for (double xi : x) sum += std::pow(std::abs(xi), alpha);
  const double sigma1 = std::pow(std::pow(sb, alpha) + std::pow(sw, alpha) * sum, 1.0 / alpha);
  const double d = ks_distance(r.values, [&](double v) { return stable_cdf({alpha, sigma1}, v); });
  CHECK(d < 0.01);
}

TEST_CASE("units are exchangeable") {
  NetworkConfig cfg = tanh_config(2, 2, 30, 1.5, 1.0, 1.0);
  const std::vector<double> x = {0.4, -0.9};
  UniformStream stream(StreamKind::pseudo_random, 42);
  const int units[2] = {1, 2};
  ForwardResult r = forward_network(cfg, InputBatch::single(x), stream, 2, units, 100000);
  const double d = ks_two_sample(column(r, 0, 0), column(r, 1, 0));
  CHECK(d < 1.63 * std::sqrt(2.0 / 100000.0));
}

TEST_CASE("explicit and conditional paths draw the same law") {
  NetworkConfig cfg = tanh_config(1, 2, 50, 1.5, 1.0, 1.0);
  InputBatch x = InputBatch::single(std::vector<double>{1.0});
  UniformStream s1(StreamKind::pseudo_random, 43);
  UniformStream s2(StreamKind::pseudo_random, 44);
  const int unit = 1;
  ForwardResult net = forward_network(cfg, x, s1, 2, {&unit, 1}, 100000);
  ForwardResult cond = forward_conditional(cfg, x, s2, 2, 100000);
  CHECK(ks_two_sample(net.values, cond.values) < 0.0105);
}

TEST_CASE("conditional path, two-input wide network marginals") {
  // x = -0.5, x' = 1.0, width 300, layer 2
  NetworkConfig cfg = tanh_config(1, 2, 300, 1.5, 1.0, 1.0);
  InputBatch x(1, 2, {-0.5, 1.0});
  UniformStream s1(StreamKind::pseudo_random, 45);
  UniformStream s2(StreamKind::pseudo_random, 46);
  const int unit = 1;
  const std::size_t n = 100000;
  ForwardResult net = forward_network(cfg, x, s1, 2, {&unit, 1}, n);
  ForwardResult cond = forward_conditional(cfg, x, s2, 2, n);
  for (int c = 0; c < 2; ++c)
    CHECK(ks_two_sample(column(net, 0, c), column(cond, 0, c)) < 0.01);
}

TEST_CASE("layer 1 conditional delegates to the explicit pass bit for bit") {
  NetworkConfig cfg = tanh_config(2, 3, 20, 1.7, 0.9, 0.4);
  InputBatch x(2, 2, {0.3, -1.0, 0.8, 0.1});
  UniformStream s1(StreamKind::pseudo_random, 47);
  UniformStream s2(StreamKind::pseudo_random, 47);
  const int unit = 1;
  ForwardResult a = forward_network(cfg, x, s1, 1, {&unit, 1}, 500);
  ForwardResult b = forward_conditional(cfg, x, s2, 1, 500);
  CHECK(a.values == b.values);
}

TEST_CASE("conditional scale matches the hand-evaluated formula on a width-1 net") {
  // replicate the library's draw order by hand: layer-1 weight, bias, then one
  // draw at the conditional scale (sw^a |tanh(f1)|^a + sb^a)^(1/a)
  const double alpha = 1.4, sw = 0.9, sb = 0.7, x0 = 0.8;
  NetworkConfig cfg = tanh_config(1, 2, 1, alpha, sw, sb);
  InputBatch x = InputBatch::single(std::vector<double>{x0});
  UniformStream stream(StreamKind::pseudo_random, 48);
  ForwardResult out = forward_conditional(cfg, x, stream, 2, 64);
  for (std::size_t r = 0; r < 64; ++r) {
    UniformStream st = stream.derive(r);
    const double w = sample_stable_one({alpha, sw}, st);
    const double b = sample_stable_one({alpha, sb}, st);
    const double f1 = w * x0 + b;
    const double scale = std::pow(
        std::pow(sw, alpha) * std::pow(std::abs(std::tanh(f1)), alpha) + std::pow(sb, alpha),
        1.0 / alpha);
    const double want = sample_stable_one({alpha, scale}, st);
    CHECK(out.values[r] == want);
  }
}

TEST_CASE("unit indices beyond the width simulate the same law") {
  NetworkConfig cfg = tanh_config(1, 2, 30, 1.5, 1.0, 1.0);
  InputBatch x = InputBatch::single(std::vector<double>{1.0});
  UniformStream s1(StreamKind::pseudo_random, 49);
  const int units[2] = {1, 500};
  ForwardResult r = forward_network(cfg, x, s1, 2, units, 50000);
  CHECK(ks_two_sample(column(r, 0, 0), column(r, 1, 0)) < 1.63 * std::sqrt(2.0 / 50000.0));
}

TEST_CASE("cross-unit dependence vanishes at width 300") {
  NetworkConfig cfg = tanh_config(1, 2, 300, 1.5, 1.0, 1.0);
  InputBatch x = InputBatch::single(std::vector<double>{1.0});
  UniformStream stream(StreamKind::pseudo_random, 50);
  const int units[2] = {1, 2};
  const std::size_t n = 100000;
  ForwardResult r = forward_network(cfg, x, stream, 2, units, n);
  const double t1 = 0.7, t2 = 1.1;
  double joint = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f1 = r.values[2 * i];
    const double f2 = r.values[2 * i + 1];
    joint += std::cos(t1 * f1 + t2 * f2);
    m1 += std::cos(t1 * f1);
    m2 += std::cos(t2 * f2);
  }
  joint /= static_cast<double>(n);
  m1 /= static_cast<double>(n);
  m2 /= static_cast<double>(n);
  CHECK(std::abs(joint - m1 * m2) < 0.02);
}

TEST_CASE("layer-1 law is invariant under input coordinate permutations") {
  NetworkConfig cfg = tanh_config(3, 1, 10, 1.2, 1.0, 0.5);
  UniformStream s1(StreamKind::pseudo_random, 51);
  UniformStream s2(StreamKind::pseudo_random, 52);
  const int unit = 1;
  ForwardResult a = forward_network(cfg, InputBatch::single(std::vector<double>{0.3, -1.2, 0.7}),
                                    s1, 1, {&unit, 1}, 50000);
  ForwardResult b = forward_network(cfg, InputBatch::single(std::vector<double>{0.7, 0.3, -1.2}),
                                    s2, 1, {&unit, 1}, 50000);
  CHECK(ks_two_sample(a.values, b.values) < 1.63 * std::sqrt(2.0 / 50000.0));
}

TEST_CASE("scaling both sigmas scales the layer-1 law") {
  const double c = 1.7;
  UniformStream s1(StreamKind::pseudo_random, 53);
  UniformStream s2(StreamKind::pseudo_random, 54);
  const int unit = 1;
  InputBatch x = InputBatch::single(std::vector<double>{0.9, -0.4});
  NetworkConfig base = tanh_config(2, 1, 10, 1.5, 1.0, 0.8);
  NetworkConfig scaled = tanh_config(2, 1, 10, 1.5, c * 1.0, c * 0.8);
  ForwardResult a = forward_network(base, x, s1, 1, {&unit, 1}, 100000);
  ForwardResult b = forward_network(scaled, x, s2, 1, {&unit, 1}, 100000);
  const double ratio = estimate_scale(b.values, 1.5) / estimate_scale(a.values, 1.5);
  CHECK(ratio == doctest::Approx(c).epsilon(0.03));
}

TEST_CASE("a non-finite epidemic aborts instead of silently truncating") {
  // valid witness, but the evaluator blows up on a region the grid misses
  auto blowup = ActivationSpec::custom(
      "blowup",
      [](double s) {
        if (s > 0.3 && s < 0.4) return std::numeric_limits<double>::infinity();
        return std::tanh(s);
      },
      EnvelopeWitness{1.0, 1.0, 1.0, 0.45});
  NetworkConfig cfg{1, 2, 20, StableParams{1.5, 1.0}, StableParams{1.5, 1.0}, blowup};
  InputBatch x = InputBatch::single(std::vector<double>{1.0});
  UniformStream stream(StreamKind::pseudo_random, 55);
  try {
    forward_network(cfg, x, stream, 2, std::vector<int>{1}, 2000);
    CHECK(false);
  } catch (const error& e) {
    CHECK(e.code() == errc::numeric);
  }
}

TEST_CASE("repeat results are independent of the worker count") {
  NetworkConfig cfg = tanh_config(1, 2, 25, 1.5, 1.0, 1.0);
  InputBatch x = InputBatch::single(std::vector<double>{1.0});
  UniformStream stream(StreamKind::pseudo_random, 56);
  setenv("STABLE_LIMITS_THREADS", "1", 1);
  const int unit = 1;
  ForwardResult a = forward_network(cfg, x, stream, 2, {&unit, 1}, 3000);
  setenv("STABLE_LIMITS_THREADS", "7", 1);
  ForwardResult b = forward_network(cfg, x, stream, 2, {&unit, 1}, 3000);
  unsetenv("STABLE_LIMITS_THREADS");
  CHECK(a.values == b.values);
}

}  // TEST_SUITE
