#include "stable_limits/recursion.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "stable_limits/detail/quadrature.hpp"
#include "stable_limits/errors.hpp"

namespace stable_limits {

namespace {

constexpr double kMaxSkippedFraction = 1e-3;

void check_recursion_args(double alpha, double sigma_w, double sigma_b, int depth,
                          std::size_t mc_samples, const ActivationSpec& activation) {
  StableParams{alpha, sigma_w}.validate();
  StableParams{alpha, sigma_b}.validate();
  if (depth < 1) throw error(errc::domain, "depth must be >= 1");
  if (mc_samples < 2) throw error(errc::domain, "mc_samples must be >= 2");
  EnvelopeReport rep = validate_envelope(activation, alpha);
  if (!rep.accepted) throw error(errc::envelope, "activation rejected: " + rep.reason);
}

// Delta-method transfer of a moment-mean standard error onto the scale axis:
// sigma = (sb^a + sw^a m)^(1/a)  =>  d sigma / d m = sw^a sigma^(1-a) / a.
double scale_stderr(double moment_se, double sw_a, double alpha, double sigma_l) {
  return moment_se * sw_a * std::pow(sigma_l, 1.0 - alpha) / alpha;
}

}  // namespace

RecursionResult sigma_recursion(double alpha, double sigma_w, double sigma_b,
                                std::span<const double> x, const ActivationSpec& activation,
                                int depth, std::size_t mc_samples,
                                const UniformStream& stream) {
  check_recursion_args(alpha, sigma_w, sigma_b, depth, mc_samples, activation);
  if (x.empty()) throw error(errc::shape, "input vector must be non-empty");
  const double sw_a = std::pow(sigma_w, alpha);
  const double sb_a = std::pow(sigma_b, alpha);

  RecursionResult result;
  result.multivariate = false;
  result.alpha = alpha;
  result.mc_samples = mc_samples;
  result.kind = stream.kind();
  result.seed = stream.seed();

  double sum_abs = 0.0;
  for (double xi : x) sum_abs += std::pow(std::fabs(xi), alpha);
  result.sigmas.push_back(std::pow(sb_a + sw_a * sum_abs, 1.0 / alpha));
  result.stderr_local.push_back(0.0);
  result.stderr_acc.push_back(0.0);

  for (int l = 2; l <= depth; ++l) {
    UniformStream st = stream.derive(static_cast<std::uint64_t>(l));
    const StableParams prev{alpha, result.sigmas.back()};
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t used = 0;
    for (std::size_t m = 0; m < mc_samples; ++m) {
      const double f = sample_stable_one(prev, st);
      if (!std::isfinite(f)) continue;
      const double v = std::pow(std::fabs(activation(f)), alpha);
      ++used;
      const double d = v - mean;
      mean += d / static_cast<double>(used);
      m2 += d * (v - mean);
    }
    if (used < mc_samples &&
        static_cast<double>(mc_samples - used) > kMaxSkippedFraction * static_cast<double>(mc_samples))
      throw error(errc::numeric, "layer " + std::to_string(l) + ": too many non-finite draws");
    const double se = std::sqrt(m2 / static_cast<double>(used - 1) / static_cast<double>(used));
    const double sigma_l = std::pow(sb_a + sw_a * mean, 1.0 / alpha);
    result.sigmas.push_back(sigma_l);
    result.stderr_local.push_back(scale_stderr(se, sw_a, alpha, sigma_l));
    result.stderr_acc.push_back(result.stderr_acc.back() + result.stderr_local.back());
  }
  return result;
}

RecursionResult gamma_recursion(double alpha, double sigma_w, double sigma_b,
                                const InputBatch& inputs, const ActivationSpec& activation,
                                int depth, std::size_t mc_samples,
                                const UniformStream& stream) {
  check_recursion_args(alpha, sigma_w, sigma_b, depth, mc_samples, activation);
  const int k = inputs.k;
  const double sw_a = std::pow(sigma_w, alpha);
  const double sb_a = std::pow(sigma_b, alpha);

  RecursionResult result;
  result.multivariate = true;
  result.alpha = alpha;
  result.mc_samples = mc_samples;
  result.kind = stream.kind();
  result.seed = stream.seed();

  // layer 1: bias atom plus one atom per nonzero input row
  {
    std::vector<double> dirs;
    std::vector<double> wts;
    for (int c = 0; c < k; ++c) dirs.push_back(1.0);
    wts.push_back(sb_a * std::pow(static_cast<double>(k), 0.5 * alpha));
    for (int p = 0; p < inputs.input_dim; ++p) {
      auto row = inputs.row(p);
      double norm = 0.0;
      for (double v : row) norm += v * v;
      norm = std::sqrt(norm);
      if (norm == 0.0) continue;
      for (double v : row) dirs.push_back(v);
      wts.push_back(sw_a * std::pow(norm, alpha));
    }
    result.measures.push_back(DiscreteSpectralMeasure(k, dirs, wts));
    result.stderr_local.push_back(0.0);
    result.stderr_acc.push_back(0.0);
  }

  std::vector<double> phi_row(static_cast<std::size_t>(k));
  for (int l = 2; l <= depth; ++l) {
    // dimension: one (V, W) pair per symmetrized atom per draw
    const int draw_dim =
        static_cast<int>(2 * 2 * result.measures.back().atom_count());
    UniformStream st =
        UniformStream(stream.kind(), stream.seed(), std::max(stream.dimension(), draw_dim))
            .derive(static_cast<std::uint64_t>(l));
    const std::vector<double> samples =
        sample_multivariate(result.measures.back(), alpha, st, mc_samples);

    std::vector<double> dirs;
    std::vector<double> wts;
    dirs.reserve((mc_samples + 1) * static_cast<std::size_t>(k));
    wts.reserve(mc_samples + 1);
    for (int c = 0; c < k; ++c) dirs.push_back(1.0);
    wts.push_back(sb_a * std::pow(static_cast<double>(k), 0.5 * alpha));

    // per-coordinate running moments of |phi(f)_r|^alpha for the error report
    std::vector<double> mean(static_cast<std::size_t>(k), 0.0);
    std::vector<double> m2(static_cast<std::size_t>(k), 0.0);
    std::size_t used = 0;
    std::size_t skipped = 0;
    for (std::size_t m = 0; m < mc_samples; ++m) {
      const double* f = samples.data() + m * static_cast<std::size_t>(k);
      double norm = 0.0;
      bool finite = true;
      for (int c = 0; c < k; ++c) {
        phi_row[static_cast<std::size_t>(c)] = activation(f[c]);
        if (!std::isfinite(phi_row[static_cast<std::size_t>(c)])) finite = false;
        norm += phi_row[static_cast<std::size_t>(c)] * phi_row[static_cast<std::size_t>(c)];
      }
      norm = std::sqrt(norm);
      if (!finite) {
        ++skipped;
        continue;
      }
      ++used;
      for (int c = 0; c < k; ++c) {
        const double v = std::pow(std::fabs(phi_row[static_cast<std::size_t>(c)]), alpha);
        const double d = v - mean[static_cast<std::size_t>(c)];
        mean[static_cast<std::size_t>(c)] += d / static_cast<double>(used);
        m2[static_cast<std::size_t>(c)] += d * (v - mean[static_cast<std::size_t>(c)]);
      }
      if (norm == 0.0) continue;  // phi(f) = 0 carries no atom
      for (int c = 0; c < k; ++c) dirs.push_back(phi_row[static_cast<std::size_t>(c)]);
      wts.push_back(sw_a * std::pow(norm, alpha) / static_cast<double>(mc_samples));
    }
    if (static_cast<double>(skipped) > kMaxSkippedFraction * static_cast<double>(mc_samples))
      throw error(errc::numeric, "layer " + std::to_string(l) + ": too many non-finite draws");

    result.measures.push_back(DiscreteSpectralMeasure(k, dirs, wts));
    double worst = 0.0;
    for (int c = 0; c < k; ++c) {
      const double se = std::sqrt(m2[static_cast<std::size_t>(c)] /
                                  static_cast<double>(used - 1) / static_cast<double>(used));
      const double sig_r = marginal_scale(result.measures.back(), alpha, c + 1);
      if (sig_r > 0.0) worst = std::max(worst, scale_stderr(se, sw_a, alpha, sig_r));
    }
    result.stderr_local.push_back(worst);
    result.stderr_acc.push_back(result.stderr_acc.back() + worst);
  }
  return result;
}

std::vector<GaussianLayer> gaussian_variance_recursion(double sigma_w2, double sigma_b2,
                                                       std::span<const double> x,
                                                       std::span<const double> x_prime,
                                                       const ActivationSpec& activation,
                                                       int depth, int quad_points) {
  if (!(sigma_w2 > 0.0) || !(sigma_b2 >= 0.0))
    throw error(errc::domain, "variances must be positive (weights) / nonnegative (biases)");
  if (x.size() != x_prime.size() || x.empty())
    throw error(errc::shape, "x and x' must share a positive dimension");
  if (depth < 1) throw error(errc::domain, "depth must be >= 1");
  if (quad_points < 16) throw error(errc::domain, "quad_points must be >= 16");

  const auto& gh = detail::gauss_hermite(quad_points);
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  const double sqrt2 = std::sqrt(2.0);

  auto second_moment = [&](double q) {
    double acc = 0.0;
    for (int i = 0; i < quad_points; ++i) {
      const double z = sqrt2 * gh.nodes[static_cast<std::size_t>(i)];
      const double p = activation(std::sqrt(q) * z);
      acc += gh.weights[static_cast<std::size_t>(i)] * p * p;
    }
    return acc * inv_sqrt_pi;
  };
  auto cross_moment = [&](double qx, double qxp, double rho) {
    const double root = std::sqrt(std::max(1.0 - rho * rho, 0.0));
    double acc = 0.0;
    for (int i = 0; i < quad_points; ++i) {
      const double z = sqrt2 * gh.nodes[static_cast<std::size_t>(i)];
      const double pi_x = activation(std::sqrt(qx) * z);
      double inner = 0.0;
      for (int j = 0; j < quad_points; ++j) {
        const double zp = sqrt2 * gh.nodes[static_cast<std::size_t>(j)];
        inner += gh.weights[static_cast<std::size_t>(j)] *
                 activation(std::sqrt(qxp) * (rho * z + root * zp));
      }
      acc += gh.weights[static_cast<std::size_t>(i)] * pi_x * inner;
    }
    return acc * inv_sqrt_pi * inv_sqrt_pi;
  };

  double norm_x = 0.0, norm_xp = 0.0, dot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    norm_x += x[i] * x[i];
    norm_xp += x_prime[i] * x_prime[i];
    dot += x[i] * x_prime[i];
  }

  std::vector<GaussianLayer> layers;
  layers.reserve(static_cast<std::size_t>(depth));
  GaussianLayer cur;
  cur.q_x = sigma_b2 + sigma_w2 * norm_x;
  cur.q_xp = sigma_b2 + sigma_w2 * norm_xp;
  cur.c = sigma_b2 + sigma_w2 * dot;
  cur.rho = cur.c / std::sqrt(cur.q_x * cur.q_xp);
  layers.push_back(cur);

  for (int l = 2; l <= depth; ++l) {
    GaussianLayer next;
    next.q_x = sigma_b2 + sigma_w2 * second_moment(cur.q_x);
    next.q_xp = sigma_b2 + sigma_w2 * second_moment(cur.q_xp);
    next.c = sigma_b2 + sigma_w2 * cross_moment(cur.q_x, cur.q_xp, cur.rho);
    if (!(next.q_x > 0.0) || !(next.q_xp > 0.0) || !std::isfinite(next.q_x) ||
        !std::isfinite(next.q_xp) || !std::isfinite(next.c))
      throw error(errc::numeric, "variance recursion degenerated at layer " + std::to_string(l));
    next.rho = next.c / std::sqrt(next.q_x * next.q_xp);
    layers.push_back(next);
    cur = next;
  }
  return layers;
}

}  // namespace stable_limits
