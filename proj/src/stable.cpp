#include "stable_limits/stable.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "stable_limits/detail/quadrature.hpp"
#include "stable_limits/detail/special.hpp"
#include "stable_limits/errors.hpp"

namespace stable_limits {

namespace {

constexpr double kPi = std::numbers::pi;

// Density/CDF inversion integrals are truncated where the CF drops below
// ~1e-16: exp(-(sigma t)^alpha) < 1e-16 for t > sigma^-1 * 36.8^(1/alpha).
double cf_cutoff(double alpha, double sigma) {
  return std::pow(36.8, 1.0 / alpha) / sigma;
}

// Tail switch point; beyond this the power-series expansion is attempted
// first. For alpha < 1 the series converges outright and already beats the
// (increasingly oscillatory) inversion integral at moderate arguments.
double tail_switch(double alpha) { return alpha < 1.0 ? 2.0 : 6.0; }

void require_inversion_range(const StableParams& p, const char* op) {
  if (p.alpha <= 0.5)
    throw error(errc::unsupported_range,
                std::string(op) + " supports alpha > 0.5 only (got alpha = " +
                    std::to_string(p.alpha) + ")");
}

// Tail expansion at standardized u = x/sigma > 0.
//   density:   f1(u)     = (1/pi) sum_k (-1)^(k-1) Gamma(alpha k + 1)/k! sin(k pi alpha/2) u^(-alpha k - 1)
//   upper cdf: 1 - F1(u) = (1/pi) sum_k (-1)^(k-1) Gamma(alpha k)/k!     sin(k pi alpha/2) u^(-alpha k)
// Convergent for alpha < 1, asymptotic otherwise. Term control uses the
// coefficient magnitude *without* the sine factor: sin(k pi alpha/2) can pass
// through zero (e.g. alpha = 1.5, k = 4) while later terms still matter.
// Returns false when the smallest reachable coefficient is not negligible
// relative to the sum, or when intermediate terms are large enough that
// cancellation eats the result; the caller then falls back to quadrature.
bool tail_series_std(double alpha, double u, bool density, double* out) {
  double sum = 0.0;
  double prev_coef = std::numeric_limits<double>::infinity();
  double max_coef = 0.0;
  const double lg_u = std::log(u);
  const double extra = density ? 1.0 : 0.0;
  double lg_kfact = 0.0;
  for (int k = 1; k <= 400; ++k) {
    lg_kfact += std::log(static_cast<double>(k));
    const double lg_coef =
        std::lgamma(alpha * k + extra) - lg_kfact - (alpha * k + extra) * lg_u;
    const double coef = std::exp(lg_coef);
    if (coef > prev_coef && k > 1) {  // asymptotic series started diverging
      *out = sum / kPi;
      return prev_coef < 1e-11 * std::fabs(sum) + 1e-300 && max_coef < 1e4 * std::fabs(sum);
    }
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    sum += sign * coef * std::sin(0.5 * k * kPi * alpha);
    prev_coef = coef;
    max_coef = std::max(max_coef, coef);
    if (coef < 1e-17 * std::fabs(sum) + 1e-300) {
      *out = sum / kPi;
      return max_coef < 1e4 * std::fabs(sum);
    }
  }
  *out = sum / kPi;
  return false;
}

bool tail_pdf_std(double alpha, double u, double* out) {
  return tail_series_std(alpha, u, true, out);
}

bool tail_sf_std(double alpha, double u, double* out) {
  return tail_series_std(alpha, u, false, out);
}

// Integrates g over [0, t_max] with panel boundaries aligned to the half-
// periods of the oscillatory factor (period 2*pi/x). Each panel runs adaptive
// Gauss-Kronrod; the absolute budget is spread across panels.
double oscillatory_integral(const std::function<double(double)>& g, double x,
                            double t_max, double abs_tol) {
  std::vector<double> edges;
  edges.push_back(0.0);
  if (x > 0.0) {
    const double half_period = kPi / x;
    // keep panels no wider than the CF's own scale either
    const double max_width = std::min(half_period, t_max / 8.0);
    double t = max_width;
    while (t < t_max) {
      edges.push_back(t);
      t += max_width;
    }
  } else {
    for (int i = 1; i < 8; ++i) edges.push_back(t_max * i / 8.0);
  }
  edges.push_back(t_max);
  const double per_panel = abs_tol / static_cast<double>(edges.size());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    acc += detail::integrate_gk(g, edges[i], edges[i + 1], per_panel, 1e-12);
  return acc;
}

double pdf_std(double alpha, double u);  // forward

// Standardized density of St(alpha, 1) at u >= 0.
double pdf_std(double alpha, double u) {
  if (alpha == 2.0) {
    // N(0, 2)
    return std::exp(-0.25 * u * u) / (2.0 * std::sqrt(kPi));
  }
  if (alpha == 1.0) {
    return 1.0 / (kPi * (1.0 + u * u));
  }
  if (u > tail_switch(alpha)) {
    double v;
    if (tail_pdf_std(alpha, u, &v)) return std::max(v, 0.0);
  }
  const double t_max = cf_cutoff(alpha, 1.0);
  auto g = [&](double t) { return std::cos(t * u) * std::exp(-std::pow(t, alpha)); };
  const double v = oscillatory_integral(g, u, t_max, 1e-13) / kPi;
  return std::max(v, 0.0);
}

// Standardized CDF of St(alpha, 1) at u >= 0.
double cdf_std_upper(double alpha, double u) {
  if (alpha == 2.0) return detail::normal_cdf(u / std::sqrt(2.0));
  if (alpha == 1.0) return 0.5 + std::atan(u) / kPi;
  if (u == 0.0) return 0.5;
  if (u > tail_switch(alpha)) {
    double sf;
    if (tail_sf_std(alpha, u, &sf)) return 1.0 - std::max(sf, 0.0);
  }
  const double t_max = cf_cutoff(alpha, 1.0);
  auto g = [&](double t) {
    if (t == 0.0) return u;  // sin(t u)/t -> u
    return std::sin(t * u) / t * std::exp(-std::pow(t, alpha));
  };
  const double v = 0.5 + oscillatory_integral(g, u, t_max, 1e-13) / kPi;
  return std::min(std::max(v, 0.0), 1.0);
}

}  // namespace

void StableParams::validate() const {
  if (!(alpha > 0.0) || !(alpha <= 2.0) || !std::isfinite(alpha))
    throw error(errc::domain,
                "alpha must lie in (0, 2], got " + std::to_string(alpha));
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw error(errc::domain, "sigma must be positive and finite, got " + std::to_string(sigma));
}

double sample_stable_one(const StableParams& params, UniformStream& stream) {
  const double u1 = stream.next();
  const double u2 = stream.next();
  const double v = kPi * (u1 - 0.5);     // uniform on (-pi/2, pi/2)
  const double w = -std::log(u2);        // standard exponential
  const double a = params.alpha;
  if (a == 1.0) return params.sigma * std::tan(v);
  const double av = a * v;
  const double x = std::sin(av) / std::pow(std::cos(v), 1.0 / a) *
                   std::pow(std::cos(v - av) / w, (1.0 - a) / a);
  return params.sigma * x;
}

std::vector<double> sample_stable(const StableParams& params, UniformStream& stream,
                                  std::size_t count) {
  params.validate();
  std::vector<double> out(count);
  for (double& x : out) x = sample_stable_one(params, stream);
  return out;
}

double stable_cf(const StableParams& params, double t) {
  params.validate();
  if (t == 0.0) return 1.0;
  return std::exp(-std::pow(params.sigma, params.alpha) *
                  std::pow(std::fabs(t), params.alpha));
}

double stable_pdf(const StableParams& params, double x) {
  params.validate();
  require_inversion_range(params, "stable_pdf");
  if (!std::isfinite(x)) throw error(errc::domain, "stable_pdf requires finite x");
  const double u = std::fabs(x) / params.sigma;
  return pdf_std(params.alpha, u) / params.sigma;
}

double stable_cdf(const StableParams& params, double x) {
  params.validate();
  require_inversion_range(params, "stable_cdf");
  if (std::isnan(x)) throw error(errc::domain, "stable_cdf requires non-NaN x");
  if (x == 0.0) return 0.5;
  const double u = std::fabs(x) / params.sigma;
  const double upper = cdf_std_upper(params.alpha, u);
  return x > 0.0 ? upper : 1.0 - upper;
}

double frac_abs_moment(const StableParams& params, double p) {
  params.validate();
  if (!(p > 0.0)) throw error(errc::domain, "moment order p must be positive");
  if (p >= params.alpha)
    throw error(errc::moment_divergence,
                "E|S|^p diverges for p >= alpha (p = " + std::to_string(p) +
                    ", alpha = " + std::to_string(params.alpha) + ")");
  // E|S|^p = sigma^p 2^p Gamma((1+p)/2) Gamma(1 - p/alpha) / (sqrt(pi) Gamma(1 - p/2))
  const double lg = p * std::log(2.0) + std::lgamma(0.5 * (1.0 + p)) +
                    std::lgamma(1.0 - p / params.alpha) - 0.5 * std::log(kPi) -
                    std::lgamma(1.0 - 0.5 * p);
  return std::pow(params.sigma, p) * std::exp(lg);
}

double estimate_scale(std::span<const double> samples, double alpha, double p) {
  if (samples.empty()) throw error(errc::empty_input, "estimate_scale: empty sample");
  StableParams unit{alpha, 1.0};
  unit.validate();
  if (p == 0.0) p = 0.5 * alpha;
  const double c = frac_abs_moment(unit, p);  // validates p < alpha
  double mean = 0.0;
  for (double x : samples) mean += std::pow(std::fabs(x), p);
  mean /= static_cast<double>(samples.size());
  if (mean <= 0.0)
    throw error(errc::degenerate_data, "estimate_scale: all samples are zero");
  return std::pow(mean / c, 1.0 / p);
}

}  // namespace stable_limits
