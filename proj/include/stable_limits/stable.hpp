#ifndef STABLE_LIMITS_STABLE_HPP
#define STABLE_LIMITS_STABLE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "stable_limits/stream.hpp"

namespace stable_limits {

// Symmetric centered stable law St(alpha, sigma), characteristic function
// exp(-sigma^alpha |t|^alpha). alpha = 2 is N(0, 2 sigma^2), alpha = 1 Cauchy.
struct StableParams {
  double alpha;
  double sigma;

  // Throws errc::domain unless 0 < alpha <= 2 and sigma > 0, both finite.
  void validate() const;
};

// One Chambers-Mallows-Stuck draw; consumes two uniforms from the stream.
double sample_stable_one(const StableParams& params, UniformStream& stream);

std::vector<double> sample_stable(const StableParams& params, UniformStream& stream,
                                  std::size_t count);

// exp(-sigma^alpha |t|^alpha); real-valued since the law is symmetric.
double stable_cf(const StableParams& params, double t);

// Density and CDF by Fourier inversion of the CF. Supported for alpha > 0.5;
// below that the integrals get too stiff for the fitting workflow this backs,
// and requests throw errc::unsupported_range.
double stable_pdf(const StableParams& params, double x);
double stable_cdf(const StableParams& params, double x);

// E|S|^p for 0 < p < alpha (closed form); p >= alpha throws
// errc::moment_divergence since the moment is infinite.
double frac_abs_moment(const StableParams& params, double p);

// Moment-based scale estimator: sigma_hat = (mean|x_i|^p / C(p, alpha))^(1/p)
// where C is the standardized p-th absolute moment. p defaults to alpha/2 when
// passed as 0.
double estimate_scale(std::span<const double> samples, double alpha, double p = 0.0);

}  // namespace stable_limits

#endif
