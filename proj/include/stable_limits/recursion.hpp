#ifndef STABLE_LIMITS_RECURSION_HPP
#define STABLE_LIMITS_RECURSION_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "stable_limits/activation.hpp"
#include "stable_limits/netsim.hpp"
#include "stable_limits/spectral.hpp"
#include "stable_limits/stream.hpp"

namespace stable_limits {

// Per-layer parameters of the infinite-width limit law, l = 1..depth.
// Univariate mode carries the scale sigma(l); multivariate mode carries the
// Monte-Carlo discrete spectral measure of the k-dimensional limit law.
//
// stderr_local[l-1] is the MC standard error of layer l's moment estimate
// mapped to the scale axis (0 for layer 1, which is exact). stderr_acc is the
// naive accumulated bound sum_{j<=l} local(j): layer estimates feed the next
// layer's sampling, so errors can pile up across layers; they are reported,
// not corrected.
struct RecursionResult {
  bool multivariate;
  double alpha;
  std::size_t mc_samples;
  StreamKind kind;
  std::uint64_t seed;

  std::vector<double> sigmas;                      // univariate mode
  std::vector<DiscreteSpectralMeasure> measures;   // multivariate mode
  std::vector<double> stderr_local;
  std::vector<double> stderr_acc;

  int depth() const {
    return static_cast<int>(multivariate ? measures.size() : sigmas.size());
  }
};

// Scale recursion for a single input x in R^I:
//   sigma(1) = (sigma_b^a + sigma_w^a sum_j |x_j|^a)^(1/a)
//   sigma(l) = (sigma_b^a + sigma_w^a E_{f ~ St(a, sigma(l-1))} |phi(f)|^a)^(1/a)
// The layer-1 scale is closed-form; each later expectation is the mean of
// |phi(f_m)|^a over mc_samples stable draws from an independent per-layer
// sub-stream of `stream`.
RecursionResult sigma_recursion(double alpha, double sigma_w, double sigma_b,
                                std::span<const double> x, const ActivationSpec& activation,
                                int depth, std::size_t mc_samples,
                                const UniformStream& stream);

// Spectral-measure recursion for k inputs (columns of the I x k batch):
//   G(1) = sigma_b^a ||1||^a d_{1/||1||} + sigma_w^a sum_j ||x_j||^a d_{x_j/||x_j||}
//   G(l) = sigma_b^a ||1||^a d_{1/||1||}
//          + sigma_w^a M^-1 sum_m ||phi(f_m)||^a d_{phi(f_m)/||phi(f_m)||},
// with f_m drawn from the layer-(l-1) approximate law; samples with
// phi(f_m) = 0 are skipped. Layer l >= 2 holds one bias atom plus at most
// mc_samples data atoms; cost is O(M * atoms(l-1)) per layer.
RecursionResult gamma_recursion(double alpha, double sigma_w, double sigma_b,
                                const InputBatch& inputs, const ActivationSpec& activation,
                                int depth, std::size_t mc_samples,
                                const UniformStream& stream);

// Finite-variance (Gaussian-init) depth recursion for two inputs, used as the
// alpha = 2 cross-check: variances q, covariance c and correlation rho evolve
// through Gauss-Hermite quadrature of the activation moments,
//   q^(l) = sb2 + sw2 E[phi(sqrt(q^(l-1)) z)^2]
//   c^(l) = sb2 + sw2 E[phi(sqrt(q_x) z) phi(sqrt(q_x')(rho z + sqrt(1-rho^2) z'))]
// with q^(1) = sb2 + sw2 ||x||^2 and c^(1) = sb2 + sw2 <x, x'>.
struct GaussianLayer {
  double q_x;
  double q_xp;
  double c;
  double rho;
};

std::vector<GaussianLayer> gaussian_variance_recursion(double sigma_w2, double sigma_b2,
                                                       std::span<const double> x,
                                                       std::span<const double> x_prime,
                                                       const ActivationSpec& activation,
                                                       int depth, int quad_points = 64);

}  // namespace stable_limits

#endif
