#ifndef STABLE_LIMITS_NETSIM_HPP
#define STABLE_LIMITS_NETSIM_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "stable_limits/activation.hpp"
#include "stable_limits/stable.hpp"
#include "stable_limits/stream.hpp"

namespace stable_limits {

// Fully connected feed-forward net with heavy-tailed iid weights/biases:
//   f_i^(1)(x)    = sum_j w_ij^(1) x_j + b_i^(1)
//   f_i^(l)(x, n) = n^(-1/alpha) sum_j w_ij^(l) phi(f_j^(l-1)(x, n)) + b_i^(l)
// One stability index for the whole network.
struct NetworkConfig {
  int input_dim;              // I
  int depth;                  // D
  int width;                  // n
  StableParams weight_params; // (alpha, sigma_w)
  StableParams bias_params;   // (alpha, sigma_b), same alpha
  ActivationSpec activation;

  // Checks parameter domains, the shared alpha, and the envelope gate.
  void validate() const;
};

// k network inputs of dimension I, stored row-major I x k: column j is input
// x^(j), row p collects coordinate p across inputs.
struct InputBatch {
  int input_dim;
  int k;
  std::vector<double> data;

  InputBatch(int input_dim, int k, std::vector<double> values);
  static InputBatch single(std::span<const double> x);  // k = 1

  std::span<const double> row(int p) const {
    return {data.data() + static_cast<std::size_t>(p) * static_cast<std::size_t>(k),
            static_cast<std::size_t>(k)};
  }
};

struct ForwardResult {
  // forward_network: repeats x units x k row-major.
  // forward_conditional: repeats x k.
  std::vector<double> values;
  std::size_t repeats;
  std::size_t units;
  int k;
  // Repeats containing a non-finite intermediate or output. Such repeats stay
  // in `values` (saturated tail events are data, not bugs); more than 0.1% of
  // them aborts with a numeric error instead.
  std::size_t flagged;
};

// Explicit-weight forward pass. Each repeat is an independent network; weights
// are generated on the fly layer by layer, only the n x k activations persist.
// Unit indices beyond the width are allowed and simulated with the same
// conditional law as any other unit of the target layer. Repeats run in
// parallel on sub-streams derived from `stream`, so the output depends only on
// (kind, seed), not on the worker count.
ForwardResult forward_network(const NetworkConfig& config, const InputBatch& inputs,
                              const UniformStream& stream, int layer,
                              std::span<const int> units, std::size_t repeats);

// Simulates one unit of the target layer per repeat by propagating the full
// previous layer and then drawing from the exact conditional law given it:
// a scalar stable draw for k = 1, a draw from the conditional spectral measure
// for k > 1. Distributionally identical to forward_network for a single unit.
// For layer 1 this is forward_network itself (same stream consumption).
ForwardResult forward_conditional(const NetworkConfig& config, const InputBatch& inputs,
                                  const UniformStream& stream, int layer,
                                  std::size_t repeats);

}  // namespace stable_limits

#endif
