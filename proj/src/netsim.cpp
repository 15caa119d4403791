#include "stable_limits/netsim.hpp"

#include <atomic>
#include <cmath>
#include <string>

#include "stable_limits/errors.hpp"
#include "stable_limits/parallel.hpp"
#include "stable_limits/spectral.hpp"

namespace stable_limits {

namespace {

constexpr double kMaxFlaggedFraction = 1e-3;

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

void check_layer(const NetworkConfig& config, int layer) {
  if (layer < 1 || layer > config.depth)
    throw error(errc::domain, "layer " + std::to_string(layer) + " outside [1, depth = " +
                                  std::to_string(config.depth) + "]");
}

// Width-n state of one network realization up to `upto` (inclusive), n x k.
// Draw order per layer: unit-major weights, then the unit's bias.
std::vector<double> propagate(const NetworkConfig& config, const InputBatch& inputs,
                              UniformStream& st, int upto, bool* finite) {
  const int n = config.width;
  const int k = inputs.k;
  const int input_dim = config.input_dim;
  const double inv_root_n = std::pow(static_cast<double>(n), -1.0 / config.weight_params.alpha);
  std::vector<double> state(static_cast<std::size_t>(n) * static_cast<std::size_t>(k), 0.0);
  for (int i = 0; i < n; ++i) {
    double* row = state.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(k);
    for (int p = 0; p < input_dim; ++p) {
      const double w = sample_stable_one(config.weight_params, st);
      auto xp = inputs.row(p);
      for (int c = 0; c < k; ++c) row[c] += w * xp[static_cast<std::size_t>(c)];
    }
    const double b = sample_stable_one(config.bias_params, st);
    for (int c = 0; c < k; ++c) row[c] += b;
  }
  if (!all_finite(state)) *finite = false;
  std::vector<double> phi(state.size());
  std::vector<double> next(state.size());
  for (int l = 2; l <= upto; ++l) {
    for (std::size_t idx = 0; idx < state.size(); ++idx) phi[idx] = config.activation(state[idx]);
    for (int i = 0; i < n; ++i) {
      double* row = next.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(k);
      std::fill(row, row + k, 0.0);
      for (int j = 0; j < n; ++j) {
        const double w = sample_stable_one(config.weight_params, st);
        const double* pj = phi.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(k);
        for (int c = 0; c < k; ++c) row[c] += w * pj[c];
      }
      const double b = sample_stable_one(config.bias_params, st);
      for (int c = 0; c < k; ++c) row[c] = inv_root_n * row[c] + b;
    }
    state.swap(next);
    if (!all_finite(state)) *finite = false;
  }
  return state;
}

void enforce_flag_budget(std::size_t flagged, std::size_t repeats) {
  if (repeats > 0 && static_cast<double>(flagged) > kMaxFlaggedFraction * static_cast<double>(repeats))
    throw error(errc::numeric,
                std::to_string(flagged) + " of " + std::to_string(repeats) +
                    " repeats contained non-finite values (> 0.1% budget)");
}

}  // namespace

void NetworkConfig::validate() const {
  if (input_dim < 1) throw error(errc::domain, "input_dim must be >= 1");
  if (depth < 1) throw error(errc::domain, "depth must be >= 1");
  if (width < 1) throw error(errc::domain, "width must be >= 1");
  weight_params.validate();
  bias_params.validate();
  if (weight_params.alpha != bias_params.alpha)
    throw error(errc::domain, "weights and biases must share one alpha");
  EnvelopeReport rep = validate_envelope(activation, weight_params.alpha);
  if (!rep.accepted) throw error(errc::envelope, "activation rejected: " + rep.reason);
}

InputBatch::InputBatch(int input_dim_, int k_, std::vector<double> values)
    : input_dim(input_dim_), k(k_), data(std::move(values)) {
  if (input_dim < 1 || k < 1) throw error(errc::shape, "input batch needs I >= 1 and k >= 1");
  if (data.size() != static_cast<std::size_t>(input_dim) * static_cast<std::size_t>(k))
    throw error(errc::shape, "input batch data size does not match I x k");
  for (double v : data)
    if (!std::isfinite(v)) throw error(errc::domain, "input batch entries must be finite");
}

InputBatch InputBatch::single(std::span<const double> x) {
  return InputBatch(static_cast<int>(x.size()), 1, std::vector<double>(x.begin(), x.end()));
}

ForwardResult forward_network(const NetworkConfig& config, const InputBatch& inputs,
                              const UniformStream& stream, int layer,
                              std::span<const int> units, std::size_t repeats) {
  config.validate();
  check_layer(config, layer);
  if (inputs.input_dim != config.input_dim)
    throw error(errc::shape, "input batch dimension does not match the network input_dim");
  if (units.empty()) throw error(errc::domain, "at least one unit index is required");
  for (int u : units)
    if (u < 1) throw error(errc::domain, "unit indices are 1-based");

  const int n = config.width;
  const int k = inputs.k;
  const std::size_t nu = units.size();
  const double inv_root_n = std::pow(static_cast<double>(n), -1.0 / config.weight_params.alpha);
  ForwardResult result;
  result.repeats = repeats;
  result.units = nu;
  result.k = k;
  result.values.assign(repeats * nu * static_cast<std::size_t>(k), 0.0);
  std::atomic<std::size_t> flagged{0};

  parallel_for_chunks(repeats, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      UniformStream st = stream.derive(r);
      bool finite = true;
      double* out = result.values.data() + r * nu * static_cast<std::size_t>(k);
      if (layer == 1) {
        for (std::size_t u = 0; u < nu; ++u) {
          double* row = out + u * static_cast<std::size_t>(k);
          for (int p = 0; p < config.input_dim; ++p) {
            const double w = sample_stable_one(config.weight_params, st);
            auto xp = inputs.row(p);
            for (int c = 0; c < k; ++c) row[c] += w * xp[static_cast<std::size_t>(c)];
          }
          const double b = sample_stable_one(config.bias_params, st);
          for (int c = 0; c < k; ++c) row[c] += b;
        }
      } else {
        std::vector<double> prev = propagate(config, inputs, st, layer - 1, &finite);
        std::vector<double> phi(prev.size());
        for (std::size_t idx = 0; idx < prev.size(); ++idx)
          phi[idx] = config.activation(prev[idx]);
        for (std::size_t u = 0; u < nu; ++u) {
          double* row = out + u * static_cast<std::size_t>(k);
          for (int j = 0; j < n; ++j) {
            const double w = sample_stable_one(config.weight_params, st);
            const double* pj = phi.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(k);
            for (int c = 0; c < k; ++c) row[c] += w * pj[c];
          }
          const double b = sample_stable_one(config.bias_params, st);
          for (int c = 0; c < k; ++c) row[c] = inv_root_n * row[c] + b;
        }
      }
      if (!finite || !all_finite({out, nu * static_cast<std::size_t>(k)}))
        flagged.fetch_add(1, std::memory_order_relaxed);
    }
  });
  result.flagged = flagged.load();
  enforce_flag_budget(result.flagged, repeats);
  return result;
}

ForwardResult forward_conditional(const NetworkConfig& config, const InputBatch& inputs,
                                  const UniformStream& stream, int layer,
                                  std::size_t repeats) {
  if (layer == 1) {
    // no conditioning at the first layer; identical draws, identical output
    const int unit_one[] = {1};
    ForwardResult r = forward_network(config, inputs, stream, 1, unit_one, repeats);
    r.units = 1;
    return r;
  }
  config.validate();
  check_layer(config, layer);
  if (inputs.input_dim != config.input_dim)
    throw error(errc::shape, "input batch dimension does not match the network input_dim");

  const int n = config.width;
  const int k = inputs.k;
  const double alpha = config.weight_params.alpha;
  const double sw_a = std::pow(config.weight_params.sigma, alpha);
  const double sb_a = std::pow(config.bias_params.sigma, alpha);
  ForwardResult result;
  result.repeats = repeats;
  result.units = 1;
  result.k = k;
  result.values.assign(repeats * static_cast<std::size_t>(k), 0.0);
  std::atomic<std::size_t> flagged{0};

  parallel_for_chunks(repeats, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      UniformStream st = stream.derive(r);
      bool finite = true;
      std::vector<double> prev = propagate(config, inputs, st, layer - 1, &finite);
      double* out = result.values.data() + r * static_cast<std::size_t>(k);
      if (k == 1) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j)
          acc += std::pow(std::fabs(config.activation(prev[static_cast<std::size_t>(j)])), alpha);
        const double scale = std::pow(sw_a / n * acc + sb_a, 1.0 / alpha);
        out[0] = sample_stable_one(StableParams{alpha, scale}, st);
      } else {
        std::vector<double> dirs;
        std::vector<double> wts;
        dirs.reserve(static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(k));
        wts.reserve(static_cast<std::size_t>(n + 1));
        for (int c = 0; c < k; ++c) dirs.push_back(1.0);
        wts.push_back(sb_a * std::pow(static_cast<double>(k), 0.5 * alpha));
        for (int j = 0; j < n; ++j) {
          const double* pj = prev.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(k);
          double norm = 0.0;
          std::size_t base = dirs.size();
          for (int c = 0; c < k; ++c) {
            const double v = config.activation(pj[c]);
            dirs.push_back(v);
            norm += v * v;
          }
          norm = std::sqrt(norm);
          if (norm > 0.0 && std::isfinite(norm)) {
            wts.push_back(sw_a * std::pow(norm, alpha) / n);
          } else {
            dirs.resize(base);  // phi(f) = 0 contributes nothing
          }
        }
        DiscreteSpectralMeasure cond(k, dirs, wts);
        std::vector<double> draw = sample_multivariate(cond, alpha, st, 1);
        std::copy(draw.begin(), draw.end(), out);
      }
      if (!finite || !all_finite({out, static_cast<std::size_t>(k)}))
        flagged.fetch_add(1, std::memory_order_relaxed);
    }
  });
  result.flagged = flagged.load();
  enforce_flag_budget(result.flagged, repeats);
  return result;
}

}  // namespace stable_limits
