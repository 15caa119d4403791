#include "stable_limits.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <new>
#include <span>
#include <string>
#include <vector>

#include "stable_limits/activation.hpp"
#include "stable_limits/errors.hpp"
#include "stable_limits/netsim.hpp"
#include "stable_limits/recursion.hpp"
#include "stable_limits/serialize.hpp"
#include "stable_limits/spectral.hpp"
#include "stable_limits/stable.hpp"
#include "stable_limits/stats.hpp"
#include "stable_limits/stream.hpp"

namespace sl = stable_limits;

struct sl_stream {
  sl::UniformStream impl;
};
struct sl_measure {
  sl::DiscreteSpectralMeasure impl;
};
struct sl_recursion {
  sl::RecursionResult impl;
};

namespace {

thread_local std::string g_last_error;

sl_status status_from(sl::errc c) {
  switch (c) {
    case sl::errc::ok: return SL_OK;
    case sl::errc::domain: return SL_ERR_DOMAIN;
    case sl::errc::shape: return SL_ERR_SHAPE;
    case sl::errc::numeric: return SL_ERR_NUMERIC;
    case sl::errc::empty_input: return SL_ERR_EMPTY;
    case sl::errc::degenerate_data: return SL_ERR_DEGENERATE;
    case sl::errc::envelope: return SL_ERR_ENVELOPE;
    case sl::errc::moment_divergence: return SL_ERR_MOMENT;
    case sl::errc::unsupported_range: return SL_ERR_RANGE;
    case sl::errc::io: return SL_ERR_IO;
    case sl::errc::parse: return SL_ERR_PARSE;
  }
  return SL_ERR_UNKNOWN;
}

template <typename Fn>
sl_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SL_OK;
  } catch (const sl::error& e) {
    g_last_error = e.what();
    return status_from(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SL_ERR_UNKNOWN;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SL_ERR_UNKNOWN;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

sl_status require(bool cond, const char* msg) {
  if (cond) return SL_OK;
  g_last_error = msg;
  return SL_ERR_DOMAIN;
}

sl::InputBatch batch_from(const double* inputs, int input_dim, int k) {
  if (inputs == nullptr) throw sl::error(sl::errc::shape, "inputs pointer is NULL");
  return sl::InputBatch(input_dim, k,
                        std::vector<double>(inputs, inputs + static_cast<std::size_t>(input_dim) *
                                                                 static_cast<std::size_t>(k)));
}

sl::NetworkConfig config_from(const sl_net_config* c) {
  if (c == nullptr) throw sl::error(sl::errc::domain, "config pointer is NULL");
  return sl::NetworkConfig{c->input_dim,
                           c->depth,
                           c->width,
                           sl::StableParams{c->alpha, c->sigma_w},
                           sl::StableParams{c->alpha, c->sigma_b},
                           sl::ActivationSpec::from_name(c->activation ? c->activation : "")};
}

}  // namespace

extern "C" {

const char* sl_last_error(void) { return g_last_error.c_str(); }

void sl_string_free(char* s) { delete[] s; }

sl_status sl_stream_new(const char* kind, uint64_t seed, int dimension, sl_stream** out) {
  if (auto st = require(out && kind, "NULL argument"); st != SL_OK) return st;
  return guarded([&] {
    *out = new sl_stream{sl::UniformStream(sl::stream_kind_from_string(kind), seed, dimension)};
  });
}

sl_status sl_stream_next(sl_stream* stream, size_t count, double* out) {
  if (auto st = require(stream && (out || count == 0), "NULL argument"); st != SL_OK) return st;
  return guarded([&] { stream->impl.next_block({out, count}); });
}

void sl_stream_free(sl_stream* stream) { delete stream; }

sl_status sl_sample_stable(double alpha, double sigma, sl_stream* stream, size_t count,
                           double* out) {
  if (auto st = require(stream && (out || count == 0), "NULL argument"); st != SL_OK) return st;
  return guarded([&] {
    sl::StableParams p{alpha, sigma};
    p.validate();
    for (size_t i = 0; i < count; ++i) out[i] = sl::sample_stable_one(p, stream->impl);
  });
}

sl_status sl_stable_cf(double alpha, double sigma, double t, double* out) {
  if (auto st = require(out != nullptr, "NULL output"); st != SL_OK) return st;
  return guarded([&] { *out = sl::stable_cf({alpha, sigma}, t); });
}

sl_status sl_stable_pdf(double alpha, double sigma, double x, double* out) {
  if (auto st = require(out != nullptr, "NULL output"); st != SL_OK) return st;
  return guarded([&] { *out = sl::stable_pdf({alpha, sigma}, x); });
}

sl_status sl_stable_cdf(double alpha, double sigma, double x, double* out) {
  if (auto st = require(out != nullptr, "NULL output"); st != SL_OK) return st;
  return guarded([&] { *out = sl::stable_cdf({alpha, sigma}, x); });
}

sl_status sl_stable_cdf_bulk(double alpha, double sigma, const double* xs, size_t n,
                             double* out) {
  if (auto st = require(xs && out, "NULL argument"); st != SL_OK) return st;
  return guarded([&] {
    auto v = sl::stable_cdf_bulk(alpha, sigma, {xs, n});
    std::copy(v.begin(), v.end(), out);
  });
}

sl_status sl_frac_abs_moment(double alpha, double sigma, double p, double* out) {
  if (auto st = require(out != nullptr, "NULL output"); st != SL_OK) return st;
  return guarded([&] { *out = sl::frac_abs_moment({alpha, sigma}, p); });
}

sl_status sl_estimate_scale(const double* xs, size_t n, double alpha, double p, double* out) {
  if (auto st = require(xs && out, "NULL argument"); st != SL_OK) return st;
  return guarded([&] { *out = sl::estimate_scale({xs, n}, alpha, p); });
}

sl_status sl_measure_new(int dim, const double* directions, const double* weights,
                         size_t atoms, sl_measure** out) {
  if (auto st = require(directions && weights && out, "NULL argument"); st != SL_OK) return st;
  return guarded([&] {
    *out = new sl_measure{sl::DiscreteSpectralMeasure(
        dim, {directions, atoms * static_cast<size_t>(dim)}, {weights, atoms})};
  });
}

sl_status sl_measure_from_json(const char* text, sl_measure** out) {
  if (auto st = require(text && out, "NULL argument"); st != SL_OK) return st;
  return guarded([&] { *out = new sl_measure{sl::measure_from_json(text)}; });
}

sl_status sl_measure_to_json(const sl_measure* measure, char** out) {
  if (auto st = require(measure && out, "NULL argument"); st != SL_OK) return st;
  return guarded([&] { *out = dup_string(sl::measure_to_json(measure->impl)); });
}

sl_status sl_measure_symmetrize(const sl_measure* measure, sl_measure** out) {
  if (auto st = require(measure && out, "NULL argument"); st != SL_OK) return st;
  return guarded([&] { *out = new sl_measure{sl::symmetrize(measure->impl)}; });
}

int sl_measure_dim(const sl_measure* measure) { return measure ? measure->impl.dim() : 0; }

size_t sl_measure_atom_count(const sl_measure* measure) {
  return measure ? measure->impl.atom_count() : 0;
}

double sl_measure_total_mass(const sl_measure* measure) {
  return measure ? measure->impl.total_mass() : 0.0;
}

sl_status sl_measure_cf(const sl_measure* measure, double alpha, const double* t, double* out) {
  if (auto st = require(measure && t && out, "NULL argument"); st != SL_OK) return st;
  return guarded([&] {
    *out = sl::multivariate_cf(measure->impl, alpha,
                               {t, static_cast<size_t>(measure->impl.dim())});
  });
}

sl_status sl_measure_marginal_scale(const sl_measure* measure, double alpha, int r,
                                    double* out) {
  if (auto st = require(measure && out, "NULL argument"); st != SL_OK) return st;
  return guarded([&] { *out = sl::marginal_scale(measure->impl, alpha, r); });
}

sl_status sl_measure_sample(const sl_measure* measure, double alpha, sl_stream* stream,
                            size_t count, double* out) {
  if (auto st = require(measure && stream && (out || count == 0), "NULL argument");
      st != SL_OK)
    return st;
  return guarded([&] {
    auto v = sl::sample_multivariate(measure->impl, alpha, stream->impl, count);
    std::copy(v.begin(), v.end(), out);
  });
}

void sl_measure_free(sl_measure* measure) { delete measure; }

sl_status sl_validate_envelope(const char* activation, double alpha, int* accepted,
                               char** reason) {
  if (auto st = require(activation && accepted, "NULL argument"); st != SL_OK) return st;
  return guarded([&] {
    sl::EnvelopeReport rep =
        sl::validate_envelope(sl::ActivationSpec::from_name(activation), alpha);
    *accepted = rep.accepted ? 1 : 0;
    if (reason) *reason = rep.reason.empty() ? nullptr : dup_string(rep.reason);
  });
}

sl_status sl_forward_network(const sl_net_config* config, const double* inputs, int k,
                             const char* stream_kind, uint64_t seed, int layer,
                             const int* units, size_t unit_count, size_t repeats,
                             double* out, size_t* flagged) {
  if (auto st = require(config && inputs && stream_kind && units && out, "NULL argument");
      st != SL_OK)
    return st;
  return guarded([&] {
    sl::NetworkConfig cfg = config_from(config);
    sl::InputBatch batch = batch_from(inputs, config->input_dim, k);
    sl::UniformStream stream(sl::stream_kind_from_string(stream_kind), seed);
    sl::ForwardResult r =
        sl::forward_network(cfg, batch, stream, layer, {units, unit_count}, repeats);
    std::copy(r.values.begin(), r.values.end(), out);
    if (flagged) *flagged = r.flagged;
  });
}

sl_status sl_forward_conditional(const sl_net_config* config, const double* inputs, int k,
                                 const char* stream_kind, uint64_t seed, int layer,
                             size_t repeats, double* out, size_t* flagged) {
  if (auto st = require(config && inputs && stream_kind && out, "NULL argument");
      st != SL_OK)
    return st;
  return guarded([&] {
    sl::NetworkConfig cfg = config_from(config);
    sl::InputBatch batch = batch_from(inputs, config->input_dim, k);
    sl::UniformStream stream(sl::stream_kind_from_string(stream_kind), seed);
    sl::ForwardResult r = sl::forward_conditional(cfg, batch, stream, layer, repeats);
    std::copy(r.values.begin(), r.values.end(), out);
    if (flagged) *flagged = r.flagged;
  });
}

sl_status sl_sigma_recursion(double alpha, double sigma_w, double sigma_b, const double* x,
                             int input_dim, const char* activation, int depth,
                             size_t mc_samples, const char* stream_kind, uint64_t seed,
                             sl_recursion** out) {
  if (auto st = require(x && activation && stream_kind && out, "NULL argument");
      st != SL_OK)
    return st;
  return guarded([&] {
    sl::UniformStream stream(sl::stream_kind_from_string(stream_kind), seed);
    *out = new sl_recursion{sl::sigma_recursion(
        alpha, sigma_w, sigma_b, {x, static_cast<size_t>(input_dim)},
        sl::ActivationSpec::from_name(activation), depth, mc_samples, stream)};
  });
}

sl_status sl_gamma_recursion(double alpha, double sigma_w, double sigma_b,
                             const double* inputs, int input_dim, int k,
                             const char* activation, int depth, size_t mc_samples,
                             const char* stream_kind, uint64_t seed, sl_recursion** out) {
  if (auto st = require(inputs && activation && stream_kind && out, "NULL argument");
      st != SL_OK)
    return st;
  return guarded([&] {
    sl::UniformStream stream(sl::stream_kind_from_string(stream_kind), seed);
    *out = new sl_recursion{sl::gamma_recursion(
        alpha, sigma_w, sigma_b, batch_from(inputs, input_dim, k),
        sl::ActivationSpec::from_name(activation), depth, mc_samples, stream)};
  });
}

int sl_recursion_depth(const sl_recursion* rec) { return rec ? rec->impl.depth() : 0; }

int sl_recursion_is_multivariate(const sl_recursion* rec) {
  return rec && rec->impl.multivariate ? 1 : 0;
}

sl_status sl_recursion_sigma(const sl_recursion* rec, int layer, double* sigma,
                             double* stderr_acc) {
  if (auto st = require(rec && sigma, "NULL argument"); st != SL_OK) return st;
  return guarded([&] {
    if (layer < 1 || layer > rec->impl.depth())
      throw sl::error(sl::errc::shape, "layer out of range");
    const auto idx = static_cast<size_t>(layer - 1);
    if (rec->impl.multivariate)
      throw sl::error(sl::errc::shape, "recursion result is multivariate; query the measure");
    *sigma = rec->impl.sigmas[idx];
    if (stderr_acc) *stderr_acc = rec->impl.stderr_acc[idx];
  });
}

sl_status sl_recursion_measure(const sl_recursion* rec, int layer, sl_measure** out) {
  if (auto st = require(rec && out, "NULL argument"); st != SL_OK) return st;
  return guarded([&] {
    if (layer < 1 || layer > rec->impl.depth())
      throw sl::error(sl::errc::shape, "layer out of range");
    if (!rec->impl.multivariate)
      throw sl::error(sl::errc::shape, "recursion result is univariate; query sigma");
    *out = new sl_measure{rec->impl.measures[static_cast<size_t>(layer - 1)]};
  });
}

sl_status sl_recursion_to_json(const sl_recursion* rec, char** out) {
  if (auto st = require(rec && out, "NULL argument"); st != SL_OK) return st;
  return guarded([&] { *out = dup_string(sl::recursion_to_json(rec->impl)); });
}

void sl_recursion_free(sl_recursion* rec) { delete rec; }

sl_status sl_gaussian_recursion(double sigma_w2, double sigma_b2, const double* x,
                                const double* x_prime, int input_dim,
                                const char* activation, int depth, int quad_points,
                                double* out) {
  if (auto st = require(x && x_prime && activation && out, "NULL argument"); st != SL_OK)
    return st;
  return guarded([&] {
    auto layers = sl::gaussian_variance_recursion(
        sigma_w2, sigma_b2, {x, static_cast<size_t>(input_dim)},
        {x_prime, static_cast<size_t>(input_dim)}, sl::ActivationSpec::from_name(activation),
        depth, quad_points);
    for (size_t l = 0; l < layers.size(); ++l) {
      out[4 * l + 0] = layers[l].q_x;
      out[4 * l + 1] = layers[l].q_xp;
      out[4 * l + 2] = layers[l].c;
      out[4 * l + 3] = layers[l].rho;
    }
  });
}

sl_status sl_ks_stable(const double* xs, size_t n, double alpha, double sigma, double* out) {
  if (auto st = require(xs && out, "NULL argument"); st != SL_OK) return st;
  return guarded([&] {
    // cdf through the cached bulk path; the KS scan needs sorted evaluations
    std::vector<double> data(xs, xs + n);
    std::sort(data.begin(), data.end());
    std::vector<double> f = sl::stable_cdf_bulk(alpha, sigma, data);
    const double nn = static_cast<double>(n);
    double d = 0.0;
    for (size_t i = 0; i < n; ++i) {
      d = std::max(d, std::fabs((static_cast<double>(i) + 1.0) / nn - f[i]));
      d = std::max(d, std::fabs(f[i] - static_cast<double>(i) / nn));
    }
    *out = d;
  });
}

sl_status sl_ks_normal(const double* xs, size_t n, double mean, double sd, double* out) {
  if (auto st = require(xs && out, "NULL argument"); st != SL_OK) return st;
  return guarded([&] {
    if (!(sd > 0.0)) throw sl::error(sl::errc::domain, "sd must be positive");
    *out = sl::ks_distance({xs, n}, [&](double x) {
      return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0)));
    });
  });
}

sl_status sl_ks_two_sample(const double* a, size_t na, const double* b, size_t nb,
                           double* out) {
  if (auto st = require(a && b && out, "NULL argument"); st != SL_OK) return st;
  return guarded([&] { *out = sl::ks_two_sample({a, na}, {b, nb}); });
}

sl_status sl_ecf_distance_measure(const double* samples, size_t n, int dim,
                                  const sl_measure* measure, double alpha,
                                  const double* t_grid, size_t grid_points,
                                  double* per_point, double* out) {
  if (auto st = require(samples && measure && t_grid && out, "NULL argument"); st != SL_OK)
    return st;
  return guarded([&] {
    std::vector<double> pp;
    const double d = sl::ecf_distance(
        {samples, n * static_cast<size_t>(dim)}, dim,
        [&](std::span<const double> t) { return sl::multivariate_cf(measure->impl, alpha, t); },
        {t_grid, grid_points * static_cast<size_t>(dim)}, per_point ? &pp : nullptr);
    if (per_point) std::copy(pp.begin(), pp.end(), per_point);
    *out = d;
  });
}

sl_status sl_fit_stable_mle(const double* xs, size_t n, sl_fit_report* out) {
  if (auto st = require(xs && out, "NULL argument"); st != SL_OK) return st;
  return guarded([&] {
    sl::FitReport r = sl::fit_stable_mle({xs, n});
    out->alpha_hat = r.alpha_hat;
    out->sigma_hat = r.sigma_hat;
    out->log_likelihood = r.log_likelihood;
    out->iterations = r.iterations;
    out->converged = r.converged ? 1 : 0;
  });
}

sl_status sl_fit_gaussian(const double* xs, size_t n, double* mean, double* sd) {
  if (auto st = require(xs && mean && sd, "NULL argument"); st != SL_OK) return st;
  return guarded([&] {
    auto [m, s] = sl::fit_gaussian({xs, n});
    *mean = m;
    *sd = s;
  });
}

namespace {

sl_status pit_impl(const double* xs, size_t n, int bins, uint64_t* counts, double* chi2,
                   double* p_value, const std::function<std::vector<double>()>& eval) {
  return guarded([&] {
    std::vector<double> u = eval();
    sl::PitResult r = sl::pit_histogram(u, [](double v) { return v; }, bins);
    std::copy(r.counts.begin(), r.counts.end(), counts);
    if (chi2) *chi2 = r.chi_square;
    if (p_value) *p_value = r.p_value;
    (void)xs;
    (void)n;
  });
}

}  // namespace

sl_status sl_pit_stable(const double* xs, size_t n, double alpha, double sigma, int bins,
                        uint64_t* counts, double* chi2, double* p_value) {
  if (auto st = require(xs && counts, "NULL argument"); st != SL_OK) return st;
  return pit_impl(xs, n, bins, counts, chi2, p_value,
                  [&] { return sl::stable_cdf_bulk(alpha, sigma, {xs, n}); });
}

sl_status sl_pit_normal(const double* xs, size_t n, double mean, double sd, int bins,
                        uint64_t* counts, double* chi2, double* p_value) {
  if (auto st = require(xs && counts, "NULL argument"); st != SL_OK) return st;
  return pit_impl(xs, n, bins, counts, chi2, p_value, [&] {
    if (!(sd > 0.0)) throw sl::error(sl::errc::domain, "sd must be positive");
    std::vector<double> u(n);
    for (size_t i = 0; i < n; ++i)
      u[i] = 0.5 * std::erfc(-(xs[i] - mean) / (sd * std::sqrt(2.0)));
    return u;
  });
}

}  // extern "C"
