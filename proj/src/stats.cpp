#include "stable_limits/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "stable_limits/detail/special.hpp"
#include "stable_limits/errors.hpp"
#include "stable_limits/parallel.hpp"
#include "stable_limits/stable.hpp"

namespace stable_limits {

namespace {

std::vector<double> sorted_copy(std::span<const double> xs) {
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  return v;
}

// Monotone cubic Hermite table on a uniform grid (Fritsch-Butland slopes).
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(double x0, double h, std::vector<double> y) : x0_(x0), h_(h), y_(std::move(y)) {
    const std::size_t n = y_.size();
    slopes_.resize(n);
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y_[i + 1] - y_[i]) / h_;
    slopes_[0] = d[0];
    slopes_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (d[i - 1] * d[i] <= 0.0)
        slopes_[i] = 0.0;
      else
        slopes_[i] = 2.0 * d[i - 1] * d[i] / (d[i - 1] + d[i]);
    }
  }

  double operator()(double x) const {
    const double t = (x - x0_) / h_;
    std::size_t i = static_cast<std::size_t>(std::max(0.0, std::floor(t)));
    if (i + 1 >= y_.size()) i = y_.size() - 2;
    const double u = t - static_cast<double>(i);
    const double u2 = u * u;
    const double u3 = u2 * u;
    const double h00 = 2 * u3 - 3 * u2 + 1;
    const double h10 = u3 - 2 * u2 + u;
    const double h01 = -2 * u3 + 3 * u2;
    const double h11 = u3 - u2;
    return h00 * y_[i] + h10 * h_ * slopes_[i] + h01 * y_[i + 1] + h11 * h_ * slopes_[i + 1];
  }

  double x_max() const { return x0_ + h_ * static_cast<double>(y_.size() - 1); }

 private:
  double x0_ = 0.0;
  double h_ = 1.0;
  std::vector<double> y_;
  std::vector<double> slopes_;
};

// Standardized St(alpha, 1) evaluator on v = asinh(u), u = |x|. alpha = 1 and
// alpha = 2 have closed forms and bypass the tables.
class StdStableGrid {
 public:
  StdStableGrid(double alpha, double umax, bool want_cdf) : alpha_(alpha) {
    exact_ = (alpha_ == 1.0 || alpha_ == 2.0);
    if (exact_) return;
    umax_ = std::max(umax * 1.3, 12.0);
    vmax_ = std::asinh(umax_);
    const std::size_t n = std::max<std::size_t>(320, static_cast<std::size_t>(vmax_ * 80.0));
    const double h = vmax_ / static_cast<double>(n - 1);
    std::vector<double> logf(n);
    std::vector<double> upper;
    if (want_cdf) upper.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = std::sinh(h * static_cast<double>(i));
      logf[i] = std::log(stable_pdf(p, u));
      if (want_cdf) upper[i] = stable_cdf(p, u);
    }
    log_pdf_tab_ = MonotoneCubic(0.0, h, std::move(logf));
    if (want_cdf) cdf_tab_ = MonotoneCubic(0.0, h, std::move(upper));
    has_cdf_ = want_cdf;
  }

  double alpha() const { return alpha_; }
  double umax() const { return exact_ ? std::numeric_limits<double>::infinity() : umax_; }

  // log density at u = |x| >= 0
  double log_pdf(double u) const {
    if (exact_) return std::log(stable_pdf(StableParams{alpha_, 1.0}, u));
    if (u >= umax_) return std::log(stable_pdf(StableParams{alpha_, 1.0}, u));
    return log_pdf_tab_(std::asinh(u));
  }

  // F(u) for u >= 0 (upper half by symmetry)
  double cdf(double u) const {
    if (exact_ || !has_cdf_ || u >= umax_) return stable_cdf(StableParams{alpha_, 1.0}, u);
    return std::min(cdf_tab_(std::asinh(u)), 1.0);
  }

 private:
  double alpha_;
  double umax_ = 0.0;
  double vmax_ = 0.0;
  bool exact_ = false;
  bool has_cdf_ = false;
  MonotoneCubic log_pdf_tab_;
  MonotoneCubic cdf_tab_;
};

double max_abs(std::span<const double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::fabs(x));
  return m;
}

// Chunked deterministic reduction: per-chunk pairwise sums combined pairwise,
// independent of the worker count.
double parallel_pairwise(std::size_t n, const std::function<double(std::size_t)>& term) {
  const std::size_t chunks = (n + kParallelChunk - 1) / kParallelChunk;
  std::vector<double> partial(chunks, 0.0);
  parallel_for_chunks(n, [&](std::size_t begin, std::size_t end) {
    partial[begin / kParallelChunk] =
        pairwise_sum(end - begin, [&](std::size_t i) { return term(begin + i); });
  });
  return pairwise_sum(chunks, [&](std::size_t c) { return partial[c]; });
}

}  // namespace

double ks_distance(std::span<const double> samples,
                   const std::function<double(double)>& cdf) {
  if (samples.empty()) throw error(errc::empty_input, "ks_distance: empty sample");
  std::vector<double> xs = sorted_copy(samples);
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, std::fabs((static_cast<double>(i) + 1.0) / n - f));
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
  }
  return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw error(errc::empty_input, "ks_two_sample: empty sample");
  std::vector<double> xa = sorted_copy(a);
  std::vector<double> xb = sorted_copy(b);
  const double na = static_cast<double>(xa.size());
  const double nb = static_cast<double>(xb.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < xa.size() && j < xb.size()) {
    const double x = std::min(xa[i], xb[j]);
    while (i < xa.size() && xa[i] <= x) ++i;
    while (j < xb.size() && xb[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ecf_distance(std::span<const double> samples, int dim,
                    const std::function<double(std::span<const double>)>& target_cf,
                    std::span<const double> t_grid, std::vector<double>* per_point) {
  if (dim < 1) throw error(errc::shape, "ecf_distance: dim must be >= 1");
  if (samples.empty()) throw error(errc::empty_input, "ecf_distance: empty sample");
  if (t_grid.empty()) throw error(errc::empty_input, "ecf_distance: empty grid");
  const std::size_t k = static_cast<std::size_t>(dim);
  if (samples.size() % k != 0 || t_grid.size() % k != 0)
    throw error(errc::shape, "ecf_distance: arrays are not multiples of dim");
  const std::size_t n = samples.size() / k;
  const std::size_t m = t_grid.size() / k;
  if (per_point) per_point->assign(m, 0.0);
  double worst = 0.0;
  for (std::size_t g = 0; g < m; ++g) {
    std::span<const double> t = t_grid.subspan(g * k, k);
    const double ecf = parallel_pairwise(n, [&](std::size_t i) {
                         const double* x = samples.data() + i * k;
                         double dot = 0.0;
                         for (std::size_t c = 0; c < k; ++c) dot += t[c] * x[c];
                         return std::cos(dot);
                       }) /
                       static_cast<double>(n);
    const double err = std::fabs(ecf - target_cf(t));
    if (per_point) (*per_point)[g] = err;
    worst = std::max(worst, err);
  }
  return worst;
}

namespace {

struct NmPoint {
  double a;  // logit-mapped alpha
  double s;  // log sigma
  double f;
};

double alpha_from(double a) { return 0.5 + 1.5 / (1.0 + std::exp(-a)); }
double logit_alpha(double alpha) {
  const double p = (alpha - 0.5) / 1.5;
  return std::log(p / (1.0 - p));
}

class StableNll {
 public:
  explicit StableNll(std::span<const double> data) : data_(data), max_abs_(max_abs(data)) {}

  double operator()(double a, double s) {
    const double alpha = alpha_from(a);
    const double sigma = std::exp(s);
    const double need = max_abs_ / sigma;
    if (!grid_ || grid_->alpha() != alpha || need >= grid_->umax())
      grid_.emplace(alpha, need, false);
    const double log_sigma = s;
    const double ll = parallel_pairwise(data_.size(), [&](std::size_t i) {
      return grid_->log_pdf(std::fabs(data_[i]) / sigma);
    });
    ++evals_;
    return -(ll - static_cast<double>(data_.size()) * log_sigma);
  }

  int evals() const { return evals_; }

 private:
  std::span<const double> data_;
  double max_abs_;
  std::optional<StdStableGrid> grid_;
  int evals_ = 0;
};

// Standard Nelder-Mead on (a, s); returns best point and whether the simplex
// collapsed before the iteration cap.
std::pair<NmPoint, bool> nelder_mead(StableNll& nll, double a0, double s0, int max_iter) {
  std::array<NmPoint, 3> sx;
  sx[0] = {a0, s0, nll(a0, s0)};
  sx[1] = {a0 + 0.4, s0, nll(a0 + 0.4, s0)};
  sx[2] = {a0, s0 + 0.3, nll(a0, s0 + 0.3)};
  auto order = [&] { std::sort(sx.begin(), sx.end(), [](auto& p, auto& q) { return p.f < q.f; }); };
  order();
  for (int it = 0; it < max_iter; ++it) {
    const double spread_a = std::max(std::fabs(sx[0].a - sx[1].a), std::fabs(sx[0].a - sx[2].a));
    const double spread_s = std::max(std::fabs(sx[0].s - sx[1].s), std::fabs(sx[0].s - sx[2].s));
    const double spread_f = sx[2].f - sx[0].f;
    if ((spread_a < 1e-6 && spread_s < 1e-6) ||
        spread_f < 1e-9 * (1.0 + std::fabs(sx[0].f)))
      return {sx[0], true};
    const double ca = 0.5 * (sx[0].a + sx[1].a);
    const double cs = 0.5 * (sx[0].s + sx[1].s);
    const double ra = ca + (ca - sx[2].a);
    const double rs = cs + (cs - sx[2].s);
    const double fr = nll(ra, rs);
    if (fr < sx[0].f) {
      const double ea = ca + 2.0 * (ca - sx[2].a);
      const double es = cs + 2.0 * (cs - sx[2].s);
      const double fe = nll(ea, es);
      sx[2] = fe < fr ? NmPoint{ea, es, fe} : NmPoint{ra, rs, fr};
    } else if (fr < sx[1].f) {
      sx[2] = {ra, rs, fr};
    } else {
      const double ka = ca + 0.5 * ((fr < sx[2].f ? ra : sx[2].a) - ca);
      const double ks = cs + 0.5 * ((fr < sx[2].f ? rs : sx[2].s) - cs);
      const double fk = nll(ka, ks);
      if (fk < std::min(fr, sx[2].f)) {
        sx[2] = {ka, ks, fk};
      } else {  // shrink toward the best vertex
        for (int v = 1; v < 3; ++v) {
          sx[v].a = sx[0].a + 0.5 * (sx[v].a - sx[0].a);
          sx[v].s = sx[0].s + 0.5 * (sx[v].s - sx[0].s);
          sx[v].f = nll(sx[v].a, sx[v].s);
        }
      }
    }
    order();
  }
  return {sx[0], false};
}

}  // namespace

FitReport fit_stable_mle(std::span<const double> data) {
  if (data.size() < 100)
    throw error(errc::domain, "fit_stable_mle needs at least 100 data points, got " +
                                  std::to_string(data.size()));
  for (double x : data)
    if (!std::isfinite(x)) throw error(errc::domain, "fit_stable_mle requires finite data");
  const double first = data.front();
  bool constant = true;
  for (double x : data)
    if (x != first) {
      constant = false;
      break;
    }
  if (constant) throw error(errc::degenerate_data, "fit_stable_mle: constant data");

  StableNll nll(data);
  NmPoint best{0.0, 0.0, std::numeric_limits<double>::infinity()};
  bool best_conv = false;
  for (double alpha0 : {0.8, 1.3, 1.8}) {
    double sigma0;
    try {
      sigma0 = estimate_scale(data, alpha0);
    } catch (const error&) {
      sigma0 = 1.0;
    }
    auto [pt, conv] = nelder_mead(nll, logit_alpha(alpha0), std::log(sigma0), 300);
    if (pt.f < best.f) {
      best = pt;
      best_conv = conv;
    }
  }
  FitReport report;
  report.alpha_hat = std::min(alpha_from(best.a), 2.0);
  report.sigma_hat = std::exp(best.s);
  report.log_likelihood = -best.f;
  report.iterations = nll.evals();
  report.converged = best_conv;
  return report;
}

std::pair<double, double> fit_gaussian(std::span<const double> data) {
  if (data.size() < 2) throw error(errc::empty_input, "fit_gaussian needs at least 2 points");
  double mean = 0.0;
  for (double x : data) mean += x;
  mean /= static_cast<double>(data.size());
  double ss = 0.0;
  for (double x : data) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(data.size() - 1));
  if (!(sd > 0.0)) throw error(errc::degenerate_data, "fit_gaussian: degenerate (constant) data");
  return {mean, sd};
}

PitResult pit_histogram(std::span<const double> data,
                        const std::function<double(double)>& cdf, int bins) {
  if (data.empty()) throw error(errc::empty_input, "pit_histogram: empty data");
  if (bins < 2) throw error(errc::domain, "pit_histogram: bins must be >= 2");
  PitResult out;
  out.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double x : data) {
    double u = cdf(x);
    u = std::min(std::max(u, 0.0), 1.0);
    auto b = static_cast<std::size_t>(std::min(u * bins, static_cast<double>(bins) - 0.5));
    ++out.counts[b];
  }
  const double expected = static_cast<double>(data.size()) / bins;
  double chi2 = 0.0;
  for (auto c : out.counts) {
    const double d = static_cast<double>(c) - expected;
    chi2 += d * d / expected;
  }
  out.chi_square = chi2;
  out.p_value = detail::chi_square_sf(chi2, static_cast<double>(bins - 1));
  return out;
}

std::vector<double> stable_cdf_bulk(double alpha, double sigma,
                                    std::span<const double> xs) {
  StableParams p{alpha, sigma};
  p.validate();
  if (alpha <= 0.5)
    throw error(errc::unsupported_range, "stable_cdf_bulk supports alpha > 0.5 only");
  StdStableGrid grid(alpha, max_abs(xs) / sigma, true);
  std::vector<double> out(xs.size());
  parallel_for_chunks(xs.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double u = std::fabs(xs[i]) / sigma;
      const double upper = grid.cdf(u);
      out[i] = xs[i] >= 0.0 ? upper : 1.0 - upper;
    }
  });
  return out;
}

}  // namespace stable_limits
