#include "stable_limits/detail/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "stable_limits/errors.hpp"

namespace stable_limits::detail {

namespace {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule,
// standard QUADPACK constants on [-1,1].
constexpr double xgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
  double value;
  double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double res_g = fc * wg[3];
  double res_k = fc * wgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * xgk[j];
    const double fsum = f(c - dx) + f(c + dx);
    res_k += wgk[j] * fsum;
    if (j % 2 == 1) res_g += wg[j / 2] * fsum;
  }
  res_k *= h;
  res_g *= h;
  return {res_k, std::fabs(res_k - res_g)};
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                double abs_tol, double rel_tol, int depth) {
  PanelResult r = gk15(f, a, b);
  if (r.error <= std::max(abs_tol, rel_tol * std::fabs(r.value))) return r.value;
  if (depth <= 0)
    throw error(errc::numeric,
                "adaptive quadrature failed to converge on [" + std::to_string(a) + ", " +
                    std::to_string(b) + "], error estimate " + std::to_string(r.error));
  // the tolerance stays fixed under bisection: for endpoint kinks like t^alpha
  // the panel error shrinks as width^(1+alpha), so a halving budget would lose
  // the race for small alpha
  const double m = 0.5 * (a + b);
  return adaptive(f, a, m, abs_tol, rel_tol, depth - 1) +
         adaptive(f, m, b, abs_tol, rel_tol, depth - 1);
}

}  // namespace

double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double abs_tol, double rel_tol, int max_depth) {
  if (a == b) return 0.0;
  return adaptive(f, a, b, abs_tol, rel_tol, max_depth);
}

namespace {

GaussHermite compute_gauss_hermite(int n) {
  // Newton iteration on H_n; nodes seeded layer-by-layer from the previous
  // root (Numerical Recipes scheme), computed in long double.
  GaussHermite gh;
  gh.nodes.resize(static_cast<std::size_t>(n));
  gh.weights.resize(static_cast<std::size_t>(n));
  const long double pim4 = 0.7511255444649424828587030047762276930510L;  // pi^{-1/4}
  const int m = (n + 1) / 2;
  long double z = 0.0L;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(static_cast<long double>(2 * n + 1)) -
          1.85575L * std::pow(static_cast<long double>(2 * n + 1), -0.16667L);
    } else if (i == 1) {
      z -= 1.14L * std::pow(static_cast<long double>(n), 0.426L) / z;
    } else if (i == 2) {
      z = 1.86L * z - 0.86L * gh.nodes[0];
    } else if (i == 3) {
      z = 1.91L * z - 0.91L * gh.nodes[1];
    } else {
      z = 2.0L * z - gh.nodes[static_cast<std::size_t>(i - 2)];
    }
    long double pp = 0.0L;
    for (int iter = 0; iter < 200; ++iter) {
      long double p1 = pim4;
      long double p2 = 0.0L;
      for (int j = 0; j < n; ++j) {
        long double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0L / (j + 1)) * p2 -
             std::sqrt(static_cast<long double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(static_cast<long double>(2 * n)) * p2;
      long double z1 = z;
      z = z1 - p1 / pp;
      if (std::fabs(static_cast<double>(z - z1)) <
          1e-17L * std::max(1.0L, std::fabs(z)))
        break;
    }
    gh.nodes[static_cast<std::size_t>(i)] = static_cast<double>(z);
    gh.nodes[static_cast<std::size_t>(n - 1 - i)] = -static_cast<double>(z);
    const double w = static_cast<double>(2.0L / (pp * pp));
    gh.weights[static_cast<std::size_t>(i)] = w;
    gh.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  // NR iterates from the largest root down; store ascending.
  std::vector<double> nodes(gh.nodes.rbegin(), gh.nodes.rend());
  std::vector<double> weights(gh.weights.rbegin(), gh.weights.rend());
  gh.nodes = std::move(nodes);
  gh.weights = std::move(weights);
  return gh;
}

}  // namespace

const GaussHermite& gauss_hermite(int n) {
  if (n < 1 || n > 192) throw error(errc::domain, "gauss_hermite order must be in [1,192]");
  static std::mutex mu;
  static std::map<int, GaussHermite> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_hermite(n)).first;
  return it->second;
}

}  // namespace stable_limits::detail
