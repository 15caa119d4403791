#ifndef STABLE_LIMITS_DETAIL_QUADRATURE_HPP
#define STABLE_LIMITS_DETAIL_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace stable_limits::detail {

// Adaptive Gauss-Kronrod (7,15) on [a,b]; bisects until the K15-G7 error
// estimate drops below max(abs_tol, rel_tol*|result|) or depth is exhausted.
// Throws errc::numeric on non-convergence.
double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double abs_tol, double rel_tol, int max_depth = 48);

struct GaussHermite {
  std::vector<double> nodes;    // roots of the physicists' Hermite polynomial
  std::vector<double> weights;  // sum(weights) = sqrt(pi)
};

// Nodes/weights for integral_{-inf}^{inf} e^{-t^2} f(t) dt; n up to 192
// (the Newton seeding scheme loses roots beyond that).
// E[g(Z)] for Z ~ N(0,1) is sum_i w_i g(sqrt(2) t_i) / sqrt(pi).
const GaussHermite& gauss_hermite(int n);

}  // namespace stable_limits::detail

#endif
