#ifndef STABLE_LIMITS_DETAIL_SPECIAL_HPP
#define STABLE_LIMITS_DETAIL_SPECIAL_HPP

namespace stable_limits::detail {

// Standard normal CDF via erfc.
double normal_cdf(double z);
double normal_cdf(double x, double mean, double sd);

// Regularized incomplete gamma P(a,x) and Q(a,x) = 1 - P(a,x).
// Series for x < a+1, Lentz continued fraction otherwise.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Survival function of the chi-square distribution with df degrees of freedom.
double chi_square_sf(double x, double df);

}  // namespace stable_limits::detail

#endif
