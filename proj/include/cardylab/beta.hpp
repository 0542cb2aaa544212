#pragma once

// Symmetric regularized incomplete beta function I_w(a, a) and its inverse.
//
// Forward evaluation uses the standard continued fraction with modified
// Lentz iteration (Numerical Recipes section 6.4); for a = b the switchover
// point to the reflected expansion is exactly w = 1/2. Inversion is a
// bracketed, safeguarded Newton iteration using the closed-form derivative
// w^(a-1) (1-w)^(a-1) / B(a, a).

#include <cmath>
#include <stdexcept>

#include "cardylab/errors.hpp"

namespace cardylab {

// log B(a, b) via lgamma.
inline double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace detail {

inline double beta_cf(double a, double b, double x) {
  constexpr int max_iter = 500;
  constexpr double eps = 3e-16;
  constexpr double fpmin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < fpmin) d = fpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) return h;
  }
  throw std::runtime_error("beta_cf: continued fraction did not converge");
}

}  // namespace detail

// I_w(a, a) for w in [0, 1], a > 0.
inline double reg_inc_beta(double w, double a) {
  if (!(a > 0.0)) throw precondition_error("reg_inc_beta: exponent a must be positive");
  if (!(w >= 0.0 && w <= 1.0)) {
    throw precondition_error("reg_inc_beta: argument w must lie in [0, 1]");
  }
  if (w == 0.0) return 0.0;
  if (w == 1.0) return 1.0;
  if (w > 0.5) return 1.0 - reg_inc_beta(1.0 - w, a);
  const double log_bt = a * (std::log(w) + std::log1p(-w)) - log_beta(a, a);
  return std::exp(log_bt) * detail::beta_cf(a, a, w) / a;
}

// Density of the symmetric beta: w^(a-1) (1-w)^(a-1) / B(a, a).
inline double beta_density(double w, double a) {
  if (!(a > 0.0)) throw precondition_error("beta_density: exponent a must be positive");
  if (w <= 0.0 || w >= 1.0) {
    // The a < 1 case diverges at the endpoints; callers never evaluate there.
    throw precondition_error("beta_density: argument w must lie in (0, 1)");
  }
  return std::exp((a - 1.0) * (std::log(w) + std::log1p(-w)) - log_beta(a, a));
}

// Unique w in (0, 1) with reg_inc_beta(w, a) = x.
inline double inv_reg_inc_beta(double x, double a) {
  if (!(a > 0.0)) throw precondition_error("inv_reg_inc_beta: exponent a must be positive");
  if (!(x > 0.0 && x < 1.0)) {
    throw precondition_error("inv_reg_inc_beta: target x must lie in (0, 1)");
  }
  if (x > 0.5) return 1.0 - inv_reg_inc_beta(1.0 - x, a);

  // x <= 1/2, hence w <= 1/2. Seed from the small-w expansion
  // I_w ~ w^a / (a B(a, a)) when the target is near the endpoint.
  double lo = 0.0;
  double hi = 0.5;
  double w = x;
  if (x < 0.05) {
    const double guess = std::exp((std::log(x * a) + log_beta(a, a)) / a);
    if (guess > 0.0 && guess < 0.5) w = guess;
  }
  if (w <= lo || w >= hi) w = 0.25;

  double f = reg_inc_beta(w, a) - x;
  for (int iter = 0; iter < 200; ++iter) {
    if (std::fabs(f) < 1e-14) break;
    if (f > 0.0) hi = w; else lo = w;
    const double step = f / beta_density(w, a);
    double next = w - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == w) break;
    w = next;
    f = reg_inc_beta(w, a) - x;
    if (hi - lo < 1e-17) break;
  }
  return w;
}

}  // namespace cardylab
