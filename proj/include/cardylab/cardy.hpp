#pragma once

// Conformal crossing prediction for isosceles triangles.
//
// The Schwarz-Christoffel map from the upper half-plane to an isosceles
// triangle with base angle kappa restricts, on the base, to the regularized
// incomplete beta I_w(a, a) with a = kappa/pi. Composing the inverse map of
// the simulated triangle with the forward map of the unit equilateral
// triangle (a = 1/3) turns a base position x into the predicted limit X of
// the crossing probability. For kappa = pi/3 the composition is the
// identity; for any other kappa it deviates on all of (0, 1) except x = 1/2.

#include <cmath>
#include <numbers>

#include "cardylab/beta.hpp"
#include "cardylab/errors.hpp"
#include "cardylab/lattice.hpp"

namespace cardylab {

inline constexpr double kEquilateralExponent = 1.0 / 3.0;

struct TriangleMapParams {
  double kappa = std::numbers::pi / 3.0;  // base angle of the image triangle
  double a = 1.0 / 3.0;                   // beta exponent kappa/pi
  double norm = 0.0;                      // 1 / B(a, a)
};

inline TriangleMapParams triangle_map_params(double kappa) {
  if (!(kappa > 0.0 && kappa <= std::numbers::pi / 2.0)) {
    throw precondition_error("triangle_map_params: kappa must lie in (0, pi/2]");
  }
  const double a = kappa / std::numbers::pi;
  return {kappa, a, std::exp(-log_beta(a, a))};
}

// Base angle of the standard isosceles triangle of the k-stretched lattice:
// arctan(2 h(k)) = arctan(sqrt(4 k^2 - 1)). Equals pi/3 at k = 1 and pi/4 at
// k = 1/sqrt(2); increases strictly with k.
inline double apex_angle(double k) {
  return std::atan(2.0 * unit_row_height(k));
}

struct CardyPrediction {
  double x = 0.0;      // base position in (0, 1)
  double kappa = 0.0;  // base angle of the simulated triangle
  double w = 0.0;      // half-plane preimage of x
  double X = 0.0;      // predicted limit crossing probability
};

inline CardyPrediction cardy_prediction(double x, double kappa) {
  if (!(x > 0.0 && x < 1.0)) {
    throw precondition_error("cardy_prediction: x must lie in (0, 1)");
  }
  const auto params = triangle_map_params(kappa);
  const double w = inv_reg_inc_beta(x, params.a);
  const double X = reg_inc_beta(w, kEquilateralExponent);
  return {x, kappa, w, X};
}

// Ratio of the two base densities, A1 w^(a - 1/3) (1 - w)^(a - 1/3) / A2.
// Identically 1 iff kappa = pi/3; otherwise it varies in w, which is what
// rules the prediction out as an identity for the stretched lattices.
inline double cardy_residual(double w, double kappa) {
  if (!(w > 0.0 && w < 1.0)) {
    throw precondition_error("cardy_residual: w must lie in (0, 1)");
  }
  const auto params = triangle_map_params(kappa);
  const double a2 = std::exp(-log_beta(kEquilateralExponent, kEquilateralExponent));
  return params.norm / a2 *
         std::pow(w * (1.0 - w), params.a - kEquilateralExponent);
}

}  // namespace cardylab
