#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "cardylab/errors.hpp"

namespace cardylab {

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

// Wilson score interval for a binomial proportion. Default z is the
// two-sided 95% normal quantile.
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t n,
                                double z = 1.959963984540054) {
  if (n == 0) throw precondition_error("wilson_interval: n must be positive");
  if (successes > n) throw precondition_error("wilson_interval: successes exceed n");
  const double nn = static_cast<double>(n);
  const double p_hat = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p_hat + z2 / (2.0 * nn)) / denom;
  const double half =
      z * std::sqrt(p_hat * (1.0 - p_hat) / nn + z2 / (4.0 * nn * nn)) / denom;
  // At the boundary counts the limits are exact; rounding must not leave a
  // sliver above 0 or below 1.
  const double low = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double high = successes == n ? 1.0 : std::min(1.0, center + half);
  return {low, high};
}

}  // namespace cardylab
