// Prints the predicted crossing probability X(x) for three apex angles,
// showing where the equilateral identity X = x breaks.

#include <cstdio>
#include <numbers>

#include "cardylab/cardy.hpp"

int main() {
  const double angles[] = {std::numbers::pi / 3.0, std::numbers::pi / 4.0,
                           cardylab::apex_angle(2.0)};
  std::printf("%6s %12s %12s %12s\n", "x", "equilateral", "diagonal", "k=2");
  for (int i = 1; i <= 9; ++i) {
    const double x = i / 10.0;
    std::printf("%6.2f", x);
    for (const double kappa : angles) {
      std::printf(" %12.8f", cardylab::cardy_prediction(x, kappa).X);
    }
    std::printf("\n");
  }
  return 0;
}
