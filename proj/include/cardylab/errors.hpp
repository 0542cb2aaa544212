#pragma once

#include <stdexcept>

namespace cardylab {

// Violated caller contract: mismatched coupling pair, degenerate domain,
// mesh too coarse to discretize, and similar. CLI maps this to exit code 3.
struct precondition_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Bad experiment configuration: unknown keys, out-of-range values,
// unsupported family/experiment combinations. CLI maps this to exit code 2.
struct config_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace cardylab
