#pragma once

#include <vector>

namespace practice {

/// Linear interpolation between order statistics (R type 7). `p` in [0, 1].
/// Returns 0 for an empty sample.
double quantile(std::vector<double> values, double p);

}  // namespace practice
