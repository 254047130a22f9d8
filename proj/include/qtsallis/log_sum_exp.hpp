#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace qtsallis::numeric {

// ln(sum_i exp(args[i])), max-shifted so that neither overflow nor underflow
// of the individual terms can occur. Empty input gives -inf (log of zero).
inline double log_sum_exp(std::span<const double> args) {
  if (args.empty()) return -std::numeric_limits<double>::infinity();
  const double max_arg = *std::max_element(args.begin(), args.end());
  if (std::isinf(max_arg)) return max_arg;
  double sum = 0.0;
  for (double a : args) sum += std::exp(a - max_arg);
  return max_arg + std::log(sum);
}

} // namespace qtsallis::numeric
