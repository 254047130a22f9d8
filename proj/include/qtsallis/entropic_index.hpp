#pragma once

#include <cmath>
#include <string>

#include "qtsallis/errors.hpp"

namespace qtsallis {

/// Positive entropic index q. Values within `kLimitTolerance` of 1 route to
/// the Shannon / von Neumann formulas instead of the 0/0 Tsallis form.
class EntropicIndex {
public:
  static constexpr double kLimitTolerance = 1e-9;

  explicit EntropicIndex(double q) : q_(q) {
    if (!(q > 0.0) || !std::isfinite(q))
      throw ValidationError("entropic index must be a finite positive real, got " + std::to_string(q));
  }

  [[nodiscard]] double value() const noexcept { return q_; }
  [[nodiscard]] bool is_limit_point() const noexcept { return std::abs(q_ - 1.0) <= kLimitTolerance; }
  /// 1 - q, the coefficient of the nonadditive cross term.
  [[nodiscard]] double one_minus_q() const noexcept { return 1.0 - q_; }

  friend bool operator==(const EntropicIndex&, const EntropicIndex&) = default;
  friend auto operator<=>(const EntropicIndex& a, const EntropicIndex& b) { return a.q_ <=> b.q_; }

private:
  double q_;
};

} // namespace qtsallis
