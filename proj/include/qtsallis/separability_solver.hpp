#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "qtsallis/entropic_index.hpp"
#include "qtsallis/errors.hpp"
#include "qtsallis/quantum_state.hpp"
#include "qtsallis/werner_family.hpp"

namespace qtsallis {

/// Sign of the Werner-family conditional entropy S_q(first n-k | last k),
/// decided in the log domain: for q > 1 the entropy is positive iff
/// ln Tr rho_marginal^q > ln Tr rho_joint^q, for q < 1 iff the reverse holds.
/// Differences below 1e-14 in magnitude report 0.
inline int entropy_sign(const WernerParams& p, unsigned conditioned, EntropicIndex q) {
  constexpr double kTie = 1e-14;
  const Spectrum joint = joint_spectrum(p);
  const Spectrum marginal = marginal_spectrum(p, conditioned);
  double diff;
  if (q.is_limit_point()) {
    diff = von_neumann_entropy(joint) - von_neumann_entropy(marginal);
  } else {
    diff = q_trace(marginal, q) - q_trace(joint, q);
    if (q.value() < 1.0) diff = -diff;
  }
  if (std::abs(diff) < kTie) return 0;
  return diff > 0.0 ? 1 : -1;
}

inline int entropy_sign(const WernerParams& p, EntropicIndex q) {
  return entropy_sign(p, p.parties - 1, q);
}

/// Boundary point x*(q) where the conditional entropy first vanishes.
struct ThresholdPoint {
  EntropicIndex q{1.0};
  /// Empty when no sign change was found on the scan grid.
  std::optional<double> x_star;
  /// Width of the final bisection interval; x_star is its midpoint.
  double bracket_width = 0.0;
  /// Number of sign changes seen on the scan grid; 1 means the root is unique
  /// at grid resolution.
  int sign_changes = 0;

  [[nodiscard]] bool converged() const noexcept { return x_star.has_value() && bracket_width <= 1e-12; }
};

struct ThresholdOptions {
  std::size_t grid_points = 1024;
  double bracket_tolerance = 1e-12;
};

/// Scans x over a uniform grid on [0, 1] for the first sign change of
/// entropy_sign, then bisects that cell. A zero sign at any probe is taken as
/// an exact hit.
inline ThresholdPoint threshold_for_q(unsigned levels, unsigned parties, unsigned conditioned, EntropicIndex q,
                                      ThresholdOptions opts = {}) {
  if (opts.grid_points < 2) throw ValidationError("threshold scan needs at least 2 grid points");
  WernerParams base(levels, parties, 0.0);
  if (conditioned < 1 || conditioned >= parties)
    throw ValidationError("conditioned party count must lie in [1, n-1]");
  auto sign_at = [&](double x) { return entropy_sign(WernerParams(levels, parties, x), conditioned, q); };

  ThresholdPoint out;
  out.q = q;
  const double step_den = static_cast<double>(opts.grid_points - 1);
  std::optional<std::pair<double, double>> bracket;
  int prev = sign_at(0.0);
  if (prev == 0) {
    out.x_star = 0.0;
  }
  for (std::size_t i = 1; i < opts.grid_points; ++i) {
    const double x = static_cast<double>(i) / step_den;
    const int s = sign_at(x);
    if (s != 0 && prev != 0 && s != prev) {
      ++out.sign_changes;
      if (!bracket && !out.x_star) bracket = {static_cast<double>(i - 1) / step_den, x};
    } else if (s == 0 && prev != 0) {
      ++out.sign_changes;
      if (!bracket && !out.x_star) out.x_star = x;
    }
    if (s != 0) prev = s;
  }
  if (out.x_star || !bracket) return out;

  auto [lo, hi] = *bracket;
  const int sign_lo = sign_at(lo);
  while (hi - lo > opts.bracket_tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const int s = sign_at(mid);
    if (s == 0) {
      out.x_star = mid;
      out.bracket_width = 0.0;
      return out;
    }
    (s == sign_lo ? lo : hi) = mid;
  }
  out.x_star = 0.5 * (lo + hi);
  out.bracket_width = hi - lo;
  return out;
}

/// Threshold of S_q(A_1 | A_2, ..., A_n).
inline ThresholdPoint threshold_for_q(unsigned levels, unsigned parties, EntropicIndex q,
                                      ThresholdOptions opts = {}) {
  return threshold_for_q(levels, parties, parties - 1, q, opts);
}

/// Boundary points of one (N, n) family across increasing q.
struct ThresholdCurve {
  unsigned levels = 0;
  unsigned parties = 0;
  std::vector<ThresholdPoint> points;

  /// First adjacent pair (by index) whose x* increases by more than `tol`.
  [[nodiscard]] std::optional<std::pair<std::size_t, std::size_t>> monotonicity_violation(double tol = 1e-9) const {
    std::optional<std::size_t> last;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (!points[i].x_star) continue;
      if (last && *points[i].x_star > *points[*last].x_star + tol) return std::pair{*last, i};
      last = i;
    }
    return std::nullopt;
  }
};

/// Raised when x*(q) increases somewhere along a curve. Carries the full curve
/// and the offending pair of point indices.
class MonotonicityError : public NumericalError {
public:
  MonotonicityError(ThresholdCurve curve, std::size_t first, std::size_t second)
      : NumericalError(describe(curve, first, second)), curve_(std::move(curve)), pair_{first, second} {}

  [[nodiscard]] const ThresholdCurve& curve() const noexcept { return curve_; }
  [[nodiscard]] std::pair<std::size_t, std::size_t> offending_pair() const noexcept { return pair_; }

private:
  static std::string describe(const ThresholdCurve& c, std::size_t i, std::size_t j) {
    std::ostringstream os;
    os.precision(17);
    os << "threshold increases with q: x*(" << c.points[i].q.value() << ") = " << *c.points[i].x_star << " < x*("
       << c.points[j].q.value() << ") = " << *c.points[j].x_star;
    return os.str();
  }

  ThresholdCurve curve_;
  std::pair<std::size_t, std::size_t> pair_;
};

/// threshold_for_q at every grid point, then a monotonicity check; the check
/// reports violations via MonotonicityError and never alters the points.
inline ThresholdCurve threshold_curve(unsigned levels, unsigned parties, std::span<const EntropicIndex> q_grid,
                                      ThresholdOptions opts = {}) {
  for (std::size_t i = 1; i < q_grid.size(); ++i)
    if (!(q_grid[i].value() > q_grid[i - 1].value()))
      throw ValidationError("q grid must be strictly increasing");
  ThresholdCurve curve{levels, parties, {}};
  curve.points.reserve(q_grid.size());
  for (const auto& q : q_grid) curve.points.push_back(threshold_for_q(levels, parties, q, opts));
  if (auto bad = curve.monotonicity_violation()) throw MonotonicityError(std::move(curve), bad->first, bad->second);
  return curve;
}

/// x where the largest joint eigenvalue (1 + (N^n - 1) x)/N^n meets the largest
/// eigenvalue of the k-party marginal (1 + (N^{k-1} - 1) x)/N^k. As q grows the
/// q-traces are dominated by these levels, so this is the q -> infinity zero of
/// the conditional entropy given k parties.
///
/// Multiplying through by N^n gives
///   x = (N^{n-k} - 1) / (N^n - 1 - N^{n-1} + N^{n-k}),
/// evaluated here as an exact reduced integer fraction.
inline double asymptotic_threshold_block(unsigned levels, unsigned parties, unsigned conditioned) {
  WernerParams check(levels, parties, 0.0);
  if (conditioned < 1 || conditioned >= parties)
    throw ValidationError("conditioned party count must lie in [1, n-1]");
  const std::uint64_t full = checked_pow(levels, parties);
  const std::uint64_t all_but_one = checked_pow(levels, parties - 1);
  const std::uint64_t ratio = checked_pow(levels, parties - conditioned);
  std::uint64_t num = ratio - 1;
  std::uint64_t den = full - 1 - all_but_one + ratio;
  const std::uint64_t g = std::gcd(num, den);
  num /= g;
  den /= g;
  return static_cast<double>(num) / static_cast<double>(den);
}

/// q -> infinity separability threshold of S_q(A_1 | A_2, ..., A_n). With
/// k = n - 1 the fraction above reduces to (N - 1) / ((N - 1)(N^{n-1} + 1)),
/// i.e. 1 / (1 + N^{n-1}).
inline double asymptotic_threshold(unsigned levels, unsigned parties) {
  return asymptotic_threshold_block(levels, parties, parties - 1);
}

} // namespace qtsallis
