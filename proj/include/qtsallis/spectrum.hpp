#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "qtsallis/errors.hpp"

namespace qtsallis {

/// One eigenvalue together with how many times it occurs.
struct SpectralLevel {
  double eigenvalue = 0.0;
  std::uint64_t multiplicity = 0;
  /// ln(multiplicity), kept alongside the integer for log-domain sums.
  double log_multiplicity = 0.0;

  friend bool operator==(const SpectralLevel&, const SpectralLevel&) = default;
};

/// Degeneracy-aware eigenvalue multiset of a density matrix.
///
/// Levels are sorted by descending eigenvalue. Eigenvalues closer than
/// kMergeTolerance are merged into a single level; eigenvalues in
/// [-kNegativeClamp, 0) are clamped to zero; levels of multiplicity zero are
/// dropped. The weighted sum of eigenvalues must be 1 within 1e-12.
class Spectrum {
public:
  static constexpr double kMergeTolerance = 1e-9;
  static constexpr double kNegativeClamp = 1e-10;
  static constexpr double kTraceTolerance = 1e-12;

  struct Entry {
    double eigenvalue;
    std::uint64_t multiplicity;
  };

  Spectrum() = default;

  explicit Spectrum(std::span<const Entry> entries) { build(entries); }
  Spectrum(std::initializer_list<Entry> entries) { build({entries.begin(), entries.size()}); }

  /// Each value is one eigenvalue of multiplicity one (before merging).
  static Spectrum from_eigenvalues(std::span<const double> values) {
    std::vector<Entry> entries;
    entries.reserve(values.size());
    for (double v : values) entries.push_back({v, 1});
    return Spectrum(entries);
  }

  /// Spectrum of the tensor product of two states.
  static Spectrum tensor(const Spectrum& a, const Spectrum& b) {
    std::vector<Entry> entries;
    for (const auto& la : a.levels_)
      for (const auto& lb : b.levels_) {
        if (la.multiplicity > std::numeric_limits<std::uint64_t>::max() / lb.multiplicity)
          throw CapacityError("tensor spectrum multiplicity overflows 64 bits");
        entries.push_back({la.eigenvalue * lb.eigenvalue, la.multiplicity * lb.multiplicity});
      }
    return Spectrum(entries);
  }

  [[nodiscard]] const std::vector<SpectralLevel>& levels() const noexcept { return levels_; }
  [[nodiscard]] std::size_t size() const noexcept { return levels_.size(); }
  [[nodiscard]] const SpectralLevel& operator[](std::size_t i) const { return levels_[i]; }
  [[nodiscard]] auto begin() const noexcept { return levels_.begin(); }
  [[nodiscard]] auto end() const noexcept { return levels_.end(); }

  /// Total multiplicity, i.e. the dimension of the underlying space.
  [[nodiscard]] std::uint64_t dimension() const noexcept {
    std::uint64_t d = 0;
    for (const auto& l : levels_) d += l.multiplicity;
    return d;
  }

  [[nodiscard]] double largest_eigenvalue() const noexcept {
    return levels_.empty() ? 0.0 : levels_.front().eigenvalue;
  }

private:
  void build(std::span<const Entry> entries) {
    std::vector<Entry> sorted;
    sorted.reserve(entries.size());
    for (auto e : entries) {
      if (!std::isfinite(e.eigenvalue))
        throw ValidationError("spectrum contains a non-finite eigenvalue");
      if (e.eigenvalue < -kNegativeClamp)
        throw ValidationError("spectrum eigenvalue " + std::to_string(e.eigenvalue) +
                              " is below the PSD tolerance");
      if (e.multiplicity == 0) continue;
      if (e.eigenvalue < 0.0) e.eigenvalue = 0.0;
      sorted.push_back(e);
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const Entry& x, const Entry& y) { return x.eigenvalue > y.eigenvalue; });

    // Group runs anchored at their largest member; the level value is the
    // multiplicity-weighted mean of the run.
    double trace = 0.0;
    for (std::size_t i = 0; i < sorted.size();) {
      const double anchor = sorted[i].eigenvalue;
      long double weighted = 0.0L;
      std::uint64_t mult = 0;
      std::size_t j = i;
      for (; j < sorted.size() && anchor - sorted[j].eigenvalue <= kMergeTolerance; ++j) {
        if (mult > std::numeric_limits<std::uint64_t>::max() - sorted[j].multiplicity)
          throw CapacityError("spectrum multiplicity overflows 64 bits");
        mult += sorted[j].multiplicity;
        weighted += static_cast<long double>(sorted[j].eigenvalue) * sorted[j].multiplicity;
      }
      const double value = static_cast<double>(weighted / mult);
      levels_.push_back({value, mult, std::log(static_cast<double>(mult))});
      trace += static_cast<double>(weighted);
      i = j;
    }
    if (levels_.empty()) throw ValidationError("spectrum has no levels");
    if (std::abs(trace - 1.0) > kTraceTolerance)
      throw ValidationError("spectrum weights sum to " + std::to_string(trace) + ", expected 1");
  }

  std::vector<SpectralLevel> levels_;
};

} // namespace qtsallis
