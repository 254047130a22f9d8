#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "qtsallis/errors.hpp"

namespace qtsallis {

inline constexpr double kProbabilitySumTolerance = 1e-12;

/// A classical probability vector. Entries lie in [0, 1] and sum to one;
/// inputs whose sum is off by at most 1e-12 are renormalized, anything further
/// off is rejected.
class ProbDist {
public:
  ProbDist() = default;

  explicit ProbDist(std::vector<double> p) : p_(std::move(p)) {
    if (p_.empty()) throw ValidationError("probability distribution must be nonempty");
    double sum = 0.0;
    for (double v : p_) {
      if (!std::isfinite(v) || v < 0.0 || v > 1.0)
        throw ValidationError("probability entry outside [0, 1]: " + std::to_string(v));
      sum += v;
    }
    if (std::abs(sum - 1.0) > kProbabilitySumTolerance)
      throw ValidationError("probabilities sum to " + std::to_string(sum) + ", expected 1");
    for (double& v : p_) v /= sum;
  }

  static ProbDist uniform(std::size_t outcomes) {
    if (outcomes == 0) throw ValidationError("uniform distribution needs at least one outcome");
    return ProbDist(std::vector<double>(outcomes, 1.0 / static_cast<double>(outcomes)));
  }

  /// Point mass on `index` among `outcomes`.
  static ProbDist delta(std::size_t outcomes, std::size_t index) {
    if (index >= outcomes) throw ValidationError("delta index out of range");
    std::vector<double> p(outcomes, 0.0);
    p[index] = 1.0;
    return ProbDist(std::move(p));
  }

  [[nodiscard]] std::size_t size() const noexcept { return p_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return p_[i]; }
  [[nodiscard]] std::span<const double> values() const noexcept { return p_; }
  [[nodiscard]] auto begin() const noexcept { return p_.begin(); }
  [[nodiscard]] auto end() const noexcept { return p_.end(); }

  /// Same distribution with one extra zero-probability outcome; existing
  /// entries are copied bit for bit.
  [[nodiscard]] ProbDist with_zero_outcome() const {
    ProbDist out;
    out.p_ = p_;
    out.p_.push_back(0.0);
    return out;
  }

private:
  std::vector<double> p_;
};

/// Joint distribution over several subsystems, stored flat in lexicographic
/// (row-major) order of the multi-index: the first subsystem varies slowest.
class JointDist {
public:
  JointDist(std::vector<std::size_t> dims, std::vector<double> p) : dims_(std::move(dims)) {
    if (dims_.empty()) throw ValidationError("joint distribution needs at least one subsystem");
    std::size_t total = 1;
    for (std::size_t d : dims_) {
      if (d == 0) throw ValidationError("subsystem outcome count must be positive");
      total *= d;
    }
    if (p.size() != total)
      throw ValidationError("joint distribution has " + std::to_string(p.size()) +
                            " entries but dims multiply to " + std::to_string(total));
    p_ = ProbDist(std::move(p));
  }

  /// Product distribution a ⊗ b.
  static JointDist product(const ProbDist& a, const ProbDist& b) {
    std::vector<double> p;
    p.reserve(a.size() * b.size());
    for (double pa : a)
      for (double pb : b) p.push_back(pa * pb);
    return JointDist({a.size(), b.size()}, std::move(p));
  }

  static JointDist product(const ProbDist& a, const ProbDist& b, const ProbDist& c) {
    std::vector<double> p;
    p.reserve(a.size() * b.size() * c.size());
    for (double pa : a)
      for (double pb : b)
        for (double pc : c) p.push_back(pa * pb * pc);
    return JointDist({a.size(), b.size(), c.size()}, std::move(p));
  }

  [[nodiscard]] const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  [[nodiscard]] std::size_t subsystems() const noexcept { return dims_.size(); }
  [[nodiscard]] const ProbDist& flat() const noexcept { return p_; }

  /// Multi-index of flat position `flat_index`.
  [[nodiscard]] std::vector<std::size_t> unflatten(std::size_t flat_index) const {
    std::vector<std::size_t> idx(dims_.size());
    for (std::size_t k = dims_.size(); k-- > 0;) {
      idx[k] = flat_index % dims_[k];
      flat_index /= dims_[k];
    }
    return idx;
  }

  /// Joint over two composite parties: the first made of `first` subsystems,
  /// the second of `second`, each flattened lexicographically in the order given.
  /// Subsystems listed in neither are summed out.
  [[nodiscard]] JointDist regroup(std::span<const std::size_t> first,
                                  std::span<const std::size_t> second) const {
    check_axes(first, second);
    const std::size_t d1 = extent(first);
    const std::size_t d2 = extent(second);
    std::vector<double> out(d1 * d2, 0.0);
    for (std::size_t i = 0; i < p_.size(); ++i) {
      const auto idx = unflatten(i);
      out[flat_of(idx, first) * d2 + flat_of(idx, second)] += p_[i];
    }
    return JointDist({d1, d2}, std::move(out));
  }

  /// Marginal over the listed subsystems, which keep their order as given.
  [[nodiscard]] JointDist marginal(std::span<const std::size_t> keep) const {
    check_axes(keep, {});
    std::vector<std::size_t> dims;
    for (std::size_t k : keep) dims.push_back(dims_[k]);
    std::vector<double> out(extent(keep), 0.0);
    for (std::size_t i = 0; i < p_.size(); ++i) out[flat_of(unflatten(i), keep)] += p_[i];
    return JointDist(std::move(dims), std::move(out));
  }

  [[nodiscard]] JointDist marginal(std::initializer_list<std::size_t> keep) const {
    return marginal(std::span<const std::size_t>(keep.begin(), keep.size()));
  }

  /// Distribution of a single subsystem.
  [[nodiscard]] ProbDist marginal_of(std::size_t axis) const {
    const std::size_t keep[] = {axis};
    return marginal(keep).flat();
  }

  /// Same joint with its two subsystems swapped; only for bipartite joints.
  [[nodiscard]] JointDist transposed() const {
    if (subsystems() != 2) throw ValidationError("transpose needs a bipartite joint");
    const std::size_t a[] = {1}, b[] = {0};
    return regroup(a, b);
  }

private:
  void check_axes(std::span<const std::size_t> a, std::span<const std::size_t> b) const {
    if (a.empty()) throw ValidationError("subsystem selection must be nonempty");
    std::vector<bool> seen(dims_.size(), false);
    auto mark = [&](std::size_t k) {
      if (k >= dims_.size()) throw ValidationError("subsystem index out of range");
      if (seen[k]) throw ValidationError("subsystem index repeated");
      seen[k] = true;
    };
    for (std::size_t k : a) mark(k);
    for (std::size_t k : b) mark(k);
  }

  [[nodiscard]] std::size_t extent(std::span<const std::size_t> axes) const {
    std::size_t e = 1;
    for (std::size_t k : axes) e *= dims_[k];
    return e;
  }

  [[nodiscard]] std::size_t flat_of(const std::vector<std::size_t>& idx,
                                    std::span<const std::size_t> axes) const {
    std::size_t f = 0;
    for (std::size_t k : axes) f = f * dims_[k] + idx[k];
    return f;
  }

  std::vector<std::size_t> dims_;
  ProbDist p_;
};

} // namespace qtsallis
