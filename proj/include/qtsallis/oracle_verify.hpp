#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "qtsallis/classical_info.hpp"
#include "qtsallis/density_matrix.hpp"
#include "qtsallis/quantum_state.hpp"
#include "qtsallis/spectrum.hpp"
#include "qtsallis/werner_family.hpp"

/// Dense brute-force checks of the closed-form Werner-family results and of
/// the separable-state conditional entropy.
namespace qtsallis::oracle {

/// Absolute tolerance for a comparison against `reference`: 1e-10, scaled up
/// by |reference| once it exceeds one. Large-q conditional entropies reach
/// magnitudes of 1e7 and beyond where only relative agreement is meaningful.
inline double comparison_tolerance(double reference, double base = 1e-10) {
  return base * std::max(1.0, std::abs(reference));
}

struct VerificationEntry {
  std::string case_label;
  std::string quantity;
  double closed_form = 0.0;
  double oracle = 0.0;
  double abs_dev = 0.0;
  bool pass = false;

  /// abs_dev in units of max(1, |oracle|).
  [[nodiscard]] double scaled_dev() const { return abs_dev / std::max(1.0, std::abs(oracle)); }
};

/// Failures are recorded as entries, never thrown.
class VerificationReport {
public:
  void add(std::string case_label, std::string quantity, double closed_form, double oracle, double tolerance) {
    const double dev = std::abs(closed_form - oracle);
    entries_.push_back({std::move(case_label), std::move(quantity), closed_form, oracle, dev,
                        std::isfinite(dev) && dev <= tolerance});
  }

  void add_check(std::string case_label, std::string quantity, double value, double reference, bool pass) {
    entries_.push_back({std::move(case_label), std::move(quantity), value, reference,
                        std::abs(value - reference), pass});
  }

  /// One-sided check value >= bound: the deviation is the size of the
  /// violation, zero when the bound holds.
  void add_lower_bound(std::string case_label, std::string quantity, double value, double bound, double slack) {
    const double dev = std::max(0.0, bound - value);
    entries_.push_back({std::move(case_label), std::move(quantity), value, bound, dev, dev <= slack});
  }

  void merge(const VerificationReport& other) {
    entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
    sort();
  }

  void sort() {
    std::stable_sort(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) {
      return std::tie(a.case_label, a.quantity) < std::tie(b.case_label, b.quantity);
    });
  }

  [[nodiscard]] const std::vector<VerificationEntry>& entries() const noexcept { return entries_; }
  [[nodiscard]] bool passed() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const auto& e) { return e.pass; });
  }
  [[nodiscard]] std::size_t failures() const {
    return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(), [](const auto& e) { return !e.pass; }));
  }
  /// Largest scaled deviation over all entries.
  [[nodiscard]] double max_deviation() const {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, e.scaled_dev());
    return m;
  }

private:
  std::vector<VerificationEntry> entries_;
};

namespace detail {

inline std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string shortest_q(EntropicIndex q) { return shortest(q.value()); }

inline std::string label(const WernerParams& p) {
  return "N=" + std::to_string(p.levels) + ",n=" + std::to_string(p.parties) + ",x=" + shortest(p.mix);
}

inline std::vector<std::size_t> last_parties(unsigned parties, unsigned retained) {
  std::vector<std::size_t> keep;
  for (unsigned k = parties - retained; k < parties; ++k) keep.push_back(k);
  return keep;
}

/// (1-x)/N^m I + (x/N) sum_k |k..k><k..k| on m parties.
inline ComplexMatrix direct_marginal(const WernerParams& p, unsigned retained) {
  const std::vector<std::size_t> dims(retained, p.levels);
  const auto d = static_cast<Eigen::Index>(checked_dimension(dims));
  ComplexMatrix m = ComplexMatrix::Identity(d, d) * ((1.0 - p.mix) / static_cast<double>(d));
  Eigen::Index repunit = 0;
  for (unsigned i = 0; i < retained; ++i) repunit = repunit * p.levels + 1;
  for (unsigned k = 0; k < p.levels; ++k) m(k * repunit, k * repunit) += p.mix / p.levels;
  return m;
}

inline void check_retained(const WernerParams& p, unsigned retained) {
  if (retained < 1 || retained >= p.parties)
    throw ValidationError("retained party count must lie in [1, n-1]");
}

} // namespace detail

/// Largest entrywise gap between the partial trace of the dense Werner state
/// and the direct dephased-GHZ construction of its m-party marginal.
inline double marginal_structure_deviation(const WernerParams& p, unsigned retained) {
  detail::check_retained(p, retained);
  const DensityMatrix traced = partial_trace(werner_density(p), detail::last_parties(p.parties, retained));
  return (traced.matrix() - detail::direct_marginal(p, retained)).cwiseAbs().maxCoeff();
}

/// Reduced state on the last `retained` parties by explicit partial trace;
/// cross-checked entrywise (1e-12) against the direct construction.
inline DensityMatrix oracle_marginal(const WernerParams& p, unsigned retained) {
  detail::check_retained(p, retained);
  DensityMatrix traced = partial_trace(werner_density(p), detail::last_parties(p.parties, retained));
  const double dev = (traced.matrix() - detail::direct_marginal(p, retained)).cwiseAbs().maxCoeff();
  if (dev > 1e-12)
    throw NumericalError("partial trace disagrees with the direct marginal by " + std::to_string(dev));
  return traced;
}

namespace detail {

inline void compare_spectra(VerificationReport& report, const std::string& case_label, const std::string& name,
                            const Spectrum& closed, const Spectrum& dense) {
  if (closed.size() != dense.size()) {
    report.add_check(case_label, name + ".level_count", static_cast<double>(closed.size()),
                     static_cast<double>(dense.size()), false);
    return;
  }
  for (std::size_t i = 0; i < closed.size(); ++i) {
    const std::string level = name + "[" + std::to_string(i) + "]";
    report.add_check(case_label, level + ".multiplicity", static_cast<double>(closed[i].multiplicity),
                     static_cast<double>(dense[i].multiplicity), closed[i].multiplicity == dense[i].multiplicity);
    report.add(case_label, level + ".eigenvalue", closed[i].eigenvalue, dense[i].eigenvalue, 1e-10);
  }
}

} // namespace detail

/// For every parameter point: closed-form joint and marginal spectra against
/// dense eigendecomposition (all m in [1, n-1]), the marginal structure
/// identity, and for every q the closed-form conditional entropies (all
/// conditioning sizes) against the conditional entropy of the dense spectra.
inline VerificationReport verify_family(std::span<const WernerParams> params, std::span<const EntropicIndex> qs) {
  VerificationReport report;
  for (const auto& p : params) {
    const std::string case_label = detail::label(p);
    const DensityMatrix rho = werner_density(p);
    const Spectrum dense_joint = spectrum_of(rho);
    detail::compare_spectra(report, case_label, "joint_spectrum", joint_spectrum(p), dense_joint);

    std::vector<Spectrum> dense_marginals;
    for (unsigned m = 1; m < p.parties; ++m) {
      const DensityMatrix marg = partial_trace(rho, detail::last_parties(p.parties, m));
      const double structural = (marg.matrix() - detail::direct_marginal(p, m)).cwiseAbs().maxCoeff();
      report.add_check(case_label, "marginal_structure[m=" + std::to_string(m) + "]", structural, 0.0,
                       structural <= 1e-12);
      dense_marginals.push_back(spectrum_of(marg));
      detail::compare_spectra(report, case_label, "marginal_spectrum[m=" + std::to_string(m) + "]",
                              marginal_spectrum(p, m), dense_marginals.back());
    }

    for (const auto& q : qs) {
      const std::string qcase = case_label + ",q=" + detail::shortest_q(q);
      const double dense_closed = quantum_conditional(dense_joint, dense_marginals.back(), q);
      report.add(qcase, "conditional_entropy_closed", conditional_entropy_closed(p, q), dense_closed,
                 comparison_tolerance(dense_closed));
      for (unsigned k = 1; k < p.parties; ++k) {
        const double dense_block = quantum_conditional(dense_joint, dense_marginals[k - 1], q);
        report.add(qcase, "conditional_entropy_block[k=" + std::to_string(k) + "]",
                   conditional_entropy_block(p, k, q), dense_block, comparison_tolerance(dense_block));
      }
    }
  }
  report.sort();
  return report;
}

/// Default certification grid: N in {2, 3}, n in {2, 3, 4}, x in {0, 0.1, ..., 1},
/// restricted to total dimension <= max_dim.
inline std::vector<WernerParams> default_family_grid(std::size_t max_dim = kOracleDimensionCap) {
  std::vector<WernerParams> grid;
  for (unsigned levels : {2u, 3u})
    for (unsigned parties : {2u, 3u, 4u}) {
      if (checked_pow(levels, parties) > max_dim) continue;
      for (int i = 0; i <= 10; ++i) grid.emplace_back(levels, parties, i / 10.0);
    }
  return grid;
}

inline std::vector<EntropicIndex> default_q_grid() {
  return {EntropicIndex(0.5), EntropicIndex(1.0), EntropicIndex(2.0), EntropicIndex(5.0), EntropicIndex(20.0)};
}

/// 64-bit Mersenne twister with a hand-rolled 53-bit uniform mapping, so the
/// stream is identical across standard libraries.
class SeededGenerator {
public:
  explicit SeededGenerator(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in (0, 1].
  double uniform() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }
  /// Uniform integer in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + engine_() % (hi - lo + 1); }

  ProbDist probability_vector(std::size_t size) {
    std::vector<double> u(size);
    double total = 0.0;
    for (double& v : u) total += (v = uniform());
    for (double& v : u) v /= total;
    return ProbDist(std::move(u));
  }

private:
  std::mt19937_64 engine_;
};

/// Random separable decomposition with dims in [2, 4] x [2, 4] and 1 to 6 terms.
inline SeparableDecomposition random_decomposition(SeededGenerator& gen, bool single_product = false) {
  const std::size_t da = gen.between(2, 4), db = gen.between(2, 4);
  const std::size_t terms = single_product ? 1 : gen.between(1, 6);
  ProbDist weights = gen.probability_vector(terms);
  std::vector<ProbDist> ra, sb;
  for (std::size_t l = 0; l < terms; ++l) {
    ra.push_back(gen.probability_vector(da));
    sb.push_back(gen.probability_vector(db));
  }
  return SeparableDecomposition(std::move(weights), std::move(ra), std::move(sb));
}

inline std::vector<EntropicIndex> witness_q_grid() {
  return {EntropicIndex(0.5), EntropicIndex(2.0), EntropicIndex(10.0), EntropicIndex(100.0)};
}

/// Draws `trials` separable decompositions (trial 0 is always a single product
/// term) and checks, at every q in witness_q_grid():
///   - the direct conditional entropy is >= -1e-12;
///   - it matches the ratio-form conditional entropy of the assembled dense
///     state and its A marginal within 1e-10 (scaled);
///   - for trial 0, it equals the Tsallis entropy of the B factor.
inline VerificationReport verify_separable_witness(std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw ValidationError("separable witness needs at least one trial");
  SeededGenerator gen(seed);
  VerificationReport report;
  const auto qs = witness_q_grid();
  for (std::size_t t = 0; t < trials; ++t) {
    const SeparableDecomposition d = random_decomposition(gen, t == 0);
    const DensityMatrix rho = separable_state(d);
    const Spectrum joint = spectrum_of(rho);
    const Spectrum marginal_a = spectrum_of(partial_trace(rho, {0}));
    for (const auto& q : qs) {
      const std::string case_label = "trial=" + std::to_string(t) + ",q=" + detail::shortest_q(q);
      const double direct = separable_conditional_direct(d, q);
      report.add_lower_bound(case_label, "separable_conditional_nonnegative", direct, 0.0, 1e-12);
      const double spectral = quantum_conditional(joint, marginal_a, q);
      report.add(case_label, "separable_direct_vs_spectral", direct, spectral, comparison_tolerance(spectral));
      if (t == 0) {
        const double s_b = classical::tsallis_entropy(d.local_b().front(), q);
        report.add(case_label, "product_equals_b_entropy", direct, s_b, comparison_tolerance(s_b));
      }
    }
  }
  report.sort();
  return report;
}

} // namespace qtsallis::oracle
