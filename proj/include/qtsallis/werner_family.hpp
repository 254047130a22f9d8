#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "qtsallis/density_matrix.hpp"
#include "qtsallis/entropic_index.hpp"
#include "qtsallis/errors.hpp"
#include "qtsallis/quantum_state.hpp"
#include "qtsallis/spectrum.hpp"

namespace qtsallis {

/// base^exp in 64-bit unsigned arithmetic; CapacityError on overflow.
inline std::uint64_t checked_pow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base)
      throw CapacityError(std::to_string(base) + "^" + std::to_string(exp) + " overflows 64 bits");
    r *= base;
  }
  return r;
}

/// Mixture x |GHZ><GHZ| + (1 - x) I / N^n on n parties of N levels each.
struct WernerParams {
  unsigned levels;  // N
  unsigned parties; // n
  double mix;       // x

  WernerParams(unsigned n_levels, unsigned n_parties, double x) : levels(n_levels), parties(n_parties), mix(x) {
    if (levels < 2) throw ValidationError("Werner family needs N >= 2 levels per party");
    if (parties < 2) throw ValidationError("Werner family needs n >= 2 parties");
    if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("mixing parameter x must lie in [0, 1]");
    checked_pow(levels, parties);
  }

  /// N^n.
  [[nodiscard]] std::uint64_t dimension() const { return checked_pow(levels, parties); }
  [[nodiscard]] std::vector<std::size_t> dims() const { return std::vector<std::size_t>(parties, levels); }
};

/// (1/sqrt N) sum_k |k>^{⊗ n}; amplitude sits at the N diagonal multi-indices.
inline Eigen::VectorXcd ghz_vector(unsigned levels, unsigned parties) {
  if (levels < 2) throw ValidationError("GHZ vector needs N >= 2");
  if (parties < 1) throw ValidationError("GHZ vector needs n >= 1");
  const std::vector<std::size_t> dims(parties, levels);
  const auto total = static_cast<Eigen::Index>(checked_dimension(dims));
  // Index of |k k ... k> is k * (1 + N + N^2 + ... + N^{n-1}).
  Eigen::Index repunit = 0;
  for (unsigned i = 0; i < parties; ++i) repunit = repunit * levels + 1;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(total);
  const double amp = 1.0 / std::sqrt(static_cast<double>(levels));
  for (unsigned k = 0; k < levels; ++k) v(k * repunit) = amp;
  return v;
}

/// Dense Werner state; bounded by the oracle dimension cap.
inline DensityMatrix werner_density(const WernerParams& p) {
  const auto dims = p.dims();
  const auto d = static_cast<Eigen::Index>(checked_dimension(dims));
  const Eigen::VectorXcd ghz = ghz_vector(p.levels, p.parties);
  ComplexMatrix m = ComplexMatrix::Identity(d, d) * ((1.0 - p.mix) / static_cast<double>(d));
  m += p.mix * (ghz * ghz.adjoint());
  return DensityMatrix(dims, std::move(m), DensityMatrix::Unchecked{});
}

/// {((1-x)/N^n, N^n - 1), ((1 + (N^n - 1) x)/N^n, 1)}.
inline Spectrum joint_spectrum(const WernerParams& p) {
  const std::uint64_t dim = p.dimension();
  const double d = static_cast<double>(dim);
  const double x = p.mix;
  return Spectrum{{(1.0 - x) / d, dim - 1}, {(1.0 + (d - 1.0) * x) / d, 1}};
}

/// Spectrum of the reduced state on `retained` of the n parties:
/// {((1-x)/N^m, N^m - N), ((1 + (N^{m-1} - 1) x)/N^m, N)}.
///
/// Tracing out parties fully dephases the GHZ projector into the N diagonal
/// projectors |k..k><k..k| / N, which fixes this form for every m. Only m = 1
/// and m = n - 1 have an independent analytic derivation; the general case is
/// certified against the dense oracle.
inline Spectrum marginal_spectrum(const WernerParams& p, unsigned retained) {
  if (retained < 1 || retained >= p.parties)
    throw ValidationError("retained party count must lie in [1, n-1], got " + std::to_string(retained));
  const std::uint64_t dim = checked_pow(p.levels, retained);
  const double d = static_cast<double>(dim);
  const double n_levels = static_cast<double>(p.levels);
  const double x = p.mix;
  const double bulk = (1.0 - x) / d;
  const double top = (1.0 + (d / n_levels - 1.0) * x) / d;
  return Spectrum{{bulk, dim - p.levels}, {top, p.levels}};
}

/// S_q of the first n - conditioned parties given the last `conditioned` parties.
inline double conditional_entropy_block(const WernerParams& p, unsigned conditioned, EntropicIndex q) {
  return quantum_conditional(joint_spectrum(p), marginal_spectrum(p, conditioned), q);
}

/// S_q(A_1 | A_2, ..., A_n) in closed form.
inline double conditional_entropy_closed(const WernerParams& p, EntropicIndex q) {
  return conditional_entropy_block(p, p.parties - 1, q);
}

} // namespace qtsallis
