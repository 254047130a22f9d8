#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qtsallis/errors.hpp"
#include "qtsallis/spectrum.hpp"

namespace qtsallis {

/// Largest total Hilbert-space dimension the dense path will build.
inline constexpr std::size_t kOracleDimensionCap = 4096;

using ComplexMatrix = Eigen::MatrixXcd;

inline std::size_t checked_dimension(std::span<const std::size_t> dims) {
  std::size_t total = 1;
  for (std::size_t d : dims) {
    if (d == 0) throw ValidationError("subsystem dimension must be positive");
    if (total > kOracleDimensionCap / d)
      throw CapacityError("total dimension exceeds the dense cap of " + std::to_string(kOracleDimensionCap));
    total *= d;
  }
  return total;
}

/// Dense density matrix over a tensor product of subsystems. The first
/// subsystem is the most significant digit of the basis index.
///
/// Public construction checks: Hermitian within 1e-12 entrywise, unit trace
/// within 1e-12, smallest eigenvalue >= -1e-10.
class DensityMatrix {
public:
  static constexpr double kHermitianTolerance = 1e-12;
  static constexpr double kTraceTolerance = 1e-12;

  DensityMatrix(std::vector<std::size_t> dims, ComplexMatrix entries)
      : DensityMatrix(std::move(dims), std::move(entries), Unchecked{}) {
    validate(true);
  }

  [[nodiscard]] const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  [[nodiscard]] const ComplexMatrix& matrix() const noexcept { return m_; }
  [[nodiscard]] std::size_t dimension() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  [[nodiscard]] std::complex<double> operator()(std::size_t r, std::size_t c) const {
    return m_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }

  /// Projector |v><v| onto a normalized state vector.
  static DensityMatrix pure(std::vector<std::size_t> dims, const Eigen::VectorXcd& v) {
    if (static_cast<std::size_t>(v.size()) != checked_dimension(dims))
      throw ValidationError("state vector length does not match dims");
    if (std::abs(v.norm() - 1.0) > 1e-12) throw ValidationError("state vector is not normalized");
    return DensityMatrix(std::move(dims), v * v.adjoint(), Unchecked{});
  }

  static DensityMatrix maximally_mixed(std::vector<std::size_t> dims) {
    const auto d = static_cast<Eigen::Index>(checked_dimension(dims));
    return DensityMatrix(std::move(dims), ComplexMatrix::Identity(d, d) / static_cast<double>(d),
                         Unchecked{});
  }

  /// Diagonal state with the given probabilities on the computational basis.
  static DensityMatrix diagonal(std::vector<std::size_t> dims, std::span<const double> probs) {
    const auto d = checked_dimension(dims);
    if (probs.size() != d) throw ValidationError("diagonal length does not match dims");
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = probs[i];
    DensityMatrix out(std::move(dims), std::move(m), Unchecked{});
    out.validate(false);
    return out;
  }

  // Internal construction for operations that preserve the invariants
  // analytically (tensor products, partial traces, convex mixtures).
  struct Unchecked {};
  DensityMatrix(std::vector<std::size_t> dims, ComplexMatrix entries, Unchecked)
      : dims_(std::move(dims)), m_(std::move(entries)) {
    const auto d = checked_dimension(dims_);
    if (m_.rows() != m_.cols() || static_cast<std::size_t>(m_.rows()) != d)
      throw ValidationError("matrix side does not match product of subsystem dims");
  }

private:
  void validate(bool check_psd) const {
    const ComplexMatrix diff = m_ - m_.adjoint();
    if (diff.cwiseAbs().maxCoeff() > kHermitianTolerance)
      throw ValidationError("density matrix is not Hermitian");
    const std::complex<double> tr = m_.trace();
    if (std::abs(tr.real() - 1.0) > kTraceTolerance || std::abs(tr.imag()) > kTraceTolerance)
      throw ValidationError("density matrix trace is not 1");
    if (check_psd) {
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m_, Eigen::EigenvaluesOnly);
      if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed during validation");
      if (es.eigenvalues().minCoeff() < -Spectrum::kNegativeClamp)
        throw ValidationError("density matrix is not positive semidefinite");
    } else {
      for (Eigen::Index i = 0; i < m_.rows(); ++i)
        if (m_(i, i).real() < -Spectrum::kNegativeClamp)
          throw ValidationError("density matrix has a negative diagonal entry");
    }
  }

  std::vector<std::size_t> dims_;
  ComplexMatrix m_;
};

/// Kronecker product a ⊗ b with concatenated subsystem dims.
inline DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<std::size_t> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  checked_dimension(dims);
  const auto& ma = a.matrix();
  const auto& mb = b.matrix();
  const Eigen::Index db = mb.rows();
  ComplexMatrix out(ma.rows() * db, ma.cols() * db);
  for (Eigen::Index i = 0; i < ma.rows(); ++i)
    for (Eigen::Index j = 0; j < ma.cols(); ++j) out.block(i * db, j * db, db, db) = ma(i, j) * mb;
  return DensityMatrix(std::move(dims), std::move(out), DensityMatrix::Unchecked{});
}

/// Reduced state on the subsystems in `keep` (any order, no repeats); the
/// result lists them in their original order.
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  const auto& dims = rho.dims();
  if (keep.empty()) throw ValidationError("partial trace must keep at least one subsystem");
  std::vector<bool> kept(dims.size(), false);
  for (std::size_t k : keep) {
    if (k >= dims.size()) throw ValidationError("partial trace: subsystem index out of range");
    if (kept[k]) throw ValidationError("partial trace: subsystem index repeated");
    kept[k] = true;
  }

  // Split every basis index into (kept part, traced part).
  std::vector<std::size_t> kept_dims;
  std::size_t traced_dim = 1;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (kept[k])
      kept_dims.push_back(dims[k]);
    else
      traced_dim *= dims[k];
  }
  const std::size_t kept_dim = std::accumulate(kept_dims.begin(), kept_dims.end(), std::size_t{1},
                                               std::multiplies<>());
  const std::size_t total = rho.dimension();
  std::vector<std::size_t> kept_index(total), traced_index(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rem = i, k_idx = 0, t_idx = 0, k_stride = 1, t_stride = 1;
    for (std::size_t k = dims.size(); k-- > 0;) {
      const std::size_t digit = rem % dims[k];
      rem /= dims[k];
      if (kept[k]) {
        k_idx += digit * k_stride;
        k_stride *= dims[k];
      } else {
        t_idx += digit * t_stride;
        t_stride *= dims[k];
      }
    }
    kept_index[i] = k_idx;
    traced_index[i] = t_idx;
  }
  // Full index for each (kept, traced) pair.
  std::vector<std::size_t> full(kept_dim * traced_dim);
  for (std::size_t i = 0; i < total; ++i) full[kept_index[i] * traced_dim + traced_index[i]] = i;

  const auto& m = rho.matrix();
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(kept_dim), static_cast<Eigen::Index>(kept_dim));
  for (std::size_t r = 0; r < kept_dim; ++r)
    for (std::size_t c = 0; c < kept_dim; ++c) {
      std::complex<double> acc = 0.0;
      for (std::size_t t = 0; t < traced_dim; ++t)
        acc += m(static_cast<Eigen::Index>(full[r * traced_dim + t]),
                 static_cast<Eigen::Index>(full[c * traced_dim + t]));
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc;
    }
  return DensityMatrix(std::move(kept_dims), std::move(out), DensityMatrix::Unchecked{});
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::size_t> keep) {
  return partial_trace(rho, std::span<const std::size_t>(keep.begin(), keep.size()));
}

/// Eigenvalues of rho by self-adjoint decomposition, merged into levels.
///
/// Eigenvalues within 16 * dim * epsilon of zero are below the solver's
/// backward error and are set to exactly zero; left as ~1e-17 noise they
/// would dominate Tr rho^q for small q.
inline Spectrum spectrum_of(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("self-adjoint eigensolver did not converge");
  const double zero_snap =
      16.0 * static_cast<double>(rho.dimension()) * std::numeric_limits<double>::epsilon();
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  for (double& v : ev)
    if (std::abs(v) <= zero_snap) v = 0.0;
  return Spectrum::from_eigenvalues(ev);
}

} // namespace qtsallis
