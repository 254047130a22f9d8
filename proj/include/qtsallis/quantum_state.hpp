#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "qtsallis/classical_info.hpp"
#include "qtsallis/density_matrix.hpp"
#include "qtsallis/distributions.hpp"
#include "qtsallis/entropic_index.hpp"
#include "qtsallis/log_sum_exp.hpp"
#include "qtsallis/spectrum.hpp"

namespace qtsallis {

/// ln Tr rho^q = ln sum_levels mult * lambda^q, summed in the log domain so
/// that q up to 1e6 and beyond neither underflows nor overflows. Zero
/// eigenvalues are skipped.
inline double q_trace(const Spectrum& s, EntropicIndex q) {
  std::vector<double> terms;
  terms.reserve(s.size());
  for (const auto& level : s)
    if (level.eigenvalue > 0.0) terms.push_back(level.log_multiplicity + q.value() * std::log(level.eigenvalue));
  if (terms.empty()) throw ValidationError("q-trace of an all-zero spectrum");
  return numeric::log_sum_exp(terms);
}

/// -sum mult * lambda ln lambda.
inline double von_neumann_entropy(const Spectrum& s) {
  double h = 0.0;
  for (const auto& level : s)
    if (level.eigenvalue > 0.0)
      h -= static_cast<double>(level.multiplicity) * level.eigenvalue * std::log(level.eigenvalue);
  return h;
}

/// S_q[rho] = (Tr rho^q - 1) / (1 - q); von Neumann at the limit point.
inline double quantum_tsallis(const Spectrum& s, EntropicIndex q) {
  if (q.is_limit_point()) return von_neumann_entropy(s);
  return std::expm1(q_trace(s, q)) / q.one_minus_q();
}

/// Quantum nonadditive conditional entropy in ratio form:
/// (1/(1-q)) [Tr rho_joint^q / Tr rho_marginal^q - 1].
///
/// Negative values signal entanglement. For very large q the true value can
/// exceed the double range; it then saturates to -inf. Use the log-domain
/// sign test in the separability solver when only the sign matters.
inline double quantum_conditional(const Spectrum& joint, const Spectrum& marginal, EntropicIndex q) {
  if (q.is_limit_point()) return von_neumann_entropy(joint) - von_neumann_entropy(marginal);
  return std::expm1(q_trace(joint, q) - q_trace(marginal, q)) / q.one_minus_q();
}

/// Classically correlated bipartite state: weights w over hidden labels
/// lambda, each carrying diagonal local states r_lambda on A and s_lambda on B
/// in the computational bases.
class SeparableDecomposition {
public:
  SeparableDecomposition(ProbDist weights, std::vector<ProbDist> local_a, std::vector<ProbDist> local_b)
      : weights_(std::move(weights)), local_a_(std::move(local_a)), local_b_(std::move(local_b)) {
    if (local_a_.size() != weights_.size() || local_b_.size() != weights_.size())
      throw ValidationError("separable decomposition needs one local pair per weight");
    for (const auto& r : local_a_)
      if (r.size() != local_a_.front().size()) throw ValidationError("inconsistent dimension of A across terms");
    for (const auto& s : local_b_)
      if (s.size() != local_b_.front().size()) throw ValidationError("inconsistent dimension of B across terms");
  }

  [[nodiscard]] const ProbDist& weights() const noexcept { return weights_; }
  [[nodiscard]] const std::vector<ProbDist>& local_a() const noexcept { return local_a_; }
  [[nodiscard]] const std::vector<ProbDist>& local_b() const noexcept { return local_b_; }
  [[nodiscard]] std::size_t dim_a() const noexcept { return local_a_.front().size(); }
  [[nodiscard]] std::size_t dim_b() const noexcept { return local_b_.front().size(); }
  [[nodiscard]] std::size_t terms() const noexcept { return weights_.size(); }

  /// P(a, b) = sum_lambda w_lambda r_lambda(a) s_lambda(b), flattened a-major.
  [[nodiscard]] std::vector<double> joint_probabilities() const {
    std::vector<double> p(dim_a() * dim_b(), 0.0);
    for (std::size_t l = 0; l < terms(); ++l)
      for (std::size_t a = 0; a < dim_a(); ++a)
        for (std::size_t b = 0; b < dim_b(); ++b)
          p[a * dim_b() + b] += weights_[l] * local_a_[l][a] * local_b_[l][b];
    return p;
  }

private:
  ProbDist weights_;
  std::vector<ProbDist> local_a_;
  std::vector<ProbDist> local_b_;
};

/// sum_lambda w_lambda rho_lambda(A) ⊗ rho_lambda(B).
inline DensityMatrix separable_state(const SeparableDecomposition& d) {
  std::vector<std::size_t> dims{d.dim_a(), d.dim_b()};
  const auto total = static_cast<Eigen::Index>(checked_dimension(dims));
  ComplexMatrix m = ComplexMatrix::Zero(total, total);
  for (std::size_t l = 0; l < d.terms(); ++l) {
    const auto ra = DensityMatrix::diagonal({d.dim_a()}, d.local_a()[l].values());
    const auto sb = DensityMatrix::diagonal({d.dim_b()}, d.local_b()[l].values());
    m += d.weights()[l] * tensor_product(ra, sb).matrix();
  }
  return DensityMatrix(std::move(dims), std::move(m), DensityMatrix::Unchecked{});
}

/// Conditional entropy of a separable state evaluated directly from its
/// decomposition: escort average over a (weights [sum_lambda w r(a)]^q) of the
/// Tsallis entropy of pi(b|a) = sum_lambda w r(a) s(b) / sum_lambda w r(a).
/// Labels a with zero total weight are skipped.
inline double separable_conditional_direct(const SeparableDecomposition& d, EntropicIndex q) {
  const std::size_t da = d.dim_a(), db = d.dim_b();
  const auto joint = d.joint_probabilities();
  double numerator = 0.0, normalizer = 0.0;
  for (std::size_t a = 0; a < da; ++a) {
    double mass = 0.0;
    for (std::size_t l = 0; l < d.terms(); ++l) mass += d.weights()[l] * d.local_a()[l][a];
    if (!(mass > 0.0)) continue;
    std::vector<double> pi(db);
    for (std::size_t b = 0; b < db; ++b) pi[b] = joint[a * db + b] / mass;
    const double h = q.is_limit_point() ? classical::detail::shannon(pi)
                                        : (classical::detail::power_sum(pi, q.value()) - 1.0) / q.one_minus_q();
    const double w = std::pow(mass, q.value());
    numerator += w * h;
    normalizer += w;
  }
  return numerator / normalizer;
}

} // namespace qtsallis
