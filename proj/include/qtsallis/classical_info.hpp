#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qtsallis/distributions.hpp"
#include "qtsallis/entropic_index.hpp"
#include "qtsallis/errors.hpp"

/// Classical nonadditive information measures.
///
/// Conventions shared by every function here:
///  - 0^q is taken as 0 for all q > 0, so zero-probability outcomes never
///    contribute and appending one leaves every entropy unchanged;
///  - |q - 1| <= 1e-9 evaluates the Shannon limit with the natural log.
namespace qtsallis::classical {

namespace detail {

inline double power_sum(std::span<const double> p, double q) {
  double s = 0.0;
  for (double v : p)
    if (v > 0.0) s += std::pow(v, q);
  return s;
}

inline double shannon(std::span<const double> p) {
  double s = 0.0;
  for (double v : p)
    if (v > 0.0) s -= v * std::log(v);
  return s;
}

} // namespace detail

/// S_q[p] = (sum_i p_i^q - 1) / (1 - q); Shannon entropy at the limit point.
inline double tsallis_entropy(const ProbDist& p, EntropicIndex q) {
  if (q.is_limit_point()) return detail::shannon(p.values());
  return (detail::power_sum(p.values(), q.value()) - 1.0) / q.one_minus_q();
}

/// Escort distribution P_i = p_i^q / sum_j p_j^q.
inline ProbDist escort(const ProbDist& p, EntropicIndex q) {
  const double z = detail::power_sum(p.values(), q.value());
  if (!(z > 0.0)) throw ValidationError("escort of a distribution with no positive mass");
  std::vector<double> out;
  out.reserve(p.size());
  for (double v : p) out.push_back(v > 0.0 ? std::pow(v, q.value()) / z : 0.0);
  // Rounding can leave the sum a few ulps from one; ProbDist renormalizes.
  return ProbDist(std::move(out));
}

/// Normalized q-expectation: sum_i values_i * escort(p, q)_i.
inline double q_expectation(std::span<const double> values, const ProbDist& p, EntropicIndex q) {
  if (values.size() != p.size())
    throw ValidationError("q-expectation: " + std::to_string(values.size()) + " values for " +
                          std::to_string(p.size()) + " outcomes");
  const ProbDist weights = escort(p, q);
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) acc += values[i] * weights[i];
  return acc;
}

namespace detail {

inline void require_bipartite(const JointDist& joint) {
  if (joint.subsystems() != 2)
    throw ValidationError("expected a joint over exactly 2 subsystems, got " +
                          std::to_string(joint.subsystems()));
}

} // namespace detail

/// S_q(B|A) as the escort-weighted average, under p(A), of the Tsallis
/// entropies of the conditional slices p(B | A = i). Rows with p_i(A) = 0 are
/// dropped from both the average and the escort normalization.
inline double conditional_entropy_def(const JointDist& joint, EntropicIndex q) {
  detail::require_bipartite(joint);
  const std::size_t rows = joint.dims()[0];
  const std::size_t cols = joint.dims()[1];
  const auto flat = joint.flat().values();

  std::vector<double> row_mass;
  std::vector<double> row_entropy;
  for (std::size_t i = 0; i < rows; ++i) {
    const auto row = flat.subspan(i * cols, cols);
    double mass = 0.0;
    for (double v : row) mass += v;
    if (!(mass > 0.0)) continue;
    std::vector<double> slice(row.begin(), row.end());
    for (double& v : slice) v /= mass;
    // The slice is normalized by construction; skip ProbDist's tolerance check
    // so tiny masses with large relative rounding are still accepted.
    const double h = q.is_limit_point() ? detail::shannon(slice)
                                        : (detail::power_sum(slice, q.value()) - 1.0) / q.one_minus_q();
    row_mass.push_back(mass);
    row_entropy.push_back(h);
  }

  double z = 0.0;
  for (double m : row_mass) z += std::pow(m, q.value());
  double acc = 0.0;
  for (std::size_t i = 0; i < row_mass.size(); ++i) acc += std::pow(row_mass[i], q.value()) * row_entropy[i];
  return acc / z;
}

/// S_q(B|A) = [S_q(A,B) - S_q(A)] / [1 + (1-q) S_q(A)].
///
/// Throws SingularityError if the denominator magnitude drops below 1e-300.
inline double conditional_entropy_ratio(const JointDist& joint, EntropicIndex q) {
  detail::require_bipartite(joint);
  const double s_ab = tsallis_entropy(joint.flat(), q);
  const double s_a = tsallis_entropy(joint.marginal_of(0), q);
  if (q.is_limit_point()) return s_ab - s_a;
  const double denom = 1.0 + q.one_minus_q() * s_a;
  if (std::abs(denom) < 1e-300) throw SingularityError("conditional entropy ratio: vanishing denominator");
  return (s_ab - s_a) / denom;
}

/// S_q(A) + S_q(B|A) + (1-q) S_q(A) S_q(B|A).
inline double compose_pseudoadditive(double s_a, double s_b_given_a, EntropicIndex q) {
  return s_a + s_b_given_a + q.one_minus_q() * s_a * s_b_given_a;
}

/// Entropies of a tripartite joint (A, B, C) and the consistency of the
/// generalized composition law along the chain C -> B|C -> A|B,C.
struct TripartiteChain {
  double s_abc = 0.0;
  double s_bc = 0.0;
  double s_c = 0.0;
  double s_a_given_bc = 0.0;
  double s_b_given_c = 0.0;
  /// |S(A,B,C) - three-term expansion over C, B|C, A|B,C|.
  double residual = 0.0;
  /// |two-term form via (B,C) - three-term form|.
  double order_deviation = 0.0;
  /// S(B|C) solved back from S(A,B,C), S(C) and S(A|B,C).
  double s_b_given_c_recovered = 0.0;
  double recovery_deviation = 0.0;
};

inline TripartiteChain tripartite_chain(const JointDist& joint, EntropicIndex q) {
  if (joint.subsystems() != 3)
    throw ValidationError("tripartite chain needs a joint over exactly 3 subsystems");
  const std::size_t bc[] = {1, 2}, a[] = {0}, c[] = {2}, b[] = {1};

  TripartiteChain r;
  r.s_abc = tsallis_entropy(joint.flat(), q);
  const JointDist joint_bc = joint.marginal(bc);
  r.s_bc = tsallis_entropy(joint_bc.flat(), q);
  r.s_c = tsallis_entropy(joint.marginal_of(2), q);
  r.s_a_given_bc = conditional_entropy_def(joint.regroup(bc, a), q);
  r.s_b_given_c = conditional_entropy_def(joint.regroup(c, b), q);

  const double k = q.one_minus_q();
  const double two_term = compose_pseudoadditive(r.s_bc, r.s_a_given_bc, q);
  const double three_term =
      r.s_c + r.s_b_given_c + r.s_a_given_bc +
      k * (r.s_c * r.s_b_given_c + r.s_b_given_c * r.s_a_given_bc + r.s_a_given_bc * r.s_c +
           k * r.s_c * r.s_b_given_c * r.s_a_given_bc);
  r.residual = std::abs(r.s_abc - three_term);
  r.order_deviation = std::abs(two_term - three_term);

  const double outer = r.s_c + r.s_a_given_bc + k * r.s_c * r.s_a_given_bc;
  r.s_b_given_c_recovered = (r.s_abc - outer) / (1.0 + k * outer);
  r.recovery_deviation = std::abs(r.s_b_given_c_recovered - r.s_b_given_c);
  return r;
}

} // namespace qtsallis::classical
