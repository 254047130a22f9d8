#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "qtsallis/classical_info.hpp"
#include "qtsallis/density_matrix.hpp"
#include "qtsallis/quantum_state.hpp"
#include "qtsallis/werner_family.hpp"
#include "support/test_support.hpp"

using namespace qtsallis;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

DensityMatrix basis_projector(std::size_t dim, std::size_t index) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return DensityMatrix::pure({dim}, v);
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("density matrix validation") {
  ComplexMatrix not_hermitian(2, 2);
  not_hermitian << 0.5, 0.1, 0.0, 0.5;
  CHECK_THROWS_AS(DensityMatrix({2}, not_hermitian), ValidationError);
  ComplexMatrix bad_trace = ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix({2}, bad_trace), ValidationError);
  ComplexMatrix not_psd(2, 2);
  not_psd << 1.2, 0.0, 0.0, -0.2;
  CHECK_THROWS_AS(DensityMatrix({2}, not_psd), ValidationError);
  CHECK_THROWS_AS(DensityMatrix({2, 2}, ComplexMatrix::Identity(3, 3) / 3.0), ValidationError);
}

TEST_CASE("tensor product") {
  const auto mixed = DensityMatrix::maximally_mixed({2});
  const auto both = tensor_product(mixed, mixed);
  CHECK(both.dims() == std::vector<std::size_t>{2, 2});
  CHECK(max_abs_diff(both.matrix(), ComplexMatrix::Identity(4, 4) / 4.0) < 1e-15);

  const auto ket01 = tensor_product(basis_projector(2, 0), basis_projector(2, 1));
  CHECK(std::abs(ket01(1, 1) - 1.0) < 1e-15);
  CHECK(std::abs(ket01.matrix().trace() - 1.0) < 1e-15);

  test_support::Rng rng(17);
  const auto rho = rng.density({2});
  const auto sigma = rng.density({3});
  const auto prod = tensor_product(rho, sigma);
  CHECK(std::abs(prod.matrix().trace() - 1.0) < 1e-12);
  CHECK(max_abs_diff(prod.matrix(), prod.matrix().adjoint()) < 1e-12);
  CHECK(spectrum_of(prod).levels().back().eigenvalue >= 0.0);
  // Revalidating through the public constructor exercises the PSD check.
  CHECK_NOTHROW(DensityMatrix(prod.dims(), prod.matrix()));

  const auto big = DensityMatrix::maximally_mixed({64, 64});
  CHECK_THROWS_AS(tensor_product(big, mixed), CapacityError);
}

TEST_CASE("partial trace") {
  test_support::Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = rng.density({2});
    const auto sigma = rng.density({3});
    const auto prod = tensor_product(rho, sigma);
    CHECK(max_abs_diff(partial_trace(prod, {0}).matrix(), rho.matrix()) < 1e-12);
    CHECK(max_abs_diff(partial_trace(prod, {1}).matrix(), sigma.matrix()) < 1e-12);
  }

  const auto ghz = DensityMatrix::pure({2, 2, 2}, ghz_vector(2, 3));
  CHECK(max_abs_diff(partial_trace(ghz, {2}).matrix(), ComplexMatrix::Identity(2, 2) / 2.0) < 1e-15);

  const auto rho3 = rng.density({2, 2, 2});
  const auto bc = partial_trace(rho3, {1, 2});
  CHECK(bc.dims() == std::vector<std::size_t>{2, 2});
  CHECK(std::abs(bc.matrix().trace() - 1.0) < 1e-12);
  CHECK(max_abs_diff(bc.matrix(), bc.matrix().adjoint()) < 1e-12);

  // Keeping subsystems out of order gives the same reduced state.
  CHECK(max_abs_diff(partial_trace(rho3, {2, 1}).matrix(), bc.matrix()) < 1e-15);

  CHECK_THROWS_AS(partial_trace(rho3, std::span<const std::size_t>{}), ValidationError);
  CHECK_THROWS_AS(partial_trace(rho3, {3}), ValidationError);
  CHECK_THROWS_AS(partial_trace(rho3, {1, 1}), ValidationError);
}

TEST_CASE("spectrum of a density matrix") {
  const auto s = spectrum_of(DensityMatrix::maximally_mixed({5}));
  REQUIRE(s.size() == 1);
  CHECK_THAT(s[0].eigenvalue, WithinAbs(0.2, 1e-15));
  CHECK(s[0].multiplicity == 5);

  const auto pure = spectrum_of(basis_projector(4, 2));
  REQUIRE(pure.size() == 2);
  CHECK_THAT(pure[0].eigenvalue, WithinAbs(1.0, 1e-15));
  CHECK(pure[1].multiplicity == 3);

  const auto w = spectrum_of(werner_density(WernerParams(2, 3, 0.4)));
  REQUIRE(w.size() == 2);
  CHECK_THAT(w[0].eigenvalue, WithinAbs(0.475, 1e-14));
  CHECK(w[0].multiplicity == 1);
  CHECK_THAT(w[1].eigenvalue, WithinAbs(0.075, 1e-14));
  CHECK(w[1].multiplicity == 7);
}

TEST_CASE("spectrum construction rules") {
  const Spectrum merged{{0.25, 2}, {0.25 + 5e-10, 1}, {0.25 - 5e-10, 1}};
  REQUIRE(merged.size() == 1);
  CHECK(merged[0].multiplicity == 4);

  const Spectrum clamped{{1.0, 1}, {-5e-11, 3}};
  CHECK(clamped[1].eigenvalue == 0.0);
  CHECK_THROWS_AS((Spectrum{{1.0 + 1e-3, 1}, {-1e-3, 1}}), ValidationError);
  CHECK_THROWS_AS((Spectrum{{0.3, 2}}), ValidationError);

  const Spectrum unsorted{{0.1, 2}, {0.8, 1}};
  CHECK(unsorted[0].eigenvalue == 0.8);
  CHECK_THAT(unsorted[1].log_multiplicity, WithinAbs(std::log(2.0), 1e-15));
}

TEST_CASE("q-trace in the log domain") {
  CHECK_THAT(q_trace(Spectrum{{0.5, 2}}, EntropicIndex(2)), WithinAbs(std::log(0.5), 1e-15));
  const Spectrum werner{{0.075, 7}, {0.475, 1}};
  CHECK_THAT(q_trace(werner, EntropicIndex(1)), WithinAbs(0.0, 1e-15));
  CHECK_THAT(q_trace(werner, EntropicIndex(100)), WithinRel(100.0 * std::log(0.475), 1e-6));
  // q = 1e6: eigenvalue^q underflows, the log-domain sum does not.
  const double huge = q_trace(werner, EntropicIndex(1e6));
  CHECK(std::isfinite(huge));
  CHECK_THAT(huge, WithinRel(1e6 * std::log(0.475), 1e-12));

  test_support::Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = Spectrum::from_eigenvalues(rng.probabilities(6));
    CHECK_THAT(q_trace(s, EntropicIndex(1.0)), WithinAbs(0.0, 1e-14));
  }
}

TEST_CASE("quantum Tsallis entropy") {
  for (std::uint64_t d : {2u, 3u, 8u}) {
    const Spectrum mixed{{1.0 / static_cast<double>(d), d}};
    for (double q : {0.5, 2.0, 5.0}) {
      const double expected = (std::pow(static_cast<double>(d), 1.0 - q) - 1.0) / (1.0 - q);
      CHECK_THAT(quantum_tsallis(mixed, EntropicIndex(q)), WithinAbs(expected, 1e-14));
    }
    CHECK_THAT(quantum_tsallis(mixed, EntropicIndex(1)), WithinAbs(std::log(static_cast<double>(d)), 1e-14));
  }
  const Spectrum pure{{1.0, 1}, {0.0, 3}};
  for (double q : {0.5, 1.0, 2.0, 50.0}) CHECK(quantum_tsallis(pure, EntropicIndex(q)) == 0.0);
  CHECK_THAT(quantum_tsallis(Spectrum{{0.075, 7}, {0.475, 1}}, EntropicIndex(2)), WithinAbs(0.735, 1e-15));
}

TEST_CASE("pseudoadditivity of product states") {
  test_support::Rng rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const auto rho = rng.density({2});
    const auto sigma = rng.density({3});
    const auto s_rho = spectrum_of(rho);
    const auto s_sigma = spectrum_of(sigma);
    const auto s_prod = spectrum_of(tensor_product(rho, sigma));
    for (double qv : {0.5, 1.0, 2.0, 5.0}) {
      const EntropicIndex q(qv);
      const double composed =
          classical::compose_pseudoadditive(quantum_tsallis(s_rho, q), quantum_tsallis(s_sigma, q), q);
      CHECK_THAT(quantum_tsallis(s_prod, q), WithinAbs(composed, 1e-10));
      // Product state: conditioning on the first factor leaves the second.
      CHECK_THAT(quantum_conditional(s_prod, s_rho, q), WithinAbs(quantum_tsallis(s_sigma, q), 1e-10));
    }
  }
}

TEST_CASE("quantum conditional entropy") {
  const Spectrum ghz{{1.0, 1}};
  const Spectrum half{{0.5, 2}};
  CHECK_THAT(quantum_conditional(ghz, half, EntropicIndex(2)), WithinAbs(-1.0, 1e-15));

  for (double x : {0.0, 0.2, 0.4, 0.8, 1.0})
    for (double q : {0.5, 2.0, 3.0, 7.0}) {
      const Spectrum joint{{(1 - x) / 8, 7}, {(1 + 7 * x) / 8, 1}};
      const Spectrum bc{{(1 - x) / 4, 2}, {(1 + x) / 4, 2}};
      CHECK_THAT(quantum_conditional(joint, bc, EntropicIndex(q)),
                 WithinAbs(test_support::tripartite_a_given_bc(x, q), 1e-12));
    }
}

TEST_CASE("pure GHZ states have negative conditional entropy") {
  for (unsigned N : {2u, 3u, 4u})
    for (unsigned n : {2u, 3u, 4u}) {
      if (std::pow(N, n) > 256) continue;
      const auto rho = DensityMatrix::pure(std::vector<std::size_t>(n, N), ghz_vector(N, n));
      std::vector<std::size_t> rest;
      for (unsigned k = 1; k < n; ++k) rest.push_back(k);
      const auto joint = spectrum_of(rho);
      const auto marginal = spectrum_of(partial_trace(rho, rest));
      for (double q : {0.1, 0.5, 1.0, 2.0, 10.0, 100.0}) CHECK(quantum_conditional(joint, marginal, EntropicIndex(q)) < 0.0);
    }
}

TEST_CASE("separable state construction") {
  const SeparableDecomposition single(ProbDist({1.0}), {ProbDist::delta(2, 0)}, {ProbDist::delta(2, 0)});
  const auto ket00 = separable_state(single);
  CHECK(std::abs(ket00(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(ket00.matrix().trace() - 1.0) < 1e-15);

  const SeparableDecomposition bell_diag(ProbDist({0.5, 0.5}), {ProbDist::delta(2, 0), ProbDist::delta(2, 1)},
                                         {ProbDist::delta(2, 0), ProbDist::delta(2, 1)});
  const auto mix = separable_state(bell_diag);
  const std::vector<double> diag{0.5, 0.0, 0.0, 0.5};
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(mix(i, i) - diag[i]) < 1e-15);
  for (double q : {0.5, 1.0, 2.0, 10.0}) CHECK_THAT(separable_conditional_direct(bell_diag, EntropicIndex(q)), WithinAbs(0.0, 1e-15));

  const ProbDist s({0.2, 0.3, 0.5});
  const SeparableDecomposition product(ProbDist({1.0}), {ProbDist({0.4, 0.6})}, {s});
  for (double q : {0.5, 1.0, 2.0, 10.0})
    CHECK_THAT(separable_conditional_direct(product, EntropicIndex(q)),
               WithinAbs(classical::tsallis_entropy(s, EntropicIndex(q)), 1e-14));

  CHECK_THROWS_AS(SeparableDecomposition(ProbDist({0.5, 0.5}), {ProbDist({1.0, 0.0})}, {s, s}), ValidationError);
  CHECK_THROWS_AS(SeparableDecomposition(ProbDist({0.5, 0.5}), {ProbDist({1.0, 0.0}), ProbDist({1.0, 0.0, 0.0})}, {s, s}),
                  ValidationError);
}

TEST_CASE("separable conditional entropy: direct form vs dense spectra") {
  test_support::Rng rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ProbDist> ra, sb;
    for (int l = 0; l < 3; ++l) {
      ra.emplace_back(rng.probabilities(2));
      sb.emplace_back(rng.probabilities(3));
    }
    const SeparableDecomposition d(ProbDist(rng.probabilities(3)), ra, sb);
    const auto rho = separable_state(d);
    CHECK_NOTHROW(DensityMatrix(rho.dims(), rho.matrix()));
    const auto joint = spectrum_of(rho);
    const auto marginal = spectrum_of(partial_trace(rho, {0}));
    for (double q : {0.5, 2.0, 3.0, 10.0, 100.0}) {
      const double direct = separable_conditional_direct(d, EntropicIndex(q));
      CHECK(direct >= -1e-12);
      CHECK_THAT(direct, WithinAbs(quantum_conditional(joint, marginal, EntropicIndex(q)), 1e-10));
    }
  }
}

TEST_CASE("separable conditional entropy skips labels with no weight") {
  // Label a = 2 never occurs.
  const SeparableDecomposition d(ProbDist({0.5, 0.5}), {ProbDist({0.5, 0.5, 0.0}), ProbDist({1.0, 0.0, 0.0})},
                                 {ProbDist({0.3, 0.7}), ProbDist({0.9, 0.1})});
  const auto rho = separable_state(d);
  const auto joint = spectrum_of(rho);
  const auto marginal = spectrum_of(partial_trace(rho, {0}));
  for (double q : {0.5, 2.0, 7.0}) {
    const double direct = separable_conditional_direct(d, EntropicIndex(q));
    CHECK(std::isfinite(direct));
    CHECK_THAT(direct, WithinAbs(quantum_conditional(joint, marginal, EntropicIndex(q)), 1e-12));
  }
}
