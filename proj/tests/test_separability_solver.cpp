#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "qtsallis/density_matrix.hpp"
#include "qtsallis/separability_solver.hpp"
#include "support/test_support.hpp"

using namespace qtsallis;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<EntropicIndex> indices(std::initializer_list<double> qs) {
  std::vector<EntropicIndex> out;
  for (double q : qs) out.emplace_back(q);
  return out;
}

// Von Neumann conditional entropy S(A|B,C) of the 2x2x2 Werner state from a
// dense eigendecomposition.
double dense_von_neumann_a_given_bc(double x) {
  const auto rho = test_support::werner_entries(2, 3, x);
  Eigen::MatrixXcd bc = rho.block(0, 0, 4, 4) + rho.block(4, 4, 4, 4);
  auto entropy = [](const std::vector<double>& ev) {
    double h = 0.0;
    for (double v : ev)
      if (v > 1e-15) h -= v * std::log(v);
    return h;
  };
  return entropy(test_support::eigenvalues(rho)) - entropy(test_support::eigenvalues(bc));
}

} // namespace

TEST_CASE("entropy sign") {
  CHECK(entropy_sign(WernerParams(2, 3, 0.0), EntropicIndex(5)) == 1);
  CHECK(entropy_sign(WernerParams(2, 3, 1.0), EntropicIndex(5)) == -1);
  CHECK(entropy_sign(WernerParams(2, 3, 1.0), EntropicIndex(0.5)) == -1);
  CHECK(entropy_sign(WernerParams(2, 3, 0.0), EntropicIndex(1)) == 1);
  CHECK(entropy_sign(WernerParams(2, 3, 1.0), EntropicIndex(1)) == -1);

  // Straddling the asymptotic boundary of the two-qubit family at large q.
  CHECK(entropy_sign(WernerParams(2, 2, 1.0 / 3.0 - 1e-3), EntropicIndex(1e4)) == 1);
  CHECK(entropy_sign(WernerParams(2, 2, 1.0 / 3.0 + 1e-3), EntropicIndex(1e4)) == -1);
}

TEST_CASE("entropy sign agrees with the direct conditional entropy") {
  for (unsigned N : {2u, 3u, 4u})
    for (unsigned n : {2u, 3u, 4u})
      for (double q : {0.5, 2.0, 10.0, 100.0})
        for (int i = 0; i <= 20; ++i) {
          const WernerParams p(N, n, i / 20.0);
          const double value = conditional_entropy_closed(p, EntropicIndex(q));
          if (!std::isfinite(value) || std::abs(value) < 1e-13) continue;
          CHECK(entropy_sign(p, EntropicIndex(q)) == (value > 0 ? 1 : -1));
        }
}

TEST_CASE("threshold at a single q") {
  const auto large_q = threshold_for_q(2, 3, EntropicIndex(1e4));
  REQUIRE(large_q.x_star);
  CHECK(std::abs(*large_q.x_star - 0.2) < 1e-3);
  CHECK(large_q.bracket_width <= 1e-12);
  CHECK(large_q.sign_changes == 1);
  CHECK(large_q.converged());

  const auto two_qubit = threshold_for_q(2, 2, EntropicIndex(1e4));
  REQUIRE(two_qubit.x_star);
  CHECK(std::abs(*two_qubit.x_star - 1.0 / 3.0) < 1e-3);

  // q = 1: bisect the dense von Neumann conditional entropy independently.
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (dense_von_neumann_a_given_bc(mid) > 0 ? lo : hi) = mid;
  }
  const auto vn = threshold_for_q(2, 3, EntropicIndex(1.0));
  REQUIRE(vn.x_star);
  CHECK(std::abs(*vn.x_star - 0.5 * (lo + hi)) < 1e-8);
  CHECK(std::abs(*vn.x_star - 0.6829311050610786) < 1e-8);
}

TEST_CASE("threshold root is bracketed") {
  for (unsigned N : {2u, 3u, 5u})
    for (unsigned n : {2u, 3u, 4u})
      for (double q : {0.3, 1.0, 2.0, 10.0, 1e3}) {
        const auto pt = threshold_for_q(N, n, EntropicIndex(q));
        REQUIRE(pt.x_star);
        CHECK(pt.bracket_width <= 1e-12);
        const double x = *pt.x_star;
        const int below = entropy_sign(WernerParams(N, n, std::max(0.0, x - 1e-9)), EntropicIndex(q));
        const int above = entropy_sign(WernerParams(N, n, std::min(1.0, x + 1e-9)), EntropicIndex(q));
        CHECK((below * above < 0 || below == 0 || above == 0));
      }
}

TEST_CASE("threshold with a coarse grid still bisects to tolerance") {
  const auto pt = threshold_for_q(2, 3, EntropicIndex(2.0), ThresholdOptions{2, 1e-12});
  const auto fine = threshold_for_q(2, 3, EntropicIndex(2.0));
  REQUIRE(pt.x_star);
  REQUIRE(fine.x_star);
  CHECK_THAT(*pt.x_star, WithinAbs(*fine.x_star, 1e-11));
  CHECK_THROWS_AS(threshold_for_q(2, 3, EntropicIndex(2.0), ThresholdOptions{1, 1e-12}), ValidationError);
  CHECK_THROWS_AS(threshold_for_q(2, 3, 3, EntropicIndex(2.0)), ValidationError);
}

TEST_CASE("threshold curves decrease in q and approach the asymptote from above") {
  const auto grid = indices({1, 2, 5, 10, 100, 1e4});
  for (auto [N, n] : std::vector<std::pair<unsigned, unsigned>>{{2, 3}, {2, 2}, {3, 2}}) {
    const auto curve = threshold_curve(N, n, grid);
    REQUIRE(curve.points.size() == grid.size());
    CHECK_FALSE(curve.monotonicity_violation());
    CHECK(std::abs(*curve.points.back().x_star - asymptotic_threshold(N, n)) < 1e-3);
  }

  for (auto [N, n] : std::vector<std::pair<unsigned, unsigned>>{{2, 2}, {2, 3}, {3, 2}, {2, 4}, {3, 3}}) {
    double previous_gap = 1.0;
    for (double q : {10.0, 100.0, 1e3, 1e4}) {
      const double gap = *threshold_for_q(N, n, EntropicIndex(q)).x_star - asymptotic_threshold(N, n);
      CHECK(gap > 0.0);
      CHECK(gap < previous_gap);
      previous_gap = gap;
    }
  }
}

TEST_CASE("threshold curve rejects unsorted grids and reports violations") {
  CHECK_THROWS_AS(threshold_curve(2, 3, indices({2, 1})), ValidationError);
  CHECK_THROWS_AS(threshold_curve(2, 3, indices({2, 2})), ValidationError);

  ThresholdCurve fake{2, 3, {}};
  for (double x : {0.5, 0.4, 0.45}) {
    ThresholdPoint pt;
    pt.x_star = x;
    fake.points.push_back(pt);
  }
  const auto bad = fake.monotonicity_violation();
  REQUIRE(bad);
  CHECK(bad->first == 1);
  CHECK(bad->second == 2);

  const MonotonicityError err(fake, 1, 2);
  CHECK(err.offending_pair() == std::pair<std::size_t, std::size_t>{1, 2});
  CHECK(err.curve().points.size() == 3);
}

TEST_CASE("asymptotic thresholds") {
  CHECK(asymptotic_threshold(2, 3) == 0.2);
  CHECK(asymptotic_threshold(2, 2) == 1.0 / 3.0);
  CHECK(asymptotic_threshold(3, 4) == 1.0 / 28.0);
  for (unsigned N : {2u, 3u, 5u, 10u})
    for (unsigned n : {2u, 3u, 4u, 6u}) CHECK(asymptotic_threshold(N, n) == 1.0 / (1.0 + std::pow(N, n - 1)));

  CHECK(asymptotic_threshold_block(2, 3, 1) == 3.0 / 7.0);
  CHECK(asymptotic_threshold_block(2, 3, 2) == 0.2);
  for (unsigned N : {2u, 3u, 4u})
    for (unsigned n : {2u, 3u, 5u}) {
      CHECK(asymptotic_threshold_block(N, n, n - 1) == asymptotic_threshold(N, n));
      for (unsigned k = 1; k < n - 1; ++k) CHECK(asymptotic_threshold_block(N, n, k) > asymptotic_threshold(N, n));
    }
  CHECK_THROWS_AS(asymptotic_threshold_block(2, 3, 0), ValidationError);
  CHECK_THROWS_AS(asymptotic_threshold(1, 3), ValidationError);
}

TEST_CASE("block threshold at large q matches its asymptote") {
  const auto pt = threshold_for_q(2, 3, 1, EntropicIndex(1e4));
  REQUIRE(pt.x_star);
  CHECK(std::abs(*pt.x_star - 3.0 / 7.0) < 1e-3);
}
