#include <bit>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"
#include "xsl/densify.hpp"
#include "xsl/error.hpp"

using namespace xsl;

namespace {

// Fewest rows+columns whose removal leaves a nonempty matrix with every cell
// >= min_cell, found by enumerating every removal set.
std::size_t brute_min_removals(const CoocMatrix& m, Count min_cell) {
  const auto r = m.num_actions(), c = m.num_objects();
  std::size_t best = r + c;
  for (std::uint32_t rows = 0; rows < (1u << r); ++rows) {
    for (std::uint32_t cols = 0; cols < (1u << c); ++cols) {
      if (std::popcount(rows) == static_cast<int>(r) || std::popcount(cols) == static_cast<int>(c)) continue;
      bool ok = true;
      for (std::size_t i = 0; i < r && ok; ++i)
        for (std::size_t j = 0; j < c && ok; ++j)
          if (!(rows >> i & 1) && !(cols >> j & 1) && m.count(i, j) < min_cell) ok = false;
      if (ok) best = std::min<std::size_t>(best, std::popcount(rows) + std::popcount(cols));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("fractions compare exactly") {
  CHECK(Fraction::from_decimal(0.4) == Fraction{2, 5});
  CHECK(Fraction::from_decimal(0.8) == Fraction{4, 5});
  CHECK(Fraction{2, 5}.met_by(2, 5));
  CHECK_FALSE(Fraction{2, 5}.met_by(1, 3));
  CHECK(Fraction{4, 5}.met_by(4, 5));
  CHECK_FALSE(Fraction{4, 5}.met_by(3, 4));
  CHECK_THROWS_AS(Fraction::from_decimal(-0.1), Error);
  DensifyConfig bad;
  bad.object_nonfloor_frac = Fraction{6, 5};
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("step 1 drops a light column and nothing else") {
  const auto m = CoocMatrix::from_counts({"a", "b", "c"}, {"pen", "key", "cup"},
                                         {{40, 30, 40}, {40, 30, 40}, {40, 30, 40}});
  const auto r = densify(m);
  CHECK(r.matrix.objects() == std::vector<std::string>{"pen", "cup"});
  CHECK(r.matrix.actions() == m.actions());
  REQUIRE(r.log.size() == 1);
  CHECK(r.log[0].step == 1);
  CHECK(r.log[0].label == "key");
  CHECK(densify_summary(r.log) == "pass 1 step 1: removed object 'key' (column total 90 < 100)\n");
}

TEST_CASE("a dense 5x30 matrix is a fixed point") {
  std::mt19937_64 rng(1);
  std::vector<std::vector<Count>> counts(5, std::vector<Count>(30));
  for (auto& row : counts)
    for (auto& v : row) v = 20 + rng() % 30;  // >= max(15, 10); column totals >= 100
  const auto m = CoocMatrix::from_counts(test::labels("a", 5), test::labels("o", 30), counts);
  const auto r = densify(m);
  CHECK(r.matrix.same_counts(m));
  CHECK(r.log.empty());
  CHECK(densify_summary(r.log) == "no removals\n");
}

TEST_CASE("step 4 tie goes to the line with the smaller total; brute force confirms minimality") {
  DensifyConfig cfg;
  cfg.cell_floor = 5;  // so the matrix passes steps 1-3
  const auto m = CoocMatrix::from_counts({"r0", "r1"}, {"c0", "c1", "c2"}, {{60, 70, 5}, {50, 40, 120}});
  const auto r = densify(m, cfg);
  REQUIRE(r.log.size() == 1);
  CHECK(r.log[0].step == 4);
  CHECK(r.log[0].axis == Axis::object);  // c2 total 125 < r0 total 135
  CHECK(r.log[0].label == "c2");
  CHECK(brute_min_removals(m, cfg.min_cell) == 1);
  for (std::size_t i = 0; i < r.matrix.num_actions(); ++i)
    for (std::size_t j = 0; j < r.matrix.num_objects(); ++j) CHECK(r.matrix.count(i, j) >= 10);

  // Same violation pattern, but now the row is lighter.
  const auto m2 = CoocMatrix::from_counts({"r0", "r1"}, {"c0", "c1", "c2"}, {{20, 20, 5}, {80, 80, 120}});
  const auto r2 = densify(m2, cfg);
  REQUIRE(!r2.log.empty());
  CHECK(r2.log[0].step == 4);
  CHECK(r2.log[0].axis == Axis::action);
  CHECK(r2.log[0].label == "r0");
}

TEST_CASE("removals in step 4 can re-trigger step 1, handled by another pass") {
  // r4 holds 40 of column A's 100 and two sub-10 cells; step 4 removes it,
  // leaving A at 60. A single pass would stop there and not be idempotent.
  const auto m = CoocMatrix::from_counts(
      test::labels("r", 5), {"A", "B", "C", "D", "E"},
      {{15, 25, 25, 25, 25}, {15, 25, 25, 25, 25}, {15, 25, 25, 25, 25}, {15, 25, 25, 25, 25}, {40, 5, 5, 15, 15}});
  const auto r = densify(m);
  REQUIRE(r.log.size() == 2);
  CHECK(r.log[0].step == 4);
  CHECK(r.log[0].label == "r4");
  CHECK(r.log[1].pass == 2);
  CHECK(r.log[1].step == 1);
  CHECK(r.log[1].label == "A");
  CHECK(densify(r.matrix).log.empty());
}

TEST_CASE("everything eliminated is an error") {
  const auto m = CoocMatrix::from_counts({"a"}, {"x", "y"}, {{3, 4}});
  CHECK_THROWS_AS(densify(m), Error);
  CHECK_THROWS_AS(densify(CoocMatrix{}), Error);
}

TEST_CASE("property: floor, subset, idempotence on random matrices") {
  std::mt19937_64 rng(2024);
  int nonempty = 0;
  for (int round = 0; round < 500; ++round) {
    const auto m = test::random_matrix(rng, 1 + rng() % 8, 1 + rng() % 40);
    DensifyConfig cfg;
    if (rng() % 2) {
      cfg.min_object_total = rng() % 150;
      cfg.cell_floor = rng() % 30;
      cfg.min_cell = rng() % 20;
    }
    DensifyResult r;
    try {
      r = densify(m, cfg);
    } catch (const Error&) {
      continue;
    }
    ++nonempty;
    for (std::size_t i = 0; i < r.matrix.num_actions(); ++i)
      for (std::size_t j = 0; j < r.matrix.num_objects(); ++j) CHECK(r.matrix.count(i, j) >= cfg.min_cell);
    CHECK(oracle::is_submatrix(r.matrix, m));
    const auto again = densify(r.matrix, cfg);
    CHECK(again.matrix.same_counts(r.matrix));
    CHECK(again.log.empty());
  }
  CHECK(nonempty > 100);
}

TEST_CASE("small random cases: greedy step 4 against brute force") {
  // Steps 1-3 disabled so only the greedy removal acts.
  DensifyConfig cfg;
  cfg.min_object_total = 0;
  cfg.cell_floor = 0;
  std::mt19937_64 rng(77);
  for (int round = 0; round < 300; ++round) {
    const auto m = test::random_matrix(rng, 1 + rng() % 4, 1 + rng() % 4);
    const auto best = brute_min_removals(m, cfg.min_cell);
    const bool feasible = best < m.num_actions() + m.num_objects();
    try {
      const auto r = densify(m, cfg);
      CHECK(feasible);
      CHECK(r.log.size() >= best);
      for (std::size_t i = 0; i < r.matrix.num_actions(); ++i)
        for (std::size_t j = 0; j < r.matrix.num_objects(); ++j) CHECK(r.matrix.count(i, j) >= cfg.min_cell);
    } catch (const Error&) {
      // The greedy rule is not exhaustive: it may empty a matrix that still
      // has a valid submatrix, but never succeeds on an infeasible one.
    }
  }
}

TEST_CASE("property: with steps 2-4 inert, raising min_object_total never adds columns") {
  std::mt19937_64 rng(99);
  int compared = 0;
  for (int round = 0; round < 500; ++round) {
    const auto m = test::random_matrix(rng, 2 + rng() % 6, 2 + rng() % 30);
    DensifyConfig lo;
    lo.cell_floor = 0;
    lo.min_cell = 0;
    lo.min_object_total = rng() % 120;
    DensifyConfig hi = lo;
    hi.min_object_total = lo.min_object_total + 1 + rng() % 100;
    try {
      const auto hi_cols = densify(m, hi).matrix.objects();
      const auto lo_cols = densify(m, lo).matrix.objects();
      ++compared;
      for (const auto& c : hi_cols) CHECK(std::find(lo_cols.begin(), lo_cols.end(), c) != lo_cols.end());
    } catch (const Error&) {
    }
  }
  CHECK(compared > 50);
}

TEST_CASE("the full procedure is not monotone in min_object_total") {
  // Dropping o0 in step 1 changes the row fractions of step 2, which removes
  // a1 and lets o3 pass step 3. Kept as a frozen counterexample.
  const auto m = CoocMatrix::from_counts(test::labels("a", 4), test::labels("o", 4),
                                         {{0, 0, 60, 10}, {30, 30, 10, 0}, {20, 70, 0, 50}, {40, 0, 50, 70}});
  DensifyConfig lo, hi;
  lo.min_object_total = 0;
  hi.min_object_total = 100;
  CHECK(densify(m, lo).matrix.objects() == std::vector<std::string>{"o0"});
  CHECK(densify(m, hi).matrix.objects() == std::vector<std::string>{"o3"});
}
