#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "support.hpp"
#include "xsl/apportion.hpp"
#include "xsl/design.hpp"
#include "xsl/error.hpp"

using namespace xsl;

namespace {

CoocMatrix uniform_matrix(std::size_t actions, std::size_t objects, Count per_cell) {
  std::vector<std::vector<Count>> counts(actions, std::vector<Count>(objects, per_cell));
  return build_cooc(test::inventory_from_counts(test::labels("a", actions), test::labels("o", objects), counts));
}

}  // namespace

TEST_CASE("apportion: 75 over four equal cells") {
  const std::vector<std::uint64_t> w(4, 1);
  // 75/4 = 18.75 each; three remainders go to the first three cells.
  CHECK(apportion(75, w) == std::vector<std::uint64_t>{19, 19, 19, 18});
  const std::vector<std::uint64_t> split{80, 20};
  CHECK(apportion(1, split) == std::vector<std::uint64_t>{1, 0});
  CHECK(apportion(7, split) == std::vector<std::uint64_t>{6, 1});  // 5.6 / 1.4
  CHECK(apportion(3, split) == std::vector<std::uint64_t>{2, 1});  // 2.4 / 0.6
  CHECK_THROWS_AS(apportion(3, std::vector<std::uint64_t>{0, 0}), Error);
}

TEST_CASE("property: apportion conserves totals and stays within one of the exact quota") {
  std::mt19937_64 rng(8);
  for (int round = 0; round < 2000; ++round) {
    std::vector<std::uint64_t> w(1 + rng() % 8);
    for (auto& x : w) x = rng() % 50;
    w[rng() % w.size()] += 1;
    const auto total = rng() % 1000;
    const auto s = apportion(total, w);
    CHECK(std::accumulate(s.begin(), s.end(), std::uint64_t{0}) == total);
    const auto W = std::accumulate(w.begin(), w.end(), std::uint64_t{0});
    for (std::size_t k = 0; k < w.size(); ++k) {
      // floor(exact) <= share <= ceil(exact), checked in integers
      CHECK(s[k] * W + (W - 1) >= total * w[k]);
      CHECK(s[k] * W <= total * w[k] + (W - 1));
    }
  }
}

TEST_CASE("action budgets") {
  CHECK(action_budgets(375, 5) == std::vector<std::uint64_t>(5, 75));
  CHECK(action_budgets(7, 3) == std::vector<std::uint64_t>{3, 2, 2});
  CHECK_THROWS_AS(action_budgets(7, 0), Error);
}

TEST_CASE("unique-only design is diagonal") {
  const auto m = uniform_matrix(3, 8, 20);
  DesignSpec spec;
  spec.num_common = 0;
  spec.num_unique_per_action = 1;
  spec.total_train = 30;
  spec.unseen_reserve = std::vector<std::string>{"o7"};
  const auto roles = assign_roles(m, spec);
  CHECK(roles.common_objects.empty());
  std::set<std::string> uniq;
  for (const auto& a : roles.actions) {
    REQUIRE(roles.unique_objects.at(a).size() == 1);
    uniq.insert(roles.unique_objects.at(a)[0]);
  }
  CHECK(uniq.size() == 3);
  CHECK(!uniq.count("o7"));

  const auto sample = sample_training_set(m, roles, spec);
  // Each unique object is trained with exactly its own action.
  for (const auto& cell : sample.cells) {
    CHECK(roles.unique_objects.at(cell.action) == std::vector<std::string>{cell.object});
  }
}

TEST_CASE("common-only design puts each object with every action") {
  const auto m = uniform_matrix(3, 8, 20);
  DesignSpec spec;
  spec.num_common = 2;
  spec.num_unique_per_action = 0;
  spec.total_train = 30;
  spec.unseen_reserve = std::vector<std::string>{"o6", "o7"};
  const auto roles = assign_roles(m, spec);
  REQUIRE(roles.common_objects.size() == 2);
  const auto sample = sample_training_set(m, roles, spec);
  for (const auto& o : roles.common_objects) {
    std::set<std::string> with;
    for (const auto& cell : sample.cells)
      if (cell.object == o && cell.quota > 0) with.insert(cell.action);
    CHECK(with.size() == 3);
  }
}

TEST_CASE("insufficient pool") {
  const auto m = uniform_matrix(3, 5, 20);
  DesignSpec spec;
  spec.num_common = 2;
  spec.num_unique_per_action = 1;
  spec.total_train = 30;
  spec.unseen_reserve = std::vector<std::string>{"o3", "o4"};  // pool of 3, design needs 5
  CHECK_THROWS_WITH_AS(assign_roles(m, spec), doctest::Contains("insufficient object pool"), Error);
}

TEST_CASE("unsupported candidates are skipped; too few supported is an error") {
  // o0 lacks instances for a1, so it can never be common.
  const auto inv = test::inventory_from_counts({"a0", "a1"}, {"o0", "o1", "o2"}, {{30, 30, 30}, {0, 30, 30}});
  const auto m = build_cooc(inv);
  DesignSpec spec;
  spec.num_common = 2;
  spec.num_unique_per_action = 0;
  spec.total_train = 20;
  spec.unseen_reserve = std::vector<std::string>{};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    spec.seed = seed;
    auto common = assign_roles(m, spec).common_objects;
    std::sort(common.begin(), common.end());
    CHECK(common == std::vector<std::string>{"o1", "o2"});
  }
  spec.num_common = 3;
  CHECK_THROWS_WITH_AS(assign_roles(m, spec), doctest::Contains("support"), Error);
}

TEST_CASE("default 375 over five actions and four common objects") {
  const auto m = uniform_matrix(5, 30, 40);
  DesignSpec spec;
  spec.num_common = 4;
  spec.num_unique_per_action = 0;
  const auto roles = assign_roles(m, spec);
  CHECK(roles.unseen_objects == std::vector<std::string>(m.objects().end() - 10, m.objects().end()));
  const auto sample = sample_training_set(m, roles, spec);
  for (const auto& a : roles.actions) {
    CHECK(sample.action_totals.at(a) == 75);
    std::vector<std::uint64_t> q;
    for (const auto& cell : sample.cells)
      if (cell.action == a) q.push_back(cell.quota);
    CHECK(q == std::vector<std::uint64_t>{19, 19, 19, 18});
  }
  CHECK(sample.ids().size() == 375);
}

TEST_CASE("one instance per action") {
  const auto m = uniform_matrix(5, 12, 3);
  DesignSpec spec;
  spec.num_common = 1;
  spec.num_unique_per_action = 0;
  spec.total_train = 5;
  const auto sample = sample_training_set(m, assign_roles(m, spec), spec);
  REQUIRE(sample.cells.size() == 5);
  for (const auto& cell : sample.cells) CHECK(cell.ids.size() == 1);
}

TEST_CASE("cell shortfall: error names the cell; spill redistributes") {
  const auto inv = test::inventory_from_counts({"a0"}, {"o0", "o1", "o2", "o3"}, {{10, 40, 40, 40}});
  const auto m = build_cooc(inv);
  RoleAssignment roles{{"a0"}, {"o0", "o1", "o2", "o3"}, {}, {}};
  DesignSpec spec;
  spec.num_common = 4;
  spec.num_unique_per_action = 0;
  spec.total_train = 75;
  CHECK_THROWS_WITH_AS(sample_training_set(m, roles, spec), doctest::Contains("(a0, o0)"), Error);

  spec.shortfall = ShortfallPolicy::spill;
  const auto s = sample_training_set(m, roles, spec);
  std::vector<std::uint64_t> q;
  for (const auto& c : s.cells) q.push_back(c.quota);
  // o0 capped at 10; 9 residual spread one at a time over the most spare capacity
  CHECK(q == std::vector<std::uint64_t>{10, 22, 22, 21});
  CHECK(s.action_totals.at("a0") == 75);

  spec.total_train = 200;  // more than the row holds
  CHECK_THROWS_AS(sample_training_set(m, roles, spec), Error);
}

TEST_CASE("budget smaller than the number of training cells is rejected") {
  const auto m = uniform_matrix(5, 30, 40);
  DesignSpec spec;
  spec.num_common = 4;
  spec.num_unique_per_action = 0;
  spec.total_train = 15;  // 3 per action < 4 cells
  CHECK_THROWS_AS(assign_roles(m, spec), Error);
  spec.num_common = 0;
  CHECK_THROWS_AS(assign_roles(m, spec), Error);  // c + u == 0 with u = 0
}

TEST_CASE("determinism and seed sensitivity") {
  const auto m = uniform_matrix(5, 30, 40);
  DesignSpec spec;
  spec.num_common = 2;
  spec.num_unique_per_action = 2;
  spec.seed = 42;
  const auto r1 = assign_roles(m, spec);
  const auto s1 = sample_training_set(m, r1, spec);
  CHECK(assign_roles(m, spec) == r1);
  CHECK(sample_training_set(m, r1, spec).ids() == s1.ids());

  spec.seed = 43;
  const auto r2 = assign_roles(m, spec);
  const auto s2 = sample_training_set(m, r2, spec);
  CHECK(s2.ids() != s1.ids());
  std::vector<std::uint64_t> q1, q2;
  for (const auto& c : s1.cells) q1.push_back(c.quota);
  for (const auto& c : s2.cells) q2.push_back(c.quota);
  CHECK(q1 == q2);
}

TEST_CASE("property: quotas conserve budgets and balance actions within one") {
  std::mt19937_64 rng(31);
  int checked = 0;
  for (int round = 0; round < 300; ++round) {
    const std::size_t na = 1 + rng() % 6, no = 4 + rng() % 20;
    const auto m = uniform_matrix(na, no, 5 + rng() % 60);
    DesignSpec spec;
    spec.num_common = rng() % 4;
    spec.num_unique_per_action = rng() % 3;
    spec.total_train = rng() % 400;
    spec.unseen_reserve = std::vector<std::string>{};
    spec.seed = rng();
    try {
      const auto roles = assign_roles(m, spec);
      const auto sample = sample_training_set(m, roles, spec);
      ++checked;
      std::uint64_t sum = 0, lo = UINT64_MAX, hi = 0;
      for (const auto& a : roles.actions) {
        const auto t = sample.action_totals.at(a);
        std::uint64_t cell_sum = 0;
        for (const auto& c : sample.cells)
          if (c.action == a) cell_sum += c.quota;
        CHECK(cell_sum == t);
        sum += t;
        lo = std::min(lo, t);
        hi = std::max(hi, t);
      }
      CHECK(sum == spec.total_train);
      CHECK(hi - lo <= 1);
      std::set<std::string> ids;
      for (const auto& c : sample.cells) {
        CHECK(c.ids.size() == c.quota);
        const auto& members = m.members(m.action_index(c.action), m.object_index(c.object));
        for (const auto& id : c.ids) {
          CHECK(std::find(members.begin(), members.end(), id) != members.end());
          CHECK(ids.insert(id).second);
        }
      }
    } catch (const Error&) {
    }
  }
  CHECK(checked > 100);
}
