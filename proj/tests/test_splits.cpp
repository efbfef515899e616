#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"
#include "xsl/error.hpp"
#include "xsl/splits.hpp"

using namespace xsl;

namespace {

std::set<TestType> types_of(const SplitManifest& m) {
  std::set<TestType> out;
  for (const auto& t : m.test) out.insert(t.type);
  return out;
}

struct Fixture {
  Inventory inv;
  CoocMatrix m;
  Fixture(std::size_t actions, std::size_t objects, Count per_cell)
      : inv(test::inventory_from_counts(test::labels("a", actions), test::labels("o", objects),
                                        std::vector<std::vector<Count>>(actions, std::vector<Count>(objects, per_cell)))),
        m(build_cooc(inv)) {}

  SplitManifest design(const DesignSpec& spec) const {
    const auto roles = assign_roles(m, spec);
    return generate_splits(m, roles, sample_training_set(m, roles, spec), spec, inventory_digest(inv));
  }
};

}  // namespace

TEST_CASE("worked example: cut-onion and roast-chicken") {
  RoleAssignment roles;
  roles.actions = {"cut", "roast"};
  roles.unique_objects = {{"cut", {"onion"}}, {"roast", {"chicken"}}};
  roles.unseen_objects = {"apple", "duck"};
  CHECK(classify_test_type("roast", "onion", roles) == TestType::unique_other);
  CHECK(classify_test_type("cut", "chicken", roles) == TestType::unique_other);
  CHECK(classify_test_type("cut", "onion", roles) == TestType::unique_self);
  CHECK(classify_test_type("roast", "chicken", roles) == TestType::unique_self);
  CHECK(classify_test_type("cut", "apple", roles) == TestType::unseen);
  CHECK(classify_test_type("roast", "duck", roles) == TestType::unseen);
  CHECK_THROWS_AS(classify_test_type("cut", "pear", roles), Error);
  CHECK_THROWS_AS(classify_test_type("fry", "onion", roles), Error);

  roles.common_objects = {"pan"};
  CHECK(classify_test_type("roast", "pan", roles) == TestType::common);
}

TEST_CASE("test type names round trip") {
  for (auto t : kAllTestTypes) CHECK(parse_test_type(to_string(t)) == t);
  CHECK_THROWS_AS(parse_test_type("other"), Error);
}

TEST_CASE("unique-only designs produce exactly three test types") {
  Fixture f(5, 30, 100);
  DesignSpec spec;
  spec.num_common = 0;
  spec.num_unique_per_action = 1;
  const auto man = f.design(spec);
  CHECK(types_of(man) == std::set<TestType>{TestType::unique_self, TestType::unique_other, TestType::unseen});
  CHECK(man.warnings.empty());
  CHECK(oracle::split_violations(f.inv, man).empty());
}

TEST_CASE("common-only designs produce exactly common and unseen") {
  Fixture f(5, 30, 40);
  DesignSpec spec;
  spec.num_common = 3;
  spec.num_unique_per_action = 0;
  const auto man = f.design(spec);
  CHECK(types_of(man) == std::set<TestType>{TestType::common, TestType::unseen});
  CHECK(oracle::split_violations(f.inv, man).empty());
}

TEST_CASE("cell sizes: 40 per cell, 19 trained leaves 21 -> 17 test / 4 val") {
  Fixture f(5, 30, 40);
  DesignSpec spec;
  spec.num_common = 4;
  spec.num_unique_per_action = 0;
  const auto man = f.design(spec);
  CHECK(man.train.size() == 375);
  // trained cells: 15 at 21 left (17/4), 5 at 22 left (18/4); 50 reserved cells at 40
  std::size_t common = 0, unseen = 0;
  for (const auto& t : man.test) (t.type == TestType::common ? common : unseen)++;
  CHECK(common == 15 * 17 + 5 * 18);
  CHECK(unseen == 50 * 40);
  CHECK(man.val.size() == 20 * 4);
}

TEST_CASE("empty bucket is a warning") {
  // Each unique object occurs with its own action only, so unique_other is empty.
  const auto inv = test::inventory_from_counts({"a0", "a1"}, {"o0", "o1", "o2"}, {{30, 0, 30}, {0, 30, 30}});
  const auto m = build_cooc(inv);
  DesignSpec spec;
  spec.num_common = 0;
  spec.num_unique_per_action = 1;
  spec.total_train = 20;
  spec.unseen_reserve = std::vector<std::string>{"o2"};
  const auto roles = assign_roles(m, spec);
  const auto man = generate_splits(m, roles, sample_training_set(m, roles, spec), spec);
  REQUIRE(man.warnings.size() == 1);
  CHECK(man.warnings[0].find("unique_other") != std::string::npos);
  CHECK(oracle::split_violations(inv, man).empty());
}

TEST_CASE("manifest file round trip and schema errors") {
  Fixture f(3, 12, 20);
  DesignSpec spec;
  spec.num_common = 1;
  spec.num_unique_per_action = 1;
  spec.total_train = 30;
  spec.unseen_reserve = std::vector<std::string>{"o10", "o11"};
  spec.seed = 18446744073709551557ull;  // large u64 survives JSON
  const auto man = f.design(spec);
  const auto text = write_manifest(man);
  CHECK(read_manifest(text) == man);
  CHECK(text.find("\"design\"") != std::string::npos);
  CHECK(text.find("\"unique_objects\"") != std::string::npos);

  CHECK_THROWS_WITH_AS(read_manifest(R"({"train":[],"val":[],"test":[]})"), doctest::Contains("'design'"), Error);
  CHECK_THROWS_WITH_AS(read_manifest("{\"design\":{}}"), doctest::Contains("seed"), Error);
  CHECK_THROWS_AS(read_manifest("not json"), Error);
  auto broken = text;
  broken.replace(broken.find("\"unique_self\""), 13, "\"bogus\"");
  CHECK_THROWS_AS(read_manifest(broken), Error);
}

TEST_CASE("splits reject training ids from the wrong cell") {
  Fixture f(2, 12, 20);
  DesignSpec spec;
  spec.num_common = 1;
  spec.num_unique_per_action = 0;
  spec.total_train = 10;
  const auto roles = assign_roles(f.m, spec);
  auto sample = sample_training_set(f.m, roles, spec);
  sample.cells[0].ids[0] = sample.cells[1].ids[0];
  CHECK_THROWS_AS(generate_splits(f.m, roles, sample, spec), Error);
}

TEST_CASE("property: random designs are sound by brute force") {
  std::mt19937_64 rng(4);
  int checked = 0;
  for (int round = 0; round < 150; ++round) {
    const std::size_t na = 2 + rng() % 4, no = 8 + rng() % 20;
    std::vector<std::vector<Count>> counts(na, std::vector<Count>(no));
    for (auto& row : counts)
      for (auto& v : row) v = rng() % 5 == 0 ? 0 : 1 + rng() % 40;
    const auto inv = test::inventory_from_counts(test::labels("a", na), test::labels("o", no), counts);
    const auto m = build_cooc(inv);
    DesignSpec spec;
    spec.num_common = rng() % 3;
    spec.num_unique_per_action = rng() % 3;
    spec.total_train = 10 + rng() % 100;
    spec.seed = rng();
    spec.shortfall = rng() % 2 ? ShortfallPolicy::spill : ShortfallPolicy::error;
    try {
      const auto roles = assign_roles(m, spec);
      const auto man = generate_splits(m, roles, sample_training_set(m, roles, spec), spec);
      ++checked;
      const auto bad = oracle::split_violations(inv, man);
      CHECK_MESSAGE(bad.empty(), (bad.empty() ? "" : bad.front()));
    } catch (const Error&) {
    }
  }
  CHECK(checked > 40);
}
