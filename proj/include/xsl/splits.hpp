#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "xsl/cooc.hpp"
#include "xsl/design.hpp"

namespace xsl {

/// How a test pair relates to the training design.
enum class TestType {
  common,        // object co-occurs with every action in training
  unique_self,   // unique object with the action it was trained with
  unique_other,  // unique object with some other action
  unseen,        // reserved object, never trained
};

inline constexpr std::array<TestType, 4> kAllTestTypes{TestType::common, TestType::unique_self,
                                                       TestType::unique_other, TestType::unseen};

const char* to_string(TestType t) noexcept;
TestType parse_test_type(std::string_view name);

/// Throws Error(design) if the action is not in the design or the object has
/// no role.
TestType classify_test_type(std::string_view action, std::string_view object, const RoleAssignment& roles);

struct TestItem {
  std::string id;
  TestType type = TestType::common;

  bool operator==(const TestItem&) const = default;
};

struct DesignEcho {
  std::uint64_t seed = 0;
  std::size_t num_common = 0;
  std::size_t num_unique_per_action = 0;
  std::uint64_t total_train = 0;
  RoleAssignment roles;
  std::string inventory_digest;

  bool operator==(const DesignEcho&) const = default;
};

/// Frozen membership for one trial.
struct SplitManifest {
  DesignEcho design;
  std::vector<std::string> train;
  std::map<std::string, std::string> train_labels;  // train id -> action
  std::vector<std::string> val;
  std::vector<TestItem> test;
  std::vector<std::string> warnings;  // e.g. a role group with no test items

  bool operator==(const SplitManifest&) const = default;
};

/// Test/val membership. Every in-scope cell is shuffled under the seed and
/// cut 80/20 into test/val by largest remainder; reserved-object cells go
/// wholly to test. In-scope cells are the trained cells (minus training ids),
/// unique objects paired with other actions, and reserved objects with every
/// design action.
SplitManifest generate_splits(const CoocMatrix& m, const RoleAssignment& roles, const TrainingSample& train,
                              const DesignSpec& spec, std::string inventory_digest = {});

/// Manifest file: one JSON document with top-level keys design, train,
/// train_labels, val, test, warnings.
std::string write_manifest(const SplitManifest& manifest);
/// Throws Error(format) naming the first missing or mistyped field.
SplitManifest read_manifest(std::string_view text);

}  // namespace xsl
