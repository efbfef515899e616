#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "xsl/cooc.hpp"

namespace xsl {

/// What to do when a training cell has fewer instances than its quota.
enum class ShortfallPolicy {
  error,  // refuse the design
  spill,  // move the residual to the action's other cells, most spare capacity first
};

inline constexpr std::uint64_t kDefaultTotalTrain = 375;
inline constexpr std::size_t kDefaultReserveSize = 10;

struct DesignSpec {
  std::size_t num_common = 0;
  std::size_t num_unique_per_action = 1;
  std::uint64_t total_train = kDefaultTotalTrain;
  std::vector<std::string> actions;                        // empty: every matrix action
  std::optional<std::vector<std::string>> unseen_reserve;  // unset: last 10 matrix objects
  std::uint64_t seed = 0;
  ShortfallPolicy shortfall = ShortfallPolicy::error;
};

/// The actions a DesignSpec refers to, checked against the matrix.
std::vector<std::string> resolve_actions(const CoocMatrix& m, const DesignSpec& spec);
std::vector<std::string> resolve_reserve(const CoocMatrix& m, const DesignSpec& spec);

/// Training budget per action: floor(N/|A|), plus one for the first N mod |A|.
std::vector<std::uint64_t> action_budgets(std::uint64_t total, std::size_t num_actions);

struct RoleAssignment {
  std::vector<std::string> actions;
  std::vector<std::string> common_objects;
  std::map<std::string, std::vector<std::string>> unique_objects;  // action -> objects
  std::vector<std::string> unseen_objects;

  bool operator==(const RoleAssignment&) const = default;
};

/// Shuffles the non-reserved objects under the seed, then takes the first
/// `num_common` objects that can fill a quota with every action, then for
/// each action in order the next `num_unique_per_action` objects that can
/// fill a quota with that action.
RoleAssignment assign_roles(const CoocMatrix& m, const DesignSpec& spec);

struct SampledCell {
  std::string action;
  std::string object;
  std::uint64_t quota = 0;
  std::vector<std::string> ids;
};

struct TrainingSample {
  std::vector<SampledCell> cells;                     // action order, then common, then unique
  std::map<std::string, std::uint64_t> action_totals;

  /// Every chosen id, in cell order.
  std::vector<std::string> ids() const;
};

/// Per-cell quotas by largest-remainder apportionment of the action budget,
/// then a seeded shuffle of each cell's members.
TrainingSample sample_training_set(const CoocMatrix& m, const RoleAssignment& roles,
                                   const DesignSpec& spec);

}  // namespace xsl
