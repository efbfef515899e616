#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "xsl/inventory.hpp"

namespace xsl {

using Count = std::uint64_t;

/// Actions x objects instance-count table. Rows follow action vocab order and
/// columns follow object vocab order.
///
/// A matrix built from an inventory carries the member ids of every cell.
/// Matrices parsed from a report, or made with from_counts(), are counts only
/// (has_members() is false); densify works on either kind, design and splits
/// need members.
class CoocMatrix {
 public:
  CoocMatrix() = default;

  static CoocMatrix from_counts(std::vector<std::string> actions,
                                std::vector<std::string> objects,
                                const std::vector<std::vector<Count>>& counts);

  std::size_t num_actions() const noexcept { return actions_.size(); }
  std::size_t num_objects() const noexcept { return objects_.size(); }
  bool empty() const noexcept { return actions_.empty() || objects_.empty(); }
  bool has_members() const noexcept { return !members_.empty(); }

  const std::vector<std::string>& actions() const noexcept { return actions_; }
  const std::vector<std::string>& objects() const noexcept { return objects_; }

  Count count(std::size_t action, std::size_t object) const {
    return counts_[action * objects_.size() + object];
  }
  /// Empty when !has_members().
  const std::vector<std::string>& members(std::size_t action, std::size_t object) const;

  /// Index of a label, or npos.
  std::size_t action_index(std::string_view label) const;
  std::size_t object_index(std::string_view label) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Count total() const;

  /// Submatrix keeping the given rows and columns in the given order.
  CoocMatrix select(const std::vector<std::size_t>& rows,
                    const std::vector<std::size_t>& cols) const;

  bool same_counts(const CoocMatrix& other) const;

 private:
  friend CoocMatrix build_cooc(const Inventory& inv);

  std::vector<std::string> actions_;
  std::vector<std::string> objects_;
  std::vector<Count> counts_;                       // row-major
  std::vector<std::vector<std::string>> members_;   // row-major, or empty
};

/// Throws Error(design) on an empty inventory.
CoocMatrix build_cooc(const Inventory& inv);

struct Marginals {
  std::vector<Count> row_totals;
  std::vector<Count> col_totals;
  double density = 0.0;  // fraction of nonzero cells
};

Marginals marginals(const CoocMatrix& m);

/// CSV report: "action\object,<objects...>" then "action,count,count,...".
std::string render_report(const CoocMatrix& m);

/// Reads a report back into a counts-only matrix.
CoocMatrix parse_report(std::string_view text);

}  // namespace xsl
