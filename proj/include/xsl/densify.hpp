#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xsl/cooc.hpp"

namespace xsl {

/// Exact nonnegative fraction num/den, compared without floating point.
struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  /// Rounds to 6 decimal places, so 0.4 becomes exactly 2/5.
  static Fraction from_decimal(double value);
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }

  /// k/n >= num/den. n == 0 passes vacuously.
  bool met_by(std::uint64_t k, std::uint64_t n) const noexcept;

  bool operator==(const Fraction&) const = default;
};

struct DensifyConfig {
  Count min_object_total = 100;                  // step 1
  Count cell_floor = 15;                         // steps 2 and 3
  Fraction action_nonfloor_frac{2, 5};           // step 2: 40%
  Fraction object_nonfloor_frac{4, 5};           // step 3: 80%
  Count min_cell = 10;                           // step 4

  /// Throws Error(config) when a fraction exceeds 1 or has a zero denominator.
  void validate() const;
};

enum class Axis { action, object };

struct Removal {
  int pass = 1;
  int step = 0;  // 1..4
  Axis axis = Axis::action;
  std::string label;
  std::string reason;
};

struct DensifyResult {
  CoocMatrix matrix;
  std::vector<Removal> log;
  std::vector<std::size_t> kept_actions;  // indices into the input
  std::vector<std::size_t> kept_objects;
};

/// Dense submatrix selection:
///   1. drop objects whose column total is below min_object_total;
///   2. drop actions where fewer than action_nonfloor_frac of the surviving
///      cells reach cell_floor;
///   3. drop objects where fewer than object_nonfloor_frac of the surviving
///      cells reach cell_floor;
///   4. while some cell is below min_cell, drop the row or column holding the
///      most such cells (ties: smaller total, then lower index, then rows
///      before columns).
/// Steps 1-4 repeat as a whole until a pass removes nothing, so the result is
/// a fixed point of the procedure.
///
/// Throws Error(design) if every action or every object is eliminated.
DensifyResult densify(const CoocMatrix& m, const DensifyConfig& cfg = {});

/// One line per removal, or "no removals".
std::string densify_summary(const std::vector<Removal>& log);

}  // namespace xsl
