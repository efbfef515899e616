#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xsl {

/// One labeled clip. Labels are opaque, case-sensitive byte strings.
struct Instance {
  std::string id;
  std::string action;
  std::string object;
  std::optional<std::string> media_ref;

  bool operator==(const Instance&) const = default;
};

/// An ordered list of instances with action/object vocabularies in
/// first-occurrence order. The vocab position of a label is its canonical
/// row/column index in every matrix built from this inventory.
///
/// Fields are public so corrupt values can be built by hand and checked with
/// validate_inventory(); make_inventory() is the normal way to get one.
struct Inventory {
  std::vector<Instance> instances;
  std::vector<std::string> action_vocab;
  std::vector<std::string> object_vocab;

  bool empty() const noexcept { return instances.empty(); }
  std::size_t size() const noexcept { return instances.size(); }

  /// Linear scan; returns nullptr when absent.
  const Instance* find(std::string_view id) const;

  bool operator==(const Inventory&) const = default;
};

enum class InventoryFormat { delimited, record_lines };

InventoryFormat parse_inventory_format(std::string_view name);

/// Builds vocabularies. Throws Error(format) on empty fields or duplicate ids.
Inventory make_inventory(std::vector<Instance> instances);

/// Reads a whole inventory. Errors carry the 1-based line number.
Inventory parse_inventory(std::istream& source, InventoryFormat format);
Inventory parse_inventory(std::string_view text, InventoryFormat format);

/// Inverse of parse_inventory. The delimited form has no quoting, so a field
/// containing a comma or newline is a format error.
std::string serialize_inventory(const Inventory& inv, InventoryFormat format);

struct Violation {
  std::string id;  // offending instance id, or a label for vocab problems
  std::string message;

  bool operator==(const Violation&) const = default;
};

/// Empty result iff every Instance and Inventory invariant holds.
std::vector<Violation> validate_inventory(const Inventory& inv);

/// Content digest ("sha256:<hex>") of the canonical record-lines form.
std::string inventory_digest(const Inventory& inv);

}  // namespace xsl
