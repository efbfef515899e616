#pragma once

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace xsl {

/// Fixed-length real vectors keyed by instance id, kept in insertion order.
class FeatureTable {
 public:
  explicit FeatureTable(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }

  /// Throws Error(format) on a duplicate id or wrong length.
  void add(std::string id, std::span<const double> values);

  bool contains(std::string_view id) const { return index_.count(std::string(id)) != 0; }
  /// Throws Error(learner) when the id is absent.
  std::span<const double> row(std::string_view id) const;

  bool operator==(const FeatureTable& other) const {
    return dim_ == other.dim_ && ids_ == other.ids_ && data_ == other.data_;
  }

 private:
  std::size_t dim_;
  std::vector<std::string> ids_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// CSV with header "id,f0,f1,..." and shortest round-trip decimals.
std::string write_feature_table(const FeatureTable& table);
FeatureTable read_feature_table(std::string_view text);

}  // namespace xsl
