#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "xsl/cooc.hpp"
#include "xsl/inventory.hpp"

namespace xsl::test {

/// Inventory with counts[a][o] instances of each (action a, object o) cell.
inline Inventory inventory_from_counts(const std::vector<std::string>& actions,
                                       const std::vector<std::string>& objects,
                                       const std::vector<std::vector<Count>>& counts) {
  std::vector<Instance> rows;
  for (std::size_t a = 0; a < actions.size(); ++a) {
    for (std::size_t o = 0; o < objects.size(); ++o) {
      for (Count k = 0; k < counts[a][o]; ++k) {
        rows.push_back({actions[a] + "/" + objects[o] + "/" + std::to_string(k), actions[a], objects[o], {}});
      }
    }
  }
  return make_inventory(std::move(rows));
}

inline std::vector<std::string> labels(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(prefix + std::to_string(k));
  return out;
}

/// Random count matrix in one of three styles: uniform, mostly dense, sparse.
inline CoocMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::vector<std::vector<Count>> counts(rows, std::vector<Count>(cols));
  const auto style = rng() % 3;
  for (auto& row : counts)
    for (auto& v : row) {
      if (style == 0) v = rng() % 60;
      else if (style == 1) v = rng() % 4 == 0 ? rng() % 10 : 10 + rng() % 50;
      else v = rng() % 2 == 0 ? 0 : rng() % 200;
    }
  return CoocMatrix::from_counts(labels("a", rows), labels("o", cols), counts);
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("xsl_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace xsl::test
