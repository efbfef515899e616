#include "xsl/apportion.hpp"

#include <algorithm>
#include <numeric>

#include "xsl/error.hpp"

namespace xsl {

std::vector<std::uint64_t> apportion(std::uint64_t total, std::span<const std::uint64_t> weights) {
  using wide = unsigned __int128;
  wide weight_sum = 0;
  for (auto w : weights) weight_sum += w;
  if (weight_sum == 0) throw Error(ErrorKind::design, "apportion over zero total weight");

  std::vector<std::uint64_t> share(weights.size());
  std::vector<wide> remainder(weights.size());
  std::uint64_t assigned = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const wide scaled = static_cast<wide>(total) * weights[k];
    share[k] = static_cast<std::uint64_t>(scaled / weight_sum);
    remainder[k] = scaled % weight_sum;
    assigned += share[k];
  }

  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned) ++share[order[k]];
  return share;
}

}  // namespace xsl
