#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace xsl {

/// Largest-remainder (Hamilton) apportionment of `total` units over
/// `weights`. Each share is floor(total * w / W) plus one extra unit for the
/// largest fractional remainders; equal remainders go to the lower index.
/// The result always sums to `total`. All weights zero is an error.
std::vector<std::uint64_t> apportion(std::uint64_t total, std::span<const std::uint64_t> weights);

}  // namespace xsl
