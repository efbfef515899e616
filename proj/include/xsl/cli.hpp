#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "xsl/densify.hpp"
#include "xsl/error.hpp"
#include "xsl/design.hpp"
#include "xsl/inventory.hpp"
#include "xsl/simlearner.hpp"
#include "xsl/trials.hpp"

namespace xsl {

/// Everything a pipeline command needs. Loaded from the JSON config file,
/// then overridden by command-line flags.
struct RunConfig {
  std::optional<std::string> inventory;  // path; mutually exclusive with synth
  InventoryFormat inventory_format = InventoryFormat::delimited;
  std::optional<std::string> features;  // feature table path
  std::optional<SynthWorldConfig> synth;  // seed comes from design.seed
  bool densify_enabled = false;
  DensifyConfig densify;
  DesignSpec design;
  std::size_t trials = 10;
  std::string learner = "memorizer";  // memorizer | linear | external:<command>
  LinearHyper linear;
  GridAxes grid;
  std::string output = "out";
};

/// Throws Error(config) on unknown keys or mistyped values.
RunConfig parse_run_config(std::string_view json_text);

/// Process exit code for each failure category.
int exit_code(ErrorKind kind) noexcept;

inline constexpr int kExitUsage = 2;

/// Entry point of the `xsl` tool; returns the process exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace xsl
