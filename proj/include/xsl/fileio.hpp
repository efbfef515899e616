#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace xsl {

/// Throws Error(io).
std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary and renames it over `path`, so readers see
/// either the old file or the complete new one.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Writes a batch of files only after every one of them has been produced.
void write_files_atomic(const std::vector<std::pair<std::filesystem::path, std::string>>& files);

/// Single-quotes `arg` for /bin/sh.
std::string shell_quote(std::string_view arg);

}  // namespace xsl
