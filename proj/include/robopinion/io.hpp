#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace robopinion {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Shortest round-trip decimal form of a double (std::to_chars), so two runs
/// that compute the same values emit byte-identical text.
std::string fmt_double(double value);

}  // namespace robopinion
