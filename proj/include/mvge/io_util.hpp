#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace mvge {

// Writes to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

// Shortest-exact ("%.17g") formatting for doubles.
std::string format_real(double v);

// FNV-1a 64-bit.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);

}  // namespace mvge
