#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>

namespace advisor {

inline std::uint64_t ceil_div(std::uint64_t numerator, std::uint64_t denominator) {
  return (numerator + denominator - 1) / denominator;
}

// FNV-1a, used for content-derived candidate ids. Stable across platforms
// and runs, unlike std::hash.
inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex16(std::uint64_t value);

// Splits "table.column" into its two parts. Throws UnknownAttributeError
// if there is no dot.
std::pair<std::string, std::string> split_qualified(std::string_view qualified);

inline std::string join_qualified(std::string_view table, std::string_view column) {
  return std::string(table) + "." + std::string(column);
}

std::string read_text_file(const std::filesystem::path& path);

// Write-then-rename so concurrent readers never observe a partial file.
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace advisor
