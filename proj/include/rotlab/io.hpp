#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace rotlab {

/// Shortest decimal representation that round-trips the exact double.
std::string format_double(double x);

/// Write-temp-then-rename so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents);

/// FNV-1a 64-bit digest, hex-encoded; used for manifest output digests.
std::string fnv1a_hex(const std::string& bytes);

std::string read_file(const std::filesystem::path& path);

}  // namespace rotlab
