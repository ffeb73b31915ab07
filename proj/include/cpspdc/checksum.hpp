#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace cpspdc {

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view bytes);

/// Reads a whole file as bytes; throws IoError.
std::string read_file(const std::filesystem::path& path);

}  // namespace cpspdc
