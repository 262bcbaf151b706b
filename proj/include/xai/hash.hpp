#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace xai {

// Lower-case hex SHA-256 digest.
std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_hex(std::string_view bytes);
// Throws kStore if the file cannot be read.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace xai
