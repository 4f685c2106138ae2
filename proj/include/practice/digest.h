#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace practice {

/// Lowercase hex SHA-256.
std::string sha256Hex(std::span<const std::uint8_t> bytes);
std::string sha256Hex(std::string_view text);

}  // namespace practice
