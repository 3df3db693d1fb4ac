#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aft::util {

// SHA-256 hex digest, lowercase.
std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_hex(std::string_view text);

std::string to_hex(std::span<const std::uint8_t> bytes);

}  // namespace aft::util
