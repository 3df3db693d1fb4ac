#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aft::util {

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::string base64_encode(std::string_view text);

// Tolerates embedded whitespace. Returns nullopt on any other non-alphabet
// byte or bad padding.
std::optional<std::vector<std::uint8_t>> base64_decode(std::string_view text);

}  // namespace aft::util
