#pragma once

#include <string>
#include <string_view>

namespace aft::util {

// Masks the middle of an identifier, keeping at most four characters at
// each end: "G090LF09643202GD" -> "G090*****02GD" style. Values of four
// characters or fewer come back fully starred.
std::string mask_value(std::string_view value);

// Masks the local part of an address, keeping the domain readable.
std::string mask_email(std::string_view email);

}  // namespace aft::util
