#include "util/redact.hpp"

#include <algorithm>

namespace aft::util {

std::string mask_value(std::string_view value) {
  if (value.empty()) return std::string(value);
  if (value.size() <= 4) return std::string(value.size(), '*');
  std::size_t keep = std::min<std::size_t>(4, value.size() / 3);
  if (keep == 0) keep = 1;
  std::string out(value.substr(0, keep));
  out += "*****";
  out += value.substr(value.size() - keep);
  return out;
}

std::string mask_email(std::string_view email) {
  auto at = email.find('@');
  if (at == std::string_view::npos) return mask_value(email);
  std::string_view local = email.substr(0, at);
  std::string out;
  if (local.size() <= 2) {
    out = std::string(local.size(), '*');
  } else {
    out = std::string(local.substr(0, 2));
    out += "*****";
    out += local.back();
  }
  out += email.substr(at);
  return out;
}

}  // namespace aft::util
