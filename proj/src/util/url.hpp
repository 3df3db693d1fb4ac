#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace aft::util {

struct Url {
  std::string scheme;  // lowercase
  std::string host;    // lowercase
  std::optional<int> port;
  std::string path;   // leading '/', case preserved
  std::string query;  // without '?', may be empty
  // fragment intentionally not kept

  std::string origin() const;  // scheme://host[:port]
  std::string path_and_query() const;
};

std::optional<Url> parse_url(std::string_view raw);

// Duplicate identity for capture records: lowercase scheme and host, default
// port elided, fragment stripped, query kept verbatim.
std::string canonical_url(const Url& u);
std::optional<std::string> canonical_url(std::string_view raw);

// Splits "a=1&b=2" into pairs; no percent-decoding (tokens stay opaque).
std::map<std::string, std::string> parse_query(std::string_view query);

}  // namespace aft::util
