#include "util/url.hpp"

#include <algorithm>
#include <cctype>

namespace aft::util {

namespace {
std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}
}  // namespace

std::string Url::origin() const {
  std::string out = scheme + "://" + host;
  if (port) out += ":" + std::to_string(*port);
  return out;
}

std::string Url::path_and_query() const {
  std::string out = path;
  if (!query.empty()) out += "?" + query;
  return out;
}

std::optional<Url> parse_url(std::string_view raw) {
  auto scheme_end = raw.find("://");
  if (scheme_end == std::string_view::npos || scheme_end == 0) return std::nullopt;
  Url u;
  u.scheme = lower(raw.substr(0, scheme_end));
  std::string_view rest = raw.substr(scheme_end + 3);

  auto frag = rest.find('#');
  if (frag != std::string_view::npos) rest = rest.substr(0, frag);

  auto path_start = rest.find('/');
  std::string_view authority =
      path_start == std::string_view::npos ? rest : rest.substr(0, path_start);
  std::string_view path_query =
      path_start == std::string_view::npos ? std::string_view{} : rest.substr(path_start);

  if (authority.empty()) return std::nullopt;
  auto colon = authority.rfind(':');
  if (colon != std::string_view::npos) {
    std::string_view port_sv = authority.substr(colon + 1);
    if (port_sv.empty() ||
        !std::all_of(port_sv.begin(), port_sv.end(),
                     [](unsigned char c) { return std::isdigit(c); })) {
      return std::nullopt;
    }
    int port = 0;
    for (char c : port_sv) {
      port = port * 10 + (c - '0');
      if (port > 65535) return std::nullopt;
    }
    u.port = port;
    u.host = lower(authority.substr(0, colon));
  } else {
    u.host = lower(authority);
  }
  if (u.host.empty()) return std::nullopt;

  auto qmark = path_query.find('?');
  if (qmark == std::string_view::npos) {
    u.path = std::string(path_query);
  } else {
    u.path = std::string(path_query.substr(0, qmark));
    u.query = std::string(path_query.substr(qmark + 1));
  }
  if (u.path.empty()) u.path = "/";
  return u;
}

std::string canonical_url(const Url& u) {
  bool default_port = !u.port || (u.scheme == "http" && *u.port == 80) ||
                      (u.scheme == "https" && *u.port == 443);
  std::string out = u.scheme + "://" + u.host;
  if (!default_port) out += ":" + std::to_string(*u.port);
  out += u.path;
  if (!u.query.empty()) out += "?" + u.query;
  return out;
}

std::optional<std::string> canonical_url(std::string_view raw) {
  auto u = parse_url(raw);
  if (!u) return std::nullopt;
  return canonical_url(*u);
}

std::map<std::string, std::string> parse_query(std::string_view query) {
  std::map<std::string, std::string> out;
  std::size_t pos = 0;
  while (pos < query.size()) {
    auto amp = query.find('&', pos);
    std::string_view kv =
        query.substr(pos, amp == std::string_view::npos ? std::string_view::npos : amp - pos);
    if (!kv.empty()) {
      auto eq = kv.find('=');
      if (eq == std::string_view::npos) {
        out.emplace(std::string(kv), "");
      } else {
        out.emplace(std::string(kv.substr(0, eq)), std::string(kv.substr(eq + 1)));
      }
    }
    if (amp == std::string_view::npos) break;
    pos = amp + 1;
  }
  return out;
}

}  // namespace aft::util
