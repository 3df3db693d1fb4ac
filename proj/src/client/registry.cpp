#include "client/registry.hpp"

#include <algorithm>
#include <cctype>

namespace aft::client {

namespace {

using model::ArtifactCategory;

constexpr const char* kAlexaHost = "alexa.amazon.com";
constexpr const char* kCommsHost = "alexa-comms-mobile-service.amazon.co.uk";

EndpointDescriptor ep(std::string id, std::string path, ArtifactCategory cat,
                      bool typed, std::string notes = "", std::string host = kAlexaHost,
                      bool json_response = true) {
  EndpointDescriptor d;
  d.endpoint_id = std::move(id);
  d.host = std::move(host);
  d.path_template = std::move(path);
  d.category = cat;
  d.typed_parser = typed;
  d.json_response = json_response;
  d.notes = std::move(notes);
  return d;
}

std::vector<EndpointDescriptor> build_registry() {
  std::vector<EndpointDescriptor> r;
  r.reserve(52);

  r.push_back(ep("activities", "/api/activities", ArtifactCategory::UserActivity, true,
                 "voice-interaction history; transcript, timestamp, device, status"));
  r.push_back(ep("activity-privacy-link", "/api/activity/privacy-link",
                 ArtifactCategory::Uncategorized, false));
  r.push_back(ep("allowed-providers", "/api/allowed-providers",
                 ArtifactCategory::Uncategorized, false));
  r.push_back(ep("amazon-music-benefits", "/api/amazon-music-benefits",
                 ArtifactCategory::Uncategorized, false));
  r.push_back(ep("app-version-info", "/api/app-version-info",
                 ArtifactCategory::Uncategorized, false));
  r.push_back(ep("available-mid-field", "/api/available-mid-field",
                 ArtifactCategory::Uncategorized, false));
  r.push_back(ep("bluetooth", "/api/bluetooth", ArtifactCategory::CompatibleDevice, true,
                 "paired external devices and connection state"));
  r.push_back(ep("bootstrap", "/api/bootstrap", ArtifactCategory::Account, true,
                 "registered name, email, customer id"));
  r.push_back(ep("cards", "/api/cards", ArtifactCategory::UserActivity, true,
                 "tile renderings of recent interactions; overlaps activities"));
  r.push_back(ep("communications-providers", "/api/communications/providers",
                 ArtifactCategory::Uncategorized, false));
  r.push_back(ep("customer-status", "/api/customer-status",
                 ArtifactCategory::Uncategorized, false));
  r.push_back(ep("detect-first-run-devices", "/api/detect-first-run-devices",
                 ArtifactCategory::Uncategorized, false));
  r.push_back(ep("device-preferences", "/api/device-preferences",
                 ArtifactCategory::AlexaEnabledDevice, true,
                 "locale, time zone and postal address per device"));
  r.push_back(ep("device-wifi-details",
                 "/api/device-wifi-details?deviceSerialNumber={device_serial}"
                 "&deviceType={device_type}",
                 ArtifactCategory::CustomerSetting, true,
                 "MAC and ESSID; invoked per device serial"));
  r.push_back(ep("devices-v2", "/api/devices-v2/device",
                 ArtifactCategory::AlexaEnabledDevice, true,
                 "technical device data: software version, MAC, online state"));
  r.push_back(ep("dnd-device-status-list", "/api/dnd/device-status-list",
                 ArtifactCategory::Uncategorized, false));
  r.push_back(ep("dnd-schedule", "/api/dnd/schedule", ArtifactCategory::Uncategorized, false));
  r.push_back(ep("feature-alert", "/api/feature-alert", ArtifactCategory::Uncategorized, false));
  r.push_back(ep("feature-alert-location", "/api/feature-alert-location",
                 ArtifactCategory::Uncategorized, false));
  r.push_back(ep("featureaccess-v3", "/api/featureaccess-v3",
                 ArtifactCategory::Uncategorized, false));
  r.push_back(ep("gadgets-device-gadgets", "/api/gadgets/{gadget_x}/{gadget_y}/device-gadgets",
                 ArtifactCategory::Uncategorized, false,
                 "placeholder segments undefined in source material; untyped pending evidence"));
  r.push_back(ep("get-customer-pfm", "/api/get-customer-pfm",
                 ArtifactCategory::Uncategorized, false));
  r.push_back(ep("get-languages", "/api/get-languages", ArtifactCategory::Uncategorized, false));
  r.push_back(ep("video-skills", "/api/video-skills/videoSkills",
                 ArtifactCategory::Skill, false));
  r.push_back(ep("household", "/api/household", ArtifactCategory::Account, true,
                 "household members with ADULT/CHILD roles"));
  r.push_back(ep("kedevice", "/api/kedevice", ArtifactCategory::Uncategorized, false));
  r.push_back(ep("language", "/api/language", ArtifactCategory::Uncategorized, false));
  r.push_back(ep("lemur-access", "/api/lemur/access/", ArtifactCategory::Uncategorized, false));
  r.push_back(ep("lists-fetchUserPreference", "/api/lists/fetchUserPreference",
                 ArtifactCategory::Uncategorized, false));
  r.push_back(ep("lists-linkedPartners", "/api/lists/linkedPartners",
                 ArtifactCategory::Uncategorized, false));
  r.push_back(ep("lists-listPartners", "/api/lists/listPartners",
                 ArtifactCategory::Uncategorized, false));
  r.push_back(ep("media-historical-queues", "/api/media/historical-queues",
                 ArtifactCategory::UserActivity, false, "recently played media"));
  r.push_back(ep("metrics-batch", "/api/metrics-batch", ArtifactCategory::Uncategorized, false));
  r.push_back(ep("music-account-details", "/api/music-account-details",
                 ArtifactCategory::Uncategorized, false));
  r.push_back(ep("music-curated", "/api/music/curated", ArtifactCategory::Uncategorized, false));
  r.push_back(ep("music-settings", "/api/music/settings", ArtifactCategory::Uncategorized, false));
  r.push_back(ep("namedLists", "/api/namedLists", ArtifactCategory::UserActivity, true,
                 "list index; To-do and Shopping always exist"));
  r.push_back(ep("namedLists-items", "/api/namedLists/{list_id}/items",
                 ArtifactCategory::UserActivity, true, "items of one list"));
  r.push_back(ep("notifications", "/api/notifications", ArtifactCategory::UserActivity, false,
                 "timers, alarms, reminders"));
  r.push_back(ep("np-player", "/api/np/player", ArtifactCategory::Uncategorized, false));
  r.push_back(ep("np-queue", "/api/np/queue", ArtifactCategory::Uncategorized, false));
  r.push_back(ep("partner-authorization-details", "/api/partner-authorization/details",
                 ArtifactCategory::Uncategorized, false));
  r.push_back(ep("phoenix", "/api/phoenix", ArtifactCategory::CompatibleDevice, true,
                 "smart-home topology: groups, rooms, appliances"));
  r.push_back(ep("salmon-preferences", "/api/salmon/preferences",
                 ArtifactCategory::Uncategorized, false));
  r.push_back(ep("server-image", "/api/server-image", ArtifactCategory::Uncategorized, false));
  r.push_back(ep("strings", "/api/strings", ArtifactCategory::Uncategorized, false));
  r.push_back(ep("third-party", "/api/third-party", ArtifactCategory::CustomerSetting, false));
  r.push_back(ep("traffic-settings", "/api/traffic/settings",
                 ArtifactCategory::CustomerSetting, false, "commute origin/destination"));
  r.push_back(ep("wake-word", "/api/wake-word", ArtifactCategory::Uncategorized, false));
  r.push_back(ep("wake-words-locale", "/api/wake-words-locale",
                 ArtifactCategory::Uncategorized, false));

  // Analyzed endpoints that sit outside the discovered-API table.
  r.push_back(ep("contacts", "/user/{user_id}/contacts", ArtifactCategory::CustomerSetting,
                 true, "address book; separate communications host", kCommsHost));
  r.push_back(ep("utterance-audio", "/api/utterance/audio/data?id={utterance_id}",
                 ArtifactCategory::AudioData, true,
                 "voice recordings by utterance id; the one non-JSON endpoint",
                 kAlexaHost, /*json_response=*/false));
  return r;
}

std::vector<std::string> split_segments(std::string_view path) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < path.size()) {
    if (path[pos] == '/') {
      ++pos;
      continue;
    }
    auto next = path.find('/', pos);
    if (next == std::string_view::npos) {
      out.emplace_back(path.substr(pos));
      break;
    }
    out.emplace_back(path.substr(pos, next - pos));
    pos = next;
  }
  return out;
}

bool is_placeholder(std::string_view seg) {
  return seg.size() > 2 && seg.front() == '{' && seg.back() == '}';
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  }
  return true;
}

std::string template_path_part(const std::string& tmpl) {
  auto q = tmpl.find('?');
  return q == std::string::npos ? tmpl : tmpl.substr(0, q);
}

std::string template_query_part(const std::string& tmpl) {
  auto q = tmpl.find('?');
  return q == std::string::npos ? std::string() : tmpl.substr(q + 1);
}

}  // namespace

std::vector<std::string> EndpointDescriptor::placeholders() const {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while ((pos = path_template.find('{', pos)) != std::string::npos) {
    auto end = path_template.find('}', pos);
    if (end == std::string::npos) break;
    out.push_back(path_template.substr(pos + 1, end - pos - 1));
    pos = end + 1;
  }
  return out;
}

nlohmann::json EndpointDescriptor::to_json() const {
  nlohmann::json j;
  j["endpoint_id"] = endpoint_id;
  j["host"] = host;
  j["path_template"] = path_template;
  j["category"] = model::to_string(category);
  j["typed_parser"] = typed_parser;
  j["json_response"] = json_response;
  if (!notes.empty()) j["notes"] = notes;
  return j;
}

const std::vector<EndpointDescriptor>& registry() {
  static const std::vector<EndpointDescriptor> r = build_registry();
  return r;
}

const EndpointDescriptor* find_endpoint(std::string_view endpoint_id) {
  for (const auto& d : registry()) {
    if (d.endpoint_id == endpoint_id) return &d;
  }
  return nullptr;
}

util::Result<std::string, MissingBinding> render_path(
    const EndpointDescriptor& ep, const std::map<std::string, std::string>& bindings) {
  std::string out;
  const std::string& t = ep.path_template;
  std::size_t pos = 0;
  while (pos < t.size()) {
    auto open = t.find('{', pos);
    if (open == std::string::npos) {
      out.append(t, pos, std::string::npos);
      break;
    }
    out.append(t, pos, open - pos);
    auto close = t.find('}', open);
    if (close == std::string::npos) {
      out.append(t, open, std::string::npos);
      break;
    }
    std::string name = t.substr(open + 1, close - open - 1);
    auto it = bindings.find(name);
    if (it == bindings.end() || it->second.empty()) return MissingBinding{name};
    out += it->second;
    pos = close + 1;
  }
  return out;
}

std::optional<UrlMatch> match_url(const util::Url& url) {
  auto url_segs = split_segments(url.path);
  for (const auto& d : registry()) {
    auto tmpl_segs = split_segments(template_path_part(d.path_template));
    if (tmpl_segs.size() != url_segs.size()) continue;
    bool ok = true;
    std::map<std::string, std::string> bindings;
    for (std::size_t i = 0; i < tmpl_segs.size(); ++i) {
      if (is_placeholder(tmpl_segs[i])) {
        bindings[tmpl_segs[i].substr(1, tmpl_segs[i].size() - 2)] = url_segs[i];
      } else if (!iequals(tmpl_segs[i], url_segs[i])) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;

    // query placeholders, e.g. deviceSerialNumber={device_serial}
    auto tq = template_query_part(d.path_template);
    if (!tq.empty()) {
      auto want = util::parse_query(tq);
      auto have = util::parse_query(url.query);
      for (const auto& [key, val] : want) {
        if (!is_placeholder(val)) continue;
        auto it = have.find(key);
        if (it != have.end())
          bindings[val.substr(1, val.size() - 2)] = it->second;
      }
    }
    return UrlMatch{d.endpoint_id, std::move(bindings)};
  }
  return std::nullopt;
}

std::optional<UrlMatch> match_url(std::string_view raw_url) {
  auto u = util::parse_url(raw_url);
  if (!u) return std::nullopt;
  return match_url(*u);
}

}  // namespace aft::client
