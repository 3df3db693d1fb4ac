#pragma once

// Offline evidence-case assembly for tests: records fabricated from the
// mock state's own wire bodies, no HTTP involved.

#include "casefile/casefile.hpp"
#include "client/registry.hpp"
#include "mock/state.hpp"

namespace testsupport {

inline aft::casefile::EvidenceCase case_from_state(const aft::mock::MockState& s,
                                                   const std::string& case_id) {
  using nlohmann::json;
  aft::casefile::EvidenceCase c;
  c.case_id = case_id;
  auto add = [&](const std::string& url, const json& body, int status = 200) {
    aft::ingest::ApiRecord r;
    r.url = url;
    r.method = "GET";
    r.status = status;
    r.mime_type = "application/json";
    r.captured_at_ms = s.clock_ms;
    r.body_is_json = true;
    r.body_json = body;
    r.recompute_digest();
    c.records.push_back(std::move(r));
  };
  const std::string base = "https://alexa.amazon.com";
  add(base + "/api/bootstrap", aft::mock::body_bootstrap(s));
  add(base + "/api/household", aft::mock::body_household(s));
  add(base + "/api/devices-v2/device", aft::mock::body_devices(s));
  add(base + "/api/device-preferences", aft::mock::body_device_preferences(s));
  add(base + "/api/bluetooth", aft::mock::body_bluetooth(s));
  add(base + "/api/activities", aft::mock::body_activities(s));
  add(base + "/api/cards", aft::mock::body_cards(s));
  add(base + "/api/namedLists", aft::mock::body_named_lists(s));
  add(base + "/api/phoenix", aft::mock::body_phoenix(s));
  for (const auto& d : s.devices) {
    auto wifi = aft::mock::body_wifi(s, d.serial_number);
    if (wifi) {
      add(base + "/api/device-wifi-details?deviceSerialNumber=" + d.serial_number +
              "&deviceType=" + d.device_type,
          *wifi);
    }
  }
  for (const auto& l : s.lists) {
    auto items = aft::mock::body_list_items(s, l.list_id);
    if (items) add(base + "/api/namedLists/" + l.list_id + "/items", *items);
  }
  for (const auto& si : s.interactions) {
    std::string url = base + "/api/utterance/audio/data?id=" + si.id;
    if (si.audio_present) {
      aft::ingest::ApiRecord r;
      r.url = url;
      r.method = "GET";
      r.status = 200;
      r.mime_type = "application/octet-stream";
      r.captured_at_ms = s.clock_ms;
      r.body_bytes = aft::mock::audio_bytes_for(si.id);
      r.recompute_digest();
      c.audio_blobs[r.body_digest] = r.body_bytes;
      c.records.push_back(std::move(r));
    } else {
      add(url, json{{"error", "no recording"}}, 404);
    }
  }
  for (auto it = s.raw_bodies.begin(); it != s.raw_bodies.end(); ++it) {
    const auto* ep = aft::client::find_endpoint(it.key());
    if (!ep) continue;
    std::string path = ep->path_template;
    auto q = path.find('?');
    if (q != std::string::npos) path = path.substr(0, q);
    add(base + path, it.value());
  }
  c.assemble();
  return c;
}

}  // namespace testsupport
