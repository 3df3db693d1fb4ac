#include "casefile/casefile.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>

#include "client/registry.hpp"
#include "model/time.hpp"
#include "util/hash.hpp"

namespace aft::casefile {

namespace fs = std::filesystem;

std::string_view to_string(CaseSource s) {
  switch (s) {
    case CaseSource::LiveAcquisition: return "LiveAcquisition";
    case CaseSource::CaptureImport: return "CaptureImport";
    case CaseSource::MockAcquisition: return "MockAcquisition";
  }
  return "CaptureImport";
}

std::optional<CaseSource> case_source_from(std::string_view s) {
  if (s == "LiveAcquisition") return CaseSource::LiveAcquisition;
  if (s == "CaptureImport") return CaseSource::CaptureImport;
  if (s == "MockAcquisition") return CaseSource::MockAcquisition;
  return std::nullopt;
}

json CaseManifest::to_json() const {
  json j;
  j["schema_version"] = schema_version;
  j["case_id"] = case_id;
  j["created_at"] = model::to_iso8601_utc(created_at_ms);
  j["tool_version"] = tool_version;
  j["source"] = std::string(to_string(source));
  json files_arr = json::array();
  for (const auto& [path, digest] : files) {
    files_arr.push_back(json{{"path", path}, {"sha256", digest}});
  }
  j["files"] = std::move(files_arr);
  j["config"] = config_echo;
  return j;
}

util::Result<CaseManifest, std::string> CaseManifest::from_json(const json& j) {
  CaseManifest m;
  try {
    m.schema_version = j.at("schema_version").get<int>();
    m.case_id = j.at("case_id").get<std::string>();
    auto t = model::normalize_timestamp(j.at("created_at"), std::nullopt);
    if (!t.ok()) return std::string("manifest has bad created_at");
    m.created_at_ms = t.value().epoch_ms;
    m.tool_version = j.at("tool_version").get<std::string>();
    auto src = case_source_from(j.at("source").get<std::string>());
    if (!src) return std::string("manifest has unknown source");
    m.source = *src;
    for (const auto& f : j.at("files")) {
      m.files.emplace_back(f.at("path").get<std::string>(), f.at("sha256").get<std::string>());
    }
    m.config_echo = j.value("config", json::object());
  } catch (const json::exception& e) {
    return std::string("malformed manifest: ") + e.what();
  }
  return m;
}

// ---- assembly ---------------------------------------------------------------

namespace {

bool is_success(int status) { return status >= 200 && status < 300; }

void merge_device(std::vector<model::DeviceProfile>& devices,
                  const model::DeviceProfile& incoming,
                  std::vector<model::InvariantViolation>& violations) {
  for (auto& d : devices) {
    if (d.serial_number != incoming.serial_number) continue;
    if (!incoming.device_type.empty() && !d.device_type.empty() &&
        incoming.device_type != d.device_type) {
      violations.push_back({"devices/" + d.serial_number,
                            "device type disagrees across endpoints: " + d.device_type +
                                " vs " + incoming.device_type});
    }
    if (d.device_account_id.empty()) d.device_account_id = incoming.device_account_id;
    if (d.software_version.empty()) d.software_version = incoming.software_version;
    if (!d.mac_address) d.mac_address = incoming.mac_address;
    if (!d.friendly_name) d.friendly_name = incoming.friendly_name;
    if (!d.online) d.online = incoming.online;
    if (!d.charging) d.charging = incoming.charging;
    if (!d.locale) d.locale = incoming.locale;
    if (!d.timezone) d.timezone = incoming.timezone;
    if (!d.postal_address) d.postal_address = incoming.postal_address;
    if (!d.temperature_unit) d.temperature_unit = incoming.temperature_unit;
    if (!d.distance_unit) d.distance_unit = incoming.distance_unit;
    return;
  }
  devices.push_back(incoming);
}

}  // namespace

void EvidenceCase::assemble() {
  parsed.clear();
  parse_errors.clear();
  violations.clear();
  activities.clear();
  cards.clear();
  devices.clear();
  wifi.clear();
  bluetooth.clear();
  members.clear();
  contacts.clear();
  lists.clear();
  topology.reset();
  identity.reset();
  audio_by_utterance.clear();
  audio_digest_by_utterance.clear();

  std::vector<model::ListItemsPage> item_pages;

  for (const auto& rec : records) {
    auto match = client::match_url(rec.url);
    if (!match) continue;
    const std::string& eid = match->endpoint_id;

    if (eid == "utterance-audio") {
      auto it = match->bindings.find("utterance_id");
      std::string utt = it != match->bindings.end() ? it->second : "";
      if (utt.empty()) continue;
      if (is_success(rec.status) && !rec.body_is_json) {
        audio_by_utterance[utt] = AudioState::Present;
        audio_digest_by_utterance[utt] = rec.body_digest;
      } else if (rec.status == 404) {
        audio_by_utterance[utt] = AudioState::AbsentConfirmed;
      }
      continue;
    }

    if (!is_success(rec.status) || !rec.body_is_json) continue;

    auto result = model::parse_artifact(eid, rec.body_json);
    if (!result.ok()) {
      parse_errors.push_back(std::move(result.error()));
      continue;
    }
    model::ParsedArtifact art = std::move(result.value());
    for (const auto& v : art.violations) {
      violations.push_back({eid + "/" + v.path, v.detail});
    }

    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, std::vector<model::Activity>>) {
            activities.insert(activities.end(), v.begin(), v.end());
          } else if constexpr (std::is_same_v<T, std::vector<model::Card>>) {
            cards.insert(cards.end(), v.begin(), v.end());
          } else if constexpr (std::is_same_v<T, std::vector<model::HouseholdMember>>) {
            members.insert(members.end(), v.begin(), v.end());
          } else if constexpr (std::is_same_v<T, std::vector<model::Contact>>) {
            contacts.insert(contacts.end(), v.begin(), v.end());
          } else if constexpr (std::is_same_v<T, std::vector<model::DeviceProfile>>) {
            for (const auto& d : v) merge_device(devices, d, violations);
          } else if constexpr (std::is_same_v<T, std::vector<model::BluetoothState>>) {
            for (const auto& bs : v) {
              bluetooth.insert(bluetooth.end(), bs.pairings.begin(), bs.pairings.end());
            }
          } else if constexpr (std::is_same_v<T, std::vector<model::NamedList>>) {
            lists.insert(lists.end(), v.begin(), v.end());
          } else if constexpr (std::is_same_v<T, model::ListItemsPage>) {
            item_pages.push_back(v);
          } else if constexpr (std::is_same_v<T, model::WifiDetail>) {
            wifi.push_back(v);
          } else if constexpr (std::is_same_v<T, model::SmartHomeTopology>) {
            topology = v;
          } else if constexpr (std::is_same_v<T, model::AccountIdentity>) {
            identity = v;
          }
        },
        art.value);

    parsed[eid].push_back(std::move(art));
  }

  // item pages onto their lists
  for (auto& page : item_pages) {
    bool merged = false;
    for (auto& l : lists) {
      if (l.list_id == page.list_id) {
        l.items = page.items;
        merged = true;
        break;
      }
    }
    if (!merged) {
      model::NamedList orphan;
      orphan.list_id = page.list_id;
      orphan.name = "(unknown list " + page.list_id + ")";
      orphan.items = std::move(page.items);
      violations.push_back({"namedLists-items/" + orphan.list_id,
                            "items page without a list index entry"});
      lists.push_back(std::move(orphan));
    }
  }

  // activities know their audio even when no fetch was attempted
  for (const auto& a : activities) {
    if (!audio_by_utterance.count(a.utterance_id))
      audio_by_utterance[a.utterance_id] = AudioState::NotChecked;
  }

  // case-wide uniqueness invariants
  std::set<std::string> card_ids;
  for (const auto& c : cards) {
    if (!card_ids.insert(c.card_id).second)
      violations.push_back({"cards/" + c.card_id, "card id not unique within case"});
  }
  std::set<std::pair<std::string, std::string>> pairings;
  for (const auto& p : bluetooth) {
    if (!pairings.insert({p.device_serial, p.paired_name}).second)
      violations.push_back({"bluetooth/" + p.device_serial,
                            "duplicate pairing " + p.paired_name});
  }

  // a phoenix ref that names a known Echo serial is not dangling
  if (topology) {
    std::set<std::string> serials;
    for (const auto& d : devices) serials.insert(d.serial_number);
    auto& refs = topology->dangling_refs;
    refs.erase(std::remove_if(refs.begin(), refs.end(),
                              [&](const std::string& r) { return serials.count(r) > 0; }),
               refs.end());
    for (const auto& r : refs) {
      violations.push_back({"phoenix/" + r, "group member references unknown id"});
    }
  }
}

AudioState EvidenceCase::audio_state(const std::string& utterance_id) const {
  auto it = audio_by_utterance.find(utterance_id);
  return it == audio_by_utterance.end() ? AudioState::NotChecked : it->second;
}

const json* EvidenceCase::raw_body(const std::string& endpoint_id) const {
  for (const auto& rec : records) {
    if (!rec.body_is_json || !is_success(rec.status)) continue;
    auto match = client::match_url(rec.url);
    if (match && match->endpoint_id == endpoint_id) return &rec.body_json;
  }
  return nullptr;
}

// ---- disk layout ------------------------------------------------------------

namespace {

util::Result<std::monostate, std::string> write_file(const fs::path& p,
                                                     std::string_view content) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) return std::string("cannot write " + p.string());
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  f.flush();
  if (!f) return std::string("short write to " + p.string());
  return std::monostate{};
}

util::Result<std::string, util::Error> read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) return util::Error{"cannot read " + p.string()};
  std::string content(std::istreambuf_iterator<char>(f), {});
  return content;
}

std::int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

util::Result<CaseManifest, std::string> write_case(const fs::path& dir,
                                                   const EvidenceCase& c,
                                                   const WriteOptions& opts) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) return std::string("cannot create case directory " + dir.string());
  fs::create_directories(dir / "audio", ec);
  fs::create_directories(dir / "parsed", ec);
  if (ec) return std::string("cannot create case subdirectories in " + dir.string());

  std::vector<std::pair<std::string, std::string>> files;

  std::string jsonl;
  for (const auto& rec : c.records) {
    jsonl += rec.to_json().dump();
    jsonl += '\n';
  }
  if (auto r = write_file(dir / "capture.jsonl", jsonl); !r.ok()) return r.error();
  files.emplace_back("capture.jsonl", util::sha256_hex(std::string_view(jsonl)));

  for (const auto& [digest, bytes] : c.audio_blobs) {
    std::string rel = "audio/" + digest + ".bin";
    std::string_view sv(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    if (auto r = write_file(dir / rel, sv); !r.ok()) return r.error();
    files.emplace_back(rel, util::sha256_hex(sv));
  }

  for (const auto& [eid, arts] : c.parsed) {
    json doc;
    doc["endpoint_id"] = eid;
    json parses = json::array();
    for (const auto& a : arts) parses.push_back(a.to_json());
    doc["parses"] = std::move(parses);
    json errors = json::array();
    for (const auto& e : c.parse_errors) {
      if (e.endpoint_id == eid) {
        errors.push_back(json{{"path", e.path},
                              {"expected", e.expected},
                              {"found", e.found},
                              {"input", e.input}});
      }
    }
    if (!errors.empty()) doc["schema_errors"] = std::move(errors);
    std::string rel = "parsed/" + eid + ".json";
    std::string text = doc.dump(2);
    text += '\n';
    if (auto r = write_file(dir / rel, text); !r.ok()) return r.error();
    files.emplace_back(rel, util::sha256_hex(std::string_view(text)));
  }

  std::sort(files.begin(), files.end());

  CaseManifest m;
  m.case_id = dir.filename().string();
  m.created_at_ms = opts.created_at_ms.value_or(now_ms());
  m.tool_version = opts.tool_version;
  m.source = opts.source;
  m.files = std::move(files);
  m.config_echo = opts.config_echo;

  std::string mtext = m.to_json().dump(2);
  mtext += '\n';
  if (auto r = write_file(dir / "manifest.json", mtext); !r.ok()) return r.error();
  return m;
}

util::Result<OpenedCase, std::string> open_case(const fs::path& dir) {
  auto mtext = read_file(dir / "manifest.json");
  if (!mtext.ok()) return std::string("not a case directory: " + mtext.error().message);
  json mjson = json::parse(mtext.value(), nullptr, false);
  if (mjson.is_discarded()) return std::string("manifest.json is not valid JSON");
  auto manifest = CaseManifest::from_json(mjson);
  if (!manifest.ok()) return manifest.error();

  // integrity first: every listed file must hash to its manifest digest
  for (const auto& [rel, digest] : manifest.value().files) {
    auto content = read_file(dir / rel);
    if (!content.ok())
      return std::string("integrity error: missing file " + rel);
    if (util::sha256_hex(std::string_view(content.value())) != digest)
      return std::string("integrity error: digest mismatch for " + rel);
  }

  OpenedCase out;
  out.manifest = std::move(manifest.value());
  out.evidence.case_id = out.manifest.case_id;
  out.evidence.source = out.manifest.source;

  auto jsonl = read_file(dir / "capture.jsonl");
  if (!jsonl.ok()) return std::string("integrity error: capture.jsonl unreadable");
  std::size_t pos = 0;
  std::size_t line_no = 0;
  const std::string& text = jsonl.value();
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line(text.data() + pos, (nl == std::string::npos ? text.size() : nl) - pos);
    pos = nl == std::string::npos ? text.size() : nl + 1;
    ++line_no;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded())
      return std::string("capture.jsonl line " + std::to_string(line_no) + " is not JSON");
    auto rec = ingest::ApiRecord::from_json(j);
    if (!rec.ok())
      return std::string("capture.jsonl line " + std::to_string(line_no) + ": " + rec.error());
    out.evidence.records.push_back(std::move(rec.value()));
  }

  // audio blobs keyed by digest filename
  for (const auto& [rel, digest] : out.manifest.files) {
    if (rel.rfind("audio/", 0) != 0) continue;
    auto content = read_file(dir / rel);
    if (!content.ok()) return std::string("integrity error: missing " + rel);
    out.evidence.audio_blobs[digest] =
        std::vector<std::uint8_t>(content.value().begin(), content.value().end());
  }

  out.evidence.assemble();
  return out;
}

}  // namespace aft::casefile
