#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ingest/pipeline.hpp"
#include "model/parse.hpp"
#include "util/result.hpp"

namespace aft::casefile {

using json = nlohmann::json;

enum class CaseSource { LiveAcquisition, CaptureImport, MockAcquisition };
std::string_view to_string(CaseSource s);
std::optional<CaseSource> case_source_from(std::string_view s);

// Audio availability for one utterance, derived from the fetch records:
// a 2xx fetch is presence, a recorded 404 is confirmed absence, anything
// else means the question was never asked.
enum class AudioState { Present, AbsentConfirmed, NotChecked };

struct CaseManifest {
  int schema_version = 1;
  std::string case_id;
  std::int64_t created_at_ms = 0;
  std::string tool_version;
  CaseSource source = CaseSource::CaptureImport;
  std::vector<std::pair<std::string, std::string>> files;  // rel path -> sha256
  json config_echo = json::object();

  json to_json() const;
  static util::Result<CaseManifest, std::string> from_json(const json& j);
};

// A normalized snapshot of one account: raw records plus everything parsed
// and merged out of them. Content-addressed on disk and immutable once the
// manifest is written.
struct EvidenceCase {
  std::string case_id;
  CaseSource source = CaseSource::CaptureImport;
  std::vector<ingest::ApiRecord> records;
  std::map<std::string, std::vector<std::uint8_t>> audio_blobs;  // digest -> bytes

  // derived at assemble():
  std::map<std::string, std::vector<model::ParsedArtifact>> parsed;  // endpoint -> per record
  std::vector<model::SchemaMismatch> parse_errors;
  std::vector<model::InvariantViolation> violations;

  std::vector<model::Activity> activities;
  std::vector<model::Card> cards;
  std::vector<model::DeviceProfile> devices;  // devices-v2 merged with preferences
  std::vector<model::WifiDetail> wifi;
  std::vector<model::BluetoothPairing> bluetooth;
  std::vector<model::HouseholdMember> members;
  std::vector<model::Contact> contacts;
  std::vector<model::NamedList> lists;  // index merged with item pages
  std::optional<model::SmartHomeTopology> topology;
  std::optional<model::AccountIdentity> identity;
  std::map<std::string, AudioState> audio_by_utterance;
  std::map<std::string, std::string> audio_digest_by_utterance;

  // Parses every record through the registry and builds the merged views.
  // Raw records always survive even when every parse fails.
  void assemble();

  AudioState audio_state(const std::string& utterance_id) const;
  const json* raw_body(const std::string& endpoint_id) const;  // first kept record
};

struct WriteOptions {
  std::string tool_version;
  CaseSource source = CaseSource::CaptureImport;
  json config_echo = json::object();
  std::optional<std::int64_t> created_at_ms;  // defaults to wall clock
};

// Lays out <dir>/capture.jsonl, audio/<digest>.bin, parsed/<endpoint>.json
// and writes manifest.json last; the manifest digests every other file.
util::Result<CaseManifest, std::string> write_case(const std::filesystem::path& dir,
                                                   const EvidenceCase& c,
                                                   const WriteOptions& opts);

struct OpenedCase {
  EvidenceCase evidence;
  CaseManifest manifest;
};

// Verifies every manifest digest before anything is trusted; a mismatch or
// missing file is a hard integrity error.
util::Result<OpenedCase, std::string> open_case(const std::filesystem::path& dir);

}  // namespace aft::casefile
