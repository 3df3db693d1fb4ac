#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ingest/export_xml.hpp"
#include "util/result.hpp"

namespace aft::ingest {

using json = nlohmann::json;

// One captured or fetched endpoint response; the unit of raw evidence.
// JSON bodies are held parsed and digested over their canonical dump, so the
// digest recomputes from the stored record regardless of the whitespace the
// wire happened to use. Non-JSON bodies are digested over their raw bytes.
struct ApiRecord {
  std::string url;     // absolute, as captured
  std::string method;
  int status = 0;
  std::string mime_type;
  std::optional<std::int64_t> captured_at_ms;
  bool body_is_json = false;
  json body_json;                       // valid when body_is_json
  std::vector<std::uint8_t> body_bytes; // valid when !body_is_json
  std::string body_digest;              // sha256 hex

  bool body_is_empty() const;
  static std::string digest_of(const json& body);
  static std::string digest_of(const std::vector<std::uint8_t>& bytes);
  void recompute_digest();

  json to_json() const;  // stable key order; one line of capture.jsonl
  static util::Result<ApiRecord, std::string> from_json(const json& j);
};

struct FilterReport {
  std::vector<ApiRecord> records;
  std::size_t dropped_host = 0;       // host not on the allowlist
  std::size_t dropped_mime = 0;       // response type not retained
  std::size_t dropped_bad_url = 0;    // url does not parse
  std::size_t dropped_bad_status = 0; // status outside 100..599
  std::size_t dropped_undecodable = 0;

  std::size_t dropped_total() const {
    return dropped_host + dropped_mime + dropped_bad_url + dropped_bad_status +
           dropped_undecodable;
  }
};

// Hosts named in the capture methodology; the contacts service lives on its
// own domain.
std::vector<std::string> default_host_allowlist();

// Keeps items whose host matches the allowlist and whose response is JSON
// (or the utterance-audio endpoint, the one non-JSON API of interest).
// Total: every item ends up either converted or counted.
FilterReport filter_and_simplify(const CaptureExport& exp,
                                 const std::vector<std::string>& host_allowlist);

struct DedupeReport {
  std::vector<ApiRecord> records;
  std::size_t kept = 0;
  std::size_t dup_removed = 0;    // same (canonical url, body digest), later copy
  std::size_t empty_removed = 0;  // empty, null, [] or {} bodies
};

// Removes duplicate and empty records, keeping the earliest occurrence and
// stable order otherwise. Idempotent.
DedupeReport dedupe(std::vector<ApiRecord> records);

// Conservation of evidence: every export item is accounted for exactly once.
struct ConservationReport {
  std::size_t total = 0;
  std::size_t kept = 0;
  std::size_t rejects = 0;
  std::size_t dropped_by_filter = 0;
  std::size_t dup_removed = 0;
  std::size_t empty_removed = 0;

  bool conserved() const {
    return kept + rejects + dropped_by_filter + dup_removed + empty_removed == total;
  }
  json to_json() const;
};

struct IngestOutcome {
  std::vector<ApiRecord> records;
  std::vector<ExportReject> rejects;
  ConservationReport report;
};

util::Result<IngestOutcome, NotAnExport> run_pipeline(
    std::string_view xml, const std::vector<std::string>& host_allowlist);

}  // namespace aft::ingest
