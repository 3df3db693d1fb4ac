#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "client/registry.hpp"
#include "ingest/pipeline.hpp"
#include "model/parse.hpp"

namespace aft::client {

struct Session {
  std::string base_url;  // scheme://host[:port]; TLS handled by scheme
  std::string auth_token;
  std::optional<std::string> user_id;
  int parallelism = 1;
  int delay_ms = 0;
  // Deterministic capture stamps for reproducible acquisitions; wall clock
  // otherwise.
  std::optional<std::int64_t> fixed_capture_time_ms;
  int timeout_seconds = 10;
};

struct FetchError {
  enum class Kind { UnknownEndpoint, MissingBinding, Transport };
  Kind kind = Kind::Transport;
  std::string detail;
};

struct FetchOutcome {
  ingest::ApiRecord record;
  std::optional<model::ParsedArtifact> artifact;
  std::optional<model::SchemaMismatch> schema_error;
  bool http_failure = false;  // non-2xx status; the record is still evidence
};

// One GET against the endpoint, record-first: the raw response is captured
// before any parsing happens, and survives a failed parse.
util::Result<FetchOutcome, FetchError> fetch(
    const Session& session, std::string_view endpoint_id,
    const std::map<std::string, std::string>& bindings = {});

struct AudioFetch {
  ingest::ApiRecord record;
  std::optional<model::UtteranceAudio> audio;
  bool http_failure = false;  // a 404 here is evidence of deletion
};

util::Result<AudioFetch, FetchError> fetch_audio(const Session& session,
                                                 const std::string& utterance_id);

}  // namespace aft::client
