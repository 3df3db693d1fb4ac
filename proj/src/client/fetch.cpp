#include "client/fetch.hpp"

#include <httplib.h>

#include <chrono>

namespace aft::client {

namespace {

std::int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

bool is_json_content_type(std::string_view ct) {
  std::string lower(ct);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return lower.find("json") != std::string::npos;
}

struct RawResponse {
  int status = 0;
  std::string content_type;
  std::string body;
};

util::Result<RawResponse, FetchError> http_get(const Session& session,
                                               const std::string& path_and_query) {
  httplib::Client cli(session.base_url);
  cli.set_connection_timeout(session.timeout_seconds, 0);
  cli.set_read_timeout(session.timeout_seconds, 0);
  cli.set_follow_location(false);
  httplib::Headers headers{{"Authorization", "Bearer " + session.auth_token}};
  auto res = cli.Get(path_and_query, headers);
  if (!res) {
    return FetchError{FetchError::Kind::Transport,
                      session.base_url + path_and_query + ": " + httplib::to_string(res.error())};
  }
  RawResponse out;
  out.status = res->status;
  out.content_type = res->get_header_value("Content-Type");
  out.body = std::move(res->body);
  return out;
}

ingest::ApiRecord make_record(const Session& session, const std::string& path_and_query,
                              const RawResponse& raw) {
  ingest::ApiRecord rec;
  rec.url = session.base_url + path_and_query;
  rec.method = "GET";
  rec.status = raw.status;
  rec.mime_type = raw.content_type;
  rec.captured_at_ms = session.fixed_capture_time_ms.value_or(now_ms());
  if (is_json_content_type(raw.content_type)) {
    auto parsed = nlohmann::json::parse(raw.body, nullptr, false);
    if (parsed.is_discarded()) {
      rec.body_bytes.assign(raw.body.begin(), raw.body.end());
    } else {
      rec.body_is_json = true;
      rec.body_json = std::move(parsed);
    }
  } else {
    rec.body_bytes.assign(raw.body.begin(), raw.body.end());
  }
  rec.recompute_digest();
  return rec;
}

}  // namespace

util::Result<FetchOutcome, FetchError> fetch(
    const Session& session, std::string_view endpoint_id,
    const std::map<std::string, std::string>& bindings) {
  const EndpointDescriptor* ep = find_endpoint(endpoint_id);
  if (!ep)
    return FetchError{FetchError::Kind::UnknownEndpoint,
                      "no registry endpoint '" + std::string(endpoint_id) + "'"};
  auto path = render_path(*ep, bindings);
  if (!path.ok())
    return FetchError{FetchError::Kind::MissingBinding, path.error().name};

  auto raw = http_get(session, path.value());
  if (!raw.ok()) return raw.error();

  FetchOutcome out;
  out.record = make_record(session, path.value(), raw.value());
  out.http_failure = out.record.status < 200 || out.record.status >= 300;
  if (!out.http_failure && out.record.body_is_json) {
    auto parsed = model::parse_artifact(ep->endpoint_id, out.record.body_json);
    if (parsed.ok()) {
      out.artifact = std::move(parsed.value());
    } else {
      out.schema_error = std::move(parsed.error());
    }
  }
  return out;
}

util::Result<AudioFetch, FetchError> fetch_audio(const Session& session,
                                                 const std::string& utterance_id) {
  if (utterance_id.empty())
    return FetchError{FetchError::Kind::MissingBinding, "utterance_id"};
  const EndpointDescriptor* ep = find_endpoint("utterance-audio");
  auto path = render_path(*ep, {{"utterance_id", utterance_id}});
  if (!path.ok())
    return FetchError{FetchError::Kind::MissingBinding, path.error().name};

  auto raw = http_get(session, path.value());
  if (!raw.ok()) return raw.error();

  AudioFetch out;
  out.record = make_record(session, path.value(), raw.value());
  out.http_failure = out.record.status < 200 || out.record.status >= 300;
  if (!out.http_failure && !out.record.body_is_json) {
    out.audio = model::UtteranceAudio::from_bytes(utterance_id, out.record.body_bytes);
  }
  return out;
}

}  // namespace aft::client
