#include "ingest/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <set>
#include <utility>

#include "model/time.hpp"
#include "util/base64.hpp"
#include "util/hash.hpp"
#include "util/url.hpp"

namespace aft::ingest {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool is_json_mime(std::string_view mime) {
  return lower(mime).find("json") != std::string::npos;
}

bool is_utterance_audio_path(std::string_view path) {
  return path.rfind("/api/utterance", 0) == 0;
}

bool host_allowed(const std::string& host, const std::vector<std::string>& allowlist) {
  for (const auto& pattern : allowlist) {
    std::string p = lower(pattern);
    if (host == p) return true;
    if (p.size() > 1 && p.front() == '.' && host.size() > p.size() &&
        host.compare(host.size() - p.size(), p.size(), p) == 0)
      return true;  // ".amazon.com" style suffix pattern
  }
  return false;
}

// Burp writes times like "Tue Aug 06 15:54:20 BST 2019"; ISO-8601 and epoch
// forms are handled by the model. Anything else leaves captured_at unset.
std::optional<std::int64_t> parse_capture_time(const std::string& text) {
  if (text.empty()) return std::nullopt;
  auto iso = model::normalize_timestamp(std::string_view(text), std::nullopt);
  if (iso.ok()) return iso.value().epoch_ms;

  static const std::map<std::string, int> kZones = {
      {"UTC", 0},    {"GMT", 0},    {"BST", 3600},  {"IST", 3600},
      {"CET", 3600}, {"CEST", 7200},{"EST", -18000},{"EDT", -14400},
      {"CST", -21600},{"CDT", -18000},{"MST", -25200},{"MDT", -21600},
      {"PST", -28800},{"PDT", -25200}};
  static const std::map<std::string, unsigned> kMonths = {
      {"Jan", 1}, {"Feb", 2}, {"Mar", 3}, {"Apr", 4},  {"May", 5},  {"Jun", 6},
      {"Jul", 7}, {"Aug", 8}, {"Sep", 9}, {"Oct", 10}, {"Nov", 11}, {"Dec", 12}};

  std::vector<std::string> tok;
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) tok.push_back(std::exchange(cur, ""));
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) tok.push_back(cur);
  if (tok.size() != 6) return std::nullopt;

  auto month_it = kMonths.find(tok[1]);
  auto zone_it = kZones.find(tok[4]);
  if (month_it == kMonths.end() || zone_it == kZones.end()) return std::nullopt;
  try {
    unsigned day = static_cast<unsigned>(std::stoul(tok[2]));
    std::int64_t year = std::stoll(tok[5]);
    unsigned hh = 0, mm = 0, ss = 0;
    if (std::sscanf(tok[3].c_str(), "%u:%u:%u", &hh, &mm, &ss) != 3) return std::nullopt;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02u:%02u:%02u",
                  static_cast<long long>(year), month_it->second, day, hh, mm, ss);
    auto r = model::normalize_timestamp(std::string_view(buf), std::nullopt);
    if (!r.ok()) return std::nullopt;
    return r.value().epoch_ms - zone_it->second * 1000LL;
  } catch (...) {
    return std::nullopt;
  }
}

}  // namespace

bool ApiRecord::body_is_empty() const {
  if (body_is_json) {
    return body_json.is_null() ||
           (body_json.is_array() && body_json.empty()) ||
           (body_json.is_object() && body_json.empty());
  }
  return body_bytes.empty();
}

std::string ApiRecord::digest_of(const json& body) {
  return util::sha256_hex(std::string_view(body.dump()));
}

std::string ApiRecord::digest_of(const std::vector<std::uint8_t>& bytes) {
  return util::sha256_hex(std::span<const std::uint8_t>(bytes.data(), bytes.size()));
}

void ApiRecord::recompute_digest() {
  body_digest = body_is_json ? digest_of(body_json) : digest_of(body_bytes);
}

json ApiRecord::to_json() const {
  json j;
  j["url"] = url;
  j["method"] = method;
  j["status"] = status;
  j["mime_type"] = mime_type;
  if (captured_at_ms) j["captured_at"] = model::to_iso8601_utc(*captured_at_ms);
  if (body_is_json) {
    j["body"] = body_json;
  } else {
    j["body_b64"] = util::base64_encode(
        std::span<const std::uint8_t>(body_bytes.data(), body_bytes.size()));
  }
  j["body_digest"] = body_digest;
  return j;
}

util::Result<ApiRecord, std::string> ApiRecord::from_json(const json& j) {
  if (!j.is_object()) return std::string("record is not an object");
  ApiRecord r;
  try {
    r.url = j.at("url").get<std::string>();
    if (!util::parse_url(r.url)) return std::string("record url does not parse: " + r.url);
    r.method = j.at("method").get<std::string>();
    r.status = j.at("status").get<int>();
    if (r.status < 100 || r.status > 599)
      return std::string("record status out of range: " + std::to_string(r.status));
    r.mime_type = j.at("mime_type").get<std::string>();
    if (j.contains("captured_at")) {
      auto t = model::normalize_timestamp(j.at("captured_at"), std::nullopt);
      if (!t.ok()) return std::string("bad captured_at in record");
      r.captured_at_ms = t.value().epoch_ms;
    }
    if (j.contains("body")) {
      r.body_is_json = true;
      r.body_json = j.at("body");
    } else if (j.contains("body_b64")) {
      auto bytes = util::base64_decode(j.at("body_b64").get<std::string>());
      if (!bytes) return std::string("bad body_b64 in record");
      r.body_bytes = std::move(*bytes);
    } else {
      return std::string("record has neither body nor body_b64");
    }
    std::string stored = j.value("body_digest", "");
    r.recompute_digest();
    if (!stored.empty() && stored != r.body_digest)
      return std::string("body digest mismatch for " + r.url);
  } catch (const json::exception& e) {
    return std::string("malformed record: ") + e.what();
  }
  return r;
}

std::vector<std::string> default_host_allowlist() {
  return {"alexa.amazon.com", "alexa.amazon.co.uk",
          "alexa-comms-mobile-service.amazon.co.uk"};
}

FilterReport filter_and_simplify(const CaptureExport& exp,
                                 const std::vector<std::string>& host_allowlist) {
  FilterReport out;
  for (const ExportItem& item : exp.items) {
    auto url = util::parse_url(item.url);
    if (!url) {
      ++out.dropped_bad_url;
      continue;
    }
    if (!host_allowed(url->host, host_allowlist)) {
      ++out.dropped_host;
      continue;
    }
    bool json_mime = is_json_mime(item.mimetype);
    bool audio = is_utterance_audio_path(url->path);
    if (!json_mime && !audio) {
      ++out.dropped_mime;
      continue;
    }
    if (item.status < 100 || item.status > 599) {
      ++out.dropped_bad_status;
      continue;
    }

    std::vector<std::uint8_t> body;
    if (item.response_base64) {
      auto decoded = util::base64_decode(item.response_payload);
      if (!decoded) {
        ++out.dropped_undecodable;
        continue;
      }
      body = std::move(*decoded);
    } else {
      body.assign(item.response_payload.begin(), item.response_payload.end());
    }

    ApiRecord rec;
    rec.url = item.url;
    rec.method = item.method;
    rec.status = item.status;
    rec.mime_type = item.mimetype;
    if (item.time_text) rec.captured_at_ms = parse_capture_time(*item.time_text);

    if (json_mime) {
      json parsed = json::parse(body.begin(), body.end(), nullptr, false);
      if (parsed.is_discarded()) {
        // JSON MIME with an unparseable payload: kept as bytes, still evidence
        rec.body_bytes = std::move(body);
      } else {
        rec.body_is_json = true;
        rec.body_json = std::move(parsed);
      }
    } else {
      rec.body_bytes = std::move(body);
    }
    rec.recompute_digest();
    out.records.push_back(std::move(rec));
  }
  return out;
}

DedupeReport dedupe(std::vector<ApiRecord> records) {
  DedupeReport out;
  std::set<std::pair<std::string, std::string>> seen;
  for (auto& rec : records) {
    std::string canon = util::canonical_url(rec.url).value_or(rec.url);
    if (!seen.insert({canon, rec.body_digest}).second) {
      ++out.dup_removed;
      continue;
    }
    if (rec.body_is_empty()) {
      ++out.empty_removed;
      continue;
    }
    out.records.push_back(std::move(rec));
  }
  out.kept = out.records.size();
  return out;
}

json ConservationReport::to_json() const {
  json j;
  j["total"] = total;
  j["kept"] = kept;
  j["rejects"] = rejects;
  j["dropped_by_filter"] = dropped_by_filter;
  j["dup_removed"] = dup_removed;
  j["empty_removed"] = empty_removed;
  j["conserved"] = conserved();
  return j;
}

util::Result<IngestOutcome, NotAnExport> run_pipeline(
    std::string_view xml, const std::vector<std::string>& host_allowlist) {
  auto parsed = parse_export(xml);
  if (!parsed.ok()) return parsed.error();
  CaptureExport& exp = parsed.value();

  FilterReport filtered = filter_and_simplify(exp, host_allowlist);
  DedupeReport deduped = dedupe(std::move(filtered.records));

  IngestOutcome out;
  out.report.total = exp.total_items();
  out.report.rejects = exp.rejects.size();
  out.report.dropped_by_filter = filtered.dropped_total();
  out.report.dup_removed = deduped.dup_removed;
  out.report.empty_removed = deduped.empty_removed;
  out.report.kept = deduped.kept;
  out.records = std::move(deduped.records);
  out.rejects = std::move(exp.rejects);
  return out;
}

}  // namespace aft::ingest
