#include "aft/aft.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "analysis/reports.hpp"
#include "casefile/casefile.hpp"
#include "client/acquire.hpp"
#include "ingest/pipeline.hpp"
#include "mock/server.hpp"
#include "util/redact.hpp"

namespace {

using json = nlohmann::json;

thread_local std::string g_last_error;

aft_status set_error(aft_status s, const std::string& message) {
  g_last_error = message;
  return s;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit_summary(char** out, const json& j) {
  if (out) *out = dup_string(j.dump());
}

aft::util::Result<std::string, aft::util::Error> slurp(const char* path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return aft::util::Error{std::string("cannot read ") + path};
  std::string content(std::istreambuf_iterator<char>(f), {});
  return content;
}

bool write_text(const std::string& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) return false;
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  f.flush();
  return static_cast<bool>(f);
}

bool is_loopback_url(const std::string& base_url) {
  auto u = aft::util::parse_url(base_url);
  return u && (u->host == "127.0.0.1" || u->host == "localhost" || u->host == "::1");
}

}  // namespace

struct aft_options {
  std::map<std::string, long long> ints;
  std::map<std::string, std::string> strings;

  long long get_int(const char* key, long long fallback) const {
    auto it = ints.find(key);
    return it == ints.end() ? fallback : it->second;
  }
  std::string get_string(const char* key, const std::string& fallback = "") const {
    auto it = strings.find(key);
    return it == strings.end() ? fallback : it->second;
  }
};

struct aft_mock {
  std::unique_ptr<aft::mock::MockServer> server;
};

extern "C" {

const char* aft_version(void) { return AFT_VERSION; }

const char* aft_status_name(aft_status s) {
  switch (s) {
    case AFT_OK: return "ok";
    case AFT_PARTIAL: return "partial";
    case AFT_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case AFT_ERR_IO: return "io-error";
    case AFT_ERR_NOT_AN_EXPORT: return "not-an-export";
    case AFT_ERR_TRANSPORT: return "transport-error";
    case AFT_ERR_INTEGRITY: return "integrity-error";
    case AFT_ERR_FIXTURE: return "invalid-fixture";
    case AFT_ERR_INTERNAL: return "internal-error";
  }
  return "unknown";
}

const char* aft_last_error(void) { return g_last_error.c_str(); }

void aft_string_free(char* s) { std::free(s); }

aft_options* aft_options_new(void) { return new aft_options(); }

void aft_options_free(aft_options* o) { delete o; }

aft_status aft_options_set_int(aft_options* o, const char* key, long long value) {
  if (!o || !key) return set_error(AFT_ERR_INVALID_ARGUMENT, "null option bag or key");
  static const std::set<std::string> known = {"parallelism",    "delay_ms", "timeout_s",
                                              "join_window_ms", "redact",   "captured_at_ms"};
  if (!known.count(key))
    return set_error(AFT_ERR_INVALID_ARGUMENT, std::string("unknown integer option ") + key);
  o->ints[key] = value;
  return AFT_OK;
}

aft_status aft_options_set_string(aft_options* o, const char* key, const char* value) {
  if (!o || !key || !value)
    return set_error(AFT_ERR_INVALID_ARGUMENT, "null option bag, key, or value");
  static const std::set<std::string> known = {"allow_hosts", "pattern_file", "user_id"};
  if (!known.count(key))
    return set_error(AFT_ERR_INVALID_ARGUMENT, std::string("unknown string option ") + key);
  o->strings[key] = value;
  return AFT_OK;
}

aft_status aft_ingest(const char* export_path, const char* case_dir,
                      const aft_options* o, char** summary_json) {
  if (!export_path || !case_dir)
    return set_error(AFT_ERR_INVALID_ARGUMENT, "export path and case dir are required");
  aft_options defaults;
  if (!o) o = &defaults;

  auto xml = slurp(export_path);
  if (!xml.ok()) return set_error(AFT_ERR_IO, xml.error().message);

  std::vector<std::string> allowlist = aft::ingest::default_host_allowlist();
  std::string hosts = o->get_string("allow_hosts");
  if (!hosts.empty()) {
    allowlist.clear();
    std::size_t pos = 0;
    while (pos <= hosts.size()) {
      auto comma = hosts.find(',', pos);
      std::string host = hosts.substr(pos, comma == std::string::npos ? std::string::npos
                                                                      : comma - pos);
      if (!host.empty()) allowlist.push_back(host);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (allowlist.empty())
      return set_error(AFT_ERR_INVALID_ARGUMENT, "allow_hosts override is empty");
  }

  auto outcome = aft::ingest::run_pipeline(xml.value(), allowlist);
  if (!outcome.ok())
    return set_error(AFT_ERR_NOT_AN_EXPORT, "not a proxy export: " + outcome.error().reason);

  aft::casefile::EvidenceCase evidence;
  evidence.records = std::move(outcome.value().records);
  evidence.assemble();

  aft::casefile::WriteOptions wopts;
  wopts.tool_version = AFT_VERSION;
  wopts.source = aft::casefile::CaseSource::CaptureImport;
  wopts.config_echo = json{{"allow_hosts", allowlist}, {"export", export_path}};
  if (o->ints.count("captured_at_ms")) wopts.created_at_ms = o->get_int("captured_at_ms", 0);

  auto manifest = aft::casefile::write_case(case_dir, evidence, wopts);
  if (!manifest.ok()) return set_error(AFT_ERR_IO, manifest.error());

  json rejects = json::array();
  for (const auto& r : outcome.value().rejects) {
    rejects.push_back(json{{"byte_offset", r.byte_offset}, {"reason", r.reason}});
  }
  json summary;
  summary["command"] = "ingest";
  summary["case_id"] = manifest.value().case_id;
  summary["case_dir"] = case_dir;
  summary["conservation"] = outcome.value().report.to_json();
  summary["rejects"] = std::move(rejects);
  summary["records"] = evidence.records.size();
  emit_summary(summary_json, summary);
  return AFT_OK;
}

aft_status aft_acquire(const char* base_url, const char* token, const char* case_dir,
                       const aft_options* o, char** summary_json) {
  if (!base_url || !token || !case_dir)
    return set_error(AFT_ERR_INVALID_ARGUMENT, "base url, token, and case dir are required");
  if (std::string(token).empty())
    return set_error(AFT_ERR_INVALID_ARGUMENT, "token must be nonempty");
  aft_options defaults;
  if (!o) o = &defaults;

  aft::client::Session session;
  session.base_url = base_url;
  session.auth_token = token;
  session.parallelism = static_cast<int>(o->get_int("parallelism", 1));
  session.delay_ms = static_cast<int>(o->get_int("delay_ms", 0));
  session.timeout_seconds = static_cast<int>(o->get_int("timeout_s", 10));
  if (o->ints.count("captured_at_ms"))
    session.fixed_capture_time_ms = o->get_int("captured_at_ms", 0);
  std::string user_id = o->get_string("user_id");
  if (!user_id.empty()) session.user_id = user_id;

  auto acquired = aft::client::acquire_case(session);
  if (!acquired.ok()) return set_error(AFT_ERR_TRANSPORT, acquired.error().detail);
  auto& outcome = acquired.value();

  aft::casefile::WriteOptions wopts;
  wopts.tool_version = AFT_VERSION;
  wopts.source = is_loopback_url(base_url) ? aft::casefile::CaseSource::MockAcquisition
                                           : aft::casefile::CaseSource::LiveAcquisition;
  wopts.config_echo = json{{"base_url", base_url},
                           {"token", aft::util::mask_value(token)},
                           {"parallelism", session.parallelism},
                           {"delay_ms", session.delay_ms}};
  if (session.fixed_capture_time_ms) {
    wopts.created_at_ms = *session.fixed_capture_time_ms;
    wopts.config_echo["captured_at_ms"] = *session.fixed_capture_time_ms;
  }

  auto manifest = aft::casefile::write_case(case_dir, outcome.evidence, wopts);
  if (!manifest.ok()) return set_error(AFT_ERR_IO, manifest.error());

  json summary;
  summary["command"] = "acquire";
  summary["case_id"] = manifest.value().case_id;
  summary["case_dir"] = case_dir;
  summary["records"] = outcome.evidence.records.size();
  summary["fetches"] = outcome.fetches;
  summary["http_failures"] = outcome.http_failures;
  summary["schema_errors"] = outcome.schema_errors;
  summary["warnings"] = outcome.warnings;
  emit_summary(summary_json, summary);

  bool partial = outcome.http_failures > 0 || outcome.schema_errors > 0;
  if (partial) {
    g_last_error.clear();
    return AFT_PARTIAL;
  }
  return AFT_OK;
}

aft_status aft_analyze(const char* case_dir, const char* out_dir,
                       const aft_options* o, char** summary_json) {
  if (!case_dir || !out_dir)
    return set_error(AFT_ERR_INVALID_ARGUMENT, "case dir and out dir are required");
  aft_options defaults;
  if (!o) o = &defaults;

  auto opened = aft::casefile::open_case(case_dir);
  if (!opened.ok()) {
    bool integrity = opened.error().rfind("integrity error", 0) == 0;
    return set_error(integrity ? AFT_ERR_INTEGRITY : AFT_ERR_IO, opened.error());
  }

  aft::analysis::AnalyzeOptions aopts;
  aopts.join_window_ms = o->get_int("join_window_ms", 5000);
  aopts.redact = o->get_int("redact", 1) != 0;
  std::string pattern_file = o->get_string("pattern_file");
  if (!pattern_file.empty()) {
    auto text = slurp(pattern_file.c_str());
    if (!text.ok()) return set_error(AFT_ERR_IO, text.error().message);
    json pj = json::parse(text.value(), nullptr, false);
    if (pj.is_discarded())
      return set_error(AFT_ERR_INVALID_ARGUMENT, "pattern file is not valid JSON");
    auto patterns = aft::analysis::patterns_from_json(pj);
    if (!patterns.ok()) return set_error(AFT_ERR_INVALID_ARGUMENT, patterns.error());
    aopts.patterns = std::move(patterns.value());
  }

  auto result = aft::analysis::analyze_case(opened.value().evidence, aopts);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) return set_error(AFT_ERR_IO, std::string("cannot create ") + out_dir);

  json findings = aft::analysis::findings_to_json(opened.value().evidence, result, aopts);
  std::string findings_path = std::string(out_dir) + "/findings.json";
  if (!write_text(findings_path, findings.dump(2) + "\n"))
    return set_error(AFT_ERR_IO, "cannot write " + findings_path);

  std::string csv = aft::analysis::timeline_to_csv(result.timeline, aopts.redact);
  std::string csv_path = std::string(out_dir) + "/timeline.csv";
  if (!write_text(csv_path, csv))
    return set_error(AFT_ERR_IO, "cannot write " + csv_path);

  json summary;
  summary["command"] = "analyze";
  summary["case_id"] = opened.value().evidence.case_id;
  summary["findings"] = findings_path;
  summary["timeline"] = csv_path;
  summary["counts"] = findings["counts"];
  summary["unresolved"] = result.unresolved.size();
  emit_summary(summary_json, summary);
  return AFT_OK;
}

aft_status aft_case_diff(const char* case_dir_a, const char* case_dir_b,
                         const char* out_path, const aft_options* o,
                         char** summary_json) {
  (void)o;
  if (!case_dir_a || !case_dir_b || !out_path)
    return set_error(AFT_ERR_INVALID_ARGUMENT, "two case dirs and an output path are required");

  auto a = aft::casefile::open_case(case_dir_a);
  if (!a.ok()) {
    bool integrity = a.error().rfind("integrity error", 0) == 0;
    return set_error(integrity ? AFT_ERR_INTEGRITY : AFT_ERR_IO,
                     std::string(case_dir_a) + ": " + a.error());
  }
  auto b = aft::casefile::open_case(case_dir_b);
  if (!b.ok()) {
    bool integrity = b.error().rfind("integrity error", 0) == 0;
    return set_error(integrity ? AFT_ERR_INTEGRITY : AFT_ERR_IO,
                     std::string(case_dir_b) + ": " + b.error());
  }

  auto diff = aft::analysis::diff_snapshots(a.value().evidence, b.value().evidence);
  if (!write_text(out_path, diff.to_json().dump(2) + "\n"))
    return set_error(AFT_ERR_IO, std::string("cannot write ") + out_path);

  json summary;
  summary["command"] = "diff";
  summary["case_a"] = diff.case_a;
  summary["case_b"] = diff.case_b;
  summary["entries"] = diff.entries.size();
  summary["out"] = out_path;
  summary["empty"] = diff.empty();
  emit_summary(summary_json, summary);
  return AFT_OK;
}

int aft_registry_count(void) {
  return static_cast<int>(aft::client::registry().size());
}

char* aft_registry_json(void) {
  json arr = json::array();
  for (const auto& ep : aft::client::registry()) arr.push_back(ep.to_json());
  return dup_string(arr.dump(2));
}

char* aft_default_fixture_json(void) {
  return dup_string(aft::mock::default_fixture_json());
}

aft_status aft_mock_start(const char* fixture_path, int port, aft_mock** out) {
  if (!out) return set_error(AFT_ERR_INVALID_ARGUMENT, "null output handle");
  *out = nullptr;

  json fixture;
  if (fixture_path) {
    auto text = slurp(fixture_path);
    if (!text.ok()) return set_error(AFT_ERR_IO, text.error().message);
    fixture = json::parse(text.value(), nullptr, false);
    if (fixture.is_discarded())
      return set_error(AFT_ERR_FIXTURE, std::string(fixture_path) + " is not valid JSON");
  } else {
    fixture = json::parse(aft::mock::default_fixture_json());
  }

  auto state = aft::mock::load_fixture(fixture);
  if (!state.ok()) return set_error(AFT_ERR_FIXTURE, state.error().violated_invariant);

  auto server = std::make_unique<aft::mock::MockServer>(std::move(state.value()));
  auto started = server->start(port);
  if (!started.ok()) return set_error(AFT_ERR_TRANSPORT, started.error());

  auto* handle = new aft_mock();
  handle->server = std::move(server);
  *out = handle;
  return AFT_OK;
}

int aft_mock_port(const aft_mock* m) { return m && m->server ? m->server->port() : -1; }

aft_status aft_mock_run_script(aft_mock* m, const char* script_json_text,
                               char** trace_json) {
  if (!m || !m->server || !script_json_text)
    return set_error(AFT_ERR_INVALID_ARGUMENT, "mock handle and script are required");
  json script = json::parse(script_json_text, nullptr, false);
  if (script.is_discarded())
    return set_error(AFT_ERR_INVALID_ARGUMENT, "script is not valid JSON");
  auto trace = m->server->run_script(script);
  if (!trace.ok()) return set_error(AFT_ERR_INVALID_ARGUMENT, trace.error());
  if (trace_json) *trace_json = dup_string(trace.value().dump());
  return AFT_OK;
}

aft_status aft_mock_run_script_file(aft_mock* m, const char* script_path,
                                    char** trace_json) {
  if (!script_path) return set_error(AFT_ERR_INVALID_ARGUMENT, "script path is required");
  auto text = slurp(script_path);
  if (!text.ok()) return set_error(AFT_ERR_IO, text.error().message);
  return aft_mock_run_script(m, text.value().c_str(), trace_json);
}

void aft_mock_stop(aft_mock* m) {
  if (!m) return;
  if (m->server) m->server->stop();
  delete m;
}

}  // extern "C"
