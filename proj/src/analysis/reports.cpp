#include "analysis/reports.hpp"

#include <map>

#include "model/time.hpp"
#include "util/redact.hpp"

namespace aft::analysis {

namespace {

std::string csv_field(const std::string& v) {
  if (v.find_first_of(",\"\n\r") == std::string::npos) return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

std::string join_refs(const std::vector<std::string>& refs) {
  std::string out;
  for (const auto& r : refs) {
    if (!out.empty()) out += ";";
    out += r;
  }
  return out;
}

}  // namespace

AnalysisResult analyze_case(const casefile::EvidenceCase& c, const AnalyzeOptions& opts) {
  AnalysisResult r;
  r.interactions = join_interactions(c, opts.join_window_ms);
  for (const auto& it : r.interactions) {
    auto verdict = classify_deletion(it);
    if (verdict.ok()) {
      r.verdicts.push_back(std::move(verdict.value()));
    } else {
      r.unresolved.push_back(std::move(verdict.error()));
    }
  }
  for (auto& v : infer_history_deletions(c, r.interactions, opts.join_window_ms)) {
    r.verdicts.push_back(std::move(v));
  }
  r.timeline = build_timeline(c, r.interactions);
  r.crosschecks = location_crosscheck(c, opts.patterns);
  return r;
}

nlohmann::json findings_to_json(const casefile::EvidenceCase& c, const AnalysisResult& r,
                                const AnalyzeOptions& opts) {
  using nlohmann::json;
  auto mask = [&](const std::string& v) {
    return opts.redact ? util::mask_value(v) : v;
  };

  json j;
  j["schema_version"] = 1;
  j["case_id"] = c.case_id;
  j["source"] = std::string(casefile::to_string(c.source));
  j["join_window_ms"] = opts.join_window_ms;
  j["redacted"] = opts.redact;

  json verdicts = json::array();
  std::map<std::string, std::size_t> counts;
  for (const auto& v : r.verdicts) {
    ++counts[std::string(to_string(v.state))];
    json vj;
    vj["interaction_id"] = v.interaction_id;
    vj["state"] = std::string(to_string(v.state));
    vj["at"] = model::to_iso8601_utc(v.timestamp_ms);
    vj["evidence"] = v.evidence;
    verdicts.push_back(std::move(vj));
  }
  j["verdicts"] = std::move(verdicts);

  json unresolved = json::array();
  for (const auto& u : r.unresolved) {
    unresolved.push_back(json{{"interaction_id", u.interaction_id}, {"reason", u.reason}});
  }
  j["unresolved"] = std::move(unresolved);

  json crosschecks = json::array();
  for (const auto& f : r.crosschecks) {
    json fj = f.to_json();
    if (fj.contains("device_serial"))
      fj["device_serial"] = mask(fj["device_serial"].get<std::string>());
    crosschecks.push_back(std::move(fj));
  }
  j["crosschecks"] = std::move(crosschecks);

  json violations = json::array();
  for (const auto& v : c.violations) {
    violations.push_back(json{{"path", v.path}, {"detail", v.detail}});
  }
  j["invariant_violations"] = std::move(violations);

  json counts_json = json::object();
  for (const auto& [k, n] : counts) counts_json[k] = n;
  counts_json["interactions"] = r.interactions.size();
  counts_json["timeline_events"] = r.timeline.events.size();
  counts_json["timeline_unplaced"] = r.timeline.unplaced.size();
  counts_json["parse_errors"] = c.parse_errors.size();
  j["counts"] = std::move(counts_json);
  return j;
}

std::string timeline_to_csv(const Timeline& tl, bool redact) {
  std::string out = "at,source,summary,refs,device_serial\n";
  auto row = [&](const TimelineEvent& e, bool placed) {
    std::string device = e.device_serial.value_or("");
    if (redact && !device.empty()) device = util::mask_value(device);
    out += csv_field(placed ? model::to_iso8601_utc(e.at_ms) : "");
    out += ",";
    std::string source(to_string(e.source));
    if (e.source == TimelineEvent::Source::Other && !e.other_endpoint.empty())
      source += "(" + e.other_endpoint + ")";
    out += csv_field(source);
    out += ",";
    out += csv_field(e.summary);
    out += ",";
    out += csv_field(join_refs(e.refs));
    out += ",";
    out += csv_field(device);
    out += "\n";
  };
  for (const auto& e : tl.events) row(e, true);
  for (const auto& e : tl.unplaced) row(e, false);
  return out;
}

}  // namespace aft::analysis
