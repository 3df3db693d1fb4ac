#pragma once

#include "analysis/crosscheck.hpp"
#include "analysis/diff.hpp"
#include "analysis/interactions.hpp"
#include "analysis/timeline.hpp"

namespace aft::analysis {

struct AnalyzeOptions {
  std::int64_t join_window_ms = 5000;
  bool redact = true;  // masks identifiers in rendered reports, never in storage
  std::vector<LocationPattern> patterns = default_location_patterns();
};

struct AnalysisResult {
  std::vector<Interaction> interactions;
  std::vector<DeletionVerdict> verdicts;  // classified + residue-inferred
  std::vector<Unresolved> unresolved;
  Timeline timeline;
  std::vector<CrosscheckFinding> crosschecks;
};

AnalysisResult analyze_case(const casefile::EvidenceCase& c, const AnalyzeOptions& opts);

// findings.json: verdicts, crosschecks, violations; schema_version 1.
nlohmann::json findings_to_json(const casefile::EvidenceCase& c, const AnalysisResult& r,
                                const AnalyzeOptions& opts);

// timeline.csv: at ISO-8601, source, summary, refs, device serial. Events
// without a usable timestamp follow at the end with an empty at column.
std::string timeline_to_csv(const Timeline& tl, bool redact);

}  // namespace aft::analysis
