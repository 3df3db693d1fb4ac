#pragma once

#include <string>
#include <vector>

#include "casefile/casefile.hpp"

namespace aft::analysis {

struct DiffEntry {
  enum class Kind { FieldChanged, ItemsDiffer, OrderOnly, PresenceDiffer };
  std::string endpoint_id;
  Kind kind = Kind::FieldChanged;
  nlohmann::json details;  // per kind; see diff.cpp
  // Order-only reshuffles are usually usage noise, not functional change.
  bool low_significance() const { return kind == Kind::OrderOnly; }
};

std::string_view to_string(DiffEntry::Kind k);

struct SnapshotDiff {
  std::string case_a;
  std::string case_b;
  std::vector<DiffEntry> entries;

  bool empty() const { return entries.empty(); }
  nlohmann::json to_json() const;
};

// Endpoint-by-endpoint structural comparison of two sealed cases: matched
// items with differing content classify FieldChanged, membership changes
// ItemsDiffer, pure reordering OrderOnly, and endpoints present on one side
// only PresenceDiffer. diff(x, x) is empty; swapping the inputs swaps the
// direction labels and nothing else.
SnapshotDiff diff_snapshots(const casefile::EvidenceCase& a, const casefile::EvidenceCase& b);

}  // namespace aft::analysis
