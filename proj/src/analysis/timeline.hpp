#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "analysis/interactions.hpp"
#include "casefile/casefile.hpp"

namespace aft::analysis {

// One normalized UTC event with provenance; merged from every source that
// carries user-action timestamps.
struct TimelineEvent {
  enum class Source { Activity, Card, ListItemCreated, ListItemUpdated, Notification, Other };

  std::int64_t at_ms = 0;
  Source source = Source::Other;
  std::string other_endpoint;  // set when source == Other
  std::string summary;
  std::vector<std::string> refs;  // artifact ids
  std::optional<std::string> device_serial;
};

std::string_view to_string(TimelineEvent::Source s);

// Fixed tie-break rank: Activity < Card < ListItemCreated < ListItemUpdated
// < Notification < Other.
int source_rank(TimelineEvent::Source s);

// Total, deterministic order: (at, source rank, first ref, summary).
void sort_events(std::vector<TimelineEvent>& events);

struct Timeline {
  std::vector<TimelineEvent> events;    // placed, sorted
  std::vector<TimelineEvent> unplaced;  // unusable timestamps, never dropped
};

// Merges activities, unjoined cards, list item created/updated events and
// notifications. `interactions` tells which cards were already joined to an
// activity (those do not produce a second event).
Timeline build_timeline(const casefile::EvidenceCase& c,
                        const std::vector<Interaction>& interactions);

}  // namespace aft::analysis
