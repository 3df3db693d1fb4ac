#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "casefile/casefile.hpp"
#include "model/artifacts.hpp"
#include "util/result.hpp"

namespace aft::analysis {

// The (activity, card, audio) triple sharing one interaction identity; the
// unit of deletion analysis.
struct Interaction {
  std::string interaction_id;  // utterance id when present, else synthetic
  std::optional<model::Activity> activity;
  std::optional<model::Card> card;
  casefile::AudioState audio = casefile::AudioState::NotChecked;
  std::int64_t timestamp_ms = 0;
  std::string timestamp_source;  // "activity" or "card"
  std::string device_serial;     // empty when only a card without device info

  std::string utterance_id() const {
    return activity ? activity->utterance_id : std::string();
  }
};

// Joins activities and cards by explicit activity linkage when cards carry
// one, otherwise by device and time proximity (maximum-cardinality matching,
// ties broken by smaller gap then card id). Unmatched artifacts become
// singleton interactions. Deterministic given the case.
std::vector<Interaction> join_interactions(const casefile::EvidenceCase& c,
                                           std::int64_t join_window_ms);

struct DeletionVerdict {
  enum class State {
    Intact,
    VoiceRecordingDeleted,
    CardRemoved,
    CardAndVoiceDeleted,
    InferredHistoryDeletion,
    Anomalous,
  };
  State state = State::Intact;
  std::string interaction_id;
  std::int64_t timestamp_ms = 0;
  std::vector<std::string> evidence;  // which API held or lacked which artifact
};

std::string_view to_string(DeletionVerdict::State s);

struct Unresolved {
  std::string interaction_id;
  std::string reason;
};

// Pure mapping over the presence triple. Triples unreachable by composing
// the documented deletion operations come back Anomalous. Requires the
// audio question to have been asked: NotChecked yields Unresolved.
util::Result<DeletionVerdict, Unresolved> classify_deletion(const Interaction& interaction);

// Full absence is only inferable from residue: artifacts with user-action
// timestamps (list items) that have no interaction anywhere near them. The
// shopping-list reconstruction.
std::vector<DeletionVerdict> infer_history_deletions(
    const casefile::EvidenceCase& c, const std::vector<Interaction>& interactions,
    std::int64_t join_window_ms);

}  // namespace aft::analysis
