#include "analysis/interactions.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

#include "model/time.hpp"

namespace aft::analysis {

namespace {

using casefile::AudioState;

std::string card_device(const model::Card& c) {
  // the typed schema carries no device on cards; honor it when a capture does
  auto it = c.extras.find("deviceSerialNumber");
  if (it != c.extras.end() && it->is_string()) return it->get<std::string>();
  return "";
}

// Kuhn's augmenting-path matching; instances are small (cards within one
// join window of one device).
struct Matcher {
  std::vector<std::vector<int>> adj;  // card -> candidate activity slots
  std::vector<int> match_of_activity;
  std::vector<int> match_of_card;
  std::vector<bool> visited;

  bool try_assign(int card) {
    for (int act : adj[card]) {
      if (visited[act]) continue;
      visited[act] = true;
      if (match_of_activity[act] < 0 || try_assign(match_of_activity[act])) {
        match_of_activity[act] = card;
        match_of_card[card] = act;
        return true;
      }
    }
    return false;
  }
};

}  // namespace

std::vector<Interaction> join_interactions(const casefile::EvidenceCase& c,
                                           std::int64_t join_window_ms) {
  std::vector<Interaction> out;
  std::map<std::string, std::size_t> by_activity_id;

  for (const auto& a : c.activities) {
    Interaction it;
    it.interaction_id = !a.utterance_id.empty() ? a.utterance_id : "act:" + a.activity_id;
    it.activity = a;
    it.timestamp_ms = a.timestamp_ms;
    it.timestamp_source = "activity";
    it.device_serial = a.device_serial;
    it.audio = c.audio_state(a.utterance_id);
    by_activity_id[a.activity_id] = out.size();
    out.push_back(std::move(it));
  }

  // pass 1: explicit linkage
  std::vector<const model::Card*> unlinked;
  for (const auto& card : c.cards) {
    bool linked = false;
    if (card.linked_activity_id) {
      auto it = by_activity_id.find(*card.linked_activity_id);
      if (it != by_activity_id.end() && !out[it->second].card) {
        out[it->second].card = card;
        linked = true;
      }
    }
    if (!linked) unlinked.push_back(&card);
  }

  // pass 2: device + time proximity, maximum-cardinality
  std::vector<std::size_t> open_slots;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!out[i].card) open_slots.push_back(i);
  }
  if (!unlinked.empty() && !open_slots.empty()) {
    // deterministic inputs: cards by (timestamp, id)
    std::sort(unlinked.begin(), unlinked.end(), [](const auto* a, const auto* b) {
      return std::tie(a->timestamp_ms, a->card_id) < std::tie(b->timestamp_ms, b->card_id);
    });
    Matcher m;
    m.adj.resize(unlinked.size());
    m.match_of_activity.assign(open_slots.size(), -1);
    m.match_of_card.assign(unlinked.size(), -1);
    for (std::size_t ci = 0; ci < unlinked.size(); ++ci) {
      const model::Card& card = *unlinked[ci];
      std::string dev = card_device(card);
      std::vector<std::pair<std::int64_t, int>> candidates;  // (gap, slot index)
      for (std::size_t si = 0; si < open_slots.size(); ++si) {
        const Interaction& slot = out[open_slots[si]];
        std::int64_t gap = std::llabs(slot.timestamp_ms - card.timestamp_ms);
        if (gap > join_window_ms) continue;
        if (!dev.empty() && !slot.device_serial.empty() && dev != slot.device_serial)
          continue;
        candidates.emplace_back(gap, static_cast<int>(si));
      }
      std::sort(candidates.begin(), candidates.end());
      for (const auto& [gap, si] : candidates) m.adj[ci].push_back(si);
    }
    for (std::size_t ci = 0; ci < unlinked.size(); ++ci) {
      m.visited.assign(open_slots.size(), false);
      m.try_assign(static_cast<int>(ci));
    }
    std::vector<const model::Card*> still_unmatched;
    for (std::size_t ci = 0; ci < unlinked.size(); ++ci) {
      if (m.match_of_card[ci] >= 0) {
        out[open_slots[m.match_of_card[ci]]].card = *unlinked[ci];
      } else {
        still_unmatched.push_back(unlinked[ci]);
      }
    }
    unlinked = std::move(still_unmatched);
  }

  // leftovers become card-only interactions
  for (const auto* card : unlinked) {
    Interaction it;
    it.interaction_id = "card:" + card->card_id;
    it.card = *card;
    it.timestamp_ms = card->timestamp_ms;
    it.timestamp_source = "card";
    it.device_serial = card_device(*card);
    it.audio = AudioState::NotChecked;
    out.push_back(std::move(it));
  }

  std::sort(out.begin(), out.end(), [](const Interaction& a, const Interaction& b) {
    return std::tie(a.timestamp_ms, a.interaction_id) <
           std::tie(b.timestamp_ms, b.interaction_id);
  });
  return out;
}

std::string_view to_string(DeletionVerdict::State s) {
  switch (s) {
    case DeletionVerdict::State::Intact: return "Intact";
    case DeletionVerdict::State::VoiceRecordingDeleted: return "VoiceRecordingDeleted";
    case DeletionVerdict::State::CardRemoved: return "CardRemoved";
    case DeletionVerdict::State::CardAndVoiceDeleted: return "CardAndVoiceDeleted";
    case DeletionVerdict::State::InferredHistoryDeletion: return "InferredHistoryDeletion";
    case DeletionVerdict::State::Anomalous: return "Anomalous";
  }
  return "Anomalous";
}

util::Result<DeletionVerdict, Unresolved> classify_deletion(const Interaction& it) {
  const bool has_activity = it.activity.has_value();
  const bool has_card = it.card.has_value();

  DeletionVerdict v;
  v.interaction_id = it.interaction_id;
  v.timestamp_ms = it.timestamp_ms;

  if (!has_activity) {
    // Neither CardRemove, VoiceDelete nor HistoryDelete can strip the
    // activity and leave anything else behind; these triples are outside
    // the deletion closure.
    v.state = DeletionVerdict::State::Anomalous;
    if (has_card) {
      v.evidence.push_back("card " + it.card->card_id +
                           " present with no matching activities entry");
    }
    if (it.audio == AudioState::Present) {
      v.evidence.push_back("utterance audio present with no matching activities entry");
    }
    if (v.evidence.empty()) v.evidence.push_back("no artifact present for this interaction");
    return v;
  }

  if (it.audio == AudioState::NotChecked) {
    return Unresolved{it.interaction_id,
                      "utterance audio was never fetched; absence is not confirmed"};
  }
  const bool has_audio = it.audio == AudioState::Present;

  v.evidence.push_back("activity " + it.activity->activity_id + " present in /api/activities");
  if (has_card) {
    v.evidence.push_back("card " + it.card->card_id + " present in /api/cards");
  } else {
    v.evidence.push_back("no card in /api/cards for interaction at " +
                         model::to_iso8601_utc(it.timestamp_ms));
  }
  if (has_audio) {
    v.evidence.push_back("utterance audio available for " + it.utterance_id());
  } else {
    v.evidence.push_back("utterance API returned 404 for " + it.utterance_id());
  }

  if (has_card && has_audio) {
    v.state = DeletionVerdict::State::Intact;
  } else if (has_card) {
    v.state = DeletionVerdict::State::VoiceRecordingDeleted;
  } else if (has_audio) {
    v.state = DeletionVerdict::State::CardRemoved;
  } else {
    v.state = DeletionVerdict::State::CardAndVoiceDeleted;
    v.evidence.push_back("composite pattern: beyond documented single-path ground truth");
  }
  return v;
}

std::vector<DeletionVerdict> infer_history_deletions(
    const casefile::EvidenceCase& c, const std::vector<Interaction>& interactions,
    std::int64_t join_window_ms) {
  std::vector<DeletionVerdict> out;
  auto has_interaction_near = [&](std::int64_t t) {
    for (const auto& it : interactions) {
      if (std::llabs(it.timestamp_ms - t) <= join_window_ms) return true;
    }
    return false;
  };

  for (const auto& list : c.lists) {
    for (const auto& item : list.items) {
      if (has_interaction_near(item.created_at_ms)) continue;
      DeletionVerdict v;
      v.state = DeletionVerdict::State::InferredHistoryDeletion;
      v.interaction_id = "residue:" + item.item_id;
      v.timestamp_ms = item.created_at_ms;
      v.evidence.push_back("list \"" + list.name + "\" item \"" + item.text +
                           "\" created " + model::to_iso8601_utc(item.created_at_ms) +
                           " with no interaction within " +
                           std::to_string(join_window_ms / 1000) + "s");
      if (item.updated_at_ms != item.created_at_ms &&
          !has_interaction_near(item.updated_at_ms)) {
        v.evidence.push_back("item update at " + model::to_iso8601_utc(item.updated_at_ms) +
                             " also has no nearby interaction");
      }
      v.evidence.push_back("list data kept by /api/namedLists outlives history deletion");
      out.push_back(std::move(v));
    }
  }
  return out;
}

}  // namespace aft::analysis
