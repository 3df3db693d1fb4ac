#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "model/artifacts.hpp"
#include "util/result.hpp"

namespace aft::mock {

using json = nlohmann::json;

// Presence of the three interaction artifacts: the state of the deletion
// state machine, written as a bit triple (activity, card, audio).
struct PresenceTriple {
  bool activity = false;
  bool card = false;
  bool audio = false;

  std::string code() const {
    return std::string() + (activity ? '1' : '0') + (card ? '1' : '0') + (audio ? '1' : '0');
  }
  bool operator==(const PresenceTriple&) const = default;
};

struct SeededInteraction {
  std::string id;  // doubles as the utterance id
  std::optional<model::Activity> activity;
  std::optional<model::Card> card;
  bool audio_present = false;

  PresenceTriple presence() const {
    return {activity.has_value(), card.has_value(), audio_present};
  }
};

// The account state a fixture seeds and the deletion operations mutate.
// Artifacts removed by a deletion are gone from every serving path; nothing
// ever restores them.
struct MockState {
  model::AccountIdentity identity;
  std::vector<model::HouseholdMember> members;
  std::vector<model::DeviceProfile> devices;
  std::map<std::string, model::WifiDetail> wifi;  // keyed by device serial
  std::vector<model::BluetoothState> bluetooth;
  std::vector<model::NamedList> lists;
  model::SmartHomeTopology topology;
  std::vector<model::Contact> contacts;
  std::vector<SeededInteraction> interactions;
  json raw_bodies = json::object();  // endpoint_id -> body for unanalyzed endpoints
  std::int64_t clock_ms = 0;         // frozen logical clock

  SeededInteraction* find_interaction(const std::string& id);
  const SeededInteraction* find_interaction(const std::string& id) const;
  std::int64_t interaction_time(const SeededInteraction& si) const;
};

// The three documented deletion paths.
struct DeletionOp {
  enum class Kind { HistoryDelete, CardRemove, VoiceDelete };
  struct All {};
  struct TimeRange {
    std::int64_t from_ms;
    std::int64_t to_ms;  // inclusive
  };

  Kind kind = Kind::HistoryDelete;
  std::variant<std::string, TimeRange, All> target;

  static std::optional<Kind> kind_from_string(std::string_view s);
  static std::string_view kind_to_string(Kind k);
};

struct UnknownTarget {
  std::string detail;
};

struct PresenceChange {
  std::string interaction_id;
  PresenceTriple before;
  PresenceTriple after;
};

// HistoryDelete removes activity, card and audio; CardRemove removes only
// the card; VoiceDelete removes only the audio. Nothing else in the account
// state is touched by any of them.
util::Result<std::vector<PresenceChange>, UnknownTarget> apply_deletion(
    MockState& state, const DeletionOp& op);

struct InvalidFixture {
  std::string violated_invariant;
};

// Builds state from fixture JSON, enforcing the artifact-model invariants.
util::Result<MockState, InvalidFixture> load_fixture(const json& fixture);

// The built-in account: one Echo in Edinburgh, the four-interaction history
// from an afternoon of use, two default lists and a shopping item whose
// source interaction is gone.
const char* default_fixture_json();
MockState default_state();

// Wire bodies served by the HTTP layer; also used directly by scenario
// snapshots so both views always agree.
json body_activities(const MockState& s);
json body_cards(const MockState& s);
json body_bootstrap(const MockState& s);
json body_household(const MockState& s);
json body_devices(const MockState& s);
json body_device_preferences(const MockState& s);
std::optional<json> body_wifi(const MockState& s, const std::string& device_serial);
json body_bluetooth(const MockState& s);
json body_named_lists(const MockState& s);
std::optional<json> body_list_items(const MockState& s, const std::string& list_id);
json body_phoenix(const MockState& s);
json body_contacts(const MockState& s);
json body_for_endpoint(const MockState& s, const std::string& endpoint_id);

// Deterministic audio blob for a seeded utterance.
std::vector<std::uint8_t> audio_bytes_for(const std::string& utterance_id);

// Replays a step script (set_clock / interact / delete / snapshot) against
// the state, returning one trace entry per step. Snapshots record all four
// access paths: activities, cards, the rendered history view, and
// per-utterance audio availability.
util::Result<json, std::string> run_scenario(MockState& state, const json& script);

}  // namespace aft::mock
