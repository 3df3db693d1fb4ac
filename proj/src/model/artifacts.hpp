#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "model/time.hpp"

namespace aft::model {

using json = nlohmann::json;

// The seven data categories of the management-API surface, plus a bucket
// for registry rows nobody has classified.
enum class ArtifactCategory {
  Account,
  AlexaEnabledDevice,
  CustomerSetting,
  Skill,
  CompatibleDevice,
  UserActivity,
  AudioData,
  Uncategorized,
};

std::string_view to_string(ArtifactCategory c);

// Enum-with-literal: the wire literal is kept verbatim so that parsing and
// re-rendering any status string is lossless, including unknown values.
struct ActivityStatus {
  enum class Kind { Success, DiscardedNonDeviceDirectedIntent, Other };
  Kind kind = Kind::Other;
  std::string literal;

  static ActivityStatus from_literal(std::string_view s);
  const std::string& render() const { return literal; }
};

struct MemberRole {
  enum class Kind { Adult, Child, Other };
  Kind kind = Kind::Other;
  std::string literal;

  static MemberRole from_literal(std::string_view s);
  const std::string& render() const { return literal; }
};

struct ContactSource {
  enum class Kind { Manual, Imported, Unknown };
  Kind kind = Kind::Unknown;
  std::string literal;

  static ContactSource from_literal(std::string_view s);
  const std::string& render() const { return literal; }
};

// Every artifact keeps three layers:
//   - typed fields, normalized where the model demands it (times in UTC ms);
//   - `extras`: source fields the typed schema does not consume, never dropped;
//   - `source`: the exact JSON object it was parsed from, for lossless
//     reconstruction. Evidence is read, never rewritten.
struct Activity {
  std::string activity_id;
  std::string utterance_id;
  std::string transcript;
  std::int64_t timestamp_ms = 0;
  std::string device_serial;
  std::string device_type;
  std::string customer_id;
  ActivityStatus status;
  std::optional<std::string> response_summary;
  TimeInterpretation time_interpretation = TimeInterpretation::EpochMillis;
  json extras = json::object();
  json source = json::object();

  json to_json() const;
};

struct Card {
  std::string card_id;
  std::string card_type;
  std::string title;
  std::optional<std::string> subtitle;
  std::int64_t timestamp_ms = 0;
  std::optional<std::string> linked_activity_id;
  TimeInterpretation time_interpretation = TimeInterpretation::EpochMillis;
  json extras = json::object();
  json source = json::object();

  json to_json() const;
};

struct UtteranceAudio {
  std::string utterance_id;
  std::vector<std::uint8_t> audio_bytes;
  std::string content_digest;  // sha256 hex of audio_bytes

  static UtteranceAudio from_bytes(std::string utterance_id,
                                   std::vector<std::uint8_t> bytes);
  json to_json() const;  // metadata only, bytes live in the case audio store
};

struct PostalAddress {
  std::optional<std::string> country;
  std::optional<std::string> county;
  std::optional<std::string> city;
  std::optional<std::string> postal_code;
  std::optional<std::string> street;
  std::optional<std::string> number;
  json extras = json::object();

  json to_json() const;
};

struct DeviceProfile {
  std::string serial_number;
  std::string device_type;
  std::string device_account_id;  // may be empty until merged
  std::string software_version;   // may be empty until merged
  std::optional<std::string> mac_address;
  std::optional<std::string> friendly_name;
  std::optional<bool> online;
  std::optional<bool> charging;
  std::optional<std::string> locale;
  std::optional<std::string> timezone;  // IANA name
  std::optional<PostalAddress> postal_address;
  std::optional<std::string> temperature_unit;
  std::optional<std::string> distance_unit;
  json extras = json::object();
  json source = json::object();

  json to_json() const;
};

struct WifiDetail {
  std::string device_serial;
  std::string device_type;
  std::string mac_address;  // stored as seen; normalized_mac() for checks
  std::string essid;
  json extras = json::object();
  json source = json::object();

  std::string normalized_mac() const;
  json to_json() const;
};

// A MAC is well-formed when its uppercase normalization is six
// colon-separated hex octets.
bool mac_matches_invariant(std::string_view mac);

struct BluetoothPairing {
  std::string device_serial;
  std::string paired_name;
  bool connected = false;
  json extras = json::object();

  json to_json() const;
};

// Wire shape of /api/bluetooth: one state object per Echo, each holding its
// paired-device list. Kept so reconstruction of the source is exact even
// for devices with no pairings.
struct BluetoothState {
  std::string device_serial;
  std::optional<std::string> device_type;
  std::vector<BluetoothPairing> pairings;
  json extras = json::object();
  json source = json::object();

  json to_json() const;
};

struct HouseholdMember {
  std::string person_id;
  std::string first_name;
  std::string full_name;
  MemberRole role;
  std::optional<std::string> email;
  json extras = json::object();
  json source = json::object();

  json to_json() const;
};

struct Contact {
  std::string contact_id;
  std::string name;
  std::vector<std::string> phone_numbers;
  std::vector<std::string> emails;
  std::optional<std::string> postal_address;
  ContactSource source_kind;
  json extras = json::object();
  json source = json::object();

  json to_json() const;
};

struct ListItem {
  std::string item_id;
  std::string text;
  bool completed = false;
  std::int64_t created_at_ms = 0;
  std::int64_t updated_at_ms = 0;
  json extras = json::object();
  json source = json::object();

  json to_json() const;
};

struct NamedList {
  std::string list_id;
  std::string name;
  std::int64_t created_at_ms = 0;
  std::int64_t updated_at_ms = 0;
  std::vector<ListItem> items;
  json extras = json::object();
  json source = json::object();

  json to_json() const;
};

// Items page of /api/namedLists/{list_id}/items; merged into NamedList
// during case assembly.
struct ListItemsPage {
  std::string list_id;
  std::vector<ListItem> items;
  json extras = json::object();
  json source = json::object();

  json to_json() const;
};

struct ApplianceGroup {
  std::string group_name;
  std::vector<std::string> member_device_ids;
  json extras = json::object();
  json source = json::object();

  json to_json() const;
};

struct Appliance {
  std::string appliance_id;
  std::string name;
  std::optional<std::string> room;
  json extras = json::object();
  json source = json::object();

  json to_json() const;
};

struct SmartHomeTopology {
  std::vector<ApplianceGroup> groups;
  std::vector<Appliance> appliances;
  // group members that reference no appliance or device id; recorded, kept.
  std::vector<std::string> dangling_refs;
  json extras = json::object();
  json source = json::object();

  json to_json() const;
};

struct AccountIdentity {
  std::string customer_id;
  std::string name;
  std::string email;
  json extras = json::object();
  json source = json::object();

  json to_json() const;
};

}  // namespace aft::model
