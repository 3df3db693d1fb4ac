#include "model/artifacts.hpp"

#include <algorithm>
#include <cctype>

#include "util/hash.hpp"

namespace aft::model {

namespace {
void put_opt(json& j, const char* key, const std::optional<std::string>& v) {
  if (v) j[key] = *v;
}
void put_opt(json& j, const char* key, const std::optional<bool>& v) {
  if (v) j[key] = *v;
}
void put_extras(json& j, const json& extras) {
  if (!extras.empty()) j["extras"] = extras;
}
}  // namespace

std::string_view to_string(ArtifactCategory c) {
  switch (c) {
    case ArtifactCategory::Account: return "Account";
    case ArtifactCategory::AlexaEnabledDevice: return "AlexaEnabledDevice";
    case ArtifactCategory::CustomerSetting: return "CustomerSetting";
    case ArtifactCategory::Skill: return "Skill";
    case ArtifactCategory::CompatibleDevice: return "CompatibleDevice";
    case ArtifactCategory::UserActivity: return "UserActivity";
    case ArtifactCategory::AudioData: return "AudioData";
    case ArtifactCategory::Uncategorized: return "Uncategorized";
  }
  return "Uncategorized";
}

ActivityStatus ActivityStatus::from_literal(std::string_view s) {
  ActivityStatus st;
  st.literal = std::string(s);
  if (s == "SUCCESS") {
    st.kind = Kind::Success;
  } else if (s == "DISCARDED_NON_DEVICE_DIRECTED_INTENT") {
    st.kind = Kind::DiscardedNonDeviceDirectedIntent;
  } else {
    st.kind = Kind::Other;
  }
  return st;
}

MemberRole MemberRole::from_literal(std::string_view s) {
  MemberRole r;
  r.literal = std::string(s);
  if (s == "ADULT") {
    r.kind = Kind::Adult;
  } else if (s == "CHILD") {
    r.kind = Kind::Child;
  } else {
    r.kind = Kind::Other;
  }
  return r;
}

ContactSource ContactSource::from_literal(std::string_view s) {
  ContactSource c;
  c.literal = std::string(s);
  if (s == "MANUAL") {
    c.kind = Kind::Manual;
  } else if (s == "IMPORTED") {
    c.kind = Kind::Imported;
  } else {
    c.kind = Kind::Unknown;
  }
  return c;
}

json Activity::to_json() const {
  json j;
  j["type"] = "Activity";
  j["activity_id"] = activity_id;
  j["utterance_id"] = utterance_id;
  j["transcript"] = transcript;
  j["timestamp"] = to_iso8601_utc(timestamp_ms);
  j["timestamp_ms"] = timestamp_ms;
  j["time_interpretation"] = to_string(time_interpretation);
  j["device_serial"] = device_serial;
  j["device_type"] = device_type;
  j["customer_id"] = customer_id;
  j["activity_status"] = status.render();
  put_opt(j, "response_summary", response_summary);
  put_extras(j, extras);
  return j;
}

json Card::to_json() const {
  json j;
  j["type"] = "Card";
  j["card_id"] = card_id;
  j["card_type"] = card_type;
  j["title"] = title;
  put_opt(j, "subtitle", subtitle);
  j["timestamp"] = to_iso8601_utc(timestamp_ms);
  j["timestamp_ms"] = timestamp_ms;
  j["time_interpretation"] = to_string(time_interpretation);
  put_opt(j, "linked_activity_id", linked_activity_id);
  put_extras(j, extras);
  return j;
}

UtteranceAudio UtteranceAudio::from_bytes(std::string utterance_id,
                                          std::vector<std::uint8_t> bytes) {
  UtteranceAudio a;
  a.utterance_id = std::move(utterance_id);
  a.content_digest = util::sha256_hex(bytes);
  a.audio_bytes = std::move(bytes);
  return a;
}

json UtteranceAudio::to_json() const {
  json j;
  j["type"] = "UtteranceAudio";
  j["utterance_id"] = utterance_id;
  j["content_digest"] = content_digest;
  j["size_bytes"] = audio_bytes.size();
  return j;
}

json PostalAddress::to_json() const {
  json j;
  put_opt(j, "country", country);
  put_opt(j, "county", county);
  put_opt(j, "city", city);
  put_opt(j, "postal_code", postal_code);
  put_opt(j, "street", street);
  put_opt(j, "number", number);
  put_extras(j, extras);
  return j;
}

json DeviceProfile::to_json() const {
  json j;
  j["type"] = "DeviceProfile";
  j["serial_number"] = serial_number;
  j["device_type"] = device_type;
  if (!device_account_id.empty()) j["device_account_id"] = device_account_id;
  if (!software_version.empty()) j["software_version"] = software_version;
  put_opt(j, "mac_address", mac_address);
  put_opt(j, "friendly_name", friendly_name);
  put_opt(j, "online", online);
  put_opt(j, "charging", charging);
  put_opt(j, "locale", locale);
  put_opt(j, "timezone", timezone);
  if (postal_address) j["postal_address"] = postal_address->to_json();
  put_opt(j, "temperature_unit", temperature_unit);
  put_opt(j, "distance_unit", distance_unit);
  put_extras(j, extras);
  return j;
}

bool mac_matches_invariant(std::string_view mac) {
  if (mac.size() != 17) return false;
  for (std::size_t i = 0; i < mac.size(); ++i) {
    if (i % 3 == 2) {
      if (mac[i] != ':') return false;
    } else if (!std::isxdigit(static_cast<unsigned char>(mac[i]))) {
      return false;
    }
  }
  return true;
}

std::string WifiDetail::normalized_mac() const {
  std::string out(mac_address);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  std::replace(out.begin(), out.end(), '-', ':');
  return out;
}

json WifiDetail::to_json() const {
  json j;
  j["type"] = "WifiDetail";
  j["device_serial"] = device_serial;
  j["device_type"] = device_type;
  j["mac_address"] = mac_address;
  j["essid"] = essid;
  put_extras(j, extras);
  return j;
}

json BluetoothPairing::to_json() const {
  json j;
  j["type"] = "BluetoothPairing";
  j["device_serial"] = device_serial;
  j["paired_name"] = paired_name;
  j["connected"] = connected;
  put_extras(j, extras);
  return j;
}

json BluetoothState::to_json() const {
  json j;
  j["type"] = "BluetoothState";
  j["device_serial"] = device_serial;
  put_opt(j, "device_type", device_type);
  json arr = json::array();
  for (const auto& p : pairings) arr.push_back(p.to_json());
  j["pairings"] = std::move(arr);
  put_extras(j, extras);
  return j;
}

json HouseholdMember::to_json() const {
  json j;
  j["type"] = "HouseholdMember";
  j["person_id"] = person_id;
  j["first_name"] = first_name;
  j["full_name"] = full_name;
  j["role"] = role.render();
  put_opt(j, "email", email);
  put_extras(j, extras);
  return j;
}

json Contact::to_json() const {
  json j;
  j["type"] = "Contact";
  j["contact_id"] = contact_id;
  j["name"] = name;
  j["phone_numbers"] = phone_numbers;
  j["emails"] = emails;
  put_opt(j, "postal_address", postal_address);
  j["source"] = source_kind.render();
  put_extras(j, extras);
  return j;
}

json ListItem::to_json() const {
  json j;
  j["type"] = "ListItem";
  j["item_id"] = item_id;
  j["text"] = text;
  j["completed"] = completed;
  j["created_at"] = to_iso8601_utc(created_at_ms);
  j["created_at_ms"] = created_at_ms;
  j["updated_at"] = to_iso8601_utc(updated_at_ms);
  j["updated_at_ms"] = updated_at_ms;
  put_extras(j, extras);
  return j;
}

json NamedList::to_json() const {
  json j;
  j["type"] = "NamedList";
  j["list_id"] = list_id;
  j["name"] = name;
  j["created_at"] = to_iso8601_utc(created_at_ms);
  j["created_at_ms"] = created_at_ms;
  j["updated_at"] = to_iso8601_utc(updated_at_ms);
  j["updated_at_ms"] = updated_at_ms;
  json arr = json::array();
  for (const auto& it : items) arr.push_back(it.to_json());
  j["items"] = std::move(arr);
  put_extras(j, extras);
  return j;
}

json ListItemsPage::to_json() const {
  json j;
  j["type"] = "ListItemsPage";
  j["list_id"] = list_id;
  json arr = json::array();
  for (const auto& it : items) arr.push_back(it.to_json());
  j["items"] = std::move(arr);
  put_extras(j, extras);
  return j;
}

json ApplianceGroup::to_json() const {
  json j;
  j["group_name"] = group_name;
  j["member_device_ids"] = member_device_ids;
  put_extras(j, extras);
  return j;
}

json Appliance::to_json() const {
  json j;
  j["appliance_id"] = appliance_id;
  j["name"] = name;
  put_opt(j, "room", room);
  put_extras(j, extras);
  return j;
}

json SmartHomeTopology::to_json() const {
  json j;
  j["type"] = "SmartHomeTopology";
  json groups_arr = json::array();
  for (const auto& g : groups) groups_arr.push_back(g.to_json());
  j["groups"] = std::move(groups_arr);
  json appl_arr = json::array();
  for (const auto& a : appliances) appl_arr.push_back(a.to_json());
  j["appliances"] = std::move(appl_arr);
  j["dangling_refs"] = dangling_refs;
  put_extras(j, extras);
  return j;
}

json AccountIdentity::to_json() const {
  json j;
  j["type"] = "AccountIdentity";
  j["customer_id"] = customer_id;
  j["name"] = name;
  j["email"] = email;
  put_extras(j, extras);
  return j;
}

}  // namespace aft::model
