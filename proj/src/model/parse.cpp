#include "model/parse.hpp"

#include <set>
#include <unordered_set>

#include "util/tzdb.hpp"

namespace aft::model {

namespace {

// Internal only: converted to a SchemaMismatch value at the module boundary.
struct SchemaErr {
  std::string path;
  std::string expected;
  std::string found;
};

std::string type_name(const json& v) {
  switch (v.type()) {
    case json::value_t::null: return "null";
    case json::value_t::object: return "object";
    case json::value_t::array: return "array";
    case json::value_t::string: return "string";
    case json::value_t::boolean: return "boolean";
    case json::value_t::number_integer:
    case json::value_t::number_unsigned:
    case json::value_t::number_float: return "number";
    case json::value_t::binary: return "binary";
    default: return "unknown";
  }
}

[[noreturn]] void fail(const std::string& path, const std::string& expected,
                       const std::string& found) {
  throw SchemaErr{path, expected, found};
}

json take(json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) return json();
  json v = std::move(*it);
  obj.erase(it);
  return v;
}

std::string take_string(json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "string", "absent");
  if (!it->is_string()) fail(path + "." + key, "string", type_name(*it));
  std::string v = it->get<std::string>();
  obj.erase(it);
  return v;
}

// Identifiers like software versions appear as bare numbers in some dumps.
std::string take_string_or_number(json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "string or number", "absent");
  std::string v;
  if (it->is_string()) {
    v = it->get<std::string>();
  } else if (it->is_number_integer()) {
    v = std::to_string(it->get<std::int64_t>());
  } else if (it->is_number_unsigned()) {
    v = std::to_string(it->get<std::uint64_t>());
  } else {
    fail(path + "." + key, "string or number", type_name(*it));
  }
  obj.erase(it);
  return v;
}

std::optional<std::string> take_opt_string(json& obj, const char* key,
                                           const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) return std::nullopt;
  if (it->is_null()) {
    obj.erase(it);
    return std::nullopt;
  }
  if (!it->is_string()) fail(path + "." + key, "string", type_name(*it));
  std::string v = it->get<std::string>();
  obj.erase(it);
  return v;
}

std::optional<std::string> take_opt_string_or_number(json& obj, const char* key,
                                                     const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    if (it != obj.end()) obj.erase(it);
    return std::nullopt;
  }
  return take_string_or_number(obj, key, path);
}

bool take_bool(json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "boolean", "absent");
  if (!it->is_boolean()) fail(path + "." + key, "boolean", type_name(*it));
  bool v = it->get<bool>();
  obj.erase(it);
  return v;
}

std::optional<bool> take_opt_bool(json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    if (it != obj.end()) obj.erase(it);
    return std::nullopt;
  }
  if (!it->is_boolean()) fail(path + "." + key, "boolean", type_name(*it));
  bool v = it->get<bool>();
  obj.erase(it);
  return v;
}

json take_array(json& obj, const char* key, const std::string& path, bool required) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) fail(path + "." + key, "array", "absent");
    return json::array();
  }
  if (!it->is_array()) fail(path + "." + key, "array", type_name(*it));
  json v = std::move(*it);
  obj.erase(it);
  return v;
}

std::vector<std::string> take_string_array(json& obj, const char* key,
                                           const std::string& path, bool required) {
  json arr = take_array(obj, key, path, required);
  std::vector<std::string> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string())
      fail(path + "." + key + "[" + std::to_string(i) + "]", "string", type_name(arr[i]));
    out.push_back(arr[i].get<std::string>());
  }
  return out;
}

struct ParseState {
  std::optional<std::string> tz_hint;
  std::vector<InvariantViolation> violations;
  std::vector<TimeNote> time_notes;

  void violation(const std::string& path, const std::string& detail) {
    violations.push_back({path, detail});
  }

  std::int64_t take_time(json& obj, const char* key, const std::string& path,
                         TimeInterpretation* interp_out = nullptr) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "timestamp", "absent");
    auto r = normalize_timestamp(*it, tz_hint);
    if (!r.ok()) fail(path + "." + key, "timestamp", it->dump());
    obj.erase(it);
    time_notes.push_back({path + "." + key, r.value().interpretation});
    if (interp_out) *interp_out = r.value().interpretation;
    return r.value().epoch_ms;
  }
};

const json& require_object(const json& body) {
  if (!body.is_object()) fail("$", "object", type_name(body));
  return body;
}

// ---- per-endpoint schemas -------------------------------------------------
// The paper never shows raw payloads; these reference schemas are fixed by
// this tool's fixtures and are expected to need maintenance against live
// captures.

std::vector<Activity> parse_activities(json& body, ParseState& st) {
  json arr = take_array(body, "activities", "$", true);
  std::vector<Activity> out;
  std::set<std::string> seen_ids;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string path = "activities[" + std::to_string(i) + "]";
    if (!arr[i].is_object()) fail(path, "object", type_name(arr[i]));
    json src = arr[i];
    json obj = arr[i];
    Activity a;
    a.source = std::move(src);
    a.activity_id = take_string(obj, "id", path);
    a.utterance_id = take_string(obj, "utteranceId", path);
    a.status = ActivityStatus::from_literal(take_string(obj, "activityStatus", path));
    a.timestamp_ms = st.take_time(obj, "creationTimestamp", path, &a.time_interpretation);
    // transcript nests under description; sibling description fields stay put
    auto desc_it = obj.find("description");
    if (desc_it == obj.end()) fail(path + ".description", "object", "absent");
    if (!desc_it->is_object()) fail(path + ".description", "object", type_name(*desc_it));
    a.transcript = take_string(*desc_it, "summary", path + ".description");
    if (desc_it->empty()) obj.erase(desc_it);
    a.device_serial = take_string(obj, "deviceSerialNumber", path);
    a.device_type = take_string(obj, "deviceType", path);
    a.customer_id = take_string(obj, "registeredCustomerId", path);
    a.response_summary = take_opt_string(obj, "responseSummary", path);
    a.extras = std::move(obj);
    if (!seen_ids.insert(a.activity_id).second)
      st.violation(path, "duplicate activity id " + a.activity_id);
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<Card> parse_cards(json& body, ParseState& st) {
  json arr = take_array(body, "cards", "$", true);
  std::vector<Card> out;
  std::set<std::string> seen_ids;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string path = "cards[" + std::to_string(i) + "]";
    if (!arr[i].is_object()) fail(path, "object", type_name(arr[i]));
    json src = arr[i];
    json obj = arr[i];
    Card c;
    c.source = std::move(src);
    c.card_id = take_string(obj, "id", path);
    c.card_type = take_string(obj, "cardType", path);
    c.title = take_string(obj, "title", path);
    c.subtitle = take_opt_string(obj, "subtitle", path);
    c.timestamp_ms = st.take_time(obj, "creationTimestamp", path, &c.time_interpretation);
    c.linked_activity_id = take_opt_string(obj, "sourceActivityId", path);
    c.extras = std::move(obj);
    if (!seen_ids.insert(c.card_id).second)
      st.violation(path, "duplicate card id " + c.card_id);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<HouseholdMember> parse_household(json& body, ParseState&) {
  json arr = take_array(body, "accounts", "$", true);
  std::vector<HouseholdMember> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string path = "accounts[" + std::to_string(i) + "]";
    if (!arr[i].is_object()) fail(path, "object", type_name(arr[i]));
    json src = arr[i];
    json obj = arr[i];
    HouseholdMember m;
    m.source = std::move(src);
    m.person_id = take_string(obj, "id", path);
    m.first_name = take_string(obj, "firstName", path);
    m.full_name = take_string(obj, "fullName", path);
    m.role = MemberRole::from_literal(take_string(obj, "role", path));
    m.email = take_opt_string(obj, "email", path);
    m.extras = std::move(obj);
    out.push_back(std::move(m));
  }
  return out;
}

AccountIdentity parse_bootstrap(json& body, ParseState& st) {
  auto it = body.find("authentication");
  if (it == body.end()) fail("$.authentication", "object", "absent");
  if (!it->is_object()) fail("$.authentication", "object", type_name(*it));
  json src = *it;
  json obj = std::move(*it);
  body.erase(it);
  AccountIdentity id;
  id.source = std::move(src);
  id.customer_id = take_string(obj, "customerId", "authentication");
  id.name = take_string(obj, "customerName", "authentication");
  id.email = take_string(obj, "customerEmail", "authentication");
  id.extras = std::move(obj);
  if (id.customer_id.empty()) st.violation("authentication.customerId", "empty customer id");
  return id;
}

std::vector<Contact> parse_contacts(json& body, ParseState& st) {
  json arr = take_array(body, "contacts", "$", true);
  std::vector<Contact> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string path = "contacts[" + std::to_string(i) + "]";
    if (!arr[i].is_object()) fail(path, "object", type_name(arr[i]));
    json src = arr[i];
    json obj = arr[i];
    Contact c;
    c.source = std::move(src);
    c.contact_id = take_string(obj, "id", path);
    c.name = take_string(obj, "name", path);
    c.phone_numbers = take_string_array(obj, "phoneNumbers", path, false);
    c.emails = take_string_array(obj, "emails", path, false);
    c.postal_address = take_opt_string(obj, "postalAddress", path);
    auto src_lit = take_opt_string(obj, "source", path);
    c.source_kind = ContactSource::from_literal(src_lit.value_or(""));
    c.extras = std::move(obj);
    if (c.name.empty() && c.phone_numbers.empty() && c.emails.empty())
      st.violation(path, "contact has no name, phone number, or email");
    out.push_back(std::move(c));
  }
  return out;
}

PostalAddress parse_address(json& obj, const std::string& path) {
  PostalAddress a;
  a.country = take_opt_string(obj, "country", path);
  a.county = take_opt_string(obj, "county", path);
  a.city = take_opt_string(obj, "city", path);
  a.postal_code = take_opt_string(obj, "postalCode", path);
  a.street = take_opt_string(obj, "street", path);
  a.number = take_opt_string_or_number(obj, "number", path);
  a.extras = std::move(obj);
  return a;
}

std::vector<DeviceProfile> parse_device_preferences(json& body, ParseState& st) {
  json arr = take_array(body, "devicePreferences", "$", true);
  std::vector<DeviceProfile> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string path = "devicePreferences[" + std::to_string(i) + "]";
    if (!arr[i].is_object()) fail(path, "object", type_name(arr[i]));
    json src = arr[i];
    json obj = arr[i];
    DeviceProfile d;
    d.source = std::move(src);
    d.serial_number = take_string(obj, "deviceSerialNumber", path);
    d.device_type = take_string(obj, "deviceType", path);
    d.device_account_id = take_opt_string(obj, "deviceAccountId", path).value_or("");
    d.locale = take_opt_string(obj, "locale", path);
    d.timezone = take_opt_string(obj, "timeZoneId", path);
    auto addr_it = obj.find("deviceAddress");
    if (addr_it != obj.end()) {
      if (!addr_it->is_object()) fail(path + ".deviceAddress", "object", type_name(*addr_it));
      json addr_obj = std::move(*addr_it);
      obj.erase(addr_it);
      d.postal_address = parse_address(addr_obj, path + ".deviceAddress");
    }
    d.temperature_unit = take_opt_string(obj, "temperatureScale", path);
    d.distance_unit = take_opt_string(obj, "distanceUnits", path);
    d.extras = std::move(obj);
    if (d.serial_number.empty()) st.violation(path, "empty device serial number");
    if (d.timezone && !util::zone_exists(*d.timezone))
      st.violation(path + ".timeZoneId", "unresolvable time zone " + *d.timezone);
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<DeviceProfile> parse_devices(json& body, ParseState& st) {
  json arr = take_array(body, "devices", "$", true);
  std::vector<DeviceProfile> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string path = "devices[" + std::to_string(i) + "]";
    if (!arr[i].is_object()) fail(path, "object", type_name(arr[i]));
    json src = arr[i];
    json obj = arr[i];
    DeviceProfile d;
    d.source = std::move(src);
    d.serial_number = take_string(obj, "serialNumber", path);
    d.device_type = take_string(obj, "deviceType", path);
    d.device_account_id = take_opt_string(obj, "deviceAccountId", path).value_or("");
    d.software_version = take_opt_string_or_number(obj, "softwareVersion", path).value_or("");
    d.mac_address = take_opt_string(obj, "macAddress", path);
    d.friendly_name = take_opt_string(obj, "accountName", path);
    d.online = take_opt_bool(obj, "online", path);
    d.charging = take_opt_bool(obj, "charging", path);
    d.extras = std::move(obj);
    if (d.serial_number.empty()) st.violation(path, "empty device serial number");
    out.push_back(std::move(d));
  }
  return out;
}

WifiDetail parse_wifi(json& body, ParseState& st) {
  json obj = require_object(body);
  WifiDetail w;
  w.source = body;
  w.device_serial = take_string(obj, "deviceSerialNumber", "$");
  w.device_type = take_string(obj, "deviceType", "$");
  w.mac_address = take_string(obj, "macAddress", "$");
  w.essid = take_string(obj, "essid", "$");
  w.extras = std::move(obj);
  body = json::object();  // consumed entirely; extras carries the rest
  if (!mac_matches_invariant(w.normalized_mac()))
    st.violation("$.macAddress", "not six colon-separated hex octets: " + w.mac_address);
  return w;
}

std::vector<BluetoothState> parse_bluetooth(json& body, ParseState& st) {
  json arr = take_array(body, "bluetoothStates", "$", true);
  std::vector<BluetoothState> out;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string path = "bluetoothStates[" + std::to_string(i) + "]";
    if (!arr[i].is_object()) fail(path, "object", type_name(arr[i]));
    json src = arr[i];
    json obj = arr[i];
    BluetoothState bs;
    bs.source = std::move(src);
    bs.device_serial = take_string(obj, "deviceSerialNumber", path);
    bs.device_type = take_opt_string(obj, "deviceType", path);
    json paired = take_array(obj, "pairedDeviceList", path, false);
    for (std::size_t k = 0; k < paired.size(); ++k) {
      std::string ppath = path + ".pairedDeviceList[" + std::to_string(k) + "]";
      if (!paired[k].is_object()) fail(ppath, "object", type_name(paired[k]));
      json pobj = paired[k];
      BluetoothPairing p;
      p.device_serial = bs.device_serial;
      p.paired_name = take_string(pobj, "friendlyName", ppath);
      p.connected = take_bool(pobj, "connected", ppath);
      p.extras = std::move(pobj);
      if (!seen.insert({p.device_serial, p.paired_name}).second)
        st.violation(ppath, "duplicate pairing (" + p.device_serial + ", " + p.paired_name + ")");
      bs.pairings.push_back(std::move(p));
    }
    bs.extras = std::move(obj);
    out.push_back(std::move(bs));
  }
  return out;
}

std::vector<ListItem> parse_list_items(json& items_arr, const std::string& base_path,
                                       ParseState& st) {
  std::vector<ListItem> out;
  std::set<std::string> seen_ids;
  for (std::size_t i = 0; i < items_arr.size(); ++i) {
    std::string path = base_path + "[" + std::to_string(i) + "]";
    if (!items_arr[i].is_object()) fail(path, "object", type_name(items_arr[i]));
    json src = items_arr[i];
    json obj = items_arr[i];
    ListItem li;
    li.source = std::move(src);
    li.item_id = take_string(obj, "id", path);
    li.text = take_string(obj, "text", path);
    li.completed = take_bool(obj, "completed", path);
    li.created_at_ms = st.take_time(obj, "createdDate", path);
    li.updated_at_ms = st.take_time(obj, "updatedDate", path);
    li.extras = std::move(obj);
    if (li.updated_at_ms < li.created_at_ms)
      st.violation(path, "updatedDate precedes createdDate");
    if (!seen_ids.insert(li.item_id).second)
      st.violation(path, "duplicate item id " + li.item_id);
    out.push_back(std::move(li));
  }
  return out;
}

std::vector<NamedList> parse_named_lists(json& body, ParseState& st) {
  json arr = take_array(body, "lists", "$", true);
  std::vector<NamedList> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string path = "lists[" + std::to_string(i) + "]";
    if (!arr[i].is_object()) fail(path, "object", type_name(arr[i]));
    json src = arr[i];
    json obj = arr[i];
    NamedList nl;
    nl.source = std::move(src);
    nl.list_id = take_string(obj, "listId", path);
    nl.name = take_string(obj, "name", path);
    nl.created_at_ms = st.take_time(obj, "createdDate", path);
    nl.updated_at_ms = st.take_time(obj, "updatedDate", path);
    nl.extras = std::move(obj);
    if (nl.updated_at_ms < nl.created_at_ms)
      st.violation(path, "updatedDate precedes createdDate");
    out.push_back(std::move(nl));
  }
  return out;
}

ListItemsPage parse_named_list_items(json& body, ParseState& st) {
  require_object(body);
  ListItemsPage page;
  page.source = body;
  page.list_id = take_string(body, "listId", "$");
  json items = take_array(body, "items", "$", true);
  page.items = parse_list_items(items, "items", st);
  page.extras = body;
  body = json::object();
  return page;
}

SmartHomeTopology parse_phoenix(json& body, ParseState&) {
  require_object(body);
  SmartHomeTopology topo;
  topo.source = body;
  json groups = take_array(body, "applianceGroups", "$", false);
  json appliances = take_array(body, "appliances", "$", false);
  std::unordered_set<std::string> known_ids;
  for (std::size_t i = 0; i < appliances.size(); ++i) {
    std::string path = "appliances[" + std::to_string(i) + "]";
    if (!appliances[i].is_object()) fail(path, "object", type_name(appliances[i]));
    json src = appliances[i];
    json obj = appliances[i];
    Appliance a;
    a.source = std::move(src);
    a.appliance_id = take_string(obj, "applianceId", path);
    a.name = take_string(obj, "friendlyName", path);
    a.room = take_opt_string(obj, "room", path);
    a.extras = std::move(obj);
    known_ids.insert(a.appliance_id);
    topo.appliances.push_back(std::move(a));
  }
  for (std::size_t i = 0; i < groups.size(); ++i) {
    std::string path = "applianceGroups[" + std::to_string(i) + "]";
    if (!groups[i].is_object()) fail(path, "object", type_name(groups[i]));
    json src = groups[i];
    json obj = groups[i];
    ApplianceGroup g;
    g.source = std::move(src);
    g.group_name = take_string(obj, "name", path);
    g.member_device_ids = take_string_array(obj, "applianceIds", path, false);
    g.extras = std::move(obj);
    for (const auto& id : g.member_device_ids) {
      if (!known_ids.count(id)) topo.dangling_refs.push_back(id);
    }
    topo.groups.push_back(std::move(g));
  }
  topo.extras = body;
  body = json::object();
  return topo;
}

}  // namespace

std::string SchemaMismatch::describe() const {
  return "endpoint " + endpoint_id + ": expected " + expected + " at " + path +
         ", found " + found;
}

bool has_typed_parser(std::string_view endpoint_id) {
  static const std::set<std::string, std::less<>> typed = {
      "activities",       "bluetooth", "bootstrap",          "cards",
      "contacts",         "device-preferences", "device-wifi-details",
      "devices-v2",       "household", "namedLists",         "namedLists-items",
      "phoenix"};
  return typed.count(endpoint_id) > 0;
}

ParseResult parse_artifact(std::string_view endpoint_id, const json& body,
                           const std::optional<std::string>& tz_hint) {
  ParsedArtifact out;
  out.endpoint_id = std::string(endpoint_id);

  if (!has_typed_parser(endpoint_id)) {
    out.value = RawPassthrough{out.endpoint_id, body};
    return out;
  }

  ParseState st;
  st.tz_hint = tz_hint;
  json work = body;
  try {
    require_object(work);
    if (endpoint_id == "activities") {
      out.value = parse_activities(work, st);
    } else if (endpoint_id == "cards") {
      out.value = parse_cards(work, st);
    } else if (endpoint_id == "household") {
      out.value = parse_household(work, st);
    } else if (endpoint_id == "bootstrap") {
      out.value = parse_bootstrap(work, st);
    } else if (endpoint_id == "contacts") {
      out.value = parse_contacts(work, st);
    } else if (endpoint_id == "device-preferences") {
      out.value = parse_device_preferences(work, st);
    } else if (endpoint_id == "devices-v2") {
      out.value = parse_devices(work, st);
    } else if (endpoint_id == "device-wifi-details") {
      out.value = parse_wifi(work, st);
    } else if (endpoint_id == "bluetooth") {
      out.value = parse_bluetooth(work, st);
    } else if (endpoint_id == "namedLists") {
      out.value = parse_named_lists(work, st);
    } else if (endpoint_id == "namedLists-items") {
      out.value = parse_named_list_items(work, st);
    } else if (endpoint_id == "phoenix") {
      out.value = parse_phoenix(work, st);
    }
  } catch (const SchemaErr& e) {
    SchemaMismatch sm;
    sm.endpoint_id = std::string(endpoint_id);
    sm.path = e.path;
    sm.expected = e.expected;
    sm.found = e.found;
    sm.input = body;
    return sm;
  }
  out.body_extras = std::move(work);
  out.violations = std::move(st.violations);
  out.time_notes = std::move(st.time_notes);
  return out;
}

namespace {

template <typename T>
json items_to_json(const std::vector<T>& v) {
  json arr = json::array();
  for (const auto& x : v) arr.push_back(x.to_json());
  return arr;
}

template <typename T>
json items_to_source(const std::vector<T>& v) {
  json arr = json::array();
  for (const auto& x : v) arr.push_back(x.source);
  return arr;
}

}  // namespace

json ParsedArtifact::to_json() const {
  json j;
  j["endpoint_id"] = endpoint_id;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          j["kind"] = "Empty";
        } else if constexpr (std::is_same_v<T, RawPassthrough>) {
          j["kind"] = "RawPassthrough";
          j["body"] = v.body;
        } else if constexpr (std::is_same_v<T, std::vector<Activity>>) {
          j["kind"] = "Activity";
          j["artifacts"] = items_to_json(v);
        } else if constexpr (std::is_same_v<T, std::vector<Card>>) {
          j["kind"] = "Card";
          j["artifacts"] = items_to_json(v);
        } else if constexpr (std::is_same_v<T, std::vector<HouseholdMember>>) {
          j["kind"] = "HouseholdMember";
          j["artifacts"] = items_to_json(v);
        } else if constexpr (std::is_same_v<T, std::vector<Contact>>) {
          j["kind"] = "Contact";
          j["artifacts"] = items_to_json(v);
        } else if constexpr (std::is_same_v<T, std::vector<DeviceProfile>>) {
          j["kind"] = "DeviceProfile";
          j["artifacts"] = items_to_json(v);
        } else if constexpr (std::is_same_v<T, std::vector<BluetoothState>>) {
          j["kind"] = "BluetoothState";
          j["artifacts"] = items_to_json(v);
        } else if constexpr (std::is_same_v<T, std::vector<NamedList>>) {
          j["kind"] = "NamedList";
          j["artifacts"] = items_to_json(v);
        } else if constexpr (std::is_same_v<T, ListItemsPage>) {
          j["kind"] = "ListItemsPage";
          j["artifacts"] = json::array({v.to_json()});
        } else if constexpr (std::is_same_v<T, WifiDetail>) {
          j["kind"] = "WifiDetail";
          j["artifacts"] = json::array({v.to_json()});
        } else if constexpr (std::is_same_v<T, SmartHomeTopology>) {
          j["kind"] = "SmartHomeTopology";
          j["artifacts"] = json::array({v.to_json()});
        } else if constexpr (std::is_same_v<T, AccountIdentity>) {
          j["kind"] = "AccountIdentity";
          j["artifacts"] = json::array({v.to_json()});
        }
      },
      value);
  if (!body_extras.empty()) j["body_extras"] = body_extras;
  if (!violations.empty()) {
    json arr = json::array();
    for (const auto& v : violations) arr.push_back({{"path", v.path}, {"detail", v.detail}});
    j["invariant_violations"] = std::move(arr);
  }
  if (!time_notes.empty()) {
    json arr = json::array();
    for (const auto& n : time_notes)
      arr.push_back({{"path", n.path}, {"interpretation", to_string(n.interpretation)}});
    j["time_interpretations"] = std::move(arr);
  }
  return j;
}

json ParsedArtifact::reconstruct_source() const {
  json body = body_extras;
  if (!body.is_object()) body = json::object();
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, RawPassthrough>) {
          body = v.body;
        } else if constexpr (std::is_same_v<T, std::vector<Activity>>) {
          body["activities"] = items_to_source(v);
        } else if constexpr (std::is_same_v<T, std::vector<Card>>) {
          body["cards"] = items_to_source(v);
        } else if constexpr (std::is_same_v<T, std::vector<HouseholdMember>>) {
          body["accounts"] = items_to_source(v);
        } else if constexpr (std::is_same_v<T, std::vector<Contact>>) {
          body["contacts"] = items_to_source(v);
        } else if constexpr (std::is_same_v<T, std::vector<DeviceProfile>>) {
          body[endpoint_id == "devices-v2" ? "devices" : "devicePreferences"] =
              items_to_source(v);
        } else if constexpr (std::is_same_v<T, std::vector<BluetoothState>>) {
          body["bluetoothStates"] = items_to_source(v);
        } else if constexpr (std::is_same_v<T, std::vector<NamedList>>) {
          body["lists"] = items_to_source(v);
        } else if constexpr (std::is_same_v<T, ListItemsPage>) {
          for (auto it = v.extras.begin(); it != v.extras.end(); ++it) body[it.key()] = it.value();
          body["listId"] = v.list_id;
          body["items"] = items_to_source(v.items);
        } else if constexpr (std::is_same_v<T, WifiDetail>) {
          body = v.source;
        } else if constexpr (std::is_same_v<T, SmartHomeTopology>) {
          for (auto it = v.extras.begin(); it != v.extras.end(); ++it) body[it.key()] = it.value();
          body["applianceGroups"] = items_to_source(v.groups);
          body["appliances"] = items_to_source(v.appliances);
        } else if constexpr (std::is_same_v<T, AccountIdentity>) {
          body["authentication"] = v.source;
        }
      },
      value);
  return body;
}

}  // namespace aft::model
