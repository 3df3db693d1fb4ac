#include "mock/state.hpp"

#include <algorithm>
#include <set>

#include "client/registry.hpp"
#include "util/hash.hpp"
#include "util/tzdb.hpp"

namespace aft::mock {

namespace {

json activity_wire(const model::Activity& a) {
  json j;
  j["id"] = a.activity_id;
  j["utteranceId"] = a.utterance_id;
  j["activityStatus"] = a.status.render();
  j["creationTimestamp"] = a.timestamp_ms;
  j["description"] = json{{"summary", a.transcript}};
  j["deviceSerialNumber"] = a.device_serial;
  j["deviceType"] = a.device_type;
  j["registeredCustomerId"] = a.customer_id;
  if (a.response_summary) j["responseSummary"] = *a.response_summary;
  return j;
}

json card_wire(const model::Card& c) {
  json j;
  j["id"] = c.card_id;
  j["cardType"] = c.card_type;
  j["title"] = c.title;
  if (c.subtitle) j["subtitle"] = *c.subtitle;
  j["creationTimestamp"] = c.timestamp_ms;
  if (c.linked_activity_id) j["sourceActivityId"] = *c.linked_activity_id;
  return j;
}

json device_wire(const model::DeviceProfile& d) {
  json j;
  j["serialNumber"] = d.serial_number;
  j["deviceType"] = d.device_type;
  if (!d.device_account_id.empty()) j["deviceAccountId"] = d.device_account_id;
  if (!d.software_version.empty()) j["softwareVersion"] = d.software_version;
  if (d.mac_address) j["macAddress"] = *d.mac_address;
  if (d.friendly_name) j["accountName"] = *d.friendly_name;
  if (d.online) j["online"] = *d.online;
  if (d.charging) j["charging"] = *d.charging;
  return j;
}

json preferences_wire(const model::DeviceProfile& d) {
  json j;
  j["deviceSerialNumber"] = d.serial_number;
  j["deviceType"] = d.device_type;
  if (!d.device_account_id.empty()) j["deviceAccountId"] = d.device_account_id;
  if (d.locale) j["locale"] = *d.locale;
  if (d.timezone) j["timeZoneId"] = *d.timezone;
  if (d.postal_address) {
    json a;
    const auto& p = *d.postal_address;
    if (p.country) a["country"] = *p.country;
    if (p.county) a["county"] = *p.county;
    if (p.city) a["city"] = *p.city;
    if (p.postal_code) a["postalCode"] = *p.postal_code;
    if (p.street) a["street"] = *p.street;
    if (p.number) a["number"] = *p.number;
    j["deviceAddress"] = std::move(a);
  }
  if (d.temperature_unit) j["temperatureScale"] = *d.temperature_unit;
  if (d.distance_unit) j["distanceUnits"] = *d.distance_unit;
  return j;
}

json list_item_wire(const model::ListItem& li) {
  json j;
  j["id"] = li.item_id;
  j["text"] = li.text;
  j["completed"] = li.completed;
  j["createdDate"] = li.created_at_ms;
  j["updatedDate"] = li.updated_at_ms;
  return j;
}

}  // namespace

SeededInteraction* MockState::find_interaction(const std::string& id) {
  for (auto& si : interactions) {
    if (si.id == id) return &si;
  }
  return nullptr;
}

const SeededInteraction* MockState::find_interaction(const std::string& id) const {
  for (const auto& si : interactions) {
    if (si.id == id) return &si;
  }
  return nullptr;
}

std::int64_t MockState::interaction_time(const SeededInteraction& si) const {
  if (si.activity) return si.activity->timestamp_ms;
  if (si.card) return si.card->timestamp_ms;
  return 0;
}

std::optional<DeletionOp::Kind> DeletionOp::kind_from_string(std::string_view s) {
  if (s == "HistoryDelete") return Kind::HistoryDelete;
  if (s == "CardRemove") return Kind::CardRemove;
  if (s == "VoiceDelete") return Kind::VoiceDelete;
  return std::nullopt;
}

std::string_view DeletionOp::kind_to_string(Kind k) {
  switch (k) {
    case Kind::HistoryDelete: return "HistoryDelete";
    case Kind::CardRemove: return "CardRemove";
    case Kind::VoiceDelete: return "VoiceDelete";
  }
  return "HistoryDelete";
}

util::Result<std::vector<PresenceChange>, UnknownTarget> apply_deletion(
    MockState& state, const DeletionOp& op) {
  std::vector<SeededInteraction*> matched;
  if (const auto* id = std::get_if<std::string>(&op.target)) {
    SeededInteraction* si = state.find_interaction(*id);
    if (!si) return UnknownTarget{"no interaction " + *id};
    matched.push_back(si);
  } else if (const auto* range = std::get_if<DeletionOp::TimeRange>(&op.target)) {
    for (auto& si : state.interactions) {
      std::int64_t t = state.interaction_time(si);
      if (t >= range->from_ms && t <= range->to_ms) matched.push_back(&si);
    }
  } else {
    for (auto& si : state.interactions) matched.push_back(&si);
  }

  std::vector<PresenceChange> changes;
  changes.reserve(matched.size());
  for (SeededInteraction* si : matched) {
    PresenceChange ch;
    ch.interaction_id = si->id;
    ch.before = si->presence();
    switch (op.kind) {
      case DeletionOp::Kind::HistoryDelete:
        si->activity.reset();
        si->card.reset();
        si->audio_present = false;
        break;
      case DeletionOp::Kind::CardRemove:
        si->card.reset();
        break;
      case DeletionOp::Kind::VoiceDelete:
        si->audio_present = false;
        break;
    }
    ch.after = si->presence();
    changes.push_back(std::move(ch));
  }
  return changes;
}

// ---- wire bodies ------------------------------------------------------------

json body_activities(const MockState& s) {
  // newest first, the way the history surfaces present it
  std::vector<const model::Activity*> acts;
  for (const auto& si : s.interactions) {
    if (si.activity) acts.push_back(&*si.activity);
  }
  std::stable_sort(acts.begin(), acts.end(), [](const auto* a, const auto* b) {
    return a->timestamp_ms > b->timestamp_ms;
  });
  json arr = json::array();
  for (const auto* a : acts) arr.push_back(activity_wire(*a));
  return json{{"activities", std::move(arr)}};
}

json body_cards(const MockState& s) {
  std::vector<const model::Card*> cards;
  for (const auto& si : s.interactions) {
    if (si.card) cards.push_back(&*si.card);
  }
  std::stable_sort(cards.begin(), cards.end(), [](const auto* a, const auto* b) {
    return a->timestamp_ms > b->timestamp_ms;
  });
  json arr = json::array();
  for (const auto* c : cards) arr.push_back(card_wire(*c));
  return json{{"cards", std::move(arr)}};
}

json body_bootstrap(const MockState& s) {
  return json{{"authentication",
               json{{"authenticated", true},
                    {"customerId", s.identity.customer_id},
                    {"customerName", s.identity.name},
                    {"customerEmail", s.identity.email}}}};
}

json body_household(const MockState& s) {
  json arr = json::array();
  for (const auto& m : s.members) {
    json j;
    j["id"] = m.person_id;
    j["firstName"] = m.first_name;
    j["fullName"] = m.full_name;
    j["role"] = m.role.render();
    if (m.email) j["email"] = *m.email;
    arr.push_back(std::move(j));
  }
  return json{{"accounts", std::move(arr)}};
}

json body_devices(const MockState& s) {
  json arr = json::array();
  for (const auto& d : s.devices) arr.push_back(device_wire(d));
  return json{{"devices", std::move(arr)}};
}

json body_device_preferences(const MockState& s) {
  json arr = json::array();
  for (const auto& d : s.devices) arr.push_back(preferences_wire(d));
  return json{{"devicePreferences", std::move(arr)}};
}

std::optional<json> body_wifi(const MockState& s, const std::string& device_serial) {
  auto it = s.wifi.find(device_serial);
  if (it == s.wifi.end()) return std::nullopt;
  const auto& w = it->second;
  return json{{"deviceSerialNumber", w.device_serial},
              {"deviceType", w.device_type},
              {"macAddress", w.mac_address},
              {"essid", w.essid}};
}

json body_bluetooth(const MockState& s) {
  json arr = json::array();
  for (const auto& bs : s.bluetooth) {
    json j;
    j["deviceSerialNumber"] = bs.device_serial;
    if (bs.device_type) j["deviceType"] = *bs.device_type;
    json paired = json::array();
    for (const auto& p : bs.pairings) {
      paired.push_back(json{{"friendlyName", p.paired_name}, {"connected", p.connected}});
    }
    j["pairedDeviceList"] = std::move(paired);
    arr.push_back(std::move(j));
  }
  return json{{"bluetoothStates", std::move(arr)}};
}

json body_named_lists(const MockState& s) {
  json arr = json::array();
  for (const auto& l : s.lists) {
    arr.push_back(json{{"listId", l.list_id},
                       {"name", l.name},
                       {"createdDate", l.created_at_ms},
                       {"updatedDate", l.updated_at_ms}});
  }
  return json{{"lists", std::move(arr)}};
}

std::optional<json> body_list_items(const MockState& s, const std::string& list_id) {
  for (const auto& l : s.lists) {
    if (l.list_id != list_id) continue;
    json items = json::array();
    for (const auto& li : l.items) items.push_back(list_item_wire(li));
    return json{{"listId", l.list_id}, {"items", std::move(items)}};
  }
  return std::nullopt;
}

json body_phoenix(const MockState& s) {
  json groups = json::array();
  for (const auto& g : s.topology.groups) {
    groups.push_back(json{{"name", g.group_name}, {"applianceIds", g.member_device_ids}});
  }
  json appliances = json::array();
  for (const auto& a : s.topology.appliances) {
    json j;
    j["applianceId"] = a.appliance_id;
    j["friendlyName"] = a.name;
    if (a.room) j["room"] = *a.room;
    appliances.push_back(std::move(j));
  }
  return json{{"applianceGroups", std::move(groups)}, {"appliances", std::move(appliances)}};
}

json body_contacts(const MockState& s) {
  json arr = json::array();
  for (const auto& c : s.contacts) {
    json j;
    j["id"] = c.contact_id;
    j["name"] = c.name;
    j["phoneNumbers"] = c.phone_numbers;
    j["emails"] = c.emails;
    if (c.postal_address) j["postalAddress"] = *c.postal_address;
    if (!c.source_kind.literal.empty()) j["source"] = c.source_kind.render();
    arr.push_back(std::move(j));
  }
  return json{{"contacts", std::move(arr)}};
}

json body_for_endpoint(const MockState& s, const std::string& endpoint_id) {
  if (endpoint_id == "activities") return body_activities(s);
  if (endpoint_id == "cards") return body_cards(s);
  if (endpoint_id == "bootstrap") return body_bootstrap(s);
  if (endpoint_id == "household") return body_household(s);
  if (endpoint_id == "devices-v2") return body_devices(s);
  if (endpoint_id == "device-preferences") return body_device_preferences(s);
  if (endpoint_id == "bluetooth") return body_bluetooth(s);
  if (endpoint_id == "namedLists") return body_named_lists(s);
  if (endpoint_id == "phoenix") return body_phoenix(s);
  if (endpoint_id == "contacts") return body_contacts(s);
  if (s.raw_bodies.contains(endpoint_id)) return s.raw_bodies.at(endpoint_id);
  return json::object();  // minimal stub for unanalyzed endpoints
}

std::vector<std::uint8_t> audio_bytes_for(const std::string& utterance_id) {
  // 256 bytes of keyed hash output; content is irrelevant, determinism is not
  std::vector<std::uint8_t> out;
  out.reserve(256);
  for (int block = 0; block < 8; ++block) {
    std::string hex = util::sha256_hex(utterance_id + ":" + std::to_string(block));
    for (std::size_t i = 0; i + 1 < hex.size(); i += 2) {
      auto nib = [](char c) -> std::uint8_t {
        return c <= '9' ? c - '0' : c - 'a' + 10;
      };
      out.push_back(static_cast<std::uint8_t>((nib(hex[i]) << 4) | nib(hex[i + 1])));
    }
  }
  return out;
}

// ---- fixtures ---------------------------------------------------------------

namespace {

struct FixtureErr {
  std::string what;
};

const json* get_obj(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) return nullptr;
  if (!it->is_object()) throw FixtureErr{std::string(key) + " must be an object"};
  return &*it;
}

const json* get_arr(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) return nullptr;
  if (!it->is_array()) throw FixtureErr{std::string(key) + " must be an array"};
  return &*it;
}

std::string req_str(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string())
    throw FixtureErr{where + " requires string '" + key + "'"};
  return it->get<std::string>();
}

std::string opt_str(const json& j, const char* key, const std::string& fallback = "") {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) return fallback;
  return it->get<std::string>();
}

std::int64_t req_int(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number())
    throw FixtureErr{where + " requires numeric '" + key + "'"};
  return it->get<std::int64_t>();
}

MockState build_from_fixture(const json& fx) {
  if (!fx.is_object()) throw FixtureErr{"fixture must be a JSON object"};
  MockState s;
  s.clock_ms = fx.value("clock", std::int64_t{0});

  if (const json* id = get_obj(fx, "identity")) {
    s.identity.customer_id = req_str(*id, "customerId", "identity");
    s.identity.name = req_str(*id, "name", "identity");
    s.identity.email = req_str(*id, "email", "identity");
  }
  if (s.identity.customer_id.empty())
    throw FixtureErr{"identity.customerId must be nonempty"};

  if (const json* members = get_arr(fx, "members")) {
    for (const auto& m : *members) {
      model::HouseholdMember hm;
      hm.person_id = req_str(m, "id", "members[]");
      hm.first_name = req_str(m, "firstName", "members[]");
      hm.full_name = req_str(m, "fullName", "members[]");
      hm.role = model::MemberRole::from_literal(req_str(m, "role", "members[]"));
      if (m.contains("email")) hm.email = req_str(m, "email", "members[]");
      s.members.push_back(std::move(hm));
    }
  }

  std::set<std::string> serials;
  if (const json* devices = get_arr(fx, "devices")) {
    for (const auto& d : *devices) {
      model::DeviceProfile dp;
      dp.serial_number = req_str(d, "serialNumber", "devices[]");
      dp.device_type = req_str(d, "deviceType", "devices[]");
      dp.device_account_id = opt_str(d, "deviceAccountId");
      dp.software_version = opt_str(d, "softwareVersion");
      if (d.contains("macAddress")) dp.mac_address = req_str(d, "macAddress", "devices[]");
      if (d.contains("accountName")) dp.friendly_name = req_str(d, "accountName", "devices[]");
      if (d.contains("online")) dp.online = d.at("online").get<bool>();
      if (d.contains("charging")) dp.charging = d.at("charging").get<bool>();
      if (dp.serial_number.empty()) throw FixtureErr{"device serial number must be nonempty"};
      if (!serials.insert(dp.serial_number).second)
        throw FixtureErr{"duplicate device serial " + dp.serial_number};

      if (const json* prefs = get_obj(d, "preferences")) {
        if (prefs->contains("locale")) dp.locale = req_str(*prefs, "locale", "preferences");
        if (prefs->contains("timeZoneId")) {
          dp.timezone = req_str(*prefs, "timeZoneId", "preferences");
          if (!util::zone_exists(*dp.timezone))
            throw FixtureErr{"unresolvable time zone " + *dp.timezone};
        }
        if (const json* addr = get_obj(*prefs, "deviceAddress")) {
          model::PostalAddress pa;
          if (addr->contains("country")) pa.country = opt_str(*addr, "country");
          if (addr->contains("county")) pa.county = opt_str(*addr, "county");
          if (addr->contains("city")) pa.city = opt_str(*addr, "city");
          if (addr->contains("postalCode")) pa.postal_code = opt_str(*addr, "postalCode");
          if (addr->contains("street")) pa.street = opt_str(*addr, "street");
          if (addr->contains("number")) pa.number = opt_str(*addr, "number");
          dp.postal_address = std::move(pa);
        }
        if (prefs->contains("temperatureScale"))
          dp.temperature_unit = req_str(*prefs, "temperatureScale", "preferences");
        if (prefs->contains("distanceUnits"))
          dp.distance_unit = req_str(*prefs, "distanceUnits", "preferences");
      }

      if (const json* wifi = get_obj(d, "wifi")) {
        model::WifiDetail w;
        w.device_serial = dp.serial_number;
        w.device_type = dp.device_type;
        w.mac_address = req_str(*wifi, "macAddress", "wifi");
        w.essid = req_str(*wifi, "essid", "wifi");
        if (!model::mac_matches_invariant(w.normalized_mac()))
          throw FixtureErr{"wifi MAC not six hex octets: " + w.mac_address};
        s.wifi[dp.serial_number] = std::move(w);
      }

      if (const json* bt = get_arr(d, "bluetooth")) {
        model::BluetoothState bs;
        bs.device_serial = dp.serial_number;
        bs.device_type = dp.device_type;
        std::set<std::string> names;
        for (const auto& p : *bt) {
          model::BluetoothPairing bp;
          bp.device_serial = dp.serial_number;
          bp.paired_name = req_str(p, "friendlyName", "bluetooth[]");
          bp.connected = p.value("connected", false);
          if (!names.insert(bp.paired_name).second)
            throw FixtureErr{"duplicate bluetooth pairing " + bp.paired_name};
          bs.pairings.push_back(std::move(bp));
        }
        s.bluetooth.push_back(std::move(bs));
      }

      s.devices.push_back(std::move(dp));
    }
  }

  if (const json* interactions = get_arr(fx, "interactions")) {
    std::set<std::string> ids;
    for (const auto& i : *interactions) {
      SeededInteraction si;
      si.id = req_str(i, "id", "interactions[]");
      if (!ids.insert(si.id).second) throw FixtureErr{"duplicate interaction id " + si.id};
      std::string serial = req_str(i, "deviceSerialNumber", "interactions[]");
      const model::DeviceProfile* dev = nullptr;
      for (const auto& d : s.devices) {
        if (d.serial_number == serial) dev = &d;
      }
      if (!dev) throw FixtureErr{"interaction " + si.id + " references unknown device " + serial};

      model::Activity a;
      a.activity_id = opt_str(i, "activityId", si.id + "-act");
      a.utterance_id = si.id;
      a.transcript = req_str(i, "transcript", "interactions[]");
      a.timestamp_ms = req_int(i, "timestamp", "interactions[]");
      a.device_serial = serial;
      a.device_type = dev->device_type;
      a.customer_id = s.identity.customer_id;
      a.status = model::ActivityStatus::from_literal(opt_str(i, "status", "SUCCESS"));
      if (i.contains("responseSummary"))
        a.response_summary = req_str(i, "responseSummary", "interactions[]");
      si.activity = std::move(a);

      bool want_card = true;
      const json* card_spec = nullptr;
      if (i.contains("card")) {
        if (i.at("card").is_boolean()) {
          want_card = i.at("card").get<bool>();
        } else if (i.at("card").is_object()) {
          card_spec = &i.at("card");
        } else {
          throw FixtureErr{"interaction card must be bool or object"};
        }
      }
      if (want_card) {
        model::Card c;
        c.card_id = si.id + "-card";
        c.card_type = card_spec ? opt_str(*card_spec, "cardType", "TextCard") : "TextCard";
        c.title = card_spec ? opt_str(*card_spec, "title", si.activity->transcript)
                            : si.activity->transcript;
        if (si.activity->response_summary) c.subtitle = si.activity->response_summary;
        if (card_spec && card_spec->contains("subtitle"))
          c.subtitle = opt_str(*card_spec, "subtitle");
        c.timestamp_ms = si.activity->timestamp_ms;
        bool link = !card_spec || card_spec->value("linkActivity", true);
        if (link) c.linked_activity_id = si.activity->activity_id;
        si.card = std::move(c);
      }

      si.audio_present = i.value("audio", true);
      s.interactions.push_back(std::move(si));
    }
  }

  if (const json* lists = get_arr(fx, "lists")) {
    std::set<std::string> list_ids;
    for (const auto& l : *lists) {
      model::NamedList nl;
      nl.list_id = req_str(l, "listId", "lists[]");
      nl.name = req_str(l, "name", "lists[]");
      nl.created_at_ms = req_int(l, "createdDate", "lists[]");
      nl.updated_at_ms = req_int(l, "updatedDate", "lists[]");
      if (nl.updated_at_ms < nl.created_at_ms)
        throw FixtureErr{"list " + nl.list_id + " updated before created"};
      if (!list_ids.insert(nl.list_id).second)
        throw FixtureErr{"duplicate list id " + nl.list_id};
      if (const json* items = get_arr(l, "items")) {
        std::set<std::string> item_ids;
        for (const auto& li_json : *items) {
          model::ListItem li;
          li.item_id = req_str(li_json, "id", "lists[].items[]");
          li.text = req_str(li_json, "text", "lists[].items[]");
          li.completed = li_json.value("completed", false);
          li.created_at_ms = req_int(li_json, "createdDate", "lists[].items[]");
          li.updated_at_ms = req_int(li_json, "updatedDate", "lists[].items[]");
          if (li.updated_at_ms < li.created_at_ms)
            throw FixtureErr{"item " + li.item_id + " updated before created"};
          if (!item_ids.insert(li.item_id).second)
            throw FixtureErr{"duplicate item id " + li.item_id};
          nl.items.push_back(std::move(li));
        }
      }
      s.lists.push_back(std::move(nl));
    }
  }

  if (const json* topo = get_obj(fx, "topology")) {
    if (const json* appliances = get_arr(*topo, "appliances")) {
      for (const auto& a : *appliances) {
        model::Appliance ap;
        ap.appliance_id = req_str(a, "applianceId", "appliances[]");
        ap.name = req_str(a, "friendlyName", "appliances[]");
        if (a.contains("room")) ap.room = opt_str(a, "room");
        s.topology.appliances.push_back(std::move(ap));
      }
    }
    if (const json* groups = get_arr(*topo, "applianceGroups")) {
      for (const auto& g : *groups) {
        model::ApplianceGroup ag;
        ag.group_name = req_str(g, "name", "applianceGroups[]");
        if (g.contains("applianceIds")) {
          for (const auto& id : g.at("applianceIds")) {
            ag.member_device_ids.push_back(id.get<std::string>());
          }
        }
        s.topology.groups.push_back(std::move(ag));
      }
    }
  }

  if (const json* contacts = get_arr(fx, "contacts")) {
    for (const auto& c : *contacts) {
      model::Contact ct;
      ct.contact_id = req_str(c, "id", "contacts[]");
      ct.name = opt_str(c, "name");
      if (const json* nums = get_arr(c, "phoneNumbers")) {
        for (const auto& n : *nums) ct.phone_numbers.push_back(n.get<std::string>());
      }
      if (const json* mails = get_arr(c, "emails")) {
        for (const auto& e : *mails) ct.emails.push_back(e.get<std::string>());
      }
      if (c.contains("postalAddress")) ct.postal_address = opt_str(c, "postalAddress");
      ct.source_kind = model::ContactSource::from_literal(opt_str(c, "source"));
      if (ct.name.empty() && ct.phone_numbers.empty() && ct.emails.empty())
        throw FixtureErr{"contact " + ct.contact_id + " has no name, phone, or email"};
      s.contacts.push_back(std::move(ct));
    }
  }

  if (const json* raw = get_obj(fx, "raw")) {
    for (auto it = raw->begin(); it != raw->end(); ++it) {
      if (!client::find_endpoint(it.key()))
        throw FixtureErr{"raw body for unknown endpoint '" + it.key() + "'"};
      s.raw_bodies[it.key()] = it.value();
    }
  }

  return s;
}

}  // namespace

util::Result<MockState, InvalidFixture> load_fixture(const json& fixture) {
  try {
    return build_from_fixture(fixture);
  } catch (const FixtureErr& e) {
    return InvalidFixture{e.what};
  } catch (const json::exception& e) {
    return InvalidFixture{std::string("malformed fixture: ") + e.what()};
  }
}

const char* default_fixture_json() {
  // One 3rd-gen Echo in Edinburgh, the four history entries of a weekday
  // afternoon plus a later weather question, two default lists, and a
  // shopping item added at 16:10 local whose source interaction is absent.
  // All times are 2019-08-06, Europe/London (UTC+1 on that date).
  static const char* kFixture = R"json({
  "clock": 1565105400000,
  "identity": {
    "customerId": "A1PEXAMPLE0LPH",
    "name": "Bob Example",
    "email": "bob@example.net"
  },
  "members": [
    {"id": "person-bob", "firstName": "Bob", "fullName": "Bob Example",
     "role": "ADULT", "email": "bob@example.net"},
    {"id": "person-charlie", "firstName": "Charlie", "fullName": "Charlie Example",
     "role": "CHILD"}
  ],
  "devices": [
    {
      "serialNumber": "G090FIXTURE02GD",
      "deviceType": "A32DOYMUN6DTXA",
      "deviceAccountId": "A072EXAMPLE1ZU0",
      "softwareVersion": "2584225924",
      "macAddress": "74:C2:46:0A:1B:2C",
      "accountName": "Bob's Echo",
      "online": true,
      "charging": false,
      "preferences": {
        "locale": "en-GB",
        "timeZoneId": "Europe/London",
        "deviceAddress": {
          "country": "GB", "county": "Midlothian", "city": "Edinburgh",
          "postalCode": "EH8 9AB", "street": "Nicolson Street", "number": "12"
        },
        "temperatureScale": "CELSIUS",
        "distanceUnits": "METRIC"
      },
      "wifi": {"macAddress": "74:C2:46:0A:1B:2C", "essid": "BobHomeWifi"},
      "bluetooth": [{"friendlyName": "Kitchen Speaker", "connected": false}]
    }
  ],
  "interactions": [
    {"id": "utt-0001", "transcript": "alexa", "timestamp": 1565103190000,
     "status": "DISCARDED_NON_DEVICE_DIRECTED_INTENT",
     "deviceSerialNumber": "G090FIXTURE02GD",
     "responseSummary": "Audio was not intended for this device"},
    {"id": "utt-0002", "transcript": "what time is it", "timestamp": 1565103210000,
     "deviceSerialNumber": "G090FIXTURE02GD",
     "responseSummary": "It's 3:53 pm."},
    {"id": "utt-0003", "transcript": "alexa what's the weather", "timestamp": 1565103230000,
     "deviceSerialNumber": "G090FIXTURE02GD",
     "responseSummary": "Right now in Edinburgh it's 14 degrees with light rain."},
    {"id": "utt-0004", "transcript": "alexa how is the traffic to inverness",
     "timestamp": 1565103260000,
     "deviceSerialNumber": "G090FIXTURE02GD",
     "responseSummary": "The traffic to Inverness is heavy on the A9."},
    {"id": "utt-0005", "transcript": "what's the weather in edinburgh",
     "timestamp": 1565103900000,
     "deviceSerialNumber": "G090FIXTURE02GD",
     "responseSummary": "It's 14 degrees in Edinburgh."}
  ],
  "lists": [
    {"listId": "list-todo", "name": "To-do",
     "createdDate": 1564617600000, "updatedDate": 1565103192000,
     "items": [
       {"id": "todo-item-1", "text": "water the plants", "completed": false,
        "createdDate": 1565103192000, "updatedDate": 1565103192000}
     ]},
    {"listId": "list-shopping", "name": "Shopping",
     "createdDate": 1564617600000, "updatedDate": 1565104200000,
     "items": [
       {"id": "shopping-item-1", "text": "matches", "completed": false,
        "createdDate": 1565104200000, "updatedDate": 1565104200000}
     ]}
  ],
  "topology": {
    "appliances": [
      {"applianceId": "appl-lamp-1", "friendlyName": "Bedside Lamp", "room": "Bedroom"}
    ],
    "applianceGroups": [
      {"name": "Bedroom", "applianceIds": ["appl-lamp-1"]}
    ]
  },
  "contacts": [
    {"id": "contact-1", "name": "Dana Example",
     "phoneNumbers": ["+44 131 496 0000"], "emails": ["dana@example.net"],
     "source": "MANUAL"},
    {"id": "contact-2", "name": "Sam Example",
     "phoneNumbers": ["+44 7700 900000"], "emails": [], "source": "IMPORTED"}
  ],
  "raw": {
    "notifications": {
      "notifications": [
        {"id": "notif-1", "createdDate": 1565103795000, "type": "Reminder",
         "reminderLabel": "take out the bins", "status": "ON"}
      ]
    },
    "wake-word": {
      "wakeWords": [
        {"deviceSerialNumber": "G090FIXTURE02GD", "wakeWord": "ALEXA", "active": true}
      ]
    },
    "traffic-settings": {
      "origin": {"label": "Home, Edinburgh"},
      "destination": {"label": "Work, Edinburgh"}
    },
    "app-version-info": {"version": "2.2.442647.0"}
  }
})json";
  return kFixture;
}

MockState default_state() {
  auto parsed = load_fixture(json::parse(default_fixture_json()));
  // the built-in fixture is validated by tests; a failure here is a bug
  return parsed.ok() ? std::move(parsed.value()) : MockState{};
}

// ---- scenario scripting -----------------------------------------------------

namespace {

json snapshot_state(const MockState& s, const std::string& label) {
  json snap;
  snap["label"] = label;

  json act_ids = json::array();
  json history_view = json::array();
  std::vector<const SeededInteraction*> with_activity;
  for (const auto& si : s.interactions) {
    if (si.activity) with_activity.push_back(&si);
  }
  std::stable_sort(with_activity.begin(), with_activity.end(),
                   [](const auto* a, const auto* b) {
                     return a->activity->timestamp_ms > b->activity->timestamp_ms;
                   });
  for (const auto* si : with_activity) {
    act_ids.push_back(si->activity->activity_id);
    std::string device = si->activity->device_serial;
    for (const auto& d : s.devices) {
      if (d.serial_number == device && d.friendly_name) device = *d.friendly_name;
    }
    history_view.push_back(si->activity->transcript + " — " +
                           model::to_iso8601_utc(si->activity->timestamp_ms) + " on " +
                           device);
  }
  snap["activities"] = std::move(act_ids);
  snap["history_view"] = std::move(history_view);

  json card_ids = json::array();
  for (const auto& si : s.interactions) {
    if (si.card) card_ids.push_back(si.card->card_id);
  }
  snap["cards"] = std::move(card_ids);

  json audio = json::object();
  for (const auto& si : s.interactions) audio[si.id] = si.audio_present;
  snap["utterance_audio"] = std::move(audio);

  json presence = json::object();
  for (const auto& si : s.interactions) presence[si.id] = si.presence().code();
  snap["presence"] = std::move(presence);

  snap["named_lists_digest"] = util::sha256_hex(std::string_view(body_named_lists(s).dump()));
  return snap;
}

}  // namespace

util::Result<json, std::string> run_scenario(MockState& state, const json& script) {
  const json* steps = nullptr;
  if (script.is_array()) {
    steps = &script;
  } else if (script.is_object() && script.contains("steps") && script.at("steps").is_array()) {
    steps = &script.at("steps");
  } else {
    return std::string("script must be an array of steps or {\"steps\": [...]}");
  }

  json trace = json::array();
  int n = 0;
  for (const auto& step : *steps) {
    ++n;
    if (!step.is_object() || !step.contains("op") || !step.at("op").is_string())
      return std::string("step " + std::to_string(n) + " has no op");
    std::string op = step.at("op").get<std::string>();
    json entry;
    entry["step"] = n;
    entry["op"] = op;

    if (op == "set_clock") {
      if (!step.contains("ms") || !step.at("ms").is_number())
        return std::string("set_clock step requires ms");
      state.clock_ms = step.at("ms").get<std::int64_t>();
      entry["clock"] = state.clock_ms;
    } else if (op == "interact") {
      if (!step.contains("interaction"))
        return std::string("interact step requires interaction");
      // reuse the fixture schema for one interaction
      json mini;
      mini["identity"] = json{{"customerId", state.identity.customer_id},
                              {"name", state.identity.name},
                              {"email", state.identity.email}};
      json dev_arr = json::array();
      for (const auto& d : state.devices) {
        json dj;
        dj["serialNumber"] = d.serial_number;
        dj["deviceType"] = d.device_type;
        dev_arr.push_back(std::move(dj));
      }
      mini["devices"] = std::move(dev_arr);
      mini["interactions"] = json::array({step.at("interaction")});
      auto parsed = load_fixture(mini);
      if (!parsed.ok())
        return std::string("interact step: " + parsed.error().violated_invariant);
      SeededInteraction si = std::move(parsed.value().interactions.front());
      if (state.find_interaction(si.id))
        return std::string("interact step: duplicate interaction id " + si.id);
      entry["interaction_id"] = si.id;
      entry["presence"] = si.presence().code();
      state.interactions.push_back(std::move(si));
    } else if (op == "delete") {
      DeletionOp del;
      auto kind = DeletionOp::kind_from_string(step.value("kind", ""));
      if (!kind) return std::string("delete step has unknown kind");
      del.kind = *kind;
      if (!step.contains("target")) return std::string("delete step requires target");
      const json& target = step.at("target");
      if (target.is_string()) {
        if (target.get<std::string>() == "all") {
          del.target = DeletionOp::All{};
        } else {
          del.target = target.get<std::string>();
        }
      } else if (target.is_object() && target.contains("interaction")) {
        del.target = target.at("interaction").get<std::string>();
      } else if (target.is_object() && target.contains("from") && target.contains("to")) {
        del.target = DeletionOp::TimeRange{target.at("from").get<std::int64_t>(),
                                           target.at("to").get<std::int64_t>()};
      } else {
        return std::string("delete target must be an id, \"all\", or {from,to}");
      }
      auto applied = apply_deletion(state, del);
      if (!applied.ok()) return std::string("delete step: " + applied.error().detail);
      entry["kind"] = std::string(DeletionOp::kind_to_string(del.kind));
      json changes = json::array();
      for (const auto& ch : applied.value()) {
        changes.push_back(json{{"interaction_id", ch.interaction_id},
                               {"before", ch.before.code()},
                               {"after", ch.after.code()}});
      }
      entry["changes"] = std::move(changes);
    } else if (op == "snapshot") {
      entry["snapshot"] = snapshot_state(state, step.value("label", ""));
    } else {
      return std::string("unknown op '" + op + "' at step " + std::to_string(n));
    }
    trace.push_back(std::move(entry));
  }
  return trace;
}

}  // namespace aft::mock
