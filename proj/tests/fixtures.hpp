#pragma once

#include <nlohmann/json.hpp>

#include <string>

namespace testsupport {

using nlohmann::json;

// Minimal valid mock fixture: one account, one Echo, no interactions.
inline json base_fixture() {
  return json::parse(R"({
    "clock": 1565105400000,
    "identity": {"customerId": "C-TEST", "name": "Test User", "email": "t@example.net"},
    "devices": [
      {"serialNumber": "S-ECHO-1", "deviceType": "A32DOYMUN6DTXA",
       "deviceAccountId": "DACC-1", "softwareVersion": "2584225924",
       "macAddress": "74:C2:46:0A:1B:2C", "accountName": "Test Echo",
       "preferences": {"locale": "en-GB", "timeZoneId": "Europe/London",
         "deviceAddress": {"country": "GB", "city": "Edinburgh"}},
       "wifi": {"macAddress": "74:C2:46:0A:1B:2C", "essid": "TestWifi"}}
    ]
  })");
}

inline json interaction(const std::string& id, const std::string& transcript,
                        std::int64_t ts, bool card = true, bool audio = true,
                        const std::string& device_serial = "S-ECHO-1") {
  json j;
  j["id"] = id;
  j["transcript"] = transcript;
  j["timestamp"] = ts;
  j["deviceSerialNumber"] = device_serial;
  if (!card) j["card"] = false;
  j["audio"] = audio;
  return j;
}

// The §V-style experiment: one weather command, snapshot, one deletion,
// snapshot.
inline json weather_scenario(const std::string& deletion_kind) {
  json steps = json::array();
  steps.push_back(json{{"op", "interact"},
                       {"interaction", interaction("utt-w", "what's the weather in edinburgh",
                                                   1565103900000)}});
  steps.push_back(json{{"op", "snapshot"}, {"label", "before"}});
  steps.push_back(json{{"op", "delete"}, {"kind", deletion_kind}, {"target", "utt-w"}});
  steps.push_back(json{{"op", "snapshot"}, {"label", "after"}});
  return json{{"steps", steps}};
}

// Device-generation comparison fixtures: same simulated usage, different
// hardware identifiers, one extra appliance group on the older unit.
inline json gen2_fixture() {
  json f = json::parse(R"({
    "clock": 1565105400000,
    "identity": {"customerId": "ALUTEST0B42", "name": "Gen Tester",
                 "email": "dj1234564@gmx.net"},
    "devices": [
      {"serialNumber": "G090TESTGEN20W3T", "deviceType": "A3S5BH2HU6VAYF",
       "deviceAccountId": "A098TESTG4IM", "softwareVersion": "641574820",
       "macAddress": "74:C2:46:00:00:02", "accountName": "Echo Dot Gen2",
       "preferences": {"locale": "en-GB", "timeZoneId": "Europe/London",
         "deviceAddress": {"country": "GB", "city": "Edinburgh"}},
       "wifi": {"macAddress": "74:C2:46:00:00:02", "essid": "LabWifi"}}
    ],
    "lists": [
      {"listId": "g2-todo", "name": "To-do", "createdDate": 1564617600000,
       "updatedDate": 1564617600000, "items": []},
      {"listId": "g2-shopping", "name": "Shopping", "createdDate": 1564617600000,
       "updatedDate": 1564617600000, "items": []}
    ],
    "topology": {
      "appliances": [{"applianceId": "lamp-1", "friendlyName": "Lamp", "room": "Bedroom"}],
      "applianceGroups": [{"name": "Bedroom", "applianceIds": ["lamp-1"]}]
    },
    "raw": {
      "media-historical-queues": {"queues": [
        {"id": "q1", "title": "Song A"}, {"id": "q2", "title": "Song B"}]},
      "notifications": {"notifications": [
        {"id": "g2-notif-1", "createdDate": 1565103795000, "type": "Reminder",
         "reminderLabel": "water plants", "status": "ON"}]}
    }
  })");
  f["interactions"] = json::array({interaction("g2-utt-1", "what's the weather",
                                               1565103230000, true, true,
                                               "G090TESTGEN20W3T")});
  return f;
}

inline json gen3_fixture() {
  json f = json::parse(R"({
    "clock": 1565105400000,
    "identity": {"customerId": "A1PTESTDLPH", "name": "Gen Tester",
                 "email": "dj1234562@gmx.net"},
    "devices": [
      {"serialNumber": "G090TESTGEN302GD", "deviceType": "A32DOYMUN6DTXA",
       "deviceAccountId": "A072TEST1ZU0", "softwareVersion": "2584225924",
       "macAddress": "74:C2:46:00:00:03", "accountName": "Echo Dot Gen3",
       "preferences": {"locale": "it-IT", "timeZoneId": "Europe/London",
         "deviceAddress": {"country": "GB", "city": "Edinburgh"}},
       "wifi": {"macAddress": "74:C2:46:00:00:03", "essid": "LabWifi"}}
    ],
    "lists": [
      {"listId": "g3-todo", "name": "To-do", "createdDate": 1564617600000,
       "updatedDate": 1564617600000, "items": []},
      {"listId": "g3-shopping", "name": "Shopping", "createdDate": 1564617600000,
       "updatedDate": 1564617600000, "items": []}
    ],
    "topology": {
      "appliances": [{"applianceId": "lamp-1", "friendlyName": "Lamp", "room": "Bedroom"}]
    },
    "raw": {
      "media-historical-queues": {"queues": [
        {"id": "q2", "title": "Song B"}, {"id": "q1", "title": "Song A"}]},
      "notifications": {"notifications": [
        {"id": "g3-notif-1", "createdDate": 1565103795000, "type": "Reminder",
         "reminderLabel": "water plants", "status": "ON"}]}
    }
  })");
  f["interactions"] = json::array(
      {interaction("g3-utt-1", "what's the weather", 1565103230000, true, true,
                   "G090TESTGEN302GD"),
       interaction("g3-utt-2", "what time is it", 1565103260000, true, true,
                   "G090TESTGEN302GD")});
  return f;
}

}  // namespace testsupport
