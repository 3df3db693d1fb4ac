#include <doctest.h>

#include <fstream>

#include "casefile/casefile.hpp"
#include "support.hpp"
#include "util/hash.hpp"

using namespace aft::casefile;
using nlohmann::json;

namespace {

aft::ingest::ApiRecord record_for(const std::string& url, const json& body,
                                  int status = 200) {
  aft::ingest::ApiRecord r;
  r.url = url;
  r.method = "GET";
  r.status = status;
  r.mime_type = "application/json";
  r.captured_at_ms = 1565105400000;
  r.body_is_json = true;
  r.body_json = body;
  r.recompute_digest();
  return r;
}

EvidenceCase small_case() {
  EvidenceCase c;
  c.records.push_back(record_for(
      "https://alexa.amazon.com/api/bootstrap",
      json::parse(R"({"authentication": {"customerId": "C1", "customerName": "Bob",
                      "customerEmail": "bob@example.net"}})")));
  c.records.push_back(record_for(
      "https://alexa.amazon.com/api/activities",
      json::parse(R"({"activities": [
        {"id": "a1", "utteranceId": "u1", "activityStatus": "SUCCESS",
         "creationTimestamp": 1565103190000,
         "description": {"summary": "what time is it"},
         "deviceSerialNumber": "S1", "deviceType": "T1",
         "registeredCustomerId": "C1"}]})")));
  // an audio fetch plus its bytes
  aft::ingest::ApiRecord audio;
  audio.url = "https://alexa.amazon.com/api/utterance/audio/data?id=u1";
  audio.method = "GET";
  audio.status = 200;
  audio.mime_type = "application/octet-stream";
  audio.captured_at_ms = 1565105400000;
  audio.body_bytes = {10, 20, 30, 40};
  audio.recompute_digest();
  c.audio_blobs[audio.body_digest] = audio.body_bytes;
  c.records.push_back(audio);
  c.assemble();
  return c;
}

}  // namespace

TEST_CASE("assembly merges device endpoints and tracks audio state") {
  EvidenceCase c;
  c.records.push_back(record_for(
      "https://alexa.amazon.com/api/devices-v2/device",
      json::parse(R"({"devices": [
        {"serialNumber": "S1", "deviceType": "T1", "softwareVersion": "100",
         "macAddress": "74:C2:46:0A:1B:2C", "accountName": "Echo"}]})")));
  c.records.push_back(record_for(
      "https://alexa.amazon.com/api/device-preferences",
      json::parse(R"({"devicePreferences": [
        {"deviceSerialNumber": "S1", "deviceType": "T1", "locale": "en-GB",
         "timeZoneId": "Europe/London"}]})")));
  c.assemble();
  REQUIRE(c.devices.size() == 1);
  CHECK(c.devices[0].software_version == "100");
  CHECK(c.devices[0].locale == "en-GB");
  CHECK(c.devices[0].timezone == "Europe/London");
  CHECK(c.devices[0].friendly_name == "Echo");

  const auto& full = small_case();
  CHECK(full.audio_state("u1") == AudioState::Present);
  CHECK(full.audio_state("u-unknown") == AudioState::NotChecked);
  REQUIRE(full.identity.has_value());
  CHECK(full.identity->customer_id == "C1");
}

TEST_CASE("assembly records a confirmed audio absence from a 404") {
  EvidenceCase c;
  c.records.push_back(record_for(
      "https://alexa.amazon.com/api/utterance/audio/data?id=u9",
      json::parse(R"({"error": "no recording"})"), 404));
  c.assemble();
  CHECK(c.audio_state("u9") == AudioState::AbsentConfirmed);
}

TEST_CASE("raw records survive even when every parse fails") {
  EvidenceCase c;
  c.records.push_back(record_for("https://alexa.amazon.com/api/activities",
                                 json::parse(R"({"activities": [{"broken": true}]})")));
  c.assemble();
  CHECK(c.records.size() == 1);
  CHECK(c.activities.empty());
  REQUIRE(c.parse_errors.size() == 1);
  CHECK(c.parse_errors[0].endpoint_id == "activities");
}

TEST_CASE("write and reopen round-trips the case") {
  testsupport::TempDir tmp;
  EvidenceCase c = small_case();

  WriteOptions opts;
  opts.tool_version = "test";
  opts.source = CaseSource::MockAcquisition;
  opts.created_at_ms = 1565105400000;
  opts.config_echo = json{{"note", "unit"}};

  auto manifest = write_case(tmp / "case1", c, opts);
  REQUIRE(manifest.ok());
  CHECK(manifest.value().case_id == "case1");
  CHECK(std::filesystem::exists(tmp / "case1" / "capture.jsonl"));
  CHECK(std::filesystem::exists(tmp / "case1" / "manifest.json"));
  CHECK(std::filesystem::exists(tmp / "case1" / "parsed" / "activities.json"));

  auto reopened = open_case(tmp / "case1");
  REQUIRE_MESSAGE(reopened.ok(), (reopened.ok() ? "" : reopened.error()));
  const EvidenceCase& back = reopened.value().evidence;
  CHECK(back.case_id == "case1");
  CHECK(back.source == CaseSource::MockAcquisition);
  REQUIRE(back.records.size() == c.records.size());
  for (std::size_t i = 0; i < c.records.size(); ++i) {
    CHECK(back.records[i].to_json() == c.records[i].to_json());
  }
  CHECK(back.activities.size() == 1);
  CHECK(back.audio_state("u1") == AudioState::Present);
  REQUIRE(back.audio_blobs.size() == 1);
  CHECK(back.audio_blobs.begin()->second == std::vector<std::uint8_t>{10, 20, 30, 40});
  CHECK(reopened.value().manifest.config_echo.at("note") == "unit");
}

TEST_CASE("any tampering is a hard integrity error on reopen") {
  testsupport::TempDir tmp;
  EvidenceCase c = small_case();
  WriteOptions opts;
  opts.tool_version = "test";
  opts.created_at_ms = 0;
  REQUIRE(write_case(tmp / "caseT", c, opts).ok());

  SUBCASE("edited capture file") {
    std::ofstream f(tmp / "caseT" / "capture.jsonl", std::ios::app);
    f << "\n";
    f.close();
    auto r = open_case(tmp / "caseT");
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().find("integrity error") != std::string::npos);
  }
  SUBCASE("deleted audio blob") {
    for (const auto& entry :
         std::filesystem::directory_iterator(tmp / "caseT" / "audio")) {
      std::filesystem::remove(entry.path());
    }
    auto r = open_case(tmp / "caseT");
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().find("integrity error") != std::string::npos);
  }
  SUBCASE("edited parsed report") {
    std::ofstream f(tmp / "caseT" / "parsed" / "activities.json", std::ios::app);
    f << " ";
    f.close();
    CHECK_FALSE(open_case(tmp / "caseT").ok());
  }
  SUBCASE("not a case directory") {
    auto r = open_case(tmp / "nothing-here");
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().find("not a case directory") != std::string::npos);
  }
}

TEST_CASE("manifest serialization round-trips") {
  CaseManifest m;
  m.case_id = "c";
  m.created_at_ms = 1565105400000;
  m.tool_version = "0.1.0";
  m.source = CaseSource::CaptureImport;
  m.files = {{"capture.jsonl", std::string(64, 'a')}};
  m.config_echo = json{{"k", "v"}};
  auto back = CaseManifest::from_json(m.to_json());
  REQUIRE(back.ok());
  CHECK(back.value().case_id == "c");
  CHECK(back.value().created_at_ms == m.created_at_ms);
  CHECK(back.value().source == CaseSource::CaptureImport);
  CHECK(back.value().files == m.files);
}
