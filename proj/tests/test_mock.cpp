#include <doctest.h>

#include <httplib.h>

#include <set>

#include "client/registry.hpp"
#include "fixtures.hpp"
#include "mock/server.hpp"
#include "mock/state.hpp"
#include "support.hpp"
#include "util/hash.hpp"

using namespace aft::mock;
using nlohmann::json;

namespace {

MockState state_with_interaction() {
  json fx = testsupport::base_fixture();
  fx["interactions"] = json::array(
      {testsupport::interaction("utt-1", "what's the weather in edinburgh", 1565103900000)});
  auto s = load_fixture(fx);
  REQUIRE(s.ok());
  return std::move(s.value());
}

PresenceTriple presence_of(const MockState& s, const std::string& id) {
  const auto* si = s.find_interaction(id);
  REQUIRE(si != nullptr);
  return si->presence();
}

DeletionOp op(DeletionOp::Kind kind, const std::string& id) {
  DeletionOp d;
  d.kind = kind;
  d.target = id;
  return d;
}

// Test-side oracle: the abstract deletion machine on a presence bit triple.
PresenceTriple oracle_apply(PresenceTriple p, DeletionOp::Kind k) {
  switch (k) {
    case DeletionOp::Kind::HistoryDelete: return {false, false, false};
    case DeletionOp::Kind::CardRemove: return {p.activity, false, p.audio};
    case DeletionOp::Kind::VoiceDelete: return {p.activity, p.card, false};
  }
  return p;
}

}  // namespace

TEST_CASE("default fixture loads and matches its account story") {
  auto s = load_fixture(json::parse(default_fixture_json()));
  REQUIRE_MESSAGE(s.ok(), (s.ok() ? "" : s.error().violated_invariant));
  const MockState& state = s.value();
  CHECK(state.devices.size() == 1);
  REQUIRE(state.lists.size() == 2);
  CHECK(state.lists[0].name == "To-do");
  CHECK(state.lists[1].name == "Shopping");
  CHECK(state.interactions.size() == 5);
  for (const auto& si : state.interactions) CHECK(si.presence().code() == "111");
  CHECK(state.raw_bodies.contains("notifications"));
}

TEST_CASE("fixture validation catches invariant breaches") {
  auto bad_tz = testsupport::base_fixture();
  bad_tz["devices"][0]["preferences"]["timeZoneId"] = "Nowhere/Null";
  auto r1 = load_fixture(bad_tz);
  REQUIRE_FALSE(r1.ok());
  CHECK(r1.error().violated_invariant.find("time zone") != std::string::npos);

  auto dup_serial = testsupport::base_fixture();
  dup_serial["devices"].push_back(dup_serial["devices"][0]);
  CHECK_FALSE(load_fixture(dup_serial).ok());

  auto bad_list = testsupport::base_fixture();
  bad_list["lists"] = json::array({json{{"listId", "l1"},
                                        {"name", "Broken"},
                                        {"createdDate", 200},
                                        {"updatedDate", 100}}});
  auto r2 = load_fixture(bad_list);
  REQUIRE_FALSE(r2.ok());
  CHECK(r2.error().violated_invariant.find("updated before created") != std::string::npos);

  auto bad_mac = testsupport::base_fixture();
  bad_mac["devices"][0]["wifi"]["macAddress"] = "nope";
  CHECK_FALSE(load_fixture(bad_mac).ok());

  auto unknown_raw = testsupport::base_fixture();
  unknown_raw["raw"] = json{{"not-an-endpoint", json::object()}};
  CHECK_FALSE(load_fixture(unknown_raw).ok());

  auto no_identity = json::parse(R"({"devices": []})");
  CHECK_FALSE(load_fixture(no_identity).ok());

  auto orphan_interaction = testsupport::base_fixture();
  orphan_interaction["interactions"] =
      json::array({testsupport::interaction("u", "hi", 1)});
  orphan_interaction["interactions"][0]["deviceSerialNumber"] = "S-GHOST";
  CHECK_FALSE(load_fixture(orphan_interaction).ok());
}

TEST_CASE("the three deletion paths have their documented effects") {
  SUBCASE("history delete removes activity, card, and audio") {
    MockState s = state_with_interaction();
    auto r = apply_deletion(s, op(DeletionOp::Kind::HistoryDelete, "utt-1"));
    REQUIRE(r.ok());
    REQUIRE(r.value().size() == 1);
    CHECK(r.value()[0].before.code() == "111");
    CHECK(r.value()[0].after.code() == "000");
    CHECK(body_activities(s)["activities"].empty());
    CHECK(body_cards(s)["cards"].empty());
  }
  SUBCASE("card removal leaves activity and audio unchanged") {
    MockState s = state_with_interaction();
    json act_before = body_activities(s);
    auto r = apply_deletion(s, op(DeletionOp::Kind::CardRemove, "utt-1"));
    REQUIRE(r.ok());
    CHECK(r.value()[0].after.code() == "101");
    CHECK(body_activities(s) == act_before);
    CHECK(body_cards(s)["cards"].empty());
    CHECK(presence_of(s, "utt-1").audio);
  }
  SUBCASE("voice deletion removes only the recording") {
    MockState s = state_with_interaction();
    json act_before = body_activities(s);
    json cards_before = body_cards(s);
    auto r = apply_deletion(s, op(DeletionOp::Kind::VoiceDelete, "utt-1"));
    REQUIRE(r.ok());
    CHECK(r.value()[0].after.code() == "110");
    CHECK(body_activities(s) == act_before);
    CHECK(body_cards(s) == cards_before);
  }
  SUBCASE("composite path reaches 100 and then 000") {
    MockState s = state_with_interaction();
    REQUIRE(apply_deletion(s, op(DeletionOp::Kind::CardRemove, "utt-1")).ok());
    REQUIRE(apply_deletion(s, op(DeletionOp::Kind::VoiceDelete, "utt-1")).ok());
    CHECK(presence_of(s, "utt-1").code() == "100");
    REQUIRE(apply_deletion(s, op(DeletionOp::Kind::HistoryDelete, "utt-1")).ok());
    CHECK(presence_of(s, "utt-1").code() == "000");
  }
  SUBCASE("unknown target errors") {
    MockState s = state_with_interaction();
    CHECK_FALSE(apply_deletion(s, op(DeletionOp::Kind::VoiceDelete, "nope")).ok());
  }
}

TEST_CASE("range and all targets") {
  json fx = testsupport::base_fixture();
  fx["interactions"] = json::array({
      testsupport::interaction("u1", "one", 1000),
      testsupport::interaction("u2", "two", 2000),
      testsupport::interaction("u3", "three", 3000),
  });
  auto loaded = load_fixture(fx);
  REQUIRE(loaded.ok());
  MockState s = std::move(loaded.value());

  DeletionOp range;
  range.kind = DeletionOp::Kind::VoiceDelete;
  range.target = DeletionOp::TimeRange{1500, 2500};
  auto r = apply_deletion(s, range);
  REQUIRE(r.ok());
  REQUIRE(r.value().size() == 1);
  CHECK(r.value()[0].interaction_id == "u2");
  CHECK(presence_of(s, "u1").code() == "111");
  CHECK(presence_of(s, "u2").code() == "110");

  DeletionOp all;
  all.kind = DeletionOp::Kind::HistoryDelete;
  all.target = DeletionOp::All{};
  auto r2 = apply_deletion(s, all);
  REQUIRE(r2.ok());
  CHECK(r2.value().size() == 3);
  for (const auto& si : s.interactions) CHECK(si.presence().code() == "000");
}

TEST_CASE("closure: op sequences of length <= 3 reach exactly the expected set") {
  const DeletionOp::Kind kinds[] = {DeletionOp::Kind::HistoryDelete,
                                    DeletionOp::Kind::CardRemove,
                                    DeletionOp::Kind::VoiceDelete};
  std::set<std::string> reachable_oracle;
  std::set<std::string> reachable_mock;

  // depth 0
  reachable_oracle.insert("111");
  reachable_mock.insert(state_with_interaction().interactions[0].presence().code());

  for (auto k1 : kinds) {
    PresenceTriple o1 = oracle_apply({true, true, true}, k1);
    reachable_oracle.insert(o1.code());
    for (auto k2 : kinds) {
      PresenceTriple o2 = oracle_apply(o1, k2);
      reachable_oracle.insert(o2.code());
      for (auto k3 : kinds) {
        reachable_oracle.insert(oracle_apply(o2, k3).code());

        MockState s = state_with_interaction();
        REQUIRE(apply_deletion(s, op(k1, "utt-1")).ok());
        REQUIRE(apply_deletion(s, op(k2, "utt-1")).ok());
        REQUIRE(apply_deletion(s, op(k3, "utt-1")).ok());
        reachable_mock.insert(presence_of(s, "utt-1").code());
      }
      MockState s2 = state_with_interaction();
      REQUIRE(apply_deletion(s2, op(k1, "utt-1")).ok());
      REQUIRE(apply_deletion(s2, op(k2, "utt-1")).ok());
      reachable_mock.insert(presence_of(s2, "utt-1").code());
    }
    MockState s1 = state_with_interaction();
    REQUIRE(apply_deletion(s1, op(k1, "utt-1")).ok());
    reachable_mock.insert(presence_of(s1, "utt-1").code());
  }

  const std::set<std::string> expected = {"111", "110", "101", "100", "000"};
  CHECK(reachable_oracle == expected);
  CHECK(reachable_mock == expected);
}

TEST_CASE("deletion monotonicity: nothing is ever restored") {
  auto rng = testsupport::seeded_rng(555);
  const DeletionOp::Kind kinds[] = {DeletionOp::Kind::HistoryDelete,
                                    DeletionOp::Kind::CardRemove,
                                    DeletionOp::Kind::VoiceDelete};
  for (int round = 0; round < 100; ++round) {
    MockState s = state_with_interaction();
    PresenceTriple prev = presence_of(s, "utt-1");
    int steps = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < steps; ++i) {
      REQUIRE(apply_deletion(s, op(kinds[rng() % 3], "utt-1")).ok());
      PresenceTriple cur = presence_of(s, "utt-1");
      CHECK((!cur.activity || prev.activity));
      CHECK((!cur.card || prev.card));
      CHECK((!cur.audio || prev.audio));
      prev = cur;
    }
  }
}

TEST_CASE("isolation: deletions leave every other endpoint byte-identical") {
  for (auto kind : {DeletionOp::Kind::HistoryDelete, DeletionOp::Kind::CardRemove,
                    DeletionOp::Kind::VoiceDelete}) {
    MockState s = state_with_interaction();

    std::map<std::string, std::string> before;
    for (const auto& ep : aft::client::registry()) {
      if (ep.endpoint_id == "activities" || ep.endpoint_id == "cards" ||
          ep.endpoint_id == "utterance-audio")
        continue;
      before[ep.endpoint_id] = body_for_endpoint(s, ep.endpoint_id).dump();
    }
    std::string wifi_before = body_wifi(s, "S-ECHO-1")->dump();

    REQUIRE(apply_deletion(s, op(kind, "utt-1")).ok());

    for (const auto& [eid, body] : before) {
      CHECK_MESSAGE(body_for_endpoint(s, eid).dump() == body,
                    "endpoint changed: ", eid);
    }
    CHECK(body_wifi(s, "S-ECHO-1")->dump() == wifi_before);
  }
}

TEST_CASE("scenario scripts replay the documented experiment") {
  SUBCASE("history delete removes the entry from all three views") {
    MockState s = load_fixture(testsupport::base_fixture()).value();
    auto trace = run_scenario(s, testsupport::weather_scenario("HistoryDelete"));
    REQUIRE_MESSAGE(trace.ok(), (trace.ok() ? "" : trace.error()));
    const json& t = trace.value();
    REQUIRE(t.size() == 4);
    const json& before = t[1]["snapshot"];
    const json& after = t[3]["snapshot"];
    CHECK(before["activities"].size() == 1);
    CHECK(before["cards"].size() == 1);
    CHECK(before["utterance_audio"]["utt-w"] == true);
    CHECK(before["history_view"].size() == 1);
    CHECK(after["activities"].empty());
    CHECK(after["cards"].empty());
    CHECK(after["utterance_audio"]["utt-w"] == false);
    CHECK(after["history_view"].empty());
    // the untouched-endpoints claim, visible in the trace
    CHECK(before["named_lists_digest"] == after["named_lists_digest"]);
  }
  SUBCASE("card removal: absence only in cards") {
    MockState s = load_fixture(testsupport::base_fixture()).value();
    auto trace = run_scenario(s, testsupport::weather_scenario("CardRemove"));
    REQUIRE(trace.ok());
    const json& after = trace.value()[3]["snapshot"];
    CHECK(after["activities"].size() == 1);
    CHECK(after["cards"].empty());
    CHECK(after["utterance_audio"]["utt-w"] == true);
    CHECK(trace.value()[2]["changes"][0]["after"] == "101");
  }
  SUBCASE("voice deletion keeps both metadata views") {
    MockState s = load_fixture(testsupport::base_fixture()).value();
    auto trace = run_scenario(s, testsupport::weather_scenario("VoiceDelete"));
    REQUIRE(trace.ok());
    const json& after = trace.value()[3]["snapshot"];
    CHECK(after["activities"].size() == 1);
    CHECK(after["cards"].size() == 1);
    CHECK(after["utterance_audio"]["utt-w"] == false);
  }
  SUBCASE("empty script gives an empty trace") {
    MockState s = load_fixture(testsupport::base_fixture()).value();
    auto trace = run_scenario(s, json{{"steps", json::array()}});
    REQUIRE(trace.ok());
    CHECK(trace.value().empty());
  }
  SUBCASE("bad steps are rejected") {
    MockState s = load_fixture(testsupport::base_fixture()).value();
    CHECK_FALSE(run_scenario(s, json{{"steps", json::array({json{{"op", "warp"}}})}}).ok());
    CHECK_FALSE(run_scenario(s, json("nope")).ok());
  }
}

TEST_CASE("http server: auth, routes, and audio bytes") {
  MockServer server(state_with_interaction());
  auto port = server.start(0);
  REQUIRE_MESSAGE(port.ok(), (port.ok() ? "" : port.error()));

  httplib::Client cli("127.0.0.1", port.value());

  SUBCASE("missing token is rejected") {
    auto res = cli.Get("/api/bootstrap");
    REQUIRE(res);
    CHECK(res->status == 401);
  }
  SUBCASE("any nonempty bearer token works") {
    httplib::Headers h{{"Authorization", "Bearer whatever"}};
    auto res = cli.Get("/api/bootstrap", h);
    REQUIRE(res);
    CHECK(res->status == 200);
    json body = json::parse(res->body);
    CHECK(body["authentication"]["customerId"] == "C-TEST");

    auto wifi = cli.Get(
        "/api/device-wifi-details?deviceSerialNumber=S-ECHO-1&deviceType=A32DOYMUN6DTXA", h);
    REQUIRE(wifi);
    CHECK(wifi->status == 200);
    CHECK(json::parse(wifi->body)["deviceSerialNumber"] == "S-ECHO-1");

    auto missing_list = cli.Get("/api/namedLists/ghost/items", h);
    REQUIRE(missing_list);
    CHECK(missing_list->status == 404);

    auto audio = cli.Get("/api/utterance/audio/data?id=utt-1", h);
    REQUIRE(audio);
    CHECK(audio->status == 200);
    auto expected = audio_bytes_for("utt-1");
    CHECK(audio->body.size() == expected.size());
    CHECK(std::equal(audio->body.begin(), audio->body.end(), expected.begin(),
                     [](char c, std::uint8_t b) { return static_cast<std::uint8_t>(c) == b; }));

    auto gone_audio = cli.Get("/api/utterance/audio/data?id=utt-unknown", h);
    REQUIRE(gone_audio);
    CHECK(gone_audio->status == 404);

    auto wrong_user = cli.Get("/user/SOMEBODY/contacts", h);
    REQUIRE(wrong_user);
    CHECK(wrong_user->status == 404);
    auto right_user = cli.Get("/user/C-TEST/contacts", h);
    REQUIRE(right_user);
    CHECK(right_user->status == 200);

    // every fixed-path registry endpoint answers something
    for (const auto& ep : aft::client::registry()) {
      if (!ep.placeholders().empty()) continue;
      std::string path = ep.path_template;
      auto q = path.find('?');
      if (q != std::string::npos) path = path.substr(0, q);
      auto r = cli.Get(path, h);
      REQUIRE_MESSAGE(r, ep.endpoint_id);
      CHECK_MESSAGE(r->status == 200, ep.endpoint_id);
    }
  }
  SUBCASE("admin script endpoint applies deletions") {
    json script{{"steps", json::array({json{{"op", "delete"},
                                            {"kind", "VoiceDelete"},
                                            {"target", "utt-1"}}})}};
    auto res = cli.Post("/_mock/script", script.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);
    json body = json::parse(res->body);
    CHECK(body["trace"][0]["changes"][0]["after"] == "110");

    auto state = cli.Get("/_mock/state");
    REQUIRE(state);
    CHECK(json::parse(state->body)["presence"]["utt-1"] == "110");
  }

  server.stop();
  CHECK_FALSE(server.running());
}
