#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "analysis/reports.hpp"
#include "case_builder.hpp"
#include "client/registry.hpp"
#include "fixtures.hpp"
#include "mock/state.hpp"
#include "support.hpp"

using namespace aft::analysis;
using aft::casefile::AudioState;
using aft::casefile::EvidenceCase;
using nlohmann::json;

namespace {

aft::model::Activity make_activity(const std::string& id, std::int64_t ts,
                                   const std::string& device = "S1",
                                   const std::string& transcript = "hello") {
  aft::model::Activity a;
  a.activity_id = id + "-act";
  a.utterance_id = id;
  a.transcript = transcript;
  a.timestamp_ms = ts;
  a.device_serial = device;
  a.device_type = "T1";
  a.customer_id = "C1";
  a.status = aft::model::ActivityStatus::from_literal("SUCCESS");
  return a;
}

aft::model::Card make_card(const std::string& id, std::int64_t ts,
                           const std::optional<std::string>& link = std::nullopt) {
  aft::model::Card c;
  c.card_id = id;
  c.card_type = "TextCard";
  c.title = "card " + id;
  c.timestamp_ms = ts;
  c.linked_activity_id = link;
  return c;
}

EvidenceCase case_from_fixture(const json& fx, const std::string& case_id) {
  auto s = aft::mock::load_fixture(fx);
  REQUIRE_MESSAGE(s.ok(), (s.ok() ? "" : s.error().violated_invariant));
  return testsupport::case_from_state(s.value(), case_id);
}

}  // namespace

TEST_CASE("join: explicit card linkage wins") {
  EvidenceCase c;
  c.activities.push_back(make_activity("u1", 1000));
  c.cards.push_back(make_card("c1", 999999, std::string("u1-act")));  // time is far off
  c.audio_by_utterance["u1"] = AudioState::Present;
  auto joined = join_interactions(c, 5000);
  REQUIRE(joined.size() == 1);
  CHECK(joined[0].interaction_id == "u1");
  REQUIRE(joined[0].card.has_value());
  CHECK(joined[0].card->card_id == "c1");
}

TEST_CASE("join: activity without card stays a single interaction") {
  EvidenceCase c;
  c.activities.push_back(make_activity("u1", 1000));
  c.audio_by_utterance["u1"] = AudioState::Present;
  auto joined = join_interactions(c, 5000);
  REQUIRE(joined.size() == 1);
  CHECK_FALSE(joined[0].card.has_value());
  CHECK(joined[0].timestamp_source == "activity");
}

TEST_CASE("join: orphan card becomes a card-only interaction") {
  EvidenceCase c;
  c.cards.push_back(make_card("c9", 1000));
  auto joined = join_interactions(c, 5000);
  REQUIRE(joined.size() == 1);
  CHECK(joined[0].interaction_id == "card:c9");
  CHECK_FALSE(joined[0].activity.has_value());
  CHECK(joined[0].audio == AudioState::NotChecked);
}

TEST_CASE("join: time-window fallback achieves maximum matching") {
  // ten activities and ten unlinked cards, all shuffled within the window;
  // the oracle is the size bound of a maximum bipartite matching: every
  // card can pair, so all ten must join.
  auto rng = testsupport::seeded_rng(77);
  EvidenceCase c;
  std::vector<std::int64_t> offsets;
  for (int i = 0; i < 10; ++i) {
    std::int64_t base = 100000 + i * 20000;  // clusters are 20s apart
    c.activities.push_back(make_activity("u" + std::to_string(i), base));
    offsets.push_back(base + static_cast<std::int64_t>(rng() % 9000) - 4500);
  }
  std::shuffle(offsets.begin(), offsets.end(), rng);
  for (int i = 0; i < 10; ++i) {
    c.cards.push_back(make_card("c" + std::to_string(i), offsets[i]));
    c.audio_by_utterance["u" + std::to_string(i)] = AudioState::Present;
  }
  auto joined = join_interactions(c, 5000);
  std::size_t with_card = 0;
  for (const auto& it : joined) {
    if (it.activity && it.card) ++with_card;
  }
  CHECK(joined.size() == 10);
  CHECK(with_card == 10);

  // determinism: same case joins identically
  auto joined2 = join_interactions(c, 5000);
  REQUIRE(joined2.size() == joined.size());
  for (std::size_t i = 0; i < joined.size(); ++i) {
    CHECK(joined2[i].interaction_id == joined[i].interaction_id);
    CHECK(joined2[i].card.has_value() == joined[i].card.has_value());
    if (joined[i].card) CHECK(joined2[i].card->card_id == joined[i].card->card_id);
  }
}

TEST_CASE("join: device mismatch blocks the fallback") {
  EvidenceCase c;
  c.activities.push_back(make_activity("u1", 1000, "S1"));
  auto card = make_card("c1", 1500);
  card.extras["deviceSerialNumber"] = "S2";
  c.cards.push_back(card);
  c.audio_by_utterance["u1"] = AudioState::Present;
  auto joined = join_interactions(c, 5000);
  CHECK(joined.size() == 2);  // no pairing across devices
}

TEST_CASE("classification covers all eight presence patterns") {
  auto interaction_with = [&](bool act, bool card, AudioState audio) {
    Interaction it;
    it.interaction_id = "x";
    it.timestamp_ms = 1000;
    if (act) it.activity = make_activity("x", 1000);
    if (card) it.card = make_card("cx", 1000);
    it.audio = audio;
    return it;
  };

  auto expect_state = [&](bool act, bool card, AudioState audio,
                          DeletionVerdict::State want) {
    auto r = classify_deletion(interaction_with(act, card, audio));
    REQUIRE(r.ok());
    CHECK_MESSAGE(r.value().state == want,
                  "triple (", act, ",", card, ",", static_cast<int>(audio), ")");
    CHECK_FALSE(r.value().evidence.empty());
  };

  expect_state(true, true, AudioState::Present, DeletionVerdict::State::Intact);
  expect_state(true, true, AudioState::AbsentConfirmed,
               DeletionVerdict::State::VoiceRecordingDeleted);
  expect_state(true, false, AudioState::Present, DeletionVerdict::State::CardRemoved);
  expect_state(true, false, AudioState::AbsentConfirmed,
               DeletionVerdict::State::CardAndVoiceDeleted);
  // unreachable in the deletion closure
  expect_state(false, true, AudioState::Present, DeletionVerdict::State::Anomalous);
  expect_state(false, true, AudioState::AbsentConfirmed, DeletionVerdict::State::Anomalous);
  expect_state(false, true, AudioState::NotChecked, DeletionVerdict::State::Anomalous);
  expect_state(false, false, AudioState::Present, DeletionVerdict::State::Anomalous);

  // unresolved: the audio question was never asked
  auto unresolved = classify_deletion(interaction_with(true, true, AudioState::NotChecked));
  REQUIRE_FALSE(unresolved.ok());
  CHECK(unresolved.error().interaction_id == "x");
}

TEST_CASE("classifier agrees with the closure oracle on reachability") {
  // reachable triples with an activity map to named states, unreachable ones
  // to Anomalous; (0,0,0) is never an interaction, it is residue territory
  struct Row {
    bool act, card, audio;
    bool reachable;
  };
  const Row rows[] = {
      {true, true, true, true},   {true, true, false, true},
      {true, false, true, true},  {true, false, false, true},
      {false, true, true, false}, {false, true, false, false},
      {false, false, true, false},
  };
  for (const auto& row : rows) {
    Interaction it;
    it.interaction_id = "y";
    if (row.act) it.activity = make_activity("y", 1);
    if (row.card) it.card = make_card("cy", 1);
    it.audio = row.audio ? AudioState::Present : AudioState::AbsentConfirmed;
    auto r = classify_deletion(it);
    REQUIRE(r.ok());
    CHECK((r.value().state == DeletionVerdict::State::Anomalous) == !row.reachable);
  }
}

TEST_CASE("residue: a lone list item infers a history deletion") {
  EvidenceCase c;
  c.activities.push_back(make_activity("u1", 1565103190000));
  c.audio_by_utterance["u1"] = AudioState::Present;
  aft::model::NamedList shopping;
  shopping.list_id = "ls";
  shopping.name = "Shopping";
  shopping.created_at_ms = 1;
  shopping.updated_at_ms = 1565104200000;
  aft::model::ListItem item;
  item.item_id = "i-matches";
  item.text = "matches";
  item.created_at_ms = 1565104200000;  // ~17 min after the only interaction
  item.updated_at_ms = 1565104200000;
  shopping.items.push_back(item);
  c.lists.push_back(shopping);

  auto joined = join_interactions(c, 5000);
  auto residues = infer_history_deletions(c, joined, 5000);
  REQUIRE(residues.size() == 1);
  CHECK(residues[0].state == DeletionVerdict::State::InferredHistoryDeletion);
  CHECK(residues[0].interaction_id == "residue:i-matches");
  bool cites_item = false;
  for (const auto& e : residues[0].evidence) {
    if (e.find("matches") != std::string::npos) cites_item = true;
  }
  CHECK(cites_item);

  // an item created in-window is not residue
  aft::model::ListItem near_item;
  near_item.item_id = "i-near";
  near_item.text = "water plants";
  near_item.created_at_ms = 1565103192000;  // 2s after u1
  near_item.updated_at_ms = 1565103192000;
  c.lists[0].items.push_back(near_item);
  auto residues2 = infer_history_deletions(c, joined, 5000);
  CHECK(residues2.size() == 1);
}

TEST_CASE("timeline sorting matches an independent oracle") {
  auto rng = testsupport::seeded_rng(123);
  std::vector<TimelineEvent> events;
  for (int i = 0; i < 1000; ++i) {
    TimelineEvent e;
    e.at_ms = static_cast<std::int64_t>(rng() % 500);  // force heavy collisions
    e.source = static_cast<TimelineEvent::Source>(rng() % 6);
    e.summary = "ev" + std::to_string(rng() % 50);
    e.refs = {"ref" + std::to_string(rng() % 100)};
    events.push_back(std::move(e));
  }

  // oracle: an independently written comparison over the documented key
  auto oracle_less = [](const TimelineEvent& a, const TimelineEvent& b) {
    auto rank = [](TimelineEvent::Source s) {
      switch (s) {
        case TimelineEvent::Source::Activity: return 0;
        case TimelineEvent::Source::Card: return 1;
        case TimelineEvent::Source::ListItemCreated: return 2;
        case TimelineEvent::Source::ListItemUpdated: return 3;
        case TimelineEvent::Source::Notification: return 4;
        case TimelineEvent::Source::Other: return 5;
      }
      return 5;
    };
    if (a.at_ms != b.at_ms) return a.at_ms < b.at_ms;
    if (rank(a.source) != rank(b.source)) return rank(a.source) < rank(b.source);
    const std::string& fa = a.refs.empty() ? a.summary : a.refs.front();
    const std::string& fb = b.refs.empty() ? b.summary : b.refs.front();
    if (fa != fb) return fa < fb;
    return a.summary < b.summary;
  };
  std::vector<TimelineEvent> oracle_sorted = events;
  std::stable_sort(oracle_sorted.begin(), oracle_sorted.end(), oracle_less);

  auto key = [](const TimelineEvent& e) {
    return std::to_string(e.at_ms) + "|" + std::string(to_string(e.source)) + "|" +
           (e.refs.empty() ? "" : e.refs.front()) + "|" + e.summary;
  };

  for (int run = 0; run < 10; ++run) {
    std::vector<TimelineEvent> shuffled = events;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    sort_events(shuffled);
    REQUIRE(shuffled.size() == oracle_sorted.size());
    for (std::size_t i = 0; i < shuffled.size(); ++i) {
      CHECK(key(shuffled[i]) == key(oracle_sorted[i]));
    }
  }
}

TEST_CASE("timeline over the built-in account tells the afternoon in order") {
  auto c = case_from_fixture(json::parse(aft::mock::default_fixture_json()), "tl");
  auto joined = join_interactions(c, 5000);
  Timeline tl = build_timeline(c, joined);

  // conservation: activities + unjoined cards + item events + notifications
  std::size_t expected = c.activities.size();  // all cards join here
  for (const auto& l : c.lists) {
    for (const auto& li : l.items) {
      expected += 1 + (li.updated_at_ms != li.created_at_ms ? 1 : 0);
    }
  }
  expected += 1;  // one seeded notification
  CHECK(tl.events.size() == expected);
  CHECK(tl.unplaced.empty());

  // the four history entries come out oldest-first, 15:53 to 15:54 local
  std::vector<std::string> activity_summaries;
  for (const auto& e : tl.events) {
    if (e.source == TimelineEvent::Source::Activity) activity_summaries.push_back(e.summary);
  }
  REQUIRE(activity_summaries.size() == 5);
  CHECK(activity_summaries[0] == "alexa");
  CHECK(activity_summaries[1] == "what time is it");
  CHECK(activity_summaries[2] == "alexa what's the weather");
  CHECK(activity_summaries[3] == "alexa how is the traffic to inverness");
  std::vector<std::int64_t> times;
  for (const auto& e : tl.events) times.push_back(e.at_ms);
  CHECK(std::is_sorted(times.begin(), times.end()));
}

TEST_CASE("events with unusable timestamps are kept, unplaced") {
  auto fx = testsupport::base_fixture();
  fx["raw"] = json{{"notifications",
                    json{{"notifications",
                          json::array({json{{"id", "n1"}, {"type", "Timer"}},
                                       json{{"id", "n2"},
                                            {"type", "Reminder"},
                                            {"createdDate", 1565103795000}}})}}}};
  auto c = case_from_fixture(fx, "np");
  Timeline tl = build_timeline(c, join_interactions(c, 5000));
  REQUIRE(tl.unplaced.size() == 1);
  CHECK(tl.unplaced[0].refs[0] == "n1");
  bool placed_n2 = false;
  for (const auto& e : tl.events) {
    if (!e.refs.empty() && e.refs[0] == "n2") placed_n2 = true;
  }
  CHECK(placed_n2);
}

TEST_CASE("location crosscheck cites both sources") {
  auto c = case_from_fixture(json::parse(aft::mock::default_fixture_json()), "cc");
  auto findings = location_crosscheck(c, default_location_patterns());

  bool agreement = false, destination = false;
  for (const auto& f : findings) {
    if (f.kind == "Agreement") {
      agreement = true;
      CHECK(f.place == "edinburgh");
      CHECK(f.device_city == "Edinburgh");
      CHECK_FALSE(f.activity_id.empty());
    }
    if (f.kind == "DestinationMention") {
      destination = true;
      CHECK(f.place == "inverness");
      CHECK(f.note.find("differs") != std::string::npos);
    }
  }
  CHECK(agreement);
  CHECK(destination);
}

TEST_CASE("location crosscheck reports disagreement and no-data") {
  auto fx = testsupport::base_fixture();
  fx["interactions"] = json::array(
      {testsupport::interaction("u1", "what's the weather in glasgow", 1565103900000)});
  auto c = case_from_fixture(fx, "cc2");
  auto findings = location_crosscheck(c, default_location_patterns());
  REQUIRE(findings.size() == 1);
  CHECK(findings[0].kind == "Disagreement");
  CHECK(findings[0].place == "glasgow");

  auto fx2 = testsupport::base_fixture();
  fx2["interactions"] =
      json::array({testsupport::interaction("u1", "set a timer", 1565103900000)});
  auto c2 = case_from_fixture(fx2, "cc3");
  auto findings2 = location_crosscheck(c2, default_location_patterns());
  REQUIRE(findings2.size() == 1);
  CHECK(findings2[0].kind == "NoData");
}

TEST_CASE("pattern tables load from JSON and reject bad regexes") {
  auto ok = patterns_from_json(json::parse(
      R"x({"patterns": [{"regex": "weather in ([a-z]+)", "kind": "home_compare"}]})x"));
  REQUIRE(ok.ok());
  CHECK(ok.value().size() == 1);
  CHECK_FALSE(patterns_from_json(json::parse(R"({"patterns": [{"regex": "("}]})")).ok());
  CHECK_FALSE(patterns_from_json(json("nope")).ok());
  CHECK_FALSE(patterns_from_json(json::parse(
                  R"({"patterns": [{"regex": "x", "kind": "telepathy"}]})"))
                  .ok());
}

TEST_CASE("diff: a case against itself is empty") {
  auto c = case_from_fixture(json::parse(aft::mock::default_fixture_json()), "same");
  auto d = diff_snapshots(c, c);
  CHECK(d.empty());
  CHECK(d.to_json()["entries"].empty());
}

TEST_CASE("diff: device-generation fixtures produce the documented kinds") {
  auto a = case_from_fixture(testsupport::gen2_fixture(), "gen2");
  auto b = case_from_fixture(testsupport::gen3_fixture(), "gen3");
  auto d = diff_snapshots(a, b);
  REQUIRE_FALSE(d.empty());

  std::map<std::string, std::set<std::string>> kinds;
  for (const auto& e : d.entries) {
    kinds[e.endpoint_id].insert(std::string(to_string(e.kind)));
  }

  // software version / device type / serial / account id: field-level changes
  REQUIRE(kinds.count("devices-v2"));
  CHECK(kinds["devices-v2"].count("FieldChanged"));
  bool saw_software = false, saw_devtype = false;
  for (const auto& e : d.entries) {
    if (e.endpoint_id != "devices-v2") continue;
    for (const auto& row : e.details["fields"]) {
      if (row["field"] == "software_version") {
        saw_software = true;
        CHECK(row["a"] == "641574820");
        CHECK(row["b"] == "2584225924");
      }
      if (row["field"] == "device_type") {
        saw_devtype = true;
        CHECK(row["a"] == "A3S5BH2HU6VAYF");
        CHECK(row["b"] == "A32DOYMUN6DTXA");
      }
    }
  }
  CHECK(saw_software);
  CHECK(saw_devtype);

  // locale appears only on the newer device: a preferences field change
  CHECK(kinds.count("device-preferences"));
  // bootstrap identity differs field-by-field
  CHECK(kinds.count("bootstrap"));
  CHECK(kinds["bootstrap"].count("FieldChanged"));
  // the Bedroom group exists only on the older unit
  REQUIRE(kinds.count("phoenix"));
  CHECK(kinds["phoenix"].count("ItemsDiffer"));
  // same music items, different order
  REQUIRE(kinds.count("media-historical-queues"));
  CHECK(kinds["media-historical-queues"] == std::set<std::string>{"OrderOnly"});
  // named lists exist on both sides with different ids
  REQUIRE(kinds.count("namedLists"));
  CHECK(kinds["namedLists"].count("FieldChanged"));
  // different interaction sets
  REQUIRE(kinds.count("activities"));
  CHECK(kinds["activities"].count("ItemsDiffer"));

  // OrderOnly is marked low significance
  for (const auto& e : d.entries) {
    CHECK(e.low_significance() == (e.kind == DiffEntry::Kind::OrderOnly));
  }
}

TEST_CASE("diff: symmetric up to direction labels") {
  auto a = case_from_fixture(testsupport::gen2_fixture(), "gen2");
  auto b = case_from_fixture(testsupport::gen3_fixture(), "gen3");
  auto ab = diff_snapshots(a, b);
  auto ba = diff_snapshots(b, a);
  REQUIRE(ab.entries.size() == ba.entries.size());
  for (std::size_t i = 0; i < ab.entries.size(); ++i) {
    CHECK(ab.entries[i].endpoint_id == ba.entries[i].endpoint_id);
    CHECK(ab.entries[i].kind == ba.entries[i].kind);
    if (ab.entries[i].kind == DiffEntry::Kind::ItemsDiffer) {
      CHECK(ab.entries[i].details["only_in_a"] == ba.entries[i].details["only_in_b"]);
      CHECK(ab.entries[i].details["only_in_b"] == ba.entries[i].details["only_in_a"]);
    }
  }
}

TEST_CASE("diff: endpoint present on one side only") {
  auto fx_a = testsupport::base_fixture();
  fx_a["raw"] = json{{"traffic-settings", json{{"origin", "Home"}}}};
  auto fx_b = testsupport::base_fixture();
  auto a = case_from_fixture(fx_a, "with");
  auto b = case_from_fixture(fx_b, "without");
  auto d = diff_snapshots(a, b);
  bool presence = false;
  for (const auto& e : d.entries) {
    if (e.endpoint_id == "traffic-settings") {
      CHECK(e.kind == DiffEntry::Kind::PresenceDiffer);
      CHECK(e.details["present_in"] == "a");
      presence = true;
    }
  }
  CHECK(presence);
}

TEST_CASE("analyze_case end to end over the built-in account") {
  auto c = case_from_fixture(json::parse(aft::mock::default_fixture_json()), "full");
  AnalyzeOptions opts;
  auto result = analyze_case(c, opts);

  CHECK(result.interactions.size() == 5);
  CHECK(result.unresolved.empty());
  std::map<std::string, int> states;
  for (const auto& v : result.verdicts) ++states[std::string(to_string(v.state))];
  CHECK(states["Intact"] == 5);
  CHECK(states["InferredHistoryDeletion"] == 1);  // the shopping item

  json findings = findings_to_json(c, result, opts);
  CHECK(findings["schema_version"] == 1);
  CHECK(findings["counts"]["interactions"] == 5);
  CHECK_FALSE(findings["verdicts"].empty());

  std::string csv = timeline_to_csv(result.timeline, /*redact=*/true);
  CHECK(csv.rfind("at,source,summary,refs,device_serial\n", 0) == 0);
  CHECK(csv.find("G090*****02GD") != std::string::npos);   // masked serial
  CHECK(csv.find("G090FIXTURE02GD") == std::string::npos); // full serial withheld
  std::string csv_full = timeline_to_csv(result.timeline, /*redact=*/false);
  CHECK(csv_full.find("G090FIXTURE02GD") != std::string::npos);
}

TEST_CASE("verdicts do not depend on record order") {
  auto fx = json::parse(aft::mock::default_fixture_json());
  auto c1 = case_from_fixture(fx, "o1");
  auto c2 = case_from_fixture(fx, "o2");
  std::reverse(c2.records.begin(), c2.records.end());
  c2.assemble();

  AnalyzeOptions opts;
  auto r1 = analyze_case(c1, opts);
  auto r2 = analyze_case(c2, opts);
  REQUIRE(r1.verdicts.size() == r2.verdicts.size());
  for (std::size_t i = 0; i < r1.verdicts.size(); ++i) {
    CHECK(r1.verdicts[i].interaction_id == r2.verdicts[i].interaction_id);
    CHECK(r1.verdicts[i].state == r2.verdicts[i].state);
  }
  REQUIRE(r1.timeline.events.size() == r2.timeline.events.size());
  for (std::size_t i = 0; i < r1.timeline.events.size(); ++i) {
    CHECK(r1.timeline.events[i].summary == r2.timeline.events[i].summary);
  }
}
