#include "analysis/timeline.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "model/time.hpp"

namespace aft::analysis {

std::string_view to_string(TimelineEvent::Source s) {
  switch (s) {
    case TimelineEvent::Source::Activity: return "Activity";
    case TimelineEvent::Source::Card: return "Card";
    case TimelineEvent::Source::ListItemCreated: return "ListItemCreated";
    case TimelineEvent::Source::ListItemUpdated: return "ListItemUpdated";
    case TimelineEvent::Source::Notification: return "Notification";
    case TimelineEvent::Source::Other: return "Other";
  }
  return "Other";
}

int source_rank(TimelineEvent::Source s) {
  switch (s) {
    case TimelineEvent::Source::Activity: return 0;
    case TimelineEvent::Source::Card: return 1;
    case TimelineEvent::Source::ListItemCreated: return 2;
    case TimelineEvent::Source::ListItemUpdated: return 3;
    case TimelineEvent::Source::Notification: return 4;
    case TimelineEvent::Source::Other: return 5;
  }
  return 5;
}

void sort_events(std::vector<TimelineEvent>& events) {
  std::sort(events.begin(), events.end(),
            [](const TimelineEvent& a, const TimelineEvent& b) {
              int ra = source_rank(a.source);
              int rb = source_rank(b.source);
              const std::string& fa = a.refs.empty() ? a.summary : a.refs.front();
              const std::string& fb = b.refs.empty() ? b.summary : b.refs.front();
              return std::tie(a.at_ms, ra, fa, a.summary) <
                     std::tie(b.at_ms, rb, fb, b.summary);
            });
}

namespace {

std::optional<std::int64_t> first_time_field(const nlohmann::json& obj) {
  for (const char* key : {"createdDate", "creationTimestamp", "timestamp", "alarmTime",
                          "triggerTime", "time"}) {
    if (!obj.contains(key)) continue;
    auto t = model::normalize_timestamp(obj.at(key), std::nullopt);
    if (t.ok()) return t.value().epoch_ms;
  }
  return std::nullopt;
}

std::string notification_summary(const nlohmann::json& obj) {
  std::string type = obj.value("type", "Notification");
  for (const char* key : {"reminderLabel", "label", "summary", "title"}) {
    if (obj.contains(key) && obj.at(key).is_string())
      return type + ": " + obj.at(key).get<std::string>();
  }
  return type;
}

}  // namespace

Timeline build_timeline(const casefile::EvidenceCase& c,
                        const std::vector<Interaction>& interactions) {
  Timeline tl;
  std::set<std::string> joined_card_ids;
  for (const auto& it : interactions) {
    if (it.activity && it.card) joined_card_ids.insert(it.card->card_id);
  }

  for (const auto& a : c.activities) {
    TimelineEvent e;
    e.at_ms = a.timestamp_ms;
    e.source = TimelineEvent::Source::Activity;
    e.summary = a.transcript;
    e.refs = {a.activity_id, a.utterance_id};
    e.device_serial = a.device_serial;
    tl.events.push_back(std::move(e));
  }

  for (const auto& card : c.cards) {
    if (joined_card_ids.count(card.card_id)) continue;
    TimelineEvent e;
    e.at_ms = card.timestamp_ms;
    e.source = TimelineEvent::Source::Card;
    e.summary = card.title;
    e.refs = {card.card_id};
    tl.events.push_back(std::move(e));
  }

  for (const auto& list : c.lists) {
    for (const auto& item : list.items) {
      TimelineEvent created;
      created.at_ms = item.created_at_ms;
      created.source = TimelineEvent::Source::ListItemCreated;
      created.summary = "list \"" + list.name + "\": added \"" + item.text + "\"";
      created.refs = {item.item_id, list.list_id};
      tl.events.push_back(std::move(created));

      if (item.updated_at_ms != item.created_at_ms) {
        TimelineEvent updated;
        updated.at_ms = item.updated_at_ms;
        updated.source = TimelineEvent::Source::ListItemUpdated;
        updated.summary = "list \"" + list.name + "\": updated \"" + item.text + "\"";
        updated.refs = {item.item_id, list.list_id};
        tl.events.push_back(std::move(updated));
      }
    }
  }

  // Notifications have no typed schema; this is a best-effort scan over the
  // well-known field names, and entries without a usable time go to the
  // unplaced section rather than disappearing.
  if (const nlohmann::json* body = c.raw_body("notifications")) {
    if (body->is_object() && body->contains("notifications") &&
        body->at("notifications").is_array()) {
      for (const auto& n : body->at("notifications")) {
        if (!n.is_object()) continue;
        TimelineEvent e;
        e.source = TimelineEvent::Source::Notification;
        e.summary = notification_summary(n);
        if (n.contains("id") && n.at("id").is_string())
          e.refs = {n.at("id").get<std::string>()};
        if (n.contains("deviceSerialNumber") && n.at("deviceSerialNumber").is_string())
          e.device_serial = n.at("deviceSerialNumber").get<std::string>();
        auto t = first_time_field(n);
        if (t) {
          e.at_ms = *t;
          tl.events.push_back(std::move(e));
        } else {
          tl.unplaced.push_back(std::move(e));
        }
      }
    }
  }

  sort_events(tl.events);
  return tl;
}

}  // namespace aft::analysis
