#include "analysis/diff.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "client/registry.hpp"

namespace aft::analysis {

namespace {

using json = nlohmann::json;

struct Item {
  std::string key;
  json value;
};

std::string key_field_for(const std::string& endpoint_id) {
  if (endpoint_id == "activities") return "activity_id";
  if (endpoint_id == "cards") return "card_id";
  if (endpoint_id == "household") return "person_id";
  if (endpoint_id == "contacts") return "contact_id";
  if (endpoint_id == "devices-v2" || endpoint_id == "device-preferences")
    return "serial_number";
  if (endpoint_id == "device-wifi-details" || endpoint_id == "bluetooth")
    return "device_serial";
  if (endpoint_id == "namedLists") return "list_id";
  return "";
}

void add_item(std::vector<Item>& items, std::string key, json value) {
  // duplicate keys stay distinct so nothing collapses silently
  std::string unique = key;
  int n = 1;
  auto taken = [&](const std::string& k) {
    return std::any_of(items.begin(), items.end(),
                       [&](const Item& i) { return i.key == k; });
  };
  while (taken(unique)) unique = key + "#" + std::to_string(++n);
  items.push_back({std::move(unique), std::move(value)});
}

std::vector<Item> items_from_raw(const json& body) {
  std::vector<Item> items;
  const json* arr = nullptr;
  if (body.is_array()) {
    arr = &body;
  } else if (body.is_object() && body.size() == 1 && body.begin()->is_array()) {
    arr = &*body.begin();
  }
  if (arr) {
    for (const auto& v : *arr) {
      std::string key;
      if (v.is_object() && v.contains("id") && v.at("id").is_string()) {
        key = v.at("id").get<std::string>();
      } else {
        key = v.dump();
      }
      add_item(items, std::move(key), v);
    }
    return items;
  }
  add_item(items, "", body);
  return items;
}

// One comparable item list per endpoint, from the typed parse when there is
// one, from the raw body otherwise.
std::optional<std::vector<Item>> extract_items(const casefile::EvidenceCase& c,
                                               const std::string& eid) {
  auto pit = c.parsed.find(eid);
  if (pit != c.parsed.end() && !pit->second.empty() && !pit->second.front().is_raw()) {
    std::vector<Item> items;
    for (const auto& art : pit->second) {
      json doc = art.to_json();
      if (eid == "phoenix") {
        if (!doc.contains("artifacts")) continue;
        for (const auto& topo : doc.at("artifacts")) {
          for (const auto& g : topo.value("groups", json::array())) {
            add_item(items, "group:" + g.value("group_name", ""), g);
          }
          for (const auto& a : topo.value("appliances", json::array())) {
            add_item(items, "appliance:" + a.value("appliance_id", ""), a);
          }
        }
        continue;
      }
      if (eid == "namedLists-items") {
        for (const auto& page : doc.value("artifacts", json::array())) {
          for (const auto& li : page.value("items", json::array())) {
            add_item(items, li.value("item_id", ""), li);
          }
        }
        continue;
      }
      std::string key_field = key_field_for(eid);
      for (const auto& a : doc.value("artifacts", json::array())) {
        std::string key = key_field.empty() ? "" : a.value(key_field, "");
        add_item(items, std::move(key), a);
      }
    }
    return items;
  }
  if (const json* body = c.raw_body(eid)) return items_from_raw(*body);
  return std::nullopt;
}

std::set<std::string> endpoints_with_content(const casefile::EvidenceCase& c) {
  std::set<std::string> out;
  for (const auto& rec : c.records) {
    if (rec.status < 200 || rec.status >= 300 || !rec.body_is_json) continue;
    auto m = client::match_url(rec.url);
    if (m) out.insert(m->endpoint_id);
  }
  return out;
}

json diff_fields(const std::string& item_key, const json& a, const json& b) {
  json rows = json::array();
  if (!a.is_object() || !b.is_object()) {
    if (a != b) {
      rows.push_back(json{{"item", item_key}, {"field", "(value)"}, {"a", a}, {"b", b}});
    }
    return rows;
  }
  std::set<std::string> keys;
  for (auto it = a.begin(); it != a.end(); ++it) keys.insert(it.key());
  for (auto it = b.begin(); it != b.end(); ++it) keys.insert(it.key());
  for (const auto& k : keys) {
    const json va = a.contains(k) ? a.at(k) : json();
    const json vb = b.contains(k) ? b.at(k) : json();
    if (va != vb) {
      rows.push_back(json{{"item", item_key}, {"field", k}, {"a", va}, {"b", vb}});
    }
  }
  return rows;
}

void diff_endpoint(const std::string& eid, const std::vector<Item>& a,
                   const std::vector<Item>& b, std::vector<DiffEntry>& entries) {
  std::vector<std::string> dumps_a, dumps_b;
  for (const auto& i : a) dumps_a.push_back(i.value.dump());
  for (const auto& i : b) dumps_b.push_back(i.value.dump());
  std::vector<std::string> sorted_a = dumps_a, sorted_b = dumps_b;
  std::sort(sorted_a.begin(), sorted_a.end());
  std::sort(sorted_b.begin(), sorted_b.end());

  if (sorted_a == sorted_b) {
    if (dumps_a != dumps_b) {
      DiffEntry e;
      e.endpoint_id = eid;
      e.kind = DiffEntry::Kind::OrderOnly;
      e.details = json{{"note", "same items, different order"},
                       {"count", a.size()}};
      entries.push_back(std::move(e));
    }
    return;
  }

  std::map<std::string, const json*> map_a, map_b;
  for (const auto& i : a) map_a.emplace(i.key, &i.value);
  for (const auto& i : b) map_b.emplace(i.key, &i.value);

  json field_rows = json::array();
  std::vector<std::string> only_a, only_b;
  std::size_t common = 0;
  for (const auto& [k, va] : map_a) {
    auto it = map_b.find(k);
    if (it == map_b.end()) {
      only_a.push_back(k);
      continue;
    }
    ++common;
    for (auto& row : diff_fields(k, *va, *it->second)) field_rows.push_back(row);
  }
  for (const auto& [k, vb] : map_b) {
    if (!map_a.count(k)) only_b.push_back(k);
  }

  if (common == 0 && !a.empty() && a.size() == b.size()) {
    // disjoint identifiers with matching shape: line the items up and show
    // the field-level deltas (the device-generation comparison pattern)
    json rows = json::array();
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (auto& row : diff_fields("[" + std::to_string(i) + "]", a[i].value, b[i].value))
        rows.push_back(row);
    }
    DiffEntry e;
    e.endpoint_id = eid;
    e.kind = DiffEntry::Kind::FieldChanged;
    e.details = json{{"fields", std::move(rows)}};
    entries.push_back(std::move(e));
    return;
  }

  if (!field_rows.empty()) {
    DiffEntry e;
    e.endpoint_id = eid;
    e.kind = DiffEntry::Kind::FieldChanged;
    e.details = json{{"fields", std::move(field_rows)}};
    entries.push_back(std::move(e));
  }
  if (!only_a.empty() || !only_b.empty()) {
    DiffEntry e;
    e.endpoint_id = eid;
    e.kind = DiffEntry::Kind::ItemsDiffer;
    e.details = json{{"only_in_a", only_a}, {"only_in_b", only_b}};
    entries.push_back(std::move(e));
  }
}

}  // namespace

std::string_view to_string(DiffEntry::Kind k) {
  switch (k) {
    case DiffEntry::Kind::FieldChanged: return "FieldChanged";
    case DiffEntry::Kind::ItemsDiffer: return "ItemsDiffer";
    case DiffEntry::Kind::OrderOnly: return "OrderOnly";
    case DiffEntry::Kind::PresenceDiffer: return "PresenceDiffer";
  }
  return "FieldChanged";
}

json SnapshotDiff::to_json() const {
  json j;
  j["schema_version"] = 1;
  j["case_a"] = case_a;
  j["case_b"] = case_b;
  json arr = json::array();
  for (const auto& e : entries) {
    arr.push_back(json{{"endpoint_id", e.endpoint_id},
                       {"kind", std::string(to_string(e.kind))},
                       {"low_significance", e.low_significance()},
                       {"details", e.details}});
  }
  j["entries"] = std::move(arr);
  return j;
}

SnapshotDiff diff_snapshots(const casefile::EvidenceCase& a,
                            const casefile::EvidenceCase& b) {
  SnapshotDiff out;
  out.case_a = a.case_id;
  out.case_b = b.case_id;

  std::set<std::string> eids = endpoints_with_content(a);
  for (const auto& e : endpoints_with_content(b)) eids.insert(e);

  for (const auto& eid : eids) {
    auto items_a = extract_items(a, eid);
    auto items_b = extract_items(b, eid);
    if (!items_a && !items_b) continue;
    if (!items_a || !items_b) {
      DiffEntry e;
      e.endpoint_id = eid;
      e.kind = DiffEntry::Kind::PresenceDiffer;
      e.details = json{{"present_in", items_a ? "a" : "b"}};
      out.entries.push_back(std::move(e));
      continue;
    }
    diff_endpoint(eid, *items_a, *items_b, out.entries);
  }

  std::sort(out.entries.begin(), out.entries.end(),
            [](const DiffEntry& x, const DiffEntry& y) {
              return std::tie(x.endpoint_id, x.kind) < std::tie(y.endpoint_id, y.kind);
            });
  return out;
}

}  // namespace aft::analysis
