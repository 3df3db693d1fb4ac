#include "client/acquire.hpp"

#include <future>
#include <set>
#include <thread>

namespace aft::client {

namespace {

constexpr const char* kDiscoveryOrder[] = {"bootstrap", "devices-v2", "namedLists",
                                           "activities"};

bool is_discovery(std::string_view eid) {
  for (const char* d : kDiscoveryOrder) {
    if (eid == d) return true;
  }
  return false;
}

// Runs fn(i) for each index with bounded concurrency, preserving slot order.
template <typename Fn>
void run_waves(std::size_t count, int parallelism, int delay_ms, Fn&& fn) {
  if (parallelism <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      fn(i);
      if (delay_ms > 0 && i + 1 < count)
        std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
    }
    return;
  }
  std::size_t next = 0;
  while (next < count) {
    std::size_t wave_end = std::min(count, next + static_cast<std::size_t>(parallelism));
    std::vector<std::future<void>> futures;
    futures.reserve(wave_end - next);
    for (std::size_t i = next; i < wave_end; ++i) {
      futures.push_back(std::async(std::launch::async, [&fn, i] { fn(i); }));
    }
    for (auto& f : futures) f.get();
    next = wave_end;
    if (delay_ms > 0 && next < count)
      std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
  }
}

void note_pagination(const ingest::ApiRecord& rec, const std::string& eid,
                     std::vector<std::string>& warnings) {
  if (!rec.body_is_json || !rec.body_json.is_object()) return;
  for (const char* key : {"nextToken", "continuationToken", "paginationToken"}) {
    if (rec.body_json.contains(key) && !rec.body_json.at(key).is_null()) {
      warnings.push_back("pagination token seen in " + eid + " response (not followed)");
      return;
    }
  }
}

}  // namespace

util::Result<AcquireOutcome, TransportError> acquire_case(
    const Session& session, const std::map<std::string, std::string>& extra_bindings) {
  AcquireOutcome out;
  std::map<std::string, std::vector<FetchOutcome>> outcomes;
  std::map<std::string, std::vector<AudioFetch>> audio_outcomes;

  // Discovery pass: learn user id, device serials, list ids, utterance ids.
  std::size_t discovery_transport_failures = 0;
  for (const char* eid : kDiscoveryOrder) {
    auto r = fetch(session, eid, extra_bindings);
    if (!r.ok()) {
      if (r.error().kind == FetchError::Kind::Transport) {
        ++discovery_transport_failures;
        out.warnings.push_back("transport error on " + std::string(eid) + ": " +
                               r.error().detail);
      }
      continue;
    }
    ++out.fetches;
    outcomes[eid].push_back(std::move(r.value()));
  }
  if (discovery_transport_failures == std::size(kDiscoveryOrder)) {
    return TransportError{"no endpoint reachable at " + session.base_url};
  }

  std::string user_id;
  if (auto it = extra_bindings.find("user_id"); it != extra_bindings.end()) {
    user_id = it->second;
  } else if (session.user_id) {
    user_id = *session.user_id;
  } else if (auto it2 = outcomes.find("bootstrap"); it2 != outcomes.end()) {
    const auto& o = it2->second.front();
    if (o.artifact) {
      if (const auto* ident = std::get_if<model::AccountIdentity>(&o.artifact->value)) {
        user_id = ident->customer_id;
      }
    }
  }

  std::vector<std::pair<std::string, std::string>> devices;  // serial, type
  if (auto it = outcomes.find("devices-v2"); it != outcomes.end() && it->second.front().artifact) {
    if (const auto* devs = std::get_if<std::vector<model::DeviceProfile>>(
            &it->second.front().artifact->value)) {
      for (const auto& d : *devs) devices.emplace_back(d.serial_number, d.device_type);
    }
  }

  std::vector<std::string> list_ids;
  if (auto it = outcomes.find("namedLists"); it != outcomes.end() && it->second.front().artifact) {
    if (const auto* ls = std::get_if<std::vector<model::NamedList>>(
            &it->second.front().artifact->value)) {
      for (const auto& l : *ls) list_ids.push_back(l.list_id);
    }
  }

  std::vector<std::string> utterance_ids;
  {
    std::set<std::string> seen;
    if (auto it = outcomes.find("activities");
        it != outcomes.end() && it->second.front().artifact) {
      if (const auto* acts = std::get_if<std::vector<model::Activity>>(
              &it->second.front().artifact->value)) {
        for (const auto& a : *acts) {
          if (!a.utterance_id.empty() && seen.insert(a.utterance_id).second)
            utterance_ids.push_back(a.utterance_id);
        }
      }
    }
  }

  // Full sweep in registry order; discovery endpoints keep their one fetch.
  for (const auto& ep : registry()) {
    const std::string& eid = ep.endpoint_id;
    if (is_discovery(eid)) continue;

    if (eid == "device-wifi-details") {
      auto& slot = outcomes[eid];
      slot.resize(devices.size());
      std::vector<std::optional<FetchError>> errors(devices.size());
      run_waves(devices.size(), session.parallelism, session.delay_ms, [&](std::size_t i) {
        auto r = fetch(session, eid,
                       {{"device_serial", devices[i].first},
                        {"device_type", devices[i].second}});
        if (r.ok()) {
          slot[i] = std::move(r.value());
        } else {
          errors[i] = std::move(r.error());
        }
      });
      std::vector<FetchOutcome> kept;
      for (std::size_t i = 0; i < devices.size(); ++i) {
        if (errors[i]) {
          out.warnings.push_back("transport error on " + eid + " for " + devices[i].first +
                                 ": " + errors[i]->detail);
        } else {
          ++out.fetches;
          kept.push_back(std::move(slot[i]));
        }
      }
      slot = std::move(kept);
      continue;
    }

    if (eid == "namedLists-items") {
      auto& slot = outcomes[eid];
      slot.resize(list_ids.size());
      std::vector<std::optional<FetchError>> errors(list_ids.size());
      run_waves(list_ids.size(), session.parallelism, session.delay_ms, [&](std::size_t i) {
        auto r = fetch(session, eid, {{"list_id", list_ids[i]}});
        if (r.ok()) {
          slot[i] = std::move(r.value());
        } else {
          errors[i] = std::move(r.error());
        }
      });
      std::vector<FetchOutcome> kept;
      for (std::size_t i = 0; i < list_ids.size(); ++i) {
        if (errors[i]) {
          out.warnings.push_back("transport error on " + eid + " for " + list_ids[i] + ": " +
                                 errors[i]->detail);
        } else {
          ++out.fetches;
          kept.push_back(std::move(slot[i]));
        }
      }
      slot = std::move(kept);
      continue;
    }

    if (eid == "utterance-audio") {
      auto& slot = audio_outcomes[eid];
      slot.resize(utterance_ids.size());
      std::vector<std::optional<FetchError>> errors(utterance_ids.size());
      run_waves(utterance_ids.size(), session.parallelism, session.delay_ms,
                [&](std::size_t i) {
                  auto r = fetch_audio(session, utterance_ids[i]);
                  if (r.ok()) {
                    slot[i] = std::move(r.value());
                  } else {
                    errors[i] = std::move(r.error());
                  }
                });
      std::vector<AudioFetch> kept;
      for (std::size_t i = 0; i < utterance_ids.size(); ++i) {
        if (errors[i]) {
          out.warnings.push_back("transport error on " + eid + " for " + utterance_ids[i] +
                                 ": " + errors[i]->detail);
        } else {
          ++out.fetches;
          kept.push_back(std::move(slot[i]));
        }
      }
      slot = std::move(kept);
      continue;
    }

    if (eid == "contacts") {
      if (user_id.empty()) {
        out.warnings.push_back("skipped contacts: no user id discovered");
        continue;
      }
      auto r = fetch(session, eid, {{"user_id", user_id}});
      if (!r.ok()) {
        out.warnings.push_back("transport error on contacts: " + r.error().detail);
        continue;
      }
      ++out.fetches;
      outcomes[eid].push_back(std::move(r.value()));
      continue;
    }

    // endpoints with placeholders we cannot bind are skipped, not guessed
    auto placeholders = ep.placeholders();
    if (!placeholders.empty()) {
      std::map<std::string, std::string> bindings = extra_bindings;
      bool bindable = true;
      std::string missing;
      for (const auto& ph : placeholders) {
        if (!bindings.count(ph)) {
          bindable = false;
          missing = ph;
          break;
        }
      }
      if (!bindable) {
        out.warnings.push_back("skipped " + eid + ": unbound placeholder {" + missing + "}");
        continue;
      }
      auto r = fetch(session, eid, bindings);
      if (!r.ok()) {
        out.warnings.push_back("transport error on " + eid + ": " + r.error().detail);
        continue;
      }
      ++out.fetches;
      outcomes[eid].push_back(std::move(r.value()));
      continue;
    }

    auto r = fetch(session, eid, extra_bindings);
    if (!r.ok()) {
      out.warnings.push_back("transport error on " + eid + ": " + r.error().detail);
      continue;
    }
    ++out.fetches;
    outcomes[eid].push_back(std::move(r.value()));
    if (session.delay_ms > 0)
      std::this_thread::sleep_for(std::chrono::milliseconds(session.delay_ms));
  }

  // Assemble the case: records in registry order, raw before parsed.
  for (const auto& ep : registry()) {
    const std::string& eid = ep.endpoint_id;
    if (auto it = outcomes.find(eid); it != outcomes.end()) {
      for (auto& o : it->second) {
        if (o.http_failure) ++out.http_failures;
        if (o.schema_error) {
          ++out.schema_errors;
          out.warnings.push_back("schema mismatch: " + o.schema_error->describe());
        }
        note_pagination(o.record, eid, out.warnings);
        out.evidence.records.push_back(std::move(o.record));
      }
    }
    if (auto it = audio_outcomes.find(eid); it != audio_outcomes.end()) {
      for (auto& a : it->second) {
        if (a.http_failure) ++out.http_failures;
        if (a.audio) {
          out.evidence.audio_blobs[a.audio->content_digest] = a.audio->audio_bytes;
        }
        out.evidence.records.push_back(std::move(a.record));
      }
    }
  }

  if (out.evidence.records.empty()) {
    return TransportError{"acquisition captured no records from " + session.base_url};
  }

  out.evidence.assemble();
  return out;
}

}  // namespace aft::client
