#include "analysis/crosscheck.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

namespace aft::analysis {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string trim_place(std::string s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '?' || s.back() == '.' ||
                        s.back() == '!' || s.back() == ','))
    s.pop_back();
  while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  return s;
}

}  // namespace

std::vector<LocationPattern> default_location_patterns() {
  return {
      {R"(weather (?:in|for) ([a-z][a-z '\-]*))", "home_compare"},
      {R"(temperature (?:in|for) ([a-z][a-z '\-]*))", "home_compare"},
      {R"(traffic (?:to|towards|in) ([a-z][a-z '\-]*))", "destination"},
      {R"(directions to ([a-z][a-z '\-]*))", "destination"},
  };
}

util::Result<std::vector<LocationPattern>, std::string> patterns_from_json(
    const nlohmann::json& j) {
  const nlohmann::json* arr = nullptr;
  if (j.is_array()) {
    arr = &j;
  } else if (j.is_object() && j.contains("patterns") && j.at("patterns").is_array()) {
    arr = &j.at("patterns");
  } else {
    return std::string("pattern table must be an array or {\"patterns\": [...]}");
  }
  std::vector<LocationPattern> out;
  for (const auto& p : *arr) {
    if (!p.is_object() || !p.contains("regex") || !p.at("regex").is_string())
      return std::string("each pattern needs a string 'regex'");
    LocationPattern lp;
    lp.regex = p.at("regex").get<std::string>();
    lp.kind = p.value("kind", "home_compare");
    if (lp.kind != "home_compare" && lp.kind != "destination")
      return std::string("pattern kind must be home_compare or destination");
    try {
      std::regex probe(lp.regex, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
      return std::string("bad regex '" + lp.regex + "': " + e.what());
    }
    out.push_back(std::move(lp));
  }
  return out;
}

nlohmann::json CrosscheckFinding::to_json() const {
  nlohmann::json j;
  j["kind"] = kind;
  if (!place.empty()) j["place"] = place;
  if (!transcript.empty()) j["transcript"] = transcript;
  if (!activity_id.empty()) j["activity_id"] = activity_id;
  if (!device_serial.empty()) j["device_serial"] = device_serial;
  if (!device_city.empty()) j["device_city"] = device_city;
  if (!note.empty()) j["note"] = note;
  return j;
}

std::vector<CrosscheckFinding> location_crosscheck(
    const casefile::EvidenceCase& c, const std::vector<LocationPattern>& patterns) {
  std::vector<CrosscheckFinding> out;

  auto city_for_device = [&](const std::string& serial) -> std::string {
    // the activity's device first, any device with an address as fallback
    for (const auto& d : c.devices) {
      if (d.serial_number == serial && d.postal_address && d.postal_address->city)
        return *d.postal_address->city;
    }
    for (const auto& d : c.devices) {
      if (d.postal_address && d.postal_address->city) return *d.postal_address->city;
    }
    return "";
  };

  std::vector<std::pair<std::regex, const LocationPattern*>> compiled;
  for (const auto& p : patterns) {
    compiled.emplace_back(std::regex(p.regex, std::regex::ECMAScript), &p);
  }

  bool any_mention = false;
  for (const auto& a : c.activities) {
    std::string text = lower(a.transcript);
    for (const auto& [re, pattern] : compiled) {
      std::smatch m;
      if (!std::regex_search(text, m, re) || m.size() < 2) continue;
      any_mention = true;

      CrosscheckFinding f;
      f.place = trim_place(m[1].str());
      f.transcript = a.transcript;
      f.activity_id = a.activity_id;
      f.device_serial = a.device_serial;
      f.device_city = city_for_device(a.device_serial);

      if (pattern->kind == "destination") {
        f.kind = "DestinationMention";
        if (f.device_city.empty()) {
          f.note = "no device address to compare against";
        } else if (lower(f.device_city) == f.place) {
          f.note = "destination matches the device address city";
        } else {
          f.note = "destination differs from the device address city";
        }
      } else if (f.device_city.empty()) {
        f.kind = "NoData";
        f.note = "transcript names a place but no device address is on file";
      } else if (lower(f.device_city) == f.place) {
        f.kind = "Agreement";
        f.note = "transcript place matches device-preferences address";
      } else {
        f.kind = "Disagreement";
        f.note = "transcript place differs from device-preferences address";
      }
      out.push_back(std::move(f));
      break;  // first matching pattern wins per activity
    }
  }

  if (!any_mention) {
    CrosscheckFinding f;
    f.kind = "NoData";
    f.note = "no transcript matched a location pattern";
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace aft::analysis
