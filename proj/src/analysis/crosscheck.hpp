#pragma once

#include <string>
#include <vector>

#include "casefile/casefile.hpp"

namespace aft::analysis {

// Keyword-pattern table for pulling place mentions out of transcripts.
// Deliberately not NLP: a regex with one capture group per pattern, applied
// to the lowercased transcript.
struct LocationPattern {
  std::string regex;
  // "home_compare": extracted place is compared against the device address;
  // "destination": recorded as a travel mention, informational only.
  std::string kind;
};

std::vector<LocationPattern> default_location_patterns();
util::Result<std::vector<LocationPattern>, std::string> patterns_from_json(
    const nlohmann::json& j);

struct CrosscheckFinding {
  std::string kind;  // Agreement | Disagreement | DestinationMention | NoData
  std::string place;
  std::string transcript;
  std::string activity_id;
  std::string device_serial;
  std::string device_city;
  std::string note;

  nlohmann::json to_json() const;
};

// Compares transcript place mentions against device-preferences addresses.
// Emits findings citing both sources; never asserts ground truth.
std::vector<CrosscheckFinding> location_crosscheck(
    const casefile::EvidenceCase& c, const std::vector<LocationPattern>& patterns);

}  // namespace aft::analysis
