#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "model/artifacts.hpp"
#include "util/result.hpp"

namespace aft::model {

// Registry endpoints the model has no typed schema for pass through with
// their body untouched.
struct RawPassthrough {
  std::string endpoint_id;
  json body;
};

// A required field was absent or mistyped. The input is preserved alongside
// the error so nothing needs re-fetching for manual triage.
struct SchemaMismatch {
  std::string endpoint_id;
  std::string path;
  std::string expected;
  std::string found;
  json input;

  std::string describe() const;
};

// Invariant breaches are recorded, never fatal: an artifact that violates a
// model invariant is still evidence.
struct InvariantViolation {
  std::string path;
  std::string detail;
};

struct TimeNote {
  std::string path;
  TimeInterpretation interpretation;
};

using ArtifactValue =
    std::variant<std::monostate, std::vector<Activity>, std::vector<Card>,
                 std::vector<HouseholdMember>, std::vector<Contact>,
                 std::vector<DeviceProfile>, std::vector<BluetoothState>,
                 std::vector<NamedList>, ListItemsPage, WifiDetail,
                 SmartHomeTopology, AccountIdentity, RawPassthrough>;

struct ParsedArtifact {
  std::string endpoint_id;
  ArtifactValue value;
  json body_extras = json::object();  // top-level fields next to the payload
  std::vector<InvariantViolation> violations;
  std::vector<TimeNote> time_notes;

  bool is_raw() const { return std::holds_alternative<RawPassthrough>(value); }

  // Typed projection (normalized view) for parsed/<endpoint_id>.json.
  json to_json() const;

  // Exact reassembly of the body this was parsed from. parse followed by
  // reconstruct is lossless modulo JSON key order.
  json reconstruct_source() const;
};

using ParseResult = util::Result<ParsedArtifact, SchemaMismatch>;

// Total over all JSON bodies: yields a typed artifact for the analyzed
// endpoints, RawPassthrough for every other registry endpoint, or
// SchemaMismatch. Never throws, never drops fields.
ParseResult parse_artifact(std::string_view endpoint_id, const json& body,
                           const std::optional<std::string>& tz_hint = std::nullopt);

// True for the endpoint ids parse_artifact has a typed schema for.
bool has_typed_parser(std::string_view endpoint_id);

}  // namespace aft::model
