#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "util/result.hpp"

namespace aft::model {

using json = nlohmann::json;

enum class TimeInterpretation {
  EpochMillis,
  EpochSeconds,
  IsoWithOffset,
  IsoAssumedZone,  // zone-less ISO, tz hint applied
  IsoAssumedUtc,   // zone-less ISO, no hint, read as UTC
};

std::string_view to_string(TimeInterpretation i);

struct NormalizedTime {
  std::int64_t epoch_ms = 0;
  TimeInterpretation interpretation = TimeInterpretation::EpochMillis;
  std::string zone;  // zone name when IsoAssumedZone
};

struct UnparseableTimestamp {
  std::string raw;
};

using TimeResult = util::Result<NormalizedTime, UnparseableTimestamp>;

// Accepts epoch milliseconds, epoch seconds, or ISO-8601 with or without a
// UTC offset. Numeric values below 10^11 are read as seconds. Zone-less ISO
// strings use tz_hint when given, UTC otherwise.
TimeResult normalize_timestamp(const json& raw,
                               const std::optional<std::string>& tz_hint = std::nullopt);
TimeResult normalize_timestamp(std::string_view raw,
                               const std::optional<std::string>& tz_hint = std::nullopt);

// Canonical rendering: "2019-08-06T14:54:00.000Z".
std::string to_iso8601_utc(std::int64_t epoch_ms);

}  // namespace aft::model
