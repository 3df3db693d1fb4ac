#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "util/result.hpp"

namespace aft::util {

// IANA time zone backed by the system TZif database (/usr/share/zoneinfo).
// Reads the 64-bit transition table (TZif v2/v3) and the POSIX-TZ footer
// rule for instants beyond the table. libstdc++ 11 ships no std::chrono
// tzdb, and mutating the TZ environment variable is not thread-safe, so we
// read the files ourselves.
class TimeZone {
public:
  // Loads and caches a zone by name, e.g. "Europe/London".
  static Result<const TimeZone*, std::string> load(const std::string& iana_name);

  const std::string& name() const { return name_; }

  // UTC offset in seconds in effect at the given UTC instant.
  std::int64_t offset_at_utc(std::int64_t utc_seconds) const;

  // Wall-clock seconds (a civil datetime read as if it were UTC) -> UTC.
  // Ambiguous local times (DST fall-back) resolve to the earliest instant;
  // skipped local times (DST spring-forward gap) are interpreted with the
  // offset in effect immediately before the gap, which shifts them past it.
  std::int64_t local_to_utc(std::int64_t local_seconds) const;

private:
  struct TypeInfo {
    std::int64_t utoff_seconds;
    bool is_dst;
  };
  struct PosixRule {
    bool valid = false;
    std::int64_t std_offset = 0;  // seconds east of UTC
    bool has_dst = false;
    std::int64_t dst_offset = 0;
    // transition day spec: 'M' month/week/day, 'J' julian no-leap, 'n' zero-based
    struct Day {
      char form = 'M';
      int a = 0, b = 0, c = 0;  // M: month.week.weekday ; J/n: a = day
      std::int64_t seconds = 2 * 3600;
    };
    Day dst_start, dst_end;
  };

  static Result<TimeZone, std::string> parse(const std::string& nm,
                                             const std::vector<std::uint8_t>& data);
  static bool parse_posix_rule(const std::string& text, PosixRule& out);
  std::int64_t rule_transition_utc(const PosixRule::Day& d, std::int64_t year,
                                   std::int64_t wall_offset) const;
  std::int64_t footer_offset_at(std::int64_t utc_seconds) const;

  std::string name_;
  std::vector<std::int64_t> transitions_;  // UTC seconds, ascending
  std::vector<std::uint8_t> type_index_;   // per transition
  std::vector<TypeInfo> types_;
  PosixRule footer_;
};

bool zone_exists(const std::string& iana_name);

}  // namespace aft::util
