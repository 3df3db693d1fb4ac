#include "model/time.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "util/civil.hpp"
#include "util/tzdb.hpp"

namespace aft::model {

namespace {

constexpr std::int64_t kSecondsCutoff = 100000000000LL;  // 10^11

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

NormalizedTime from_epoch_number(std::int64_t v) {
  NormalizedTime out;
  if (v < kSecondsCutoff && v > -kSecondsCutoff) {
    out.epoch_ms = v * 1000;
    out.interpretation = TimeInterpretation::EpochSeconds;
  } else {
    out.epoch_ms = v;
    out.interpretation = TimeInterpretation::EpochMillis;
  }
  return out;
}

struct IsoParts {
  std::int64_t year;
  unsigned month, day, hour, minute, second;
  int millis;
  bool has_offset;
  std::int64_t offset_seconds;
};

// Parses YYYY-MM-DD['T'|' ']hh:mm[:ss[.fff]][Z|±hh[:]mm|±hh]. Strict about
// field widths, lenient about the date/time separator.
bool parse_iso(std::string_view s, IsoParts& p) {
  auto take_digits = [&](std::size_t pos, std::size_t n, std::int64_t& out) -> bool {
    if (pos + n > s.size()) return false;
    out = 0;
    for (std::size_t i = 0; i < n; ++i) {
      char c = s[pos + i];
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
      out = out * 10 + (c - '0');
    }
    return true;
  };

  std::int64_t y, mo, d, h, mi, se = 0;
  if (!take_digits(0, 4, y) || s.size() < 16) return false;
  if (s[4] != '-' || !take_digits(5, 2, mo) || s[7] != '-' || !take_digits(8, 2, d))
    return false;
  if (s[10] != 'T' && s[10] != ' ' && s[10] != 't') return false;
  if (!take_digits(11, 2, h) || s[13] != ':' || !take_digits(14, 2, mi)) return false;
  std::size_t pos = 16;
  if (pos < s.size() && s[pos] == ':') {
    if (!take_digits(pos + 1, 2, se)) return false;
    pos += 3;
  }
  int millis = 0;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    int scale = 100;
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      if (scale > 0) millis += (s[pos] - '0') * scale;
      scale /= 10;
      ++pos;
    }
    if (pos == start) return false;
  }

  p.has_offset = false;
  p.offset_seconds = 0;
  if (pos < s.size()) {
    char c = s[pos];
    if (c == 'Z' || c == 'z') {
      p.has_offset = true;
      ++pos;
    } else if (c == '+' || c == '-') {
      int sign = c == '+' ? 1 : -1;
      ++pos;
      std::int64_t oh = 0, om = 0;
      if (!take_digits(pos, 2, oh)) return false;
      pos += 2;
      if (pos < s.size() && s[pos] == ':') ++pos;
      if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        if (!take_digits(pos, 2, om)) return false;
        pos += 2;
      }
      p.has_offset = true;
      p.offset_seconds = sign * (oh * 3600 + om * 60);
    }
    if (pos != s.size()) return false;
  }

  if (mo < 1 || mo > 12 || d < 1 || h > 23 || mi > 59 || se > 60) return false;
  if (d > aft::util::days_in_month(y, static_cast<unsigned>(mo))) return false;
  p.year = y;
  p.month = static_cast<unsigned>(mo);
  p.day = static_cast<unsigned>(d);
  p.hour = static_cast<unsigned>(h);
  p.minute = static_cast<unsigned>(mi);
  p.second = static_cast<unsigned>(se);
  p.millis = millis;
  return true;
}

}  // namespace

std::string_view to_string(TimeInterpretation i) {
  switch (i) {
    case TimeInterpretation::EpochMillis: return "epoch-ms";
    case TimeInterpretation::EpochSeconds: return "epoch-s";
    case TimeInterpretation::IsoWithOffset: return "iso-8601-offset";
    case TimeInterpretation::IsoAssumedZone: return "iso-8601-zone-hint";
    case TimeInterpretation::IsoAssumedUtc: return "iso-8601-assumed-utc";
  }
  return "unknown";
}

TimeResult normalize_timestamp(std::string_view raw,
                               const std::optional<std::string>& tz_hint) {
  std::string_view s = raw;
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (s.empty()) return UnparseableTimestamp{std::string(raw)};

  std::string_view digits = s;
  bool neg = false;
  if (digits.front() == '-') {
    neg = true;
    digits.remove_prefix(1);
  }
  if (all_digits(digits) && digits.size() <= 18) {
    std::int64_t v = 0;
    std::from_chars(digits.data(), digits.data() + digits.size(), v);
    return from_epoch_number(neg ? -v : v);
  }

  IsoParts p{};
  if (!parse_iso(s, p)) return UnparseableTimestamp{std::string(raw)};

  std::int64_t days = aft::util::days_from_civil(p.year, p.month, p.day);
  std::int64_t civil_seconds =
      days * 86400 + p.hour * 3600LL + p.minute * 60LL + p.second;

  NormalizedTime out;
  if (p.has_offset) {
    out.epoch_ms = (civil_seconds - p.offset_seconds) * 1000 + p.millis;
    out.interpretation = TimeInterpretation::IsoWithOffset;
    return out;
  }
  if (tz_hint && !tz_hint->empty()) {
    auto tz = aft::util::TimeZone::load(*tz_hint);
    if (!tz.ok()) return UnparseableTimestamp{std::string(raw)};
    out.epoch_ms = tz.value()->local_to_utc(civil_seconds) * 1000 + p.millis;
    out.interpretation = TimeInterpretation::IsoAssumedZone;
    out.zone = *tz_hint;
    return out;
  }
  out.epoch_ms = civil_seconds * 1000 + p.millis;
  out.interpretation = TimeInterpretation::IsoAssumedUtc;
  return out;
}

TimeResult normalize_timestamp(const json& raw,
                               const std::optional<std::string>& tz_hint) {
  if (raw.is_number_integer()) {
    return from_epoch_number(raw.get<std::int64_t>());
  }
  if (raw.is_number_unsigned()) {
    return from_epoch_number(static_cast<std::int64_t>(raw.get<std::uint64_t>()));
  }
  if (raw.is_number_float()) {
    double v = raw.get<double>();
    if (!std::isfinite(v)) return UnparseableTimestamp{raw.dump()};
    if (std::fabs(v) < static_cast<double>(kSecondsCutoff)) {
      NormalizedTime out;
      out.epoch_ms = static_cast<std::int64_t>(std::llround(v * 1000.0));
      out.interpretation = TimeInterpretation::EpochSeconds;
      return out;
    }
    NormalizedTime out;
    out.epoch_ms = static_cast<std::int64_t>(std::llround(v));
    out.interpretation = TimeInterpretation::EpochMillis;
    return out;
  }
  if (raw.is_string()) {
    return normalize_timestamp(std::string_view(raw.get_ref<const std::string&>()), tz_hint);
  }
  return UnparseableTimestamp{raw.dump()};
}

std::string to_iso8601_utc(std::int64_t epoch_ms) {
  std::int64_t secs = epoch_ms / 1000;
  std::int64_t ms = epoch_ms % 1000;
  if (ms < 0) {
    ms += 1000;
    secs -= 1;
  }
  std::int64_t days = secs / 86400;
  std::int64_t rem = secs % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  auto cd = aft::util::civil_from_days(days);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lld.%03lldZ",
                static_cast<long long>(cd.year), cd.month, cd.day,
                static_cast<long long>(rem / 3600), static_cast<long long>((rem / 60) % 60),
                static_cast<long long>(rem % 60), static_cast<long long>(ms));
  return buf;
}

}  // namespace aft::model
