#include "util/tzdb.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <mutex>
#include <set>

#include "util/civil.hpp"

namespace aft::util {

namespace {

const char* kSearchDirs[] = {"/usr/share/zoneinfo", "/usr/lib/zoneinfo",
                             "/etc/zoneinfo"};

bool valid_zone_name(const std::string& n) {
  if (n.empty() || n.size() > 200 || n.front() == '/') return false;
  if (n.find("..") != std::string::npos) return false;
  return std::all_of(n.begin(), n.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '/' || c == '_' || c == '-' || c == '+' || c == '.';
  });
}

std::uint32_t read_u32(const std::uint8_t* p) {
  return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
         (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

std::int64_t read_i64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | p[i];
  return static_cast<std::int64_t>(v);
}

std::int32_t read_i32(const std::uint8_t* p) {
  return static_cast<std::int32_t>(read_u32(p));
}

struct Header {
  std::uint32_t isutcnt, isstdcnt, leapcnt, timecnt, typecnt, charcnt;
};

bool read_header(const std::vector<std::uint8_t>& d, std::size_t off, Header& h) {
  if (d.size() < off + 44) return false;
  if (!(d[off] == 'T' && d[off + 1] == 'Z' && d[off + 2] == 'i' && d[off + 3] == 'f'))
    return false;
  h.isutcnt = read_u32(&d[off + 20]);
  h.isstdcnt = read_u32(&d[off + 24]);
  h.leapcnt = read_u32(&d[off + 28]);
  h.timecnt = read_u32(&d[off + 32]);
  h.typecnt = read_u32(&d[off + 36]);
  h.charcnt = read_u32(&d[off + 40]);
  return h.typecnt > 0 || h.timecnt == 0;
}

std::size_t block_size(const Header& h, int time_width) {
  return std::size_t(h.timecnt) * (time_width + 1) + std::size_t(h.typecnt) * 6 +
         h.charcnt + std::size_t(h.leapcnt) * (time_width + 4) + h.isstdcnt + h.isutcnt;
}

}  // namespace

Result<TimeZone, std::string> TimeZone::parse(const std::string& nm,
                                              const std::vector<std::uint8_t>& d) {
  Header h1;
  if (!read_header(d, 0, h1)) return std::string("not a TZif file: " + nm);
  char version = d.size() > 4 ? static_cast<char>(d[4]) : '\0';

  std::size_t off = 44;
  int width = 4;
  Header h = h1;
  std::string footer_text;

  if (version >= '2') {
    // Skip the v1 block, use the 64-bit block.
    off = 44 + block_size(h1, 4);
    Header h2;
    if (!read_header(d, off, h2)) return std::string("truncated TZif v2 block: " + nm);
    off += 44;
    width = 8;
    h = h2;
    std::size_t data_end = off + block_size(h2, 8);
    if (data_end > d.size()) return std::string("truncated TZif data: " + nm);
    // footer: '\n' TZ-string '\n'
    std::size_t f = data_end;
    if (f < d.size() && d[f] == '\n') {
      std::size_t e = f + 1;
      while (e < d.size() && d[e] != '\n') ++e;
      footer_text.assign(d.begin() + f + 1, d.begin() + e);
    }
  }

  if (d.size() < off + block_size(h, width))
    return std::string("truncated TZif data: " + nm);

  TimeZone tz;
  tz.name_ = nm;
  const std::uint8_t* p = d.data() + off;
  tz.transitions_.reserve(h.timecnt);
  for (std::uint32_t i = 0; i < h.timecnt; ++i) {
    tz.transitions_.push_back(width == 8 ? read_i64(p) : read_i32(p));
    p += width;
  }
  tz.type_index_.assign(p, p + h.timecnt);
  p += h.timecnt;
  tz.types_.reserve(h.typecnt);
  for (std::uint32_t i = 0; i < h.typecnt; ++i) {
    TypeInfo ti;
    ti.utoff_seconds = read_i32(p);
    ti.is_dst = p[4] != 0;
    tz.types_.push_back(ti);
    p += 6;
  }
  for (std::uint8_t idx : tz.type_index_) {
    if (idx >= tz.types_.size()) return std::string("bad type index in TZif: " + nm);
  }
  if (tz.types_.empty()) return std::string("no time types in TZif: " + nm);

  if (!footer_text.empty()) parse_posix_rule(footer_text, tz.footer_);
  return tz;
}

bool TimeZone::parse_posix_rule(const std::string& text, PosixRule& out) {
  // Grammar: std offset [dst [offset] [,start[/time],end[/time]]]
  // POSIX offsets are west-positive; we store seconds east of UTC.
  const char* s = text.c_str();

  auto skip_name = [&]() -> bool {
    if (*s == '<') {
      while (*s && *s != '>') ++s;
      if (*s != '>') return false;
      ++s;
      return true;
    }
    const char* start = s;
    while (*s && (std::isalpha(static_cast<unsigned char>(*s)))) ++s;
    return s - start >= 3;
  };
  auto parse_hms = [&](std::int64_t& secs, bool allow_sign) -> bool {
    std::int64_t sign = 1;
    if (allow_sign && (*s == '+' || *s == '-')) {
      if (*s == '-') sign = -1;
      ++s;
    }
    if (!std::isdigit(static_cast<unsigned char>(*s))) return false;
    std::int64_t h = 0, m = 0, c = 0;
    while (std::isdigit(static_cast<unsigned char>(*s))) h = h * 10 + (*s++ - '0');
    if (*s == ':') {
      ++s;
      while (std::isdigit(static_cast<unsigned char>(*s))) m = m * 10 + (*s++ - '0');
      if (*s == ':') {
        ++s;
        while (std::isdigit(static_cast<unsigned char>(*s))) c = c * 10 + (*s++ - '0');
      }
    }
    secs = sign * (h * 3600 + m * 60 + c);
    return true;
  };
  auto parse_day = [&](PosixRule::Day& day) -> bool {
    if (*s == 'M') {
      ++s;
      day.form = 'M';
      int vals[3] = {0, 0, 0};
      for (int i = 0; i < 3; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(*s))) return false;
        while (std::isdigit(static_cast<unsigned char>(*s))) vals[i] = vals[i] * 10 + (*s++ - '0');
        if (i < 2 && *s++ != '.') return false;
      }
      day.a = vals[0];
      day.b = vals[1];
      day.c = vals[2];
      if (day.a < 1 || day.a > 12 || day.b < 1 || day.b > 5 || day.c < 0 || day.c > 6)
        return false;
    } else if (*s == 'J') {
      ++s;
      day.form = 'J';
      if (!std::isdigit(static_cast<unsigned char>(*s))) return false;
      day.a = 0;
      while (std::isdigit(static_cast<unsigned char>(*s))) day.a = day.a * 10 + (*s++ - '0');
    } else if (std::isdigit(static_cast<unsigned char>(*s))) {
      day.form = 'n';
      day.a = 0;
      while (std::isdigit(static_cast<unsigned char>(*s))) day.a = day.a * 10 + (*s++ - '0');
    } else {
      return false;
    }
    if (*s == '/') {
      ++s;
      if (!parse_hms(day.seconds, true)) return false;
    }
    return true;
  };

  if (!skip_name()) return false;
  std::int64_t posix_std;
  if (!parse_hms(posix_std, true)) return false;
  out.std_offset = -posix_std;
  out.valid = true;

  if (*s == '\0') return true;
  if (!skip_name()) return false;
  out.has_dst = true;
  if (*s != ',' && *s != '\0') {
    std::int64_t posix_dst;
    if (!parse_hms(posix_dst, true)) return false;
    out.dst_offset = -posix_dst;
  } else {
    out.dst_offset = out.std_offset + 3600;
  }
  if (*s == '\0') {
    // DST with no rule; treat as permanently standard time.
    out.has_dst = false;
    return true;
  }
  if (*s++ != ',') return false;
  if (!parse_day(out.dst_start)) return false;
  if (*s++ != ',') return false;
  if (!parse_day(out.dst_end)) return false;
  return true;
}

std::int64_t TimeZone::rule_transition_utc(const PosixRule::Day& d, std::int64_t year,
                                           std::int64_t wall_offset) const {
  std::int64_t day_number = 0;  // days since epoch
  if (d.form == 'M') {
    std::int64_t first = days_from_civil(year, static_cast<unsigned>(d.a), 1);
    unsigned first_wd = weekday_from_days(first);
    int shift = (d.c - static_cast<int>(first_wd) + 7) % 7;
    std::int64_t day = 1 + shift + (d.b - 1) * 7;
    std::int64_t dim = days_in_month(year, static_cast<unsigned>(d.a));
    while (day > dim) day -= 7;  // week 5 means "last"
    day_number = days_from_civil(year, static_cast<unsigned>(d.a), static_cast<unsigned>(day));
  } else if (d.form == 'J') {
    // Julian day 1..365, leap day never counted.
    static const int cum[] = {0, 31, 59, 90, 120, 151, 181, 212, 243, 273, 304, 334};
    int n = d.a;
    int m = 11;
    while (m > 0 && cum[m] >= n) --m;
    int dom = n - cum[m];
    if (m >= 2 && is_leap_year(year)) {
      day_number = days_from_civil(year, static_cast<unsigned>(m + 1), 1) + dom - 1;
    } else {
      day_number = days_from_civil(year, static_cast<unsigned>(m + 1), static_cast<unsigned>(dom));
    }
  } else {  // 'n', zero-based, leap day counted
    day_number = days_from_civil(year, 1, 1) + d.a;
  }
  return day_number * 86400 + d.seconds - wall_offset;
}

std::int64_t TimeZone::footer_offset_at(std::int64_t t) const {
  const PosixRule& r = footer_;
  if (!r.has_dst) return r.std_offset;
  std::int64_t year = civil_from_days((t + r.std_offset) / 86400 -
                                      (((t + r.std_offset) % 86400) < 0 ? 1 : 0))
                          .year;
  std::int64_t start = rule_transition_utc(r.dst_start, year, r.std_offset);
  std::int64_t end = rule_transition_utc(r.dst_end, year, r.dst_offset);
  bool dst;
  if (start <= end) {
    dst = t >= start && t < end;
  } else {  // southern hemisphere: DST spans the year boundary
    dst = t >= start || t < end;
  }
  return dst ? r.dst_offset : r.std_offset;
}

std::int64_t TimeZone::offset_at_utc(std::int64_t t) const {
  if (transitions_.empty() || t < transitions_.front()) {
    if (transitions_.empty() && footer_.valid) return footer_offset_at(t);
    // Before the first transition: first non-DST type, else type 0.
    for (const auto& ti : types_) {
      if (!ti.is_dst) return ti.utoff_seconds;
    }
    return types_.front().utoff_seconds;
  }
  if (t >= transitions_.back() && footer_.valid) return footer_offset_at(t);
  auto it = std::upper_bound(transitions_.begin(), transitions_.end(), t);
  std::size_t idx = static_cast<std::size_t>(it - transitions_.begin()) - 1;
  return types_[type_index_[idx]].utoff_seconds;
}

std::int64_t TimeZone::local_to_utc(std::int64_t local) const {
  std::set<std::int64_t> offsets;
  for (const auto& ti : types_) offsets.insert(ti.utoff_seconds);
  if (footer_.valid) {
    offsets.insert(footer_.std_offset);
    if (footer_.has_dst) offsets.insert(footer_.dst_offset);
  }
  std::int64_t best_utc = 0;
  bool found = false;
  for (std::int64_t off : offsets) {
    std::int64_t utc = local - off;
    if (offset_at_utc(utc) == off) {
      if (!found || utc < best_utc) best_utc = utc;
      found = true;
    }
  }
  if (found) return best_utc;
  // Gap: probe before the earliest candidate to pick up the pre-gap offset.
  std::int64_t max_off = offsets.empty() ? 0 : *offsets.rbegin();
  std::int64_t pre = offset_at_utc(local - max_off);
  return local - pre;
}

Result<const TimeZone*, std::string> TimeZone::load(const std::string& iana_name) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<TimeZone>> cache;

  if (!valid_zone_name(iana_name))
    return std::string("invalid time zone name: " + iana_name);

  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(iana_name);
  if (it != cache.end()) {
    if (!it->second) return std::string("unknown time zone: " + iana_name);
    return static_cast<const TimeZone*>(it->second.get());
  }

  std::vector<std::uint8_t> data;
  for (const char* dir : kSearchDirs) {
    std::ifstream f(std::string(dir) + "/" + iana_name, std::ios::binary);
    if (!f) continue;
    data.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
    break;
  }
  if (data.empty()) {
    cache.emplace(iana_name, nullptr);
    return std::string("unknown time zone: " + iana_name);
  }
  auto parsed = parse(iana_name, data);
  if (!parsed.ok()) {
    cache.emplace(iana_name, nullptr);
    return parsed.error();
  }
  auto owned = std::make_unique<TimeZone>(std::move(parsed.value()));
  const TimeZone* ptr = owned.get();
  cache.emplace(iana_name, std::move(owned));
  return ptr;
}

bool zone_exists(const std::string& iana_name) {
  return TimeZone::load(iana_name).ok();
}

}  // namespace aft::util
