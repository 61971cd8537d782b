#include "chronosr/timecore.hpp"

#include <array>
#include <cctype>
#include <cstdio>

namespace chronosr {

namespace {

constexpr int kMinYear = 1;
constexpr int kMaxYear = 9999;

// Days-since-1970 from a civil date (Howard Hinnant's algorithm).
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                       static_cast<unsigned>(d) - 1u;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct Civil {
  int year;
  int month;
  int day;
};

Civil civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return Civil{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

const std::int64_t kMinSerial = days_from_civil(kMinYear, 1, 1);
const std::int64_t kMaxSerial = days_from_civil(kMaxYear, 12, 31);

}  // namespace

bool is_leap_year(int year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
  static constexpr std::array<int, 13> lengths = {0, 31, 28, 31, 30, 31, 30,
                                                  31, 31, 30, 31, 30, 31};
  if (month == 2 && is_leap_year(year)) return 29;
  return lengths[static_cast<std::size_t>(month)];
}

DayPoint DayPoint::from_ymd(int year, int month, int day) {
  if (year < kMinYear || year > kMaxYear)
    throw DateError("year out of range: " + std::to_string(year));
  if (month < 1 || month > 12)
    throw DateError("month out of range: " + std::to_string(month));
  if (day < 1 || day > days_in_month(year, month))
    throw DateError("day out of range: " + std::to_string(year) + "-" +
                    std::to_string(month) + "-" + std::to_string(day));
  return DayPoint(static_cast<std::int32_t>(days_from_civil(year, month, day)));
}

DayPoint DayPoint::from_serial(std::int32_t serial) {
  if (serial < kMinSerial || serial > kMaxSerial)
    throw DateError("day serial out of range: " + std::to_string(serial));
  return DayPoint(serial);
}

int DayPoint::year() const {
  if (is_blank()) throw DateError("component access on blank day");
  return civil_from_days(serial_).year;
}

int DayPoint::month() const {
  if (is_blank()) throw DateError("component access on blank day");
  return civil_from_days(serial_).month;
}

int DayPoint::day() const {
  if (is_blank()) throw DateError("component access on blank day");
  return civil_from_days(serial_).day;
}

std::int32_t DayPoint::serial() const {
  if (is_blank()) throw DateError("serial access on blank day");
  return serial_;
}

int DayPoint::iso_weekday() const {
  // Serial 0 (1970-01-01) was a Thursday.
  const std::int64_t s = serial();
  return static_cast<int>(((s + 3) % 7 + 7) % 7) + 1;
}

DayPoint DayPoint::plus_days(int n) const {
  return from_serial(static_cast<std::int32_t>(static_cast<std::int64_t>(serial()) + n));
}

std::string DayPoint::to_string() const {
  if (is_blank()) return "~";
  const Civil c = civil_from_days(serial_);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", c.year, c.month, c.day);
  return buf;
}

void BoundPair::check() const {
  if (!earliest.is_blank() && !latest.is_blank() && earliest.serial() > latest.serial())
    throw DateError("bound pair out of order: " + earliest.to_string() + " > " +
                    latest.to_string());
}

void TimeAnchor::check() const {
  begin.check();
  end.check();
  if (!begin.earliest.is_blank() && !end.earliest.is_blank() &&
      begin.earliest.serial() > end.earliest.serial())
    throw DateError("anchor begins after it ends: " + begin.earliest.to_string() +
                    " > " + end.earliest.to_string());
  if (!begin.latest.is_blank() && !end.latest.is_blank() &&
      begin.latest.serial() > end.latest.serial())
    throw DateError("anchor begins after it ends: " + begin.latest.to_string() +
                    " > " + end.latest.to_string());
}

TimeAnchor certain_single_day(DayPoint d) {
  return TimeAnchor{BoundPair{d, d}, BoundPair{d, d}};
}

TimeAnchor certain_multi_day(DayPoint begin, DayPoint end) {
  TimeAnchor a{BoundPair{begin, begin}, BoundPair{end, end}};
  a.check();
  return a;
}

Ordering compare_days(DayPoint a, DayPoint b) {
  if (a.is_blank() || b.is_blank()) return Ordering::Unknown;
  if (a.serial() < b.serial()) return Ordering::Before;
  if (a.serial() > b.serial()) return Ordering::After;
  return Ordering::Equal;
}

int iso_weeks_in_year(int year) {
  const int jan1 = DayPoint::from_ymd(year, 1, 1).iso_weekday();
  if (jan1 == 4) return 53;                       // starts on Thursday
  if (is_leap_year(year) && jan1 == 3) return 53; // leap year starting Wednesday
  return 52;
}

DayPoint iso_week_monday(int year, int week) {
  if (week < 1 || week > iso_weeks_in_year(year))
    throw DateError("week out of range: " + std::to_string(year) + "-W" +
                    std::to_string(week));
  // Week 1 is the week containing January 4th.
  const DayPoint jan4 = DayPoint::from_ymd(year, 1, 4);
  const DayPoint monday1 = jan4.plus_days(-(jan4.iso_weekday() - 1));
  return monday1.plus_days(7 * (week - 1));
}

// ---------------------------------------------------------------------------
// Anchor-string grammar
// ---------------------------------------------------------------------------

namespace {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  bool done() const { return pos >= text.size(); }
  char peek() const { return pos < text.size() ? text[pos] : '\0'; }
  bool try_consume(std::string_view word) {
    if (text.substr(pos, word.size()) == word) {
      pos += word.size();
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, pos);
  }
};

int parse_digits(Cursor& c, int count, const char* what) {
  int value = 0;
  for (int i = 0; i < count; ++i) {
    const char ch = c.peek();
    if (ch < '0' || ch > '9') c.fail(std::string("expected digit in ") + what);
    value = value * 10 + (ch - '0');
    ++c.pos;
  }
  return value;
}

DayPoint parse_date(Cursor& c) {
  const int year = parse_digits(c, 4, "year");
  if (!c.try_consume("-")) c.fail("expected '-' after year");
  const int month = parse_digits(c, 2, "month");
  if (!c.try_consume("-")) c.fail("expected '-' after month");
  const int day = parse_digits(c, 2, "day");
  return DayPoint::from_ymd(year, month, day);
}

void skip_separators(Cursor& c) {
  while (c.peek() == ',' || c.peek() == ' ') ++c.pos;
}

// One single-day form: date | afterD | beforeD | afterD1beforeD2 | ~
BoundPair parse_pair(Cursor& c) {
  if (c.try_consume("~")) return BoundPair{DayPoint::blank(), DayPoint::blank()};
  if (c.try_consume("after")) {
    const DayPoint earliest = parse_date(c);
    // A separator is only swallowed when a before-part actually follows.
    const std::size_t mark = c.pos;
    skip_separators(c);
    if (c.try_consume("before")) {
      const DayPoint latest = parse_date(c);
      BoundPair p{earliest, latest};
      p.check();
      return p;
    }
    c.pos = mark;
    return BoundPair{earliest, DayPoint::blank()};
  }
  if (c.try_consume("before")) {
    const DayPoint latest = parse_date(c);
    return BoundPair{DayPoint::blank(), latest};
  }
  const DayPoint d = parse_date(c);
  return BoundPair{d, d};
}

std::string pair_to_string(const BoundPair& p) {
  if (p.is_fully_blank()) return "~";
  if (p.earliest.is_blank()) return "before" + p.latest.to_string();
  if (p.latest.is_blank()) return "after" + p.earliest.to_string();
  if (p.earliest == p.latest) return p.earliest.to_string();
  return "after" + p.earliest.to_string() + "before" + p.latest.to_string();
}

}  // namespace

TimeAnchor parse_anchor_lenient(std::string_view text) {
  Cursor c{text};
  TimeAnchor anchor;
  if (c.try_consume("begin:")) {
    anchor.begin = parse_pair(c);
    skip_separators(c);
    if (!c.try_consume("end:")) c.fail("expected 'end:' part");
    anchor.end = parse_pair(c);
  } else {
    const BoundPair p = parse_pair(c);
    anchor.begin = p;
    anchor.end = p;
  }
  if (!c.done()) c.fail("trailing characters after anchor");
  return anchor;
}

TimeAnchor parse_anchor(std::string_view text) {
  TimeAnchor anchor = parse_anchor_lenient(text);
  anchor.check();
  return anchor;
}

std::string anchor_to_string(const TimeAnchor& anchor) {
  if (anchor.is_single_day()) return pair_to_string(anchor.begin);
  return "begin:" + pair_to_string(anchor.begin) + ",end:" + pair_to_string(anchor.end);
}

// ---------------------------------------------------------------------------
// TIMEX3 normalization
// ---------------------------------------------------------------------------

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (const char ch : s) {
    if (ch < '0' || ch > '9') return false;
  }
  return true;
}

int to_int(std::string_view s) {
  int v = 0;
  for (const char ch : s) v = v * 10 + (ch - '0');
  return v;
}

TimeAnchor month_extent(int year, int month) {
  return certain_multi_day(DayPoint::from_ymd(year, month, 1),
                           DayPoint::from_ymd(year, month, days_in_month(year, month)));
}

}  // namespace

std::optional<TimeAnchor> normalize_timex(std::string_view value,
                                          std::string_view type,
                                          const TimeAnchor& dct) {
  if (type == "DURATION" || type == "SET") return std::nullopt;
  if (value == "PRESENT_REF") return dct;
  if (value == "PAST_REF" || value == "FUTURE_REF") return std::nullopt;
  if (!value.empty() && value.front() == 'P') return std::nullopt;  // duration
  if (value.find('X') != std::string_view::npos ||
      value.find('x') != std::string_view::npos)
    return std::nullopt;  // placeholder digits cannot be placed on the axis

  // Sub-day precision is floored to the day: keep the part before 'T'.
  const std::size_t t_pos = value.find('T');
  const std::string_view date_part =
      t_pos == std::string_view::npos ? value : value.substr(0, t_pos);

  if (all_digits(date_part) && date_part.size() <= 3)
    return std::nullopt;  // century or decade, coarser than a calendar year

  if (all_digits(date_part) && date_part.size() == 4) {
    const int year = to_int(date_part);
    if (year < kMinYear) throw NormalizeError("year out of range", std::string(value));
    return certain_multi_day(DayPoint::from_ymd(year, 1, 1),
                             DayPoint::from_ymd(year, 12, 31));
  }

  // Everything below is "YYYY-...".
  if (date_part.size() < 6 || !all_digits(date_part.substr(0, 4)) || date_part[4] != '-')
    throw NormalizeError("unrecognized TIMEX3 value", std::string(value));
  const int year = to_int(date_part.substr(0, 4));
  const std::string_view rest = date_part.substr(5);

  try {
    if (rest.size() == 2 && all_digits(rest)) {  // YYYY-MM
      const int month = to_int(rest);
      if (month < 1 || month > 12)
        throw NormalizeError("month out of range", std::string(value));
      return month_extent(year, month);
    }
    if (rest.size() == 5 && all_digits(rest.substr(0, 2)) && rest[2] == '-' &&
        all_digits(rest.substr(3))) {  // YYYY-MM-DD
      const int month = to_int(rest.substr(0, 2));
      const int day = to_int(rest.substr(3));
      return certain_single_day(DayPoint::from_ymd(year, month, day));
    }
    if (rest.size() == 3 && rest[0] == 'W' && all_digits(rest.substr(1))) {  // YYYY-Wnn
      const int week = to_int(rest.substr(1));
      const DayPoint monday = iso_week_monday(year, week);
      return certain_multi_day(monday, monday.plus_days(6));
    }
    if (rest.size() == 2 && rest[0] == 'Q' && rest[1] >= '1' && rest[1] <= '4') {
      const int quarter = rest[1] - '0';
      const int first_month = 3 * quarter - 2;
      return certain_multi_day(
          DayPoint::from_ymd(year, first_month, 1),
          DayPoint::from_ymd(year, first_month + 2, days_in_month(year, first_month + 2)));
    }
  } catch (const DateError& e) {
    throw NormalizeError(std::string("invalid date: ") + e.what(), std::string(value));
  }

  // Recognized TIMEX3 shapes without a day extent: seasons, halves,
  // parts of day or week appended to a coarser value.
  static constexpr std::string_view resolvable_free[] = {"SP", "SU", "FA", "WI",
                                                         "H1", "H2", "WE"};
  for (const auto tag : resolvable_free) {
    if (rest == tag || rest.substr(0, 3) == std::string(tag) + "-" ||
        rest.find(std::string("-") + std::string(tag)) != std::string_view::npos)
      return std::nullopt;
  }
  if (rest.size() > 3 && rest[0] == 'W' && all_digits(rest.substr(1, 2)))
    return std::nullopt;  // week plus a qualifier such as -WE

  throw NormalizeError("unrecognized TIMEX3 value", std::string(value));
}

}  // namespace chronosr
