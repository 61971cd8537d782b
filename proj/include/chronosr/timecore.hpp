#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "chronosr/error.hpp"

namespace chronosr {

// Three-valued day ordering. Any comparison touching a blank bound is Unknown.
enum class Ordering { Before, Equal, After, Unknown };

/// A calendar day at day granularity, or the distinguished blank value
/// (an open/unknown bound, written '~' in anchor strings).
///
/// Non-blank values are proleptic-Gregorian dates in years 1..9999.
/// Internally a day is its serial number (days since 1970-01-01), so ordering
/// and arithmetic are integer operations.
class DayPoint {
 public:
  constexpr DayPoint() : serial_(kBlankSerial) {}

  static constexpr DayPoint blank() { return DayPoint(); }

  /// Throws DateError unless (year, month, day) is a real date in 1..9999.
  static DayPoint from_ymd(int year, int month, int day);

  /// Serial-number constructor; throws DateError outside the supported years.
  static DayPoint from_serial(std::int32_t serial);

  bool is_blank() const { return serial_ == kBlankSerial; }

  // Component accessors; only valid on non-blank values.
  int year() const;
  int month() const;
  int day() const;
  std::int32_t serial() const;

  /// ISO weekday, 1 = Monday .. 7 = Sunday. Non-blank only.
  int iso_weekday() const;

  /// Day shifted by n days (n may be negative); stays within 1..9999.
  DayPoint plus_days(int n) const;

  /// "YYYY-MM-DD", or "~" for blank.
  std::string to_string() const;

  // Structural equality: blank == blank. Semantic comparison with blanks is
  // compare_days, which reports Unknown instead.
  friend bool operator==(DayPoint a, DayPoint b) { return a.serial_ == b.serial_; }
  friend bool operator!=(DayPoint a, DayPoint b) { return a.serial_ != b.serial_; }

 private:
  explicit constexpr DayPoint(std::int32_t s) : serial_(s) {}
  static constexpr std::int32_t kBlankSerial = INT32_MIN;
  std::int32_t serial_;
};

/// (earliest, latest) possible days for one endpoint of an interval.
/// When both bounds are known, earliest <= latest.
struct BoundPair {
  DayPoint earliest;
  DayPoint latest;

  /// Both bounds known and identical: the endpoint is one certain day.
  bool is_certain() const {
    return !earliest.is_blank() && earliest == latest;
  }
  bool is_fully_blank() const { return earliest.is_blank() && latest.is_blank(); }

  /// Throws DateError if earliest > latest (both non-blank).
  void check() const;

  friend bool operator==(const BoundPair& a, const BoundPair& b) {
    return a.earliest == b.earliest && a.latest == b.latest;
  }
};

/// The quadruple time anchor ((begin_earliest, begin_latest),
/// (end_earliest, end_latest)). One representation covers single-day and
/// multi-day extents, certain and uncertain alike: a single-day anchor has
/// begin == end, a certain bound has earliest == latest, and an open bound
/// is blank.
struct TimeAnchor {
  BoundPair begin;
  BoundPair end;

  bool is_single_day() const { return begin == end; }
  bool is_certain() const { return begin.is_certain() && end.is_certain(); }
  bool is_certain_single_day() const { return is_single_day() && begin.is_certain(); }

  /// Validates both pairs plus the cross-pair ordering
  /// (begin.earliest <= end.earliest and begin.latest <= end.latest where
  /// both sides are known). Throws DateError on violation.
  void check() const;

  friend bool operator==(const TimeAnchor& a, const TimeAnchor& b) {
    return a.begin == b.begin && a.end == b.end;
  }
};

/// Convenience constructors.
TimeAnchor certain_single_day(DayPoint d);
TimeAnchor certain_multi_day(DayPoint begin, DayPoint end);

/// Three-valued ordering of two days; Unknown iff either side is blank.
Ordering compare_days(DayPoint a, DayPoint b);

/// Parses an anchor string. Grammar (ASCII, case-sensitive):
///
///   anchor  := "begin:" pair sep "end:" pair | pair
///   pair    := date | "after" date (sep "before" date)? | "before" date | "~"
///   date    := YYYY "-" MM "-" DD
///   sep     := optional commas/spaces (after/before parts may be glued)
///
/// "afterX" is inclusive of X as the earliest bound, "beforeX" inclusive of X
/// as the latest; a bare single-day form applies to both begin and end.
/// Throws ParseError (with byte offset) on bad syntax and DateError on
/// invalid dates or bound-order violations.
TimeAnchor parse_anchor(std::string_view text);

/// Same grammar but skips the begin-before-end coherence check. Bound folding
/// over contradictory clues can legitimately produce an incoherent quadruple;
/// this reloads such serialized anchors verbatim.
TimeAnchor parse_anchor_lenient(std::string_view text);

/// Canonical serialization; parse_anchor(anchor_to_string(a)) == a for every
/// valid anchor. Single-day anchors emit the short form.
std::string anchor_to_string(const TimeAnchor& anchor);

/// Maps a normalized TIMEX3 value onto the day axis.
///
///   day (sub-day values floored)      -> certain single day
///   month / year / ISO week / quarter -> certain multi day over the extent
///   PRESENT_REF                       -> copy of dct
///   durations (P...), PAST_REF, FUTURE_REF, placeholder or otherwise
///   unresolvable values               -> nullopt (not anchorable)
///
/// Throws NormalizeError when the value is not recognizable TIMEX3 syntax
/// (including out-of-range date components).
std::optional<TimeAnchor> normalize_timex(std::string_view value,
                                          std::string_view type,
                                          const TimeAnchor& dct);

// Calendar helpers (exposed for reuse and tests).
bool is_leap_year(int year);
int days_in_month(int year, int month);
/// Number of ISO weeks in a year (52 or 53).
int iso_weeks_in_year(int year);
/// Monday of the given ISO week. Throws DateError when week is out of range.
DayPoint iso_week_monday(int year, int week);

}  // namespace chronosr
