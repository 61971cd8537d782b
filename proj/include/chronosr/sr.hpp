#pragma once

#include <array>
#include <string>
#include <string_view>

#include "chronosr/timecore.hpp"

namespace chronosr {

/// One sub-level relation label. The enum order is also the fixed tie-break
/// order used by classifiers.
enum class SRLabel { Equal = 0, After = 1, Before = 2, Vague = 3 };

constexpr int kNumSRLabels = 4;
constexpr int kNumSRs = 4;

std::string_view sr_label_name(SRLabel label);
SRLabel sr_label_from_name(std::string_view name);  // throws ParseError

/// The four sub-level relations between an event anchor and a target anchor:
///   sr1: event begin pair vs target begin pair
///   sr2: event begin pair vs target end pair
///   sr3: event end pair   vs target begin pair
///   sr4: event end pair   vs target end pair
struct SRVector {
  SRLabel sr1 = SRLabel::Vague;
  SRLabel sr2 = SRLabel::Vague;
  SRLabel sr3 = SRLabel::Vague;
  SRLabel sr4 = SRLabel::Vague;

  SRLabel at(int index) const;        // index 0..3
  void set(int index, SRLabel label);
  std::array<SRLabel, 4> labels() const { return {sr1, sr2, sr3, sr4}; }

  friend bool operator==(const SRVector& a, const SRVector& b) {
    return a.sr1 == b.sr1 && a.sr2 == b.sr2 && a.sr3 == b.sr3 && a.sr4 == b.sr4;
  }

  std::string to_string() const;  // "[equal, before, after, vague]"
};

/// Compares an event bound pair (E_e, E_l) with a target pair (T_e, T_l).
/// Rules fire in the order equal, after, before; otherwise vague:
///
///   equal  : E_e = T_e and E_l = T_l              (all four known)
///   after  : E_e >= T_l and (E_l > T_l or E_l is blank)
///   before : E_l <= T_e and (E_e < T_e or E_e is blank)
///
/// A comparison whose operands include a blank (other than the explicit
/// E-side blank cases above) is false, so blanks on the target side fall
/// through to vague.
SRLabel compare_pairs(const BoundPair& event, const BoundPair& target);

/// The four compare_pairs results in SRVector order.
SRVector induce_sr(const TimeAnchor& event, const TimeAnchor& target);

/// The 13 interval relations, defined for certain anchors only.
enum class AllenRelation {
  Before,
  After,
  Meets,
  MetBy,
  Overlaps,
  OverlappedBy,
  Starts,
  StartedBy,
  During,
  Contains,
  Finishes,
  FinishedBy,
  Equals,
};

std::string_view allen_name(AllenRelation r);

/// Classifies two certain anchors by endpoint comparisons. Both anchors must
/// be certain (throws Error otherwise). Single-day intervals are allowed;
/// where their endpoint patterns satisfy several textbook definitions, the
/// position-style relations (equals/starts/finishes/during/contains) win over
/// meets/met-by.
AllenRelation allen_of(const TimeAnchor& event, const TimeAnchor& target);

}  // namespace chronosr
