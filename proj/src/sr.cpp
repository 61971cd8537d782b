#include "chronosr/sr.hpp"

namespace chronosr {

std::string_view sr_label_name(SRLabel label) {
  switch (label) {
    case SRLabel::Equal: return "equal";
    case SRLabel::After: return "after";
    case SRLabel::Before: return "before";
    case SRLabel::Vague: return "vague";
  }
  return "vague";
}

SRLabel sr_label_from_name(std::string_view name) {
  if (name == "equal") return SRLabel::Equal;
  if (name == "after") return SRLabel::After;
  if (name == "before") return SRLabel::Before;
  if (name == "vague") return SRLabel::Vague;
  throw ParseError("unknown SR label '" + std::string(name) + "'", 0);
}

SRLabel SRVector::at(int index) const {
  switch (index) {
    case 0: return sr1;
    case 1: return sr2;
    case 2: return sr3;
    case 3: return sr4;
  }
  throw Error("SR index out of range: " + std::to_string(index));
}

void SRVector::set(int index, SRLabel label) {
  switch (index) {
    case 0: sr1 = label; return;
    case 1: sr2 = label; return;
    case 2: sr3 = label; return;
    case 3: sr4 = label; return;
  }
  throw Error("SR index out of range: " + std::to_string(index));
}

std::string SRVector::to_string() const {
  std::string out = "[";
  for (int i = 0; i < kNumSRs; ++i) {
    if (i > 0) out += ", ";
    out += sr_label_name(at(i));
  }
  out += "]";
  return out;
}

SRLabel compare_pairs(const BoundPair& event, const BoundPair& target) {
  const DayPoint ee = event.earliest;
  const DayPoint el = event.latest;
  const DayPoint te = target.earliest;
  const DayPoint tl = target.latest;

  if (compare_days(ee, te) == Ordering::Equal && compare_days(el, tl) == Ordering::Equal)
    return SRLabel::Equal;

  const Ordering ee_tl = compare_days(ee, tl);
  if ((ee_tl == Ordering::After || ee_tl == Ordering::Equal) &&
      (el.is_blank() || compare_days(el, tl) == Ordering::After))
    return SRLabel::After;

  const Ordering el_te = compare_days(el, te);
  if ((el_te == Ordering::Before || el_te == Ordering::Equal) &&
      (ee.is_blank() || compare_days(ee, te) == Ordering::Before))
    return SRLabel::Before;

  return SRLabel::Vague;
}

SRVector induce_sr(const TimeAnchor& event, const TimeAnchor& target) {
  SRVector v;
  v.sr1 = compare_pairs(event.begin, target.begin);
  v.sr2 = compare_pairs(event.begin, target.end);
  v.sr3 = compare_pairs(event.end, target.begin);
  v.sr4 = compare_pairs(event.end, target.end);
  return v;
}

std::string_view allen_name(AllenRelation r) {
  switch (r) {
    case AllenRelation::Before: return "before";
    case AllenRelation::After: return "after";
    case AllenRelation::Meets: return "meets";
    case AllenRelation::MetBy: return "met-by";
    case AllenRelation::Overlaps: return "overlaps";
    case AllenRelation::OverlappedBy: return "overlapped-by";
    case AllenRelation::Starts: return "starts";
    case AllenRelation::StartedBy: return "started-by";
    case AllenRelation::During: return "during";
    case AllenRelation::Contains: return "contains";
    case AllenRelation::Finishes: return "finishes";
    case AllenRelation::FinishedBy: return "finished-by";
    case AllenRelation::Equals: return "equals";
  }
  return "equals";
}

AllenRelation allen_of(const TimeAnchor& event, const TimeAnchor& target) {
  if (!event.is_certain() || !target.is_certain())
    throw Error("allen_of requires certain anchors");
  const std::int64_t a1 = event.begin.earliest.serial();
  const std::int64_t a2 = event.end.earliest.serial();
  const std::int64_t b1 = target.begin.earliest.serial();
  const std::int64_t b2 = target.end.earliest.serial();

  if (a1 == b1 && a2 == b2) return AllenRelation::Equals;
  if (a1 == b1 && a2 < b2) return AllenRelation::Starts;
  if (a1 == b1 && a2 > b2) return AllenRelation::StartedBy;
  if (a2 == b2 && a1 > b1) return AllenRelation::Finishes;
  if (a2 == b2 && a1 < b1) return AllenRelation::FinishedBy;
  if (a1 > b1 && a2 < b2) return AllenRelation::During;
  if (a1 < b1 && a2 > b2) return AllenRelation::Contains;
  if (a1 < b1 && b1 < a2 && a2 < b2) return AllenRelation::Overlaps;
  if (b1 < a1 && a1 < b2 && b2 < a2) return AllenRelation::OverlappedBy;
  if (a2 == b1) return AllenRelation::Meets;
  if (a1 == b2) return AllenRelation::MetBy;
  if (a2 < b1) return AllenRelation::Before;
  return AllenRelation::After;
}

}  // namespace chronosr
