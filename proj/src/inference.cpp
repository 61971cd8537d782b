#include "chronosr/inference.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "chronosr/error.hpp"

namespace chronosr {
namespace {

using ordered_json = nlohmann::ordered_json;

// Blank-aware extrema. A blank bound is the identity: −∞ when picking the
// later day, +∞ when picking the earlier one.
DayPoint later_of(DayPoint a, DayPoint b) {
  if (a.is_blank()) return b;
  if (b.is_blank()) return a;
  return a.serial() >= b.serial() ? a : b;
}

DayPoint earlier_of(DayPoint a, DayPoint b) {
  if (a.is_blank()) return b;
  if (b.is_blank()) return a;
  return a.serial() <= b.serial() ? a : b;
}

bool exceeds(DayPoint lo, DayPoint hi) {
  return !lo.is_blank() && !hi.is_blank() && lo.serial() > hi.serial();
}

std::string json_string(const ordered_json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string())
    throw ParseError(std::string("missing string field '") + key + "'", 0);
  return j[key].get<std::string>();
}

int json_int(const ordered_json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw ParseError(std::string("missing integer field '") + key + "'", 0);
  return j[key].get<int>();
}

SRVector labels_from_json(const ordered_json& labels, const char* key) {
  if (!labels.is_array() || labels.size() != static_cast<std::size_t>(kNumSRs))
    throw ParseError(std::string("'") + key + "' must list one label per sub-relation", 0);
  SRVector sr;
  for (int i = 0; i < kNumSRs; ++i)
    sr.set(i, sr_label_from_name(labels[static_cast<std::size_t>(i)].get<std::string>()));
  return sr;
}

}  // namespace

bool clue_before(const TimeClue& a, const TimeClue& b) {
  if (a.from_dct != b.from_dct) return a.from_dct;
  if (a.sentence_distance != b.sentence_distance)
    return a.sentence_distance < b.sentence_distance;
  if (a.sentence != b.sentence) return a.sentence < b.sentence;
  if (a.token != b.token) return a.token < b.token;
  return a.tid < b.tid;
}

AnchorState apply_clue(AnchorState state, const TimeClue& clue) {
  for (int i = 0; i < kNumSRs; ++i) {
    if (state.locked[static_cast<std::size_t>(i)]) continue;
    BoundPair& p = i < 2 ? state.anchor.begin : state.anchor.end;
    const BoundPair& q = i % 2 == 0 ? clue.target.begin : clue.target.end;
    switch (clue.sr.at(i)) {
      case SRLabel::Equal:
        p = q;
        if (clue.from_dct) state.locked[static_cast<std::size_t>(i)] = true;
        break;
      case SRLabel::After: {
        const DayPoint candidate = later_of(p.earliest, q.latest);
        if (exceeds(candidate, p.latest))
          ++state.conflicts;
        else
          p.earliest = candidate;
        break;
      }
      case SRLabel::Before: {
        const DayPoint candidate = earlier_of(p.latest, q.earliest);
        if (exceeds(p.earliest, candidate))
          ++state.conflicts;
        else
          p.latest = candidate;
        break;
      }
      case SRLabel::Vague:
        break;
    }
  }
  return state;
}

TimeAnchor infer_event(std::vector<TimeClue> clues, int* conflicts) {
  int dct_clues = 0;
  for (const TimeClue& clue : clues) dct_clues += clue.from_dct ? 1 : 0;
  if (dct_clues != 1)
    throw Error("inference needs exactly one DCT clue, got " +
                std::to_string(dct_clues));
  std::stable_sort(clues.begin(), clues.end(), clue_before);
  AnchorState state;
  for (const TimeClue& clue : clues) state = apply_clue(std::move(state), clue);
  if (conflicts) *conflicts = state.conflicts;
  return state.anchor;
}

std::vector<TimeClue> build_clues(const std::vector<const PredictedLink*>& links) {
  std::vector<TimeClue> clues;
  clues.reserve(links.size());
  for (const PredictedLink* pl : links) {
    const LinkInstance& li = pl->link;
    if (li.doc_id != links.front()->link.doc_id ||
        li.eid != links.front()->link.eid)
      throw Error("clue links span multiple events");
    TimeClue clue;
    clue.from_dct = li.target.is_dct;
    if (!li.target.is_dct) {
      clue.sentence_distance = li.sentence_distance;
      clue.sentence = li.target.sentence;
      clue.token = li.target.token;
      clue.tid = li.target.tid;
    }
    clue.target = li.target_anchor;
    clue.sr = pl->sr;
    clues.push_back(std::move(clue));
  }
  std::stable_sort(clues.begin(), clues.end(), clue_before);
  return clues;
}

std::vector<InferredEvent> infer_documents(
    const std::vector<Document>& documents,
    const std::vector<PredictedLink>& predictions) {
  std::map<std::pair<std::string, std::string>,
           std::vector<const PredictedLink*>>
      by_event;
  for (const PredictedLink& pl : predictions)
    by_event[{pl.link.doc_id, pl.link.eid}].push_back(&pl);

  std::vector<InferredEvent> out;
  std::size_t consumed = 0;
  for (const Document& doc : documents) {
    for (const EventMention& ev : doc.events) {
      auto it = by_event.find({doc.id, ev.eid});
      if (it == by_event.end()) continue;
      consumed += it->second.size();
      InferredEvent rec;
      rec.doc_id = doc.id;
      rec.eid = ev.eid;
      rec.gold = ev.gold_anchor;
      try {
        std::vector<TimeClue> clues = build_clues(it->second);
        rec.clue_count = static_cast<int>(clues.size());
        rec.anchor = infer_event(std::move(clues), &rec.conflicts);
      } catch (const Error& e) {
        throw Error(doc.id + "/" + ev.eid + ": " + e.what());
      }
      out.push_back(std::move(rec));
    }
  }
  if (consumed != predictions.size())
    throw Error("predictions reference unknown document/event pairs");
  return out;
}

std::string inferred_to_json_line(const InferredEvent& ev) {
  ordered_json j;
  j["doc"] = ev.doc_id;
  j["eid"] = ev.eid;
  j["inferred"] = anchor_to_string(ev.anchor);
  if (ev.gold) j["gold"] = anchor_to_string(*ev.gold);
  j["clues"] = ev.clue_count;
  j["conflicts"] = ev.conflicts;
  return j.dump();
}

InferredEvent inferred_from_json_line(const std::string& line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad inference JSON: ") + e.what(), 0);
  }
  InferredEvent ev;
  ev.doc_id = json_string(j, "doc");
  ev.eid = json_string(j, "eid");
  ev.anchor = parse_anchor_lenient(json_string(j, "inferred"));
  if (j.contains("gold")) ev.gold = parse_anchor(json_string(j, "gold"));
  ev.clue_count = json_int(j, "clues");
  ev.conflicts = json_int(j, "conflicts");
  return ev;
}

void write_inferred_file(const std::string& path,
                         const std::vector<InferredEvent>& events) {
  std::ostringstream out;
  for (const InferredEvent& ev : events) out << inferred_to_json_line(ev) << '\n';
  write_file(path, out.str());
}

std::vector<InferredEvent> read_inferred_file(const std::string& path) {
  const std::string text = read_file(path);
  std::vector<InferredEvent> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(inferred_from_json_line(line));
    } catch (const ParseError& e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what(),
                       static_cast<std::size_t>(line_no));
    }
  }
  return out;
}

std::string predicted_to_json_line(const PredictedLink& pl) {
  ordered_json j = ordered_json::parse(link_to_json_line(pl.link));
  ordered_json labels = ordered_json::array();
  for (SRLabel label : pl.sr.labels())
    labels.push_back(std::string(sr_label_name(label)));
  j["pred"] = std::move(labels);
  return j.dump();
}

PredictedLink predicted_from_json_line(const std::string& line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad prediction JSON: ") + e.what(), 0);
  }
  if (!j.contains("pred"))
    throw ParseError("prediction line lacks 'pred'", 0);
  PredictedLink pl;
  pl.sr = labels_from_json(j["pred"], "pred");
  pl.link = link_from_json_line(line);
  return pl;
}

void write_prediction_file(const std::string& path,
                           const std::vector<PredictedLink>& predictions) {
  std::ostringstream out;
  for (const PredictedLink& pl : predictions)
    out << predicted_to_json_line(pl) << '\n';
  write_file(path, out.str());
}

std::vector<PredictedLink> read_prediction_file(const std::string& path) {
  const std::string text = read_file(path);
  std::vector<PredictedLink> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(predicted_from_json_line(line));
    } catch (const ParseError& e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what(),
                       static_cast<std::size_t>(line_no));
    }
  }
  return out;
}

}  // namespace chronosr
