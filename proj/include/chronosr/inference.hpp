#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "chronosr/corpus.hpp"
#include "chronosr/sr.hpp"
#include "chronosr/timecore.hpp"

namespace chronosr {

/// One piece of evidence about an event's quadruple: a predicted (or gold)
/// SR vector against a dated target. DCT clues outrank every timex clue;
/// timex clues rank by sentence distance, then document position.
struct TimeClue {
  bool from_dct = false;
  int sentence_distance = 0;  // 0 for the DCT
  int sentence = -1;          // target mention position, -1 for the DCT
  int token = -1;
  std::string tid;  // empty for the DCT
  TimeAnchor target;
  SRVector sr;
};

/// Ascending priority order: highest-priority clue first.
bool clue_before(const TimeClue& a, const TimeClue& b);

/// Working quadruple being assembled, with the per-index lock flags and the
/// running conflict count.
struct AnchorState {
  TimeAnchor anchor;  // starts fully blank
  std::array<bool, kNumSRs> locked{};
  int conflicts = 0;
};

/// Folds one clue into the state. Per SR index i (0-based), the constrained
/// event pair P is the begin pair for i ∈ {0,1} and the end pair for
/// i ∈ {2,3}; the reference target pair Q is the begin pair for i ∈ {0,2}
/// and the end pair for i ∈ {1,3}. Labels act as:
///   equal  → overwrite (Pe, Pl) := (Qe, Ql)
///   after  → tighten Pe := max(Pe, Ql), blank = −∞
///   before → tighten Pl := min(Pl, Qe), blank = +∞
///   vague  → no change
/// A tightening that would leave Pe > Pl is dropped for that index and
/// counted in `conflicts`. A DCT clue with label equal locks the index
/// against all later clues.
AnchorState apply_clue(AnchorState state, const TimeClue& clue);

/// apply_clue folded over the clues in priority order, from the all-blank
/// state. The clue list must contain exactly one DCT clue; throws Error
/// otherwise. Conflicts are reported through the optional out-parameter.
TimeAnchor infer_event(std::vector<TimeClue> clues, int* conflicts = nullptr);

/// A link paired with the SR vector some model (or the gold inducer)
/// assigned to it.
struct PredictedLink {
  LinkInstance link;
  SRVector sr;
};

/// The clue list for one event, sorted by priority. Links must all belong
/// to the same (document, event).
std::vector<TimeClue> build_clues(const std::vector<const PredictedLink*>& links);

struct InferredEvent {
  std::string doc_id;
  std::string eid;
  TimeAnchor anchor;
  std::optional<TimeAnchor> gold;
  int clue_count = 0;
  int conflicts = 0;
};

/// Runs inference for every event of the given documents that appears in
/// `predictions`, in document order. Gold anchors are attached from the
/// documents. An event with timex predictions but no DCT prediction is an
/// error; events absent from `predictions` are skipped.
std::vector<InferredEvent> infer_documents(
    const std::vector<Document>& documents,
    const std::vector<PredictedLink>& predictions);

std::string inferred_to_json_line(const InferredEvent& ev);
InferredEvent inferred_from_json_line(const std::string& line);
void write_inferred_file(const std::string& path,
                         const std::vector<InferredEvent>& events);
std::vector<InferredEvent> read_inferred_file(const std::string& path);

/// Prediction file I/O: link JSON lines with the assigned labels under
/// "pred" (gold, when present, stays under "gold").
std::string predicted_to_json_line(const PredictedLink& pl);
PredictedLink predicted_from_json_line(const std::string& line);
void write_prediction_file(const std::string& path,
                           const std::vector<PredictedLink>& predictions);
std::vector<PredictedLink> read_prediction_file(const std::string& path);

}  // namespace chronosr
