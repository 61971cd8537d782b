#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "chronosr/corpus.hpp"
#include "chronosr/inference.hpp"
#include "chronosr/sr.hpp"

namespace chronosr {

/// Binary counts for one (sub-relation, label) cell. Rates use the 0-when-
/// undefined convention so labels that never occur score 0, not NaN.
struct LabelScore {
  int tp = 0;
  int fp = 0;
  int fn = 0;

  int support() const { return tp + fn; }
  double precision() const;
  double recall() const;
  double f1() const;
};

struct SRScores {
  std::array<LabelScore, kNumSRLabels> labels{};
  int correct = 0;
  double accuracy = 0.0;
  double macro_f1 = 0.0;  // mean F1 over the four labels
};

struct ScoreReport {
  int instances = 0;
  std::array<SRScores, kNumSRs> srs{};
  int complete_matches = 0;
  double complete_match_accuracy = 0.0;
  /// Micro-F1 where a true positive is a fully matched 4-vector. With total
  /// coverage (every instance predicted) this equals the accuracy; the
  /// builder verifies that and throws Error on disagreement.
  double complete_match_f1 = 0.0;
  double macro_f1 = 0.0;  // mean of the per-SR macro F1s
  double micro_f1 = 0.0;  // pooled over all 4·N sub-relation decisions
};

/// Scores aligned gold/predicted label vectors. Throws Error on empty or
/// length-mismatched input.
ScoreReport per_sr_scores(const std::vector<SRVector>& golds,
                          const std::vector<SRVector>& preds);

std::string score_report_to_json(const ScoreReport& report);
std::string score_report_to_text(const ScoreReport& report);

/// Fraction of aligned anchors whose canonical strings are identical.
/// Throws Error on empty or mismatched lists.
double event_time_accuracy(const std::vector<TimeAnchor>& golds,
                           const std::vector<TimeAnchor>& inferred);

/// The same over inference records, restricted to events that carry a gold
/// anchor; throws Error when none does.
double event_time_accuracy(const std::vector<InferredEvent>& events);

// ---------------------------------------------------------------------------
// Inter-annotator agreement
// ---------------------------------------------------------------------------

/// item → annotator → category (canonical anchor strings in practice,
/// but any nominal labels work). Missing cells are simply absent.
struct IAARecord {
  std::map<std::string, std::map<std::string, std::string>> codings;
};

/// Krippendorff's α with the nominal metric, coincidence-matrix estimator.
/// Items with fewer than two codings are ignored. Requires at least two
/// pairable items; when every pairable coding names one single category the
/// result is 1.0 by convention, any other zero expected disagreement is an
/// Error.
double krippendorff_alpha(const IAARecord& record);

/// TSV lines `item<TAB>annotator<TAB>category`; blank lines and lines
/// starting with '#' are skipped. Duplicate (item, annotator) cells are a
/// ParseError.
IAARecord read_iaa_tsv(const std::string& text);

// ---------------------------------------------------------------------------
// Oracle harness
// ---------------------------------------------------------------------------

struct OracleResult {
  int sentence_window = 0;
  bool timex_links = true;  // false: event–DCT clues only
  int events = 0;           // events with a gold anchor
  double accuracy = 0.0;    // event-time complete match under gold SRs
  double avg_links = 0.0;   // mean clues per evaluated event
};

/// Upper-bound harness: induce gold SR vectors for every link of every
/// gold-anchored event, run inference, and score against the gold anchors.
/// With timex_links off only the DCT link is used, so avg_links is exactly 1.
/// Throws Error when the corpus has no gold-anchored events.
OracleResult oracle_test(const std::vector<Document>& documents,
                         int sentence_window, bool timex_links = true);

std::string oracle_result_to_json(const OracleResult& result);
std::string oracle_result_to_text(const OracleResult& result);

}  // namespace chronosr
