#include "chronosr/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

#include "chronosr/error.hpp"

namespace chronosr {
namespace {

using ordered_json = nlohmann::ordered_json;

double safe_div(double num, double den) { return den > 0 ? num / den : 0.0; }

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

double LabelScore::precision() const { return safe_div(tp, tp + fp); }
double LabelScore::recall() const { return safe_div(tp, tp + fn); }
double LabelScore::f1() const {
  const double p = precision();
  const double r = recall();
  return p + r > 0 ? 2 * p * r / (p + r) : 0.0;
}

ScoreReport per_sr_scores(const std::vector<SRVector>& golds,
                          const std::vector<SRVector>& preds) {
  if (golds.size() != preds.size())
    throw Error("gold/prediction lists differ in length (" +
                std::to_string(golds.size()) + " vs " +
                std::to_string(preds.size()) + ")");
  if (golds.empty()) throw Error("nothing to score");

  ScoreReport report;
  report.instances = static_cast<int>(golds.size());
  for (std::size_t n = 0; n < golds.size(); ++n) {
    bool all = true;
    for (int i = 0; i < kNumSRs; ++i) {
      const int g = static_cast<int>(golds[n].at(i));
      const int p = static_cast<int>(preds[n].at(i));
      auto& sr = report.srs[static_cast<std::size_t>(i)];
      if (g == p) {
        ++sr.labels[static_cast<std::size_t>(g)].tp;
        ++sr.correct;
      } else {
        ++sr.labels[static_cast<std::size_t>(p)].fp;
        ++sr.labels[static_cast<std::size_t>(g)].fn;
        all = false;
      }
    }
    if (all) ++report.complete_matches;
  }

  int pooled_tp = 0;
  for (auto& sr : report.srs) {
    sr.accuracy = safe_div(sr.correct, report.instances);
    double sum = 0;
    for (const LabelScore& cell : sr.labels) sum += cell.f1();
    sr.macro_f1 = sum / kNumSRLabels;
    report.macro_f1 += sr.macro_f1 / kNumSRs;
    pooled_tp += sr.correct;
  }
  // Every instance gets exactly one label per sub-relation, so pooled
  // precision and recall coincide.
  report.micro_f1 = safe_div(pooled_tp, kNumSRs * report.instances);

  report.complete_match_accuracy =
      safe_div(report.complete_matches, report.instances);
  const int match_fp = report.instances - report.complete_matches;
  const int match_fn = report.instances - report.complete_matches;
  const double p = safe_div(report.complete_matches,
                            report.complete_matches + match_fp);
  const double r = safe_div(report.complete_matches,
                            report.complete_matches + match_fn);
  report.complete_match_f1 = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
  if (std::fabs(report.complete_match_f1 - report.complete_match_accuracy) >
      1e-12)
    throw Error("complete-match F1 diverged from accuracy under total coverage");
  return report;
}

std::string score_report_to_json(const ScoreReport& report) {
  ordered_json j;
  j["instances"] = report.instances;
  ordered_json srs = ordered_json::array();
  for (int i = 0; i < kNumSRs; ++i) {
    const SRScores& sr = report.srs[static_cast<std::size_t>(i)];
    ordered_json js;
    js["sr"] = "sr" + std::to_string(i + 1);
    ordered_json labels;
    for (int l = 0; l < kNumSRLabels; ++l) {
      const LabelScore& cell = sr.labels[static_cast<std::size_t>(l)];
      ordered_json jc;
      jc["precision"] = cell.precision();
      jc["recall"] = cell.recall();
      jc["f1"] = cell.f1();
      jc["support"] = cell.support();
      labels[std::string(sr_label_name(static_cast<SRLabel>(l)))] =
          std::move(jc);
    }
    js["labels"] = std::move(labels);
    js["accuracy"] = sr.accuracy;
    js["macro_f1"] = sr.macro_f1;
    srs.push_back(std::move(js));
  }
  j["per_sr"] = std::move(srs);
  j["macro_f1"] = report.macro_f1;
  j["micro_f1"] = report.micro_f1;
  j["complete_match_accuracy"] = report.complete_match_accuracy;
  j["complete_match_f1"] = report.complete_match_f1;
  return j.dump(2) + "\n";
}

std::string score_report_to_text(const ScoreReport& report) {
  std::ostringstream out;
  out << "instances: " << report.instances << "\n\n";
  out << "          ";
  for (int l = 0; l < kNumSRLabels; ++l)
    out << "  " << sr_label_name(static_cast<SRLabel>(l)) << " P/R/F1       ";
  out << "   acc   macroF1\n";
  for (int i = 0; i < kNumSRs; ++i) {
    const SRScores& sr = report.srs[static_cast<std::size_t>(i)];
    out << "sr" << i + 1 << "       ";
    for (const LabelScore& cell : sr.labels)
      out << "  " << fixed3(cell.precision()) << "/" << fixed3(cell.recall())
          << "/" << fixed3(cell.f1());
    out << "  " << fixed3(sr.accuracy) << "  " << fixed3(sr.macro_f1) << "\n";
  }
  out << "\nmacro F1: " << fixed3(report.macro_f1)
      << "\nmicro F1: " << fixed3(report.micro_f1)
      << "\ncomplete match: " << fixed3(report.complete_match_accuracy)
      << " (F1 " << fixed3(report.complete_match_f1) << ")\n";
  return out.str();
}

double event_time_accuracy(const std::vector<TimeAnchor>& golds,
                           const std::vector<TimeAnchor>& inferred) {
  if (golds.size() != inferred.size())
    throw Error("gold/inferred lists differ in length");
  if (golds.empty()) throw Error("nothing to score");
  int hits = 0;
  for (std::size_t i = 0; i < golds.size(); ++i)
    if (anchor_to_string(golds[i]) == anchor_to_string(inferred[i])) ++hits;
  return static_cast<double>(hits) / static_cast<double>(golds.size());
}

double event_time_accuracy(const std::vector<InferredEvent>& events) {
  std::vector<TimeAnchor> golds;
  std::vector<TimeAnchor> inferred;
  for (const InferredEvent& ev : events) {
    if (!ev.gold) continue;
    golds.push_back(*ev.gold);
    inferred.push_back(ev.anchor);
  }
  if (golds.empty()) throw Error("no events with gold anchors to score");
  return event_time_accuracy(golds, inferred);
}

double krippendorff_alpha(const IAARecord& record) {
  // Coincidence matrix over category pairs from the same item, each item
  // contributing its ordered coding pairs with weight 1/(m_u − 1).
  std::map<std::string, std::map<std::string, double>> o;
  std::map<std::string, double> totals;
  double n = 0.0;
  int pairable_items = 0;
  for (const auto& [item, cells] : record.codings) {
    const std::size_t m = cells.size();
    if (m < 2) continue;
    ++pairable_items;
    const double w = 1.0 / static_cast<double>(m - 1);
    for (const auto& [a, va] : cells)
      for (const auto& [b, vb] : cells) {
        if (a == b) continue;
        o[va][vb] += w;
        totals[va] += w;
        n += w;
      }
  }
  if (pairable_items < 2)
    throw Error("agreement needs at least two items with two codings");

  double observed = 0.0;
  for (const auto& [va, row] : o)
    for (const auto& [vb, mass] : row)
      if (va != vb) observed += mass;

  double sum_sq = 0.0;
  for (const auto& [v, t] : totals) sum_sq += t * t;
  const double expected = (n * n - sum_sq) / (n - 1.0);

  if (expected <= 0.0) {
    if (totals.size() == 1) return 1.0;  // one category everywhere: agreement
    throw Error("degenerate agreement data: zero expected disagreement");
  }
  return 1.0 - observed / expected;
}

IAARecord read_iaa_tsv(const std::string& text) {
  IAARecord record;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t tab1 = line.find('\t');
    const std::size_t tab2 =
        tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos || line.find('\t', tab2 + 1) != std::string::npos)
      throw ParseError("line " + std::to_string(line_no) +
                           ": expected item<TAB>annotator<TAB>category",
                       static_cast<std::size_t>(line_no));
    const std::string item = line.substr(0, tab1);
    const std::string annotator = line.substr(tab1 + 1, tab2 - tab1 - 1);
    const std::string category = line.substr(tab2 + 1);
    if (item.empty() || annotator.empty() || category.empty())
      throw ParseError("line " + std::to_string(line_no) + ": empty field",
                       static_cast<std::size_t>(line_no));
    auto [it, inserted] = record.codings[item].emplace(annotator, category);
    (void)it;
    if (!inserted)
      throw ParseError("line " + std::to_string(line_no) + ": duplicate cell " +
                           item + "/" + annotator,
                       static_cast<std::size_t>(line_no));
  }
  return record;
}

OracleResult oracle_test(const std::vector<Document>& documents,
                         int sentence_window, bool timex_links) {
  OracleResult result;
  result.sentence_window = sentence_window;
  result.timex_links = timex_links;

  int hits = 0;
  long total_links = 0;
  for (const Document& doc : documents) {
    const std::vector<LinkInstance> links = generate_links(doc, sentence_window);
    for (const EventMention& ev : doc.events) {
      if (!ev.gold_anchor) continue;
      std::vector<PredictedLink> preds;
      for (const LinkInstance& li : links) {
        if (li.eid != ev.eid) continue;
        if (!timex_links && !li.target.is_dct) continue;
        if (!li.gold) throw Error(doc.id + "/" + ev.eid + ": link without gold");
        preds.push_back({li, *li.gold});
      }
      std::vector<const PredictedLink*> ptrs;
      ptrs.reserve(preds.size());
      for (const PredictedLink& p : preds) ptrs.push_back(&p);
      int conflicts = 0;
      const TimeAnchor inferred = infer_event(build_clues(ptrs), &conflicts);
      ++result.events;
      total_links += static_cast<long>(preds.size());
      if (anchor_to_string(inferred) == anchor_to_string(*ev.gold_anchor))
        ++hits;
    }
  }
  if (result.events == 0) throw Error("corpus has no gold-anchored events");
  result.accuracy = static_cast<double>(hits) / result.events;
  result.avg_links = static_cast<double>(total_links) / result.events;
  return result;
}

std::string oracle_result_to_json(const OracleResult& result) {
  ordered_json j;
  j["sentence_window"] = result.sentence_window;
  j["timex_links"] = result.timex_links;
  j["events"] = result.events;
  j["accuracy"] = result.accuracy;
  j["avg_links"] = result.avg_links;
  return j.dump(2) + "\n";
}

std::string oracle_result_to_text(const OracleResult& result) {
  std::ostringstream out;
  out << "oracle";
  if (result.timex_links)
    out << " (E-D + E-T, window " << result.sentence_window << ")";
  else
    out << " (E-D only)";
  out << ": events " << result.events << ", accuracy "
      << fixed3(result.accuracy) << ", avg links " << fixed3(result.avg_links)
      << "\n";
  return out.str();
}

}  // namespace chronosr
