#include "chronosr/commands.hpp"

#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "chronosr/error.hpp"
#include "chronosr/evaluation.hpp"
#include "chronosr/inference.hpp"
#include "chronosr/nn.hpp"
#include "chronosr/rng.hpp"

namespace chronosr {
namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

struct LoadedCorpus {
  std::vector<Document> docs;
  ParseDiagnostics diag;
  EventTimeLoadStats et_stats;  // summed over documents
  int event_time_lines = 0;     // data lines in the TSV
};

LoadedCorpus load_from_config(const RunConfig& cfg) {
  if (cfg.corpus.empty())
    throw ConfigError("'corpus' paths are required for this command");
  LoadedCorpus lc;
  lc.docs = load_corpus(cfg.corpus, &lc.diag);
  if (!cfg.event_times.empty()) {
    const std::string tsv = read_file(cfg.event_times);
    std::istringstream in(tsv);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty() && line[0] != '#') ++lc.event_time_lines;
    }
    for (Document& doc : lc.docs) {
      EventTimeLoadStats stats;
      doc = load_event_times(tsv, doc, &stats);
      lc.et_stats.applied += stats.applied;
      lc.et_stats.unknown_eids += stats.unknown_eids;
    }
  }
  return lc;
}

void ensure_out_dir(const RunConfig& cfg) {
  fs::create_directories(cfg.out_dir);
}

ordered_json label_histogram(const std::vector<LinkInstance>& links) {
  ordered_json hist;
  for (int i = 0; i < kNumSRs; ++i) {
    ordered_json row;
    for (int l = 0; l < kNumSRLabels; ++l)
      row[std::string(sr_label_name(static_cast<SRLabel>(l)))] = 0;
    hist["sr" + std::to_string(i + 1)] = std::move(row);
  }
  for (const LinkInstance& li : links) {
    if (!li.gold) continue;
    for (int i = 0; i < kNumSRs; ++i) {
      auto& cell = hist["sr" + std::to_string(i + 1)]
                       [std::string(sr_label_name(li.gold->at(i)))];
      cell = cell.get<int>() + 1;
    }
  }
  return hist;
}

int count_gold(const std::vector<LinkInstance>& links) {
  int n = 0;
  for (const LinkInstance& li : links) n += li.gold ? 1 : 0;
  return n;
}

std::vector<LinkKind> wanted_kinds(const RunConfig& cfg) {
  std::vector<LinkKind> kinds;
  for (LinkKind k : {LinkKind::EventDct, LinkKind::EventTimex})
    if (cfg.wants(k)) kinds.push_back(k);
  return kinds;
}

std::string train_summary_name(LinkKind k) {
  return k == LinkKind::EventDct ? "train_ed.json" : "train_et.json";
}

std::string score_base_name(LinkKind k) {
  return k == LinkKind::EventDct ? "score_ed" : "score_et";
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::vector<std::string> cmd_induce(const RunConfig& cfg) {
  LoadedCorpus lc = load_from_config(cfg);
  ensure_out_dir(cfg);

  std::vector<LinkInstance> ed;
  std::vector<LinkInstance> et;
  int sentences = 0;
  int events = 0;
  int events_with_gold = 0;
  int events_unanchorable = 0;
  int timexes = 0;
  int anchorable_timexes = 0;
  for (const Document& doc : lc.docs) {
    sentences += static_cast<int>(doc.sentences.size());
    events += static_cast<int>(doc.events.size());
    for (const EventMention& ev : doc.events) {
      events_with_gold += ev.gold_anchor ? 1 : 0;
      events_unanchorable += ev.gold_unanchorable ? 1 : 0;
    }
    timexes += static_cast<int>(doc.timexes.size());
    for (const TimexMention& tx : doc.timexes)
      anchorable_timexes += tx.anchor ? 1 : 0;
    for (LinkInstance& li : generate_links(doc, cfg.sw)) {
      (li.kind == LinkKind::EventDct ? ed : et).push_back(std::move(li));
    }
  }

  const std::string ed_path = cfg.links_path(LinkKind::EventDct);
  const std::string et_path = cfg.links_path(LinkKind::EventTimex);
  write_link_file(ed_path, ed);
  write_link_file(et_path, et);

  ordered_json stats;
  stats["documents"] = static_cast<int>(lc.docs.size());
  stats["sentences"] = sentences;
  stats["events"] = events;
  stats["events_with_gold"] = events_with_gold;
  stats["events_unanchorable"] = events_unanchorable;
  stats["timexes"] = timexes;
  stats["anchorable_timexes"] = anchorable_timexes;
  stats["sentence_window"] = cfg.sw;
  {
    ordered_json j;
    j["total"] = static_cast<int>(ed.size());
    j["with_gold"] = count_gold(ed);
    j["label_histogram"] = label_histogram(ed);
    stats["ed_links"] = std::move(j);
  }
  {
    ordered_json j;
    j["total"] = static_cast<int>(et.size());
    j["with_gold"] = count_gold(et);
    j["avg_per_event"] =
        events > 0 ? static_cast<double>(et.size()) / events : 0.0;
    j["label_histogram"] = label_histogram(et);
    stats["et_links"] = std::move(j);
  }
  if (!cfg.event_times.empty()) {
    ordered_json j;
    j["lines"] = lc.event_time_lines;
    j["applied"] = lc.et_stats.applied;
    j["unknown_eids"] = lc.et_stats.unknown_eids;
    j["unmatched_lines"] =
        lc.event_time_lines - lc.et_stats.applied - lc.et_stats.unknown_eids;
    stats["event_times"] = std::move(j);
  }
  {
    ordered_json j;
    j["unanchorable_timex_values"] = lc.diag.unanchorable_timex_values;
    j["notes"] = lc.diag.notes;
    stats["diagnostics"] = std::move(j);
  }
  const std::string stats_path = cfg.out_file("induce_stats.json");
  write_file(stats_path, stats.dump(2) + "\n");
  return {ed_path, et_path, stats_path};
}

std::vector<std::string> cmd_train(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  const std::string embedding_text =
      cfg.embeddings.empty() ? std::string() : read_file(cfg.embeddings);

  std::vector<std::string> written;
  for (LinkKind kind : wanted_kinds(cfg)) {
    const std::string links_file = cfg.links_path(kind);
    const std::vector<LinkInstance> all = read_link_file(links_file);
    std::vector<LinkInstance> dataset;
    for (const LinkInstance& li : all)
      if (li.gold) dataset.push_back(li);
    if (dataset.empty())
      throw Error("no gold-labeled instances in " + links_file);
    const int dropped = static_cast<int>(all.size() - dataset.size());

    // Deterministic validation split: seeded shuffle, first fraction out.
    Rng rng(cfg.seed);
    std::vector<std::size_t> order(dataset.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    const std::size_t n_val = static_cast<std::size_t>(
        static_cast<double>(dataset.size()) * cfg.val_fraction);
    std::vector<LinkInstance> val_set;
    std::vector<LinkInstance> train_set;
    for (std::size_t i = 0; i < order.size(); ++i)
      (i < n_val ? val_set : train_set).push_back(dataset[order[i]]);

    TrainOptions opt;
    opt.learning_rate = cfg.learning_rate;
    opt.batch_size = cfg.batch_size;
    opt.epochs = cfg.epochs;
    opt.patience = cfg.patience;
    opt.clip_norm = cfg.clip_norm;
    opt.seed = cfg.seed;
    opt.embedding_text = embedding_text;

    const TrainResult result = train(train_set, val_set, cfg.net_config(kind), opt);
    const std::string model_file = cfg.model_path(kind);
    save_model(model_file, result.model);
    written.push_back(model_file);

    ordered_json j;
    j["kind"] = std::string(link_kind_name(kind));
    j["attention"] = cfg.attention;
    j["instances"] = static_cast<int>(all.size());
    j["dropped_without_gold"] = dropped;
    j["train_size"] = static_cast<int>(train_set.size());
    j["val_size"] = static_cast<int>(val_set.size());
    j["epochs_run"] = result.epochs_run;
    j["best_epoch"] = result.best_epoch;
    j["best_val"] = result.best_val;
    j["val_history"] = result.val_history;
    j["loss_history"] = result.loss_history;
    const std::string summary_file = cfg.out_file(train_summary_name(kind));
    write_file(summary_file, j.dump(2) + "\n");
    written.push_back(summary_file);
  }
  return written;
}

std::vector<std::string> cmd_predict(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  std::vector<std::string> written;
  for (LinkKind kind : wanted_kinds(cfg)) {
    const ModelParameters model = load_model(cfg.model_path(kind));
    if (model.config.kind != kind)
      throw ConfigError("model " + cfg.model_path(kind) + " is for " +
                        std::string(link_kind_name(model.config.kind)) +
                        " links");
    const std::vector<LinkInstance> links = read_link_file(cfg.links_path(kind));
    std::vector<PredictedLink> preds;
    preds.reserve(links.size());
    for (const LinkInstance& li : links)
      preds.push_back({li, predict(model, li)});
    const std::string out = cfg.pred_path(kind);
    write_prediction_file(out, preds);
    written.push_back(out);
  }
  return written;
}

std::vector<std::string> cmd_infer(const RunConfig& cfg) {
  LoadedCorpus lc = load_from_config(cfg);
  ensure_out_dir(cfg);

  std::vector<PredictedLink> preds =
      read_prediction_file(cfg.pred_path(LinkKind::EventDct));
  const bool et_present = fs::exists(cfg.pred_path(LinkKind::EventTimex));
  if (et_present) {
    for (PredictedLink& pl :
         read_prediction_file(cfg.pred_path(LinkKind::EventTimex)))
      preds.push_back(std::move(pl));
  }

  const std::vector<InferredEvent> events = infer_documents(lc.docs, preds);
  const std::string inferred_file = cfg.inferred_path();
  write_inferred_file(inferred_file, events);

  int with_gold = 0;
  int total_clues = 0;
  int total_conflicts = 0;
  for (const InferredEvent& ev : events) {
    with_gold += ev.gold ? 1 : 0;
    total_clues += ev.clue_count;
    total_conflicts += ev.conflicts;
  }
  ordered_json stats;
  stats["events"] = static_cast<int>(events.size());
  stats["with_gold"] = with_gold;
  stats["total_clues"] = total_clues;
  stats["total_conflicts"] = total_conflicts;
  stats["et_predictions"] = et_present;
  if (!et_present)
    stats["note"] = "event-to-timex predictions absent; DCT clues only";
  const std::string stats_file = cfg.out_file("infer_stats.json");
  write_file(stats_file, stats.dump(2) + "\n");
  return {inferred_file, stats_file};
}

std::vector<std::string> cmd_oracle(const RunConfig& cfg) {
  LoadedCorpus lc = load_from_config(cfg);
  ensure_out_dir(cfg);

  std::vector<OracleResult> rows;
  rows.push_back(oracle_test(lc.docs, 0, false));
  for (int w = 0; w <= cfg.sw; ++w) rows.push_back(oracle_test(lc.docs, w, true));

  ordered_json j;
  j["rows"] = ordered_json::array();
  std::ostringstream text;
  for (const OracleResult& row : rows) {
    j["rows"].push_back(ordered_json::parse(oracle_result_to_json(row)));
    text << oracle_result_to_text(row);
  }
  const std::string json_file = cfg.out_file("oracle.json");
  const std::string text_file = cfg.out_file("oracle.txt");
  write_file(json_file, j.dump(2) + "\n");
  write_file(text_file, text.str());
  return {json_file, text_file};
}

std::vector<std::string> cmd_evaluate(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  std::vector<std::string> written;
  ordered_json summary;
  std::ostringstream text;
  bool any = false;

  for (LinkKind kind : wanted_kinds(cfg)) {
    const std::string pred_file = cfg.pred_path(kind);
    if (!fs::exists(pred_file)) continue;
    const std::vector<PredictedLink> preds = read_prediction_file(pred_file);
    std::vector<SRVector> golds;
    std::vector<SRVector> guesses;
    for (const PredictedLink& pl : preds) {
      if (!pl.link.gold) continue;
      golds.push_back(*pl.link.gold);
      guesses.push_back(pl.sr);
    }
    const std::string name(link_kind_name(kind));
    if (golds.empty()) {
      text << name << ": no gold labels; skipped\n";
      continue;
    }
    const ScoreReport report = per_sr_scores(golds, guesses);
    const std::string base = score_base_name(kind);
    write_file(cfg.out_file(base + ".json"), score_report_to_json(report));
    write_file(cfg.out_file(base + ".txt"), score_report_to_text(report));
    written.push_back(cfg.out_file(base + ".json"));
    written.push_back(cfg.out_file(base + ".txt"));

    ordered_json j;
    j["instances"] = report.instances;
    j["complete_match_accuracy"] = report.complete_match_accuracy;
    j["macro_f1"] = report.macro_f1;
    j["micro_f1"] = report.micro_f1;
    summary[name] = std::move(j);
    text << name << ": instances " << report.instances << ", complete match "
         << fixed3(report.complete_match_accuracy) << ", macro F1 "
         << fixed3(report.macro_f1) << ", micro F1 "
         << fixed3(report.micro_f1) << "\n";
    any = true;
  }

  if (fs::exists(cfg.inferred_path())) {
    const std::vector<InferredEvent> records =
        read_inferred_file(cfg.inferred_path());
    int with_gold = 0;
    for (const InferredEvent& ev : records) with_gold += ev.gold ? 1 : 0;
    if (with_gold > 0) {
      const double acc = event_time_accuracy(records);
      ordered_json j;
      j["events"] = with_gold;
      j["accuracy"] = acc;
      summary["event_time"] = std::move(j);
      text << "event time: events " << with_gold << ", accuracy "
           << fixed3(acc) << "\n";
      any = true;
    } else {
      text << "event time: no gold anchors; skipped\n";
    }
  }

  if (!cfg.iaa.empty()) {
    const IAARecord record = read_iaa_tsv(read_file(cfg.iaa));
    const double alpha = krippendorff_alpha(record);
    ordered_json j;
    j["items"] = static_cast<int>(record.codings.size());
    j["alpha"] = alpha;
    summary["iaa"] = std::move(j);
    text << "IAA: items " << record.codings.size() << ", alpha "
         << fixed3(alpha) << "\n";
    any = true;
  }

  if (!any)
    throw Error(
        "nothing to evaluate: no predictions, inferred anchors or IAA data");

  const std::string json_file = cfg.out_file("evaluate.json");
  const std::string text_file = cfg.out_file("evaluate.txt");
  write_file(json_file, summary.dump(2) + "\n");
  write_file(text_file, text.str());
  written.push_back(json_file);
  written.push_back(text_file);
  return written;
}

std::vector<std::string> cmd_corpus_stats(const RunConfig& cfg) {
  LoadedCorpus lc = load_from_config(cfg);
  ensure_out_dir(cfg);

  ordered_json j;
  j["documents"] = static_cast<int>(lc.docs.size());
  ordered_json rows = ordered_json::array();
  int sentences = 0, tokens = 0, events = 0, with_gold = 0, unanchorable = 0,
      timexes = 0, anchorable = 0;
  std::ostringstream text;
  text << "doc                sent  tok   ev  gold  timex  anch  dct\n";
  for (const Document& doc : lc.docs) {
    int doc_tokens = 0;
    for (const auto& s : doc.sentences) doc_tokens += static_cast<int>(s.size());
    int doc_gold = 0, doc_unanch = 0;
    for (const EventMention& ev : doc.events) {
      doc_gold += ev.gold_anchor ? 1 : 0;
      doc_unanch += ev.gold_unanchorable ? 1 : 0;
    }
    int doc_anch = 0;
    for (const TimexMention& tx : doc.timexes) doc_anch += tx.anchor ? 1 : 0;

    ordered_json row;
    row["id"] = doc.id;
    row["sentences"] = static_cast<int>(doc.sentences.size());
    row["tokens"] = doc_tokens;
    row["events"] = static_cast<int>(doc.events.size());
    row["events_with_gold"] = doc_gold;
    row["events_unanchorable"] = doc_unanch;
    row["timexes"] = static_cast<int>(doc.timexes.size());
    row["anchorable_timexes"] = doc_anch;
    row["dct"] = anchor_to_string(doc.dct);
    rows.push_back(std::move(row));

    char line[160];
    std::snprintf(line, sizeof line, "%-18s %4zu %4d %4zu %5d %6zu %5d  %s\n",
                  doc.id.c_str(), doc.sentences.size(), doc_tokens,
                  doc.events.size(), doc_gold, doc.timexes.size(), doc_anch,
                  anchor_to_string(doc.dct).c_str());
    text << line;

    sentences += static_cast<int>(doc.sentences.size());
    tokens += doc_tokens;
    events += static_cast<int>(doc.events.size());
    with_gold += doc_gold;
    unanchorable += doc_unanch;
    timexes += static_cast<int>(doc.timexes.size());
    anchorable += doc_anch;
  }
  j["per_document"] = std::move(rows);
  ordered_json totals;
  totals["sentences"] = sentences;
  totals["tokens"] = tokens;
  totals["events"] = events;
  totals["events_with_gold"] = with_gold;
  totals["events_unanchorable"] = unanchorable;
  totals["timexes"] = timexes;
  totals["anchorable_timexes"] = anchorable;
  j["totals"] = std::move(totals);
  {
    ordered_json d;
    d["unanchorable_timex_values"] = lc.diag.unanchorable_timex_values;
    d["notes"] = lc.diag.notes;
    j["diagnostics"] = std::move(d);
  }
  if (!cfg.event_times.empty()) {
    ordered_json e;
    e["lines"] = lc.event_time_lines;
    e["applied"] = lc.et_stats.applied;
    e["unknown_eids"] = lc.et_stats.unknown_eids;
    j["event_times"] = std::move(e);
  }

  text << "totals: " << sentences << " sentences, " << tokens << " tokens, "
       << events << " events (" << with_gold << " gold, " << unanchorable
       << " unanchorable), " << timexes << " timexes (" << anchorable
       << " anchorable)\n";

  const std::string json_file = cfg.out_file("corpus_stats.json");
  const std::string text_file = cfg.out_file("corpus_stats.txt");
  write_file(json_file, j.dump(2) + "\n");
  write_file(text_file, text.str());
  return {json_file, text_file};
}

}  // namespace chronosr
