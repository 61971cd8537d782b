#pragma once

#include <string>
#include <vector>

#include "chronosr/config.hpp"

namespace chronosr {

/// Batch pipeline stages. Each command is a pure function of the config and
/// the files it references: identical inputs produce byte-identical outputs.
/// Artifacts are written under config.out_dir (created on demand) with fixed
/// names; every function returns the paths it wrote, in order.
///
///   induce        corpus (+ event-time TSV) → links_ed/links_et datasets
///   train         link datasets → model files + training summaries
///   predict       models + datasets → per-link SR predictions
///   infer         predictions + corpus → per-event anchors
///   oracle        corpus → gold-SR upper-bound table over windows
///   evaluate      predictions / inferred anchors / IAA TSV → score reports
///   corpus-stats  corpus → counts summary
std::vector<std::string> cmd_induce(const RunConfig& cfg);
std::vector<std::string> cmd_train(const RunConfig& cfg);
std::vector<std::string> cmd_predict(const RunConfig& cfg);
std::vector<std::string> cmd_infer(const RunConfig& cfg);
std::vector<std::string> cmd_oracle(const RunConfig& cfg);
std::vector<std::string> cmd_evaluate(const RunConfig& cfg);
std::vector<std::string> cmd_corpus_stats(const RunConfig& cfg);

}  // namespace chronosr
