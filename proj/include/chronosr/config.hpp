#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chronosr/corpus.hpp"
#include "chronosr/nn.hpp"

namespace chronosr {

/// Flat-JSON run configuration shared by every subcommand. Unknown keys are
/// rejected and `seed` is mandatory (no default), so a config file pins a
/// run completely. The CHRONO_SEED environment variable, when set, replaces
/// the seed after file and command-line overrides.
struct RunConfig {
  std::uint64_t seed = 0;

  std::vector<std::string> corpus;  // document directories and files
  std::string event_times;          // optional gold-anchor TSV
  std::string embeddings;           // optional pre-trained word vectors
  std::string iaa;                  // optional agreement TSV for evaluate
  std::string out_dir = "out";

  int sw = 1;
  std::string kind = "both";  // "E-D", "E-T" or "both"
  bool attention = true;

  int d_w = 50;
  int d_p = 16;
  int d_h = 64;
  int max_offset = 30;
  double learning_rate = 1e-3;
  int batch_size = 16;
  int epochs = 100;
  int patience = 10;
  double clip_norm = 5.0;
  double val_fraction = 0.2;  // training split carved from the dataset

  // Explicit artifact paths; when empty the fixed name under out_dir is used.
  std::string links_ed;
  std::string links_et;
  std::string model_ed;
  std::string model_et;
  std::string pred_ed;
  std::string pred_et;
  std::string inferred;

  bool wants(LinkKind k) const;
  std::string links_path(LinkKind k) const;
  std::string model_path(LinkKind k) const;
  std::string pred_path(LinkKind k) const;
  std::string inferred_path() const;
  std::string out_file(const std::string& name) const;

  NetConfig net_config(LinkKind k) const;

  void check() const;  // throws ConfigError on any invalid value
};

/// Parses config JSON and applies `KEY=VALUE` overrides: VALUE is parsed as
/// JSON when it is valid JSON (numbers, booleans, arrays), otherwise taken
/// as a plain string. CHRONO_SEED is applied last. Throws ConfigError on
/// unknown keys, a missing seed, or type/value violations.
RunConfig parse_run_config(const std::string& json_text,
                           const std::vector<std::string>& overrides = {},
                           const std::string& out_dir_override = "");

/// parse_run_config over the contents of a file.
RunConfig load_run_config(const std::string& path,
                          const std::vector<std::string>& overrides = {},
                          const std::string& out_dir_override = "");

}  // namespace chronosr
