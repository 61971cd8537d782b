// Command-line driver: each subcommand reads a JSON run configuration,
// executes one pipeline stage and prints the files it wrote, one per line.
// Exit codes: 0 success, 1 user error (config, data, missing files),
// 2 internal failure.
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chronosr/commands.hpp"
#include "chronosr/config.hpp"
#include "chronosr/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"temporal anchor induction, training and inference"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration file")
        ->required();
    sub->add_option("--override", overrides,
                    "KEY=VALUE config override (repeatable)");
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    return sub;
  };

  add_common(app.add_subcommand(
      "induce", "derive link datasets with gold sub-relations from a corpus"));
  add_common(app.add_subcommand("train", "train link classifiers"));
  add_common(app.add_subcommand("predict", "label link datasets with a model"));
  add_common(app.add_subcommand(
      "infer", "combine predicted links into event time anchors"));
  add_common(app.add_subcommand(
      "oracle", "upper-bound anchor recovery from gold sub-relations"));
  add_common(app.add_subcommand("evaluate", "score predictions and anchors"));
  add_common(app.add_subcommand("corpus-stats", "summarize a corpus"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const chronosr::RunConfig cfg =
        chronosr::load_run_config(config_path, overrides, out_dir);
    std::vector<std::string> files;
    if (app.got_subcommand("induce"))
      files = chronosr::cmd_induce(cfg);
    else if (app.got_subcommand("train"))
      files = chronosr::cmd_train(cfg);
    else if (app.got_subcommand("predict"))
      files = chronosr::cmd_predict(cfg);
    else if (app.got_subcommand("infer"))
      files = chronosr::cmd_infer(cfg);
    else if (app.got_subcommand("oracle"))
      files = chronosr::cmd_oracle(cfg);
    else if (app.got_subcommand("evaluate"))
      files = chronosr::cmd_evaluate(cfg);
    else
      files = chronosr::cmd_corpus_stats(cfg);
    for (const std::string& f : files) std::cout << f << "\n";
    return 0;
  } catch (const chronosr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (...) {
    std::cerr << "internal error\n";
    return 2;
  }
}
