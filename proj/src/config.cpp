#include "chronosr/config.hpp"

#include <cstdlib>
#include <filesystem>

#include <json.hpp>

#include "chronosr/error.hpp"

namespace chronosr {
namespace {

using nlohmann::json;

std::uint64_t take_seed(const json& v) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw ConfigError("'seed' must be a non-negative integer");
}

int take_int(const json& v, const char* key) {
  if (!v.is_number_integer())
    throw ConfigError(std::string("'") + key + "' must be an integer");
  return v.get<int>();
}

double take_double(const json& v, const char* key) {
  if (!v.is_number())
    throw ConfigError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

bool take_bool(const json& v, const char* key) {
  if (!v.is_boolean())
    throw ConfigError(std::string("'") + key + "' must be true or false");
  return v.get<bool>();
}

std::string take_string(const json& v, const char* key) {
  if (!v.is_string())
    throw ConfigError(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<std::string> take_strings(const json& v, const char* key) {
  std::vector<std::string> out;
  if (v.is_string()) {
    out.push_back(v.get<std::string>());
    return out;
  }
  if (!v.is_array())
    throw ConfigError(std::string("'") + key +
                      "' must be a path or an array of paths");
  for (const auto& item : v) {
    if (!item.is_string())
      throw ConfigError(std::string("'") + key + "' entries must be strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

bool RunConfig::wants(LinkKind k) const {
  if (kind == "both") return true;
  return kind == link_kind_name(k);
}

std::string RunConfig::out_file(const std::string& name) const {
  return (std::filesystem::path(out_dir) / name).string();
}

std::string RunConfig::links_path(LinkKind k) const {
  const std::string& configured = k == LinkKind::EventDct ? links_ed : links_et;
  if (!configured.empty()) return configured;
  return out_file(k == LinkKind::EventDct ? "links_ed.jsonl" : "links_et.jsonl");
}

std::string RunConfig::model_path(LinkKind k) const {
  const std::string& configured = k == LinkKind::EventDct ? model_ed : model_et;
  if (!configured.empty()) return configured;
  return out_file(k == LinkKind::EventDct ? "model_ed.bin" : "model_et.bin");
}

std::string RunConfig::pred_path(LinkKind k) const {
  const std::string& configured = k == LinkKind::EventDct ? pred_ed : pred_et;
  if (!configured.empty()) return configured;
  return out_file(k == LinkKind::EventDct ? "pred_ed.jsonl" : "pred_et.jsonl");
}

std::string RunConfig::inferred_path() const {
  return inferred.empty() ? out_file("inferred.jsonl") : inferred;
}

NetConfig RunConfig::net_config(LinkKind k) const {
  NetConfig net;
  net.kind = k;
  net.attention = attention;
  net.d_w = d_w;
  net.d_p = d_p;
  net.d_h = d_h;
  net.max_offset = max_offset;
  return net;
}

void RunConfig::check() const {
  if (kind != "E-D" && kind != "E-T" && kind != "both")
    throw ConfigError("'kind' must be \"E-D\", \"E-T\" or \"both\"");
  if (sw < 0) throw ConfigError("'sw' must be non-negative");
  net_config(LinkKind::EventDct).check();
  if (learning_rate <= 0) throw ConfigError("'learning_rate' must be positive");
  if (batch_size <= 0) throw ConfigError("'batch_size' must be positive");
  if (epochs <= 0) throw ConfigError("'epochs' must be positive");
  if (patience <= 0) throw ConfigError("'patience' must be positive");
  if (clip_norm <= 0) throw ConfigError("'clip_norm' must be positive");
  if (val_fraction < 0 || val_fraction >= 1)
    throw ConfigError("'val_fraction' must be in [0, 1)");
  if (out_dir.empty()) throw ConfigError("'out_dir' must not be empty");
}

RunConfig parse_run_config(const std::string& json_text,
                           const std::vector<std::string>& overrides,
                           const std::string& out_dir_override) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  for (const std::string& ov : overrides) {
    const std::size_t eq = ov.find('=');
    if (eq == 0 || eq == std::string::npos)
      throw ConfigError("override must look like KEY=VALUE: " + ov);
    const std::string key = ov.substr(0, eq);
    const std::string raw = ov.substr(eq + 1);
    const json value = json::parse(raw, nullptr, false);
    doc[key] = value.is_discarded() ? json(raw) : value;
  }

  RunConfig cfg;
  bool have_seed = false;
  for (const auto& [key, value] : doc.items()) {
    if (key == "seed") {
      cfg.seed = take_seed(value);
      have_seed = true;
    } else if (key == "corpus") {
      cfg.corpus = take_strings(value, "corpus");
    } else if (key == "event_times") {
      cfg.event_times = take_string(value, "event_times");
    } else if (key == "embeddings") {
      cfg.embeddings = take_string(value, "embeddings");
    } else if (key == "iaa") {
      cfg.iaa = take_string(value, "iaa");
    } else if (key == "out_dir") {
      cfg.out_dir = take_string(value, "out_dir");
    } else if (key == "sw") {
      cfg.sw = take_int(value, "sw");
    } else if (key == "kind") {
      cfg.kind = take_string(value, "kind");
    } else if (key == "attention") {
      cfg.attention = take_bool(value, "attention");
    } else if (key == "d_w") {
      cfg.d_w = take_int(value, "d_w");
    } else if (key == "d_p") {
      cfg.d_p = take_int(value, "d_p");
    } else if (key == "d_h") {
      cfg.d_h = take_int(value, "d_h");
    } else if (key == "max_offset") {
      cfg.max_offset = take_int(value, "max_offset");
    } else if (key == "learning_rate") {
      cfg.learning_rate = take_double(value, "learning_rate");
    } else if (key == "batch_size") {
      cfg.batch_size = take_int(value, "batch_size");
    } else if (key == "epochs") {
      cfg.epochs = take_int(value, "epochs");
    } else if (key == "patience") {
      cfg.patience = take_int(value, "patience");
    } else if (key == "clip_norm") {
      cfg.clip_norm = take_double(value, "clip_norm");
    } else if (key == "val_fraction") {
      cfg.val_fraction = take_double(value, "val_fraction");
    } else if (key == "links_ed") {
      cfg.links_ed = take_string(value, "links_ed");
    } else if (key == "links_et") {
      cfg.links_et = take_string(value, "links_et");
    } else if (key == "model_ed") {
      cfg.model_ed = take_string(value, "model_ed");
    } else if (key == "model_et") {
      cfg.model_et = take_string(value, "model_et");
    } else if (key == "pred_ed") {
      cfg.pred_ed = take_string(value, "pred_ed");
    } else if (key == "pred_et") {
      cfg.pred_et = take_string(value, "pred_et");
    } else if (key == "inferred") {
      cfg.inferred = take_string(value, "inferred");
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }

  if (const char* env = std::getenv("CHRONO_SEED"); env && *env) {
    const json v = json::parse(std::string(env), nullptr, false);
    try {
      cfg.seed = take_seed(v);
    } catch (const ConfigError&) {
      throw ConfigError("CHRONO_SEED must be a non-negative integer");
    }
    have_seed = true;
  }
  if (!have_seed)
    throw ConfigError("'seed' is required (config, --override or CHRONO_SEED)");
  if (!out_dir_override.empty()) cfg.out_dir = out_dir_override;

  cfg.check();
  return cfg;
}

RunConfig load_run_config(const std::string& path,
                          const std::vector<std::string>& overrides,
                          const std::string& out_dir_override) {
  return parse_run_config(read_file(path), overrides, out_dir_override);
}

}  // namespace chronosr
