#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "chronosr/nn.hpp"

namespace chronosr {

std::map<std::string, std::vector<double>> parse_embedding_text(
    const std::string& text, int d_w) {
  std::map<std::string, std::vector<double>> table;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string token;
    fields >> token;
    std::vector<double> values;
    double v = 0.0;
    while (fields >> v) values.push_back(v);
    if (!fields.eof())
      throw ParseError("embedding line " + std::to_string(line_no) +
                           " has a non-numeric value",
                       static_cast<std::size_t>(line_no));
    if (static_cast<int>(values.size()) != d_w)
      throw ParseError("embedding line " + std::to_string(line_no) + " has " +
                           std::to_string(values.size()) + " values, expected " +
                           std::to_string(d_w),
                       static_cast<std::size_t>(line_no));
    table[token] = std::move(values);
  }
  return table;
}

namespace {

// Fixed fill order (rows outer) so the draw sequence is reproducible.
void fill_normal(Matrix& m, Rng& rng, double scale) {
  for (long r = 0; r < m.rows(); ++r)
    for (long c = 0; c < m.cols(); ++c) m(r, c) = scale * rng.normal();
}

}  // namespace

ModelParameters init_model(
    const NetConfig& config,
    const std::vector<const std::vector<LinkInstance>*>& datasets, Rng& rng,
    const std::string& embedding_text) {
  config.check();

  std::set<std::string> tokens;
  for (const auto* dataset : datasets) {
    for (const LinkInstance& link : *dataset)
      tokens.insert(link.tokens.begin(), link.tokens.end());
  }

  ModelParameters model;
  model.config = config;
  model.vocab.push_back(kUnknownToken);
  for (const std::string& token : tokens) {
    if (token != kUnknownToken) model.vocab.push_back(token);
  }
  model.rebuild_index();

  const long vocab_size = static_cast<long>(model.vocab.size());
  const int d_h = config.d_h;
  const int d2 = config.state_width();
  constexpr double kScale = 0.1;

  ParameterSet& p = model.params;
  p.word_emb.resize(vocab_size, config.d_w);
  fill_normal(p.word_emb, rng, kScale);
  p.pos_emb.resize(config.num_position_rows(), config.d_p);
  fill_normal(p.pos_emb, rng, kScale);
  for (LstmCell* cell : {&p.fwd, &p.bwd}) {
    cell->wx.resize(4 * d_h, config.input_width());
    fill_normal(cell->wx, rng, kScale);
    cell->wh.resize(4 * d_h, d_h);
    fill_normal(cell->wh, rng, kScale);
    cell->b = Matrix::Zero(4 * d_h, 1);
  }
  p.attn_event.resize(d2, d2);
  fill_normal(p.attn_event, rng, kScale);
  if (config.kind == LinkKind::EventTimex) {
    p.attn_timex.resize(d2, d2);
    fill_normal(p.attn_timex, rng, kScale);
  } else {
    p.attn_timex.resize(0, 0);
  }
  p.out_w.resize(kNumSRs * kNumSRLabels, config.final_width());
  fill_normal(p.out_w, rng, kScale);
  p.out_b = Matrix::Zero(kNumSRs * kNumSRLabels, 1);

  if (!embedding_text.empty()) {
    const auto pretrained = parse_embedding_text(embedding_text, config.d_w);
    for (std::size_t i = 0; i < model.vocab.size(); ++i) {
      const auto it = pretrained.find(model.vocab[i]);
      if (it == pretrained.end()) continue;
      for (int c = 0; c < config.d_w; ++c)
        p.word_emb(static_cast<long>(i), c) = it->second[static_cast<std::size_t>(c)];
    }
  }

  model.check();
  return model;
}

double complete_match_accuracy(const ModelParameters& model,
                               const std::vector<LinkInstance>& instances) {
  if (instances.empty()) throw Error("no instances to evaluate");
  int hits = 0;
  for (const LinkInstance& link : instances) {
    if (!link.gold) throw Error("instance without gold labels in evaluation set");
    if (predict(model, link) == *link.gold) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(instances.size());
}

namespace {

std::vector<Matrix*> matrix_ptrs(ParameterSet& set) {
  std::vector<Matrix*> ptrs;
  for_each_matrix(set, [&](const char*, Matrix& m) { ptrs.push_back(&m); });
  return ptrs;
}

std::vector<const Matrix*> matrix_ptrs(const ParameterSet& set) {
  std::vector<const Matrix*> ptrs;
  for_each_matrix(set, [&](const char*, const Matrix& m) { ptrs.push_back(&m); });
  return ptrs;
}

void accumulate(ParameterSet& into, const ParameterSet& delta) {
  auto dst = matrix_ptrs(into);
  auto src = matrix_ptrs(delta);
  for (std::size_t i = 0; i < dst.size(); ++i) *dst[i] += *src[i];
}

void scale(ParameterSet& set, double factor) {
  for_each_matrix(set, [&](const char*, Matrix& m) { m *= factor; });
}

double global_norm(const ParameterSet& set) {
  double squared = 0.0;
  for_each_matrix(set,
                  [&](const char*, const Matrix& m) { squared += m.squaredNorm(); });
  return std::sqrt(squared);
}

struct AdamState {
  ParameterSet m1;
  ParameterSet m2;
  long step = 0;
};

void adam_update(ParameterSet& params, const ParameterSet& grads, AdamState& state,
                 double learning_rate) {
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;
  ++state.step;
  const double correct1 = 1.0 - std::pow(kBeta1, static_cast<double>(state.step));
  const double correct2 = 1.0 - std::pow(kBeta2, static_cast<double>(state.step));

  auto theta = matrix_ptrs(params);
  auto g = matrix_ptrs(grads);
  auto m1 = matrix_ptrs(state.m1);
  auto m2 = matrix_ptrs(state.m2);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (theta[i]->size() == 0) continue;
    m1[i]->array() = kBeta1 * m1[i]->array() + (1.0 - kBeta1) * g[i]->array();
    m2[i]->array() =
        kBeta2 * m2[i]->array() + (1.0 - kBeta2) * g[i]->array().square();
    theta[i]->array() -= learning_rate * (m1[i]->array() / correct1) /
                         ((m2[i]->array() / correct2).sqrt() + kEps);
  }
}

}  // namespace

TrainResult train(const std::vector<LinkInstance>& train_set,
                  const std::vector<LinkInstance>& val_set,
                  const NetConfig& config, const TrainOptions& options) {
  config.check();
  if (train_set.empty()) throw Error("training set is empty");
  if (options.batch_size <= 0) throw ConfigError("batch_size must be positive");
  if (options.epochs <= 0) throw ConfigError("epochs must be positive");
  if (options.patience <= 0) throw ConfigError("patience must be positive");
  if (options.learning_rate <= 0) throw ConfigError("learning_rate must be positive");
  if (options.clip_norm <= 0) throw ConfigError("clip_norm must be positive");
  for (const auto* set : {&train_set, &val_set}) {
    for (const LinkInstance& link : *set) {
      if (link.kind != config.kind)
        throw Error("dataset mixes link kinds (instance " + link.doc_id + "/" +
                    link.eid + ")");
      if (!link.gold)
        throw Error("training requires gold labels (instance " + link.doc_id +
                    "/" + link.eid + ")");
    }
  }

  Rng rng(options.seed);
  ModelParameters model =
      init_model(config, {&train_set, &val_set}, rng, options.embedding_text);

  AdamState adam{zero_like(model.params), zero_like(model.params), 0};
  const std::vector<LinkInstance>& stop_set = val_set.empty() ? train_set : val_set;

  TrainResult result;
  ModelParameters best = model;
  double best_val = -1.0;
  int best_epoch = -1;
  int stale_epochs = 0;

  std::vector<int> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;

    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(options.batch_size)) {
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(options.batch_size));
      ParameterSet batch_grads = zero_like(model.params);
      ParameterSet instance_grads;
      for (std::size_t i = start; i < stop; ++i) {
        const LinkInstance& link = train_set[static_cast<std::size_t>(order[i])];
        epoch_loss += gradients(link, *link.gold, model, instance_grads);
        accumulate(batch_grads, instance_grads);
      }
      scale(batch_grads, 1.0 / static_cast<double>(stop - start));

      const double norm = global_norm(batch_grads);
      if (!std::isfinite(norm))
        throw Error("training diverged (non-finite gradients) at epoch " +
                    std::to_string(epoch + 1));
      if (norm > options.clip_norm) scale(batch_grads, options.clip_norm / norm);
      adam_update(model.params, batch_grads, adam, options.learning_rate);
    }

    if (!std::isfinite(epoch_loss))
      throw Error("training diverged (non-finite loss) at epoch " +
                  std::to_string(epoch + 1));

    const double val = complete_match_accuracy(model, stop_set);
    result.val_history.push_back(val);
    result.loss_history.push_back(epoch_loss /
                                  static_cast<double>(train_set.size()));
    result.epochs_run = epoch + 1;

    if (val > best_val) {
      best_val = val;
      best_epoch = epoch;
      best = model;
      stale_epochs = 0;
    } else {
      ++stale_epochs;
    }
    if (val >= 1.0) break;            // nothing left to improve
    if (stale_epochs >= options.patience) break;
  }

  result.model = best_epoch >= 0 ? std::move(best) : std::move(model);
  result.best_epoch = best_epoch;
  result.best_val = best_val < 0 ? 0.0 : best_val;
  return result;
}

}  // namespace chronosr
