#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chronosr/corpus.hpp"
#include "chronosr/rng.hpp"

namespace chronosr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Architecture of one classifier. Width bookkeeping:
///   input per token  = d_w + (#mentions)·d_p
///   encoder state    = 2·d_h (both directions)
///   mention repr     = 4·d_h with attention (state ++ context), 2·d_h without
///   classifier input = mention repr, doubled for event–timex links
struct NetConfig {
  LinkKind kind = LinkKind::EventDct;
  bool attention = true;
  int d_w = 50;
  int d_p = 16;
  int d_h = 64;
  int max_offset = 30;

  int num_mentions() const { return kind == LinkKind::EventTimex ? 2 : 1; }
  int input_width() const { return d_w + num_mentions() * d_p; }
  int state_width() const { return 2 * d_h; }
  int rep_width() const { return attention ? 4 * d_h : 2 * d_h; }
  int final_width() const { return num_mentions() * rep_width(); }
  int num_position_rows() const { return 2 * max_offset + 1; }

  void check() const;  // throws ConfigError on non-positive dimensions
};

/// One recurrent cell. Gate rows are packed [input; forget; output; cell]
/// so wx is (4·d_h) × input_width, wh is (4·d_h) × d_h and b is (4·d_h) × 1.
struct LstmCell {
  Matrix wx;
  Matrix wh;
  Matrix b;
};

/// Every trainable matrix (biases as single-column matrices). attn_timex is
/// 0×0 for event–DCT models; attention matrices stay allocated in baseline
/// mode but receive exactly zero gradient there.
struct ParameterSet {
  Matrix word_emb;  // |V| × d_w, row 0 = unknown token
  Matrix pos_emb;   // (2·max_offset+1) × d_p, row r = offset r − max_offset
  LstmCell fwd;
  LstmCell bwd;
  Matrix attn_event;  // 2d_h × 2d_h
  Matrix attn_timex;  // 2d_h × 2d_h or empty
  Matrix out_w;       // 16 × final_width
  Matrix out_b;       // 16 × 1
};

/// Applies fn(name, matrix) to every parameter matrix in a fixed order.
/// The order defines the serialization layout and the clip/update order.
template <class Params, class Fn>
void for_each_matrix(Params& set, Fn&& fn) {
  fn("word_emb", set.word_emb);
  fn("pos_emb", set.pos_emb);
  fn("fwd_wx", set.fwd.wx);
  fn("fwd_wh", set.fwd.wh);
  fn("fwd_b", set.fwd.b);
  fn("bwd_wx", set.bwd.wx);
  fn("bwd_wh", set.bwd.wh);
  fn("bwd_b", set.bwd.b);
  fn("attn_event", set.attn_event);
  fn("attn_timex", set.attn_timex);
  fn("out_w", set.out_w);
  fn("out_b", set.out_b);
}

struct ModelParameters {
  NetConfig config;
  std::vector<std::string> vocab;  // row → token; row 0 is the unknown token
  ParameterSet params;

  int token_row(const std::string& token) const;
  void rebuild_index();  // refresh the lookup map after deserialization
  void check() const;    // shape consistency, throws ConfigError

 private:
  std::map<std::string, int> index_;
};

inline constexpr const char* kUnknownToken = "<unk>";

/// Builds a model with the vocabulary of the given datasets (distinct tokens,
/// sorted) and seeded normal(0, 0.1) weights; biases start at zero. When
/// embedding_text is non-empty it is parsed as lines of
/// `token v1 … v_{d_w}` and matching vocabulary rows are initialized from it.
ModelParameters init_model(const NetConfig& config,
                           const std::vector<const std::vector<LinkInstance>*>& datasets,
                           Rng& rng, const std::string& embedding_text = "");

/// token → d_w values; throws ParseError on malformed lines or wrong width.
std::map<std::string, std::vector<double>> parse_embedding_text(
    const std::string& text, int d_w);

// ---------------------------------------------------------------------------
// Forward pass pieces
// ---------------------------------------------------------------------------

struct SequenceEncoding {
  Matrix states;  // state_width × T, column s = [h_fwd[s]; h_bwd[s]]
};

struct AttentionOutput {
  Vector alignment;  // T, non-negative, sums to 1
  Vector context;    // state_width
  Vector rep;        // mention state ++ context
};

struct SRPrediction {
  Matrix probs;  // kNumSRs × kNumSRLabels, each row sums to 1
  SRVector argmax() const;  // ties go to the first label in enum order
};

/// Per-token input columns (word vector ++ one position vector per mention).
Matrix embed(const LinkInstance& link, const ModelParameters& model);

/// Bidirectional encoding of an input column sequence.
SequenceEncoding encode(const Matrix& inputs, const ModelParameters& model);

/// Softmax-aligned context for one mention state against all states.
AttentionOutput attend(const Vector& mention_state, const Matrix& states,
                       const Matrix& w_a);

/// Full forward pass. Throws ConfigError when the link kind does not match
/// the model and Error on malformed positions.
SRPrediction forward(const LinkInstance& link, const ModelParameters& model);

/// Summed negative log-likelihood over the four sub-relations,
/// probabilities floored at 1e-12.
double loss(const SRPrediction& pred, const SRVector& gold);

/// Analytic gradients of loss(forward(link), gold) for every parameter
/// matrix (same shapes as ParameterSet). Returns the loss.
double gradients(const LinkInstance& link, const SRVector& gold,
                 const ModelParameters& model, ParameterSet& grads);

/// Zero-filled gradient holder shaped like the model's parameters.
ParameterSet zero_like(const ParameterSet& params);

/// argmax labels of a forward pass.
SRVector predict(const ModelParameters& model, const LinkInstance& link);

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

struct TrainOptions {
  double learning_rate = 1e-3;
  int batch_size = 16;
  int epochs = 100;
  int patience = 10;
  double clip_norm = 5.0;
  std::uint64_t seed = 0;
  std::string embedding_text;  // optional pre-trained word vectors
};

struct TrainResult {
  ModelParameters model;           // best-validation parameters
  std::vector<double> val_history; // complete-match accuracy per epoch
  std::vector<double> loss_history;
  int best_epoch = -1;             // index into val_history
  double best_val = 0.0;
  int epochs_run = 0;
};

/// Mini-batch training with an adaptive per-parameter step rule, global
/// gradient-norm clipping, and early stopping on validation complete-match.
/// Deterministic for a fixed seed. Throws Error on an empty training set,
/// mixed link kinds, or a non-finite loss.
TrainResult train(const std::vector<LinkInstance>& train_set,
                  const std::vector<LinkInstance>& val_set,
                  const NetConfig& config, const TrainOptions& options);

/// Fraction of instances whose predicted vector matches gold on all four
/// sub-relations. Instances without gold are an error.
double complete_match_accuracy(const ModelParameters& model,
                               const std::vector<LinkInstance>& instances);

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

/// Versioned binary container: magic, version, config+vocabulary header,
/// all matrices as little-endian doubles, CRC-32 trailer. Bit-exact
/// round-trip. load_model throws ParseError on any corruption.
void save_model(const std::string& path, const ModelParameters& model);
ModelParameters load_model(const std::string& path);

}  // namespace chronosr
