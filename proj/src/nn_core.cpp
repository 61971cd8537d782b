#include <cmath>

#include "chronosr/nn.hpp"

namespace chronosr {

void NetConfig::check() const {
  if (d_w <= 0 || d_p <= 0 || d_h <= 0)
    throw ConfigError("network dimensions must be positive");
  if (max_offset < 0) throw ConfigError("max_offset must be non-negative");
}

int ModelParameters::token_row(const std::string& token) const {
  const auto it = index_.find(token);
  return it == index_.end() ? 0 : it->second;
}

void ModelParameters::rebuild_index() {
  index_.clear();
  for (std::size_t i = 0; i < vocab.size(); ++i)
    index_[vocab[i]] = static_cast<int>(i);
}

namespace {

void require_shape(const Matrix& m, long rows, long cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols)
    throw ConfigError(std::string("parameter ") + name + " has shape " +
                      std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                      ", expected " + std::to_string(rows) + "x" +
                      std::to_string(cols));
}

}  // namespace

void ModelParameters::check() const {
  config.check();
  if (vocab.empty() || vocab[0] != kUnknownToken)
    throw ConfigError("vocabulary must start with the unknown token");
  const long d2 = config.state_width();
  require_shape(params.word_emb, static_cast<long>(vocab.size()), config.d_w, "word_emb");
  require_shape(params.pos_emb, config.num_position_rows(), config.d_p, "pos_emb");
  require_shape(params.fwd.wx, 4 * config.d_h, config.input_width(), "fwd_wx");
  require_shape(params.fwd.wh, 4 * config.d_h, config.d_h, "fwd_wh");
  require_shape(params.fwd.b, 4 * config.d_h, 1, "fwd_b");
  require_shape(params.bwd.wx, 4 * config.d_h, config.input_width(), "bwd_wx");
  require_shape(params.bwd.wh, 4 * config.d_h, config.d_h, "bwd_wh");
  require_shape(params.bwd.b, 4 * config.d_h, 1, "bwd_b");
  require_shape(params.attn_event, d2, d2, "attn_event");
  if (config.kind == LinkKind::EventTimex)
    require_shape(params.attn_timex, d2, d2, "attn_timex");
  else
    require_shape(params.attn_timex, 0, 0, "attn_timex");
  require_shape(params.out_w, kNumSRs * kNumSRLabels, config.final_width(), "out_w");
  require_shape(params.out_b, kNumSRs * kNumSRLabels, 1, "out_b");
}

ParameterSet zero_like(const ParameterSet& params) {
  ParameterSet zeros = params;
  for_each_matrix(zeros, [](const char*, Matrix& m) { m.setZero(); });
  return zeros;
}

// ---------------------------------------------------------------------------
// Forward pieces
// ---------------------------------------------------------------------------

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Vector softmax(const Vector& scores) {
  const double top = scores.maxCoeff();
  Vector e = (scores.array() - top).exp();
  return e / e.sum();
}

int clamp_offset(int delta, int max_offset) {
  if (delta < -max_offset) return -max_offset;
  if (delta > max_offset) return max_offset;
  return delta;
}

}  // namespace

Matrix embed(const LinkInstance& link, const ModelParameters& model) {
  const NetConfig& cfg = model.config;
  if (link.kind != cfg.kind)
    throw ConfigError(std::string("link kind ") +
                      std::string(link_kind_name(link.kind)) +
                      " does not match a " +
                      std::string(link_kind_name(cfg.kind)) + " model");
  const int T = static_cast<int>(link.tokens.size());
  if (T == 0) throw Error("instance has no tokens");
  if (link.event_position < 0 || link.event_position >= T)
    throw Error("event position out of range");
  const bool two = cfg.kind == LinkKind::EventTimex;
  if (two && (link.timex_position < 0 || link.timex_position >= T))
    throw Error("timex position out of range");

  Matrix x(cfg.input_width(), T);
  for (int i = 0; i < T; ++i) {
    const int row = model.token_row(link.tokens[static_cast<std::size_t>(i)]);
    x.block(0, i, cfg.d_w, 1) = model.params.word_emb.row(row).transpose();
    const int pe = clamp_offset(i - link.event_position, cfg.max_offset) + cfg.max_offset;
    x.block(cfg.d_w, i, cfg.d_p, 1) = model.params.pos_emb.row(pe).transpose();
    if (two) {
      const int pt = clamp_offset(i - link.timex_position, cfg.max_offset) + cfg.max_offset;
      x.block(cfg.d_w + cfg.d_p, i, cfg.d_p, 1) =
          model.params.pos_emb.row(pt).transpose();
    }
  }
  return x;
}

namespace {

// Gate activations and states of one directional pass, stored per token
// index (not processing order) so both directions line up.
struct LstmTrace {
  Matrix i, f, o, g;   // d_h × T
  Matrix c, tanh_c, h; // d_h × T
};

void lstm_run(const LstmCell& cell, const Matrix& inputs, bool reverse,
              LstmTrace& trace) {
  const int T = static_cast<int>(inputs.cols());
  const int d_h = static_cast<int>(cell.wh.cols());
  trace.i.resize(d_h, T);
  trace.f.resize(d_h, T);
  trace.o.resize(d_h, T);
  trace.g.resize(d_h, T);
  trace.c.resize(d_h, T);
  trace.tanh_c.resize(d_h, T);
  trace.h.resize(d_h, T);

  Vector h_prev = Vector::Zero(d_h);
  Vector c_prev = Vector::Zero(d_h);
  for (int s = 0; s < T; ++s) {
    const int t = reverse ? T - 1 - s : s;
    const Vector z = cell.wx * inputs.col(t) + cell.wh * h_prev + cell.b.col(0);
    for (int k = 0; k < d_h; ++k) {
      trace.i(k, t) = sigmoid(z(k));
      trace.f(k, t) = sigmoid(z(d_h + k));
      trace.o(k, t) = sigmoid(z(2 * d_h + k));
      trace.g(k, t) = std::tanh(z(3 * d_h + k));
    }
    trace.c.col(t) = trace.f.col(t).cwiseProduct(c_prev) +
                     trace.i.col(t).cwiseProduct(trace.g.col(t));
    trace.tanh_c.col(t) = trace.c.col(t).array().tanh();
    trace.h.col(t) = trace.o.col(t).cwiseProduct(trace.tanh_c.col(t));
    h_prev = trace.h.col(t);
    c_prev = trace.c.col(t);
  }
}

struct RoleCache {
  int position = 0;
  Vector mention_state;
  Vector alignment;
  Vector context;
  Vector rep;
};

struct ForwardCache {
  Matrix x;
  LstmTrace fwd, bwd;
  Matrix states;  // 2d_h × T
  RoleCache roles[2];
  int num_roles = 1;
  Vector final_rep;
  Vector logits;
  Matrix probs;  // kNumSRs × kNumSRLabels
};

const Matrix& role_attention(const ParameterSet& params, int role) {
  return role == 0 ? params.attn_event : params.attn_timex;
}

void forward_cached(const LinkInstance& link, const ModelParameters& model,
                    ForwardCache& cache) {
  const NetConfig& cfg = model.config;
  cache.x = embed(link, model);
  const int T = static_cast<int>(cache.x.cols());
  const int d_h = cfg.d_h;

  lstm_run(model.params.fwd, cache.x, false, cache.fwd);
  lstm_run(model.params.bwd, cache.x, true, cache.bwd);
  cache.states.resize(cfg.state_width(), T);
  cache.states.topRows(d_h) = cache.fwd.h;
  cache.states.bottomRows(d_h) = cache.bwd.h;

  cache.num_roles = cfg.num_mentions();
  cache.final_rep.resize(cfg.final_width());
  for (int r = 0; r < cache.num_roles; ++r) {
    RoleCache& role = cache.roles[r];
    role.position = r == 0 ? link.event_position : link.timex_position;
    role.mention_state = cache.states.col(role.position);
    if (cfg.attention) {
      const AttentionOutput att =
          attend(role.mention_state, cache.states, role_attention(model.params, r));
      role.alignment = att.alignment;
      role.context = att.context;
      role.rep = att.rep;
    } else {
      // no attention: the encoder's final state in each direction
      role.rep.resize(cfg.state_width());
      role.rep.head(d_h) = cache.fwd.h.col(T - 1);
      role.rep.tail(d_h) = cache.bwd.h.col(0);
    }
    cache.final_rep.segment(r * cfg.rep_width(), cfg.rep_width()) = role.rep;
  }

  cache.logits = model.params.out_w * cache.final_rep + model.params.out_b.col(0);
  cache.probs.resize(kNumSRs, kNumSRLabels);
  for (int j = 0; j < kNumSRs; ++j)
    cache.probs.row(j) = softmax(cache.logits.segment(j * kNumSRLabels, kNumSRLabels))
                             .transpose();
}

}  // namespace

SequenceEncoding encode(const Matrix& inputs, const ModelParameters& model) {
  LstmTrace fwd, bwd;
  lstm_run(model.params.fwd, inputs, false, fwd);
  lstm_run(model.params.bwd, inputs, true, bwd);
  SequenceEncoding enc;
  enc.states.resize(model.config.state_width(), inputs.cols());
  enc.states.topRows(model.config.d_h) = fwd.h;
  enc.states.bottomRows(model.config.d_h) = bwd.h;
  return enc;
}

AttentionOutput attend(const Vector& mention_state, const Matrix& states,
                       const Matrix& w_a) {
  AttentionOutput out;
  const Vector v = w_a.transpose() * mention_state;  // score_s = v · states_s
  out.alignment = softmax(states.transpose() * v);
  out.context = states * out.alignment;
  out.rep.resize(mention_state.size() + out.context.size());
  out.rep.head(mention_state.size()) = mention_state;
  out.rep.tail(out.context.size()) = out.context;
  return out;
}

SRVector SRPrediction::argmax() const {
  SRVector v;
  for (int j = 0; j < kNumSRs; ++j) {
    int best = 0;
    for (int k = 1; k < kNumSRLabels; ++k)
      if (probs(j, k) > probs(j, best)) best = k;  // ties keep the first label
    v.set(j, static_cast<SRLabel>(best));
  }
  return v;
}

SRPrediction forward(const LinkInstance& link, const ModelParameters& model) {
  ForwardCache cache;
  forward_cached(link, model, cache);
  SRPrediction pred;
  pred.probs = cache.probs;
  return pred;
}

SRVector predict(const ModelParameters& model, const LinkInstance& link) {
  return forward(link, model).argmax();
}

namespace {

constexpr double kProbFloor = 1e-12;

double loss_from_probs(const Matrix& probs, const SRVector& gold) {
  double total = 0.0;
  for (int j = 0; j < kNumSRs; ++j) {
    const double p = probs(j, static_cast<int>(gold.at(j)));
    total -= std::log(p < kProbFloor ? kProbFloor : p);
  }
  return total;
}

}  // namespace

double loss(const SRPrediction& pred, const SRVector& gold) {
  return loss_from_probs(pred.probs, gold);
}

// ---------------------------------------------------------------------------
// Backward pass
// ---------------------------------------------------------------------------

namespace {

// Reverse accumulation through one directional pass. dh_ext holds the loss
// gradient arriving at each hidden state from above; dX collects input
// gradients.
void lstm_backward(const LstmCell& cell, const LstmTrace& trace,
                   const Matrix& inputs, const Matrix& dh_ext, bool reverse,
                   LstmCell& grad, Matrix& dX) {
  const int T = static_cast<int>(inputs.cols());
  const int d_h = static_cast<int>(cell.wh.cols());

  Vector dh_carry = Vector::Zero(d_h);
  Vector dc_carry = Vector::Zero(d_h);
  Vector dz(4 * d_h);
  for (int s = T - 1; s >= 0; --s) {
    const int t = reverse ? T - 1 - s : s;
    const int prev = reverse ? t + 1 : t - 1;  // previous processing step
    const bool first = s == 0;

    const Vector dh = dh_ext.col(t) + dh_carry;
    const auto o = trace.o.col(t).array();
    const auto tc = trace.tanh_c.col(t).array();
    const auto ig = trace.i.col(t).array();
    const auto fg = trace.f.col(t).array();
    const auto gg = trace.g.col(t).array();

    const Vector d_out = (dh.array() * tc).matrix();
    const Vector dc =
        ((dh.array() * o * (1.0 - tc * tc)).matrix() + dc_carry).eval();
    const Vector d_in = (dc.array() * gg).matrix();
    const Vector d_forget =
        first ? Vector::Zero(d_h).eval()
              : (dc.array() * trace.c.col(prev).array()).matrix().eval();
    const Vector d_cell = (dc.array() * ig).matrix();

    dz.segment(0, d_h) = (d_in.array() * ig * (1.0 - ig)).matrix();
    dz.segment(d_h, d_h) = (d_forget.array() * fg * (1.0 - fg)).matrix();
    dz.segment(2 * d_h, d_h) = (d_out.array() * o * (1.0 - o)).matrix();
    dz.segment(3 * d_h, d_h) = (d_cell.array() * (1.0 - gg * gg)).matrix();

    grad.wx += dz * inputs.col(t).transpose();
    if (!first) grad.wh += dz * trace.h.col(prev).transpose();
    grad.b.col(0) += dz;
    dX.col(t) += cell.wx.transpose() * dz;
    dh_carry = cell.wh.transpose() * dz;
    dc_carry = dc.cwiseProduct(trace.f.col(t));
  }
}

}  // namespace

double gradients(const LinkInstance& link, const SRVector& gold,
                 const ModelParameters& model, ParameterSet& grads) {
  const NetConfig& cfg = model.config;
  ForwardCache cache;
  forward_cached(link, model, cache);
  const double total_loss = loss_from_probs(cache.probs, gold);

  grads = zero_like(model.params);
  const int T = static_cast<int>(cache.x.cols());
  const int d_h = cfg.d_h;
  const int d2 = cfg.state_width();

  // softmax groups + output layer
  Vector dlogits(kNumSRs * kNumSRLabels);
  for (int j = 0; j < kNumSRs; ++j) {
    const int g = static_cast<int>(gold.at(j));
    if (cache.probs(j, g) < kProbFloor) {
      dlogits.segment(j * kNumSRLabels, kNumSRLabels).setZero();  // floored: flat
      continue;
    }
    Vector d = cache.probs.row(j).transpose();
    d(g) -= 1.0;
    dlogits.segment(j * kNumSRLabels, kNumSRLabels) = d;
  }
  grads.out_w = dlogits * cache.final_rep.transpose();
  grads.out_b.col(0) = dlogits;
  const Vector d_final = model.params.out_w.transpose() * dlogits;

  Matrix dH = Matrix::Zero(d2, T);
  for (int r = 0; r < cache.num_roles; ++r) {
    const RoleCache& role = cache.roles[r];
    const Vector dR = d_final.segment(r * cfg.rep_width(), cfg.rep_width());
    if (cfg.attention) {
      Vector dh_e = dR.head(d2);
      const Vector dc = dR.tail(d2);
      const Matrix& w_a = role_attention(model.params, r);
      Matrix& gw_a = r == 0 ? grads.attn_event : grads.attn_timex;

      const Vector da = cache.states.transpose() * dc;       // per-step weight grads
      dH += dc * role.alignment.transpose();                 // context spreads back
      const double mix = role.alignment.dot(da);
      const Vector du = role.alignment.cwiseProduct(
          (da.array() - mix).matrix());                      // softmax backward
      const Vector sdu = cache.states * du;
      gw_a += role.mention_state * sdu.transpose();
      dh_e += w_a * sdu;
      dH += (w_a.transpose() * role.mention_state) * du.transpose();
      dH.col(role.position) += dh_e;
    } else {
      dH.col(T - 1).head(d_h) += dR.head(d_h);
      dH.col(0).tail(d_h) += dR.tail(d_h);
    }
  }

  Matrix dX = Matrix::Zero(cfg.input_width(), T);
  lstm_backward(model.params.fwd, cache.fwd, cache.x, dH.topRows(d_h), false,
                grads.fwd, dX);
  lstm_backward(model.params.bwd, cache.bwd, cache.x, dH.bottomRows(d_h), true,
                grads.bwd, dX);

  // inputs decompose into embedding rows; repeated rows accumulate
  for (int i = 0; i < T; ++i) {
    const int row = model.token_row(link.tokens[static_cast<std::size_t>(i)]);
    grads.word_emb.row(row) += dX.col(i).head(cfg.d_w).transpose();
    const int pe =
        clamp_offset(i - link.event_position, cfg.max_offset) + cfg.max_offset;
    grads.pos_emb.row(pe) += dX.col(i).segment(cfg.d_w, cfg.d_p).transpose();
    if (cfg.kind == LinkKind::EventTimex) {
      const int pt =
          clamp_offset(i - link.timex_position, cfg.max_offset) + cfg.max_offset;
      grads.pos_emb.row(pt) +=
          dX.col(i).segment(cfg.d_w + cfg.d_p, cfg.d_p).transpose();
    }
  }
  return total_loss;
}

}  // namespace chronosr
