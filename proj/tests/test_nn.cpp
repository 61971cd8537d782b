#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "chronosr/corpus.hpp"
#include "chronosr/error.hpp"
#include "chronosr/nn.hpp"
#include "chronosr/rng.hpp"
#include "testutil.hpp"

using namespace chronosr;
using testutil::ScratchDir;
using testutil::separable_dataset;
using testutil::uniform_vec;

namespace {

NetConfig small_config(LinkKind kind, bool attention = true) {
  NetConfig cfg;
  cfg.kind = kind;
  cfg.attention = attention;
  cfg.d_w = 8;
  cfg.d_p = 4;
  cfg.d_h = 6;
  cfg.max_offset = 3;
  return cfg;
}

LinkInstance small_instance(LinkKind kind, Rng& rng) {
  static const std::vector<std::string> kPool = {"a", "b", "c", "d", "e",
                                                 "f", "g", "h", "i", "j"};
  LinkInstance li;
  li.kind = kind;
  li.doc_id = "doc";
  li.eid = "e1";
  li.sentence_distance = 0;
  li.tokens.resize(7);
  for (auto& t : li.tokens) t = kPool[rng.below(kPool.size())];
  li.event_position = 2;
  if (kind == LinkKind::EventTimex) {
    li.timex_position = 5;
    li.target.is_dct = false;
    li.target.tid = "t1";
  } else {
    li.timex_position = -1;
    li.target.is_dct = true;
  }
  li.target_anchor = testutil::certain_day(1998, 1, 1);
  SRVector gold;
  for (int i = 0; i < kNumSRs; ++i)
    gold.set(i, static_cast<SRLabel>(rng.below(4)));
  li.gold = gold;
  return li;
}

ModelParameters small_model(LinkKind kind, std::uint64_t seed,
                            bool attention = true) {
  Rng rng(seed);
  std::vector<LinkInstance> pool;
  for (int i = 0; i < 6; ++i) pool.push_back(small_instance(kind, rng));
  return init_model(small_config(kind, attention), {&pool}, rng);
}

// Relative error with an absolute floor: entries below the floor are compared
// absolutely, which keeps round-off noise in the finite differences from
// drowning genuinely tiny gradients.
double rel_err(double a, double b) {
  const double scale = std::max({std::fabs(a), std::fabs(b), 1e-3});
  return std::fabs(a - b) / scale;
}

double max_gradcheck_error(const LinkInstance& link,
                           ModelParameters& model) {
  ParameterSet grads = zero_like(model.params);
  gradients(link, *link.gold, model, grads);

  const double eps = 1e-5;
  double worst = 0.0;
  for_each_matrix(model.params, [&](const char* name, Matrix& m) {
    Matrix* analytic = nullptr;
    for_each_matrix(grads, [&](const char* gname, Matrix& g) {
      if (std::string(gname) == name) analytic = &g;
    });
    REQUIRE(analytic != nullptr);
    for (int c = 0; c < m.cols(); ++c) {
      for (int r = 0; r < m.rows(); ++r) {
        const double saved = m(r, c);
        m(r, c) = saved + eps;
        const double up = loss(forward(link, model), *link.gold);
        m(r, c) = saved - eps;
        const double down = loss(forward(link, model), *link.gold);
        m(r, c) = saved;
        const double numeric = (up - down) / (2.0 * eps);
        worst = std::max(worst, rel_err((*analytic)(r, c), numeric));
      }
    }
  });
  return worst;
}

}  // namespace

TEST_CASE("config widths") {
  NetConfig ed = small_config(LinkKind::EventDct);
  CHECK(ed.num_mentions() == 1);
  CHECK(ed.input_width() == 8 + 4);
  CHECK(ed.state_width() == 12);
  CHECK(ed.rep_width() == 24);
  CHECK(ed.final_width() == 24);
  CHECK(ed.num_position_rows() == 7);

  NetConfig et = small_config(LinkKind::EventTimex);
  CHECK(et.num_mentions() == 2);
  CHECK(et.input_width() == 8 + 8);
  CHECK(et.final_width() == 48);

  NetConfig base = small_config(LinkKind::EventTimex, false);
  CHECK(base.rep_width() == 12);
  CHECK(base.final_width() == 24);

  NetConfig bad = ed;
  bad.d_h = 0;
  CHECK_THROWS_AS(bad.check(), ConfigError);
  bad = ed;
  bad.max_offset = -1;
  CHECK_THROWS_AS(bad.check(), ConfigError);
}

TEST_CASE("init_model vocabulary and shapes") {
  Rng rng(7);
  std::vector<LinkInstance> data = separable_dataset(LinkKind::EventDct, 12);
  ModelParameters model =
      init_model(small_config(LinkKind::EventDct), {&data}, rng);

  // Row 0 is the unknown token, the rest are the distinct dataset tokens in
  // sorted order.
  REQUIRE(model.vocab.size() >= 2);
  CHECK(model.vocab[0] == kUnknownToken);
  CHECK(std::is_sorted(model.vocab.begin() + 1, model.vocab.end()));
  std::set<std::string> seen;
  for (const auto& li : data)
    for (const auto& t : li.tokens) seen.insert(t);
  CHECK(model.vocab.size() == seen.size() + 1);
  for (const auto& t : seen) CHECK(model.token_row(t) > 0);
  CHECK(model.token_row("never-seen") == 0);

  CHECK(model.params.word_emb.rows() ==
        static_cast<int>(model.vocab.size()));
  CHECK(model.params.word_emb.cols() == 8);
  CHECK(model.params.pos_emb.rows() == 7);
  CHECK(model.params.attn_event.rows() == 12);
  CHECK(model.params.attn_timex.size() == 0);  // unused for event–DCT
  CHECK(model.params.out_w.rows() == 16);
  CHECK(model.params.out_w.cols() == 24);
  CHECK(model.params.out_b.isZero());
  CHECK(model.params.fwd.b.isZero());

  ModelParameters et = small_model(LinkKind::EventTimex, 7);
  CHECK(et.params.attn_timex.rows() == 12);
  CHECK(et.params.attn_timex.cols() == 12);
}

TEST_CASE("init_model is deterministic per seed") {
  ModelParameters a = small_model(LinkKind::EventTimex, 3);
  ModelParameters b = small_model(LinkKind::EventTimex, 3);
  ModelParameters c = small_model(LinkKind::EventTimex, 4);
  CHECK(a.params.word_emb == b.params.word_emb);
  CHECK(a.params.fwd.wx == b.params.fwd.wx);
  CHECK(a.params.attn_event == b.params.attn_event);
  CHECK(a.params.word_emb != c.params.word_emb);
}

TEST_CASE("embedding text parsing") {
  const std::string good = "cat 1 2 3\ndog -0.5 0 2.25\n";
  auto table = parse_embedding_text(good, 3);
  REQUIRE(table.size() == 2);
  CHECK(table.at("cat") == std::vector<double>{1, 2, 3});
  CHECK(table.at("dog") == std::vector<double>{-0.5, 0, 2.25});

  CHECK(parse_embedding_text("", 3).empty());
  CHECK(parse_embedding_text("cat 1 2 3\r\n", 3).at("cat") ==
        std::vector<double>{1, 2, 3});
  CHECK_THROWS_AS(parse_embedding_text("cat 1 2", 3), ParseError);
  CHECK_THROWS_AS(parse_embedding_text("cat 1 2 3 4", 3), ParseError);
  CHECK_THROWS_AS(parse_embedding_text("cat 1 two 3", 3), ParseError);
}

TEST_CASE("init_model applies pre-trained vectors") {
  NetConfig cfg = small_config(LinkKind::EventDct);
  std::vector<LinkInstance> data = separable_dataset(LinkKind::EventDct, 8);
  const std::string text = "rise 1 2 3 4 5 6 7 8\nnot-in-vocab 9 9 9 9 9 9 9 9\n";

  Rng rng(11);
  ModelParameters model = init_model(cfg, {&data}, rng, text);
  const int row = model.token_row("rise");
  REQUIRE(row > 0);
  for (int j = 0; j < 8; ++j)
    CHECK(model.params.word_emb(row, j) == doctest::Approx(j + 1.0));

  // Tokens without a pre-trained vector keep their seeded random values.
  Rng rng2(11);
  ModelParameters plain = init_model(cfg, {&data}, rng2);
  const int other = model.token_row("fall");
  CHECK(model.params.word_emb.row(other) == plain.params.word_emb.row(other));
}

TEST_CASE("embed layout") {
  ModelParameters ed = small_model(LinkKind::EventDct, 5);
  Rng rng(5);
  LinkInstance li = small_instance(LinkKind::EventDct, rng);
  Matrix in = embed(li, ed);
  CHECK(in.rows() == 12);
  CHECK(in.cols() == 7);

  // Column = word vector on top, event-offset position vector below.
  const int wrow = ed.token_row(li.tokens[0]);
  CHECK(in.block(0, 0, 8, 1) == ed.params.word_emb.row(wrow).transpose());
  // Token 0 sits 2 left of the event at position 2 → offset −2 → row 1.
  CHECK(in.block(8, 0, 4, 1) == ed.params.pos_emb.row(1).transpose());
  // The event token itself → offset 0 → centre row 3.
  CHECK(in.block(8, 2, 4, 1) == ed.params.pos_emb.row(3).transpose());
  // Token 6 is 4 right of the event; offsets clamp at ±3 → last row.
  CHECK(in.block(8, 6, 4, 1) == ed.params.pos_emb.row(6).transpose());

  ModelParameters et = small_model(LinkKind::EventTimex, 5);
  LinkInstance li2 = small_instance(LinkKind::EventTimex, rng);
  Matrix in2 = embed(li2, et);
  CHECK(in2.rows() == 16);
  // Second position block tracks the timex mention at position 5.
  CHECK(in2.block(12, 5, 4, 1) == et.params.pos_emb.row(3).transpose());
  CHECK(in2.block(12, 4, 4, 1) == et.params.pos_emb.row(2).transpose());

  LinkInstance bad = li;
  bad.event_position = 99;
  CHECK_THROWS_AS(embed(bad, ed), Error);
  bad = li;
  bad.tokens.clear();
  CHECK_THROWS_AS(embed(bad, ed), Error);
  CHECK_THROWS_AS(embed(li2, ed), ConfigError);  // kind mismatch
}

TEST_CASE("attention properties") {
  ModelParameters model = small_model(LinkKind::EventDct, 9);
  Rng rng(9);
  LinkInstance li = small_instance(LinkKind::EventDct, rng);
  SequenceEncoding enc = encode(embed(li, model), model);
  const Vector mention = enc.states.col(li.event_position);

  SUBCASE("zero score matrix gives a uniform alignment") {
    Matrix wa = Matrix::Zero(12, 12);
    AttentionOutput out = attend(mention, enc.states, wa);
    REQUIRE(out.alignment.size() == 7);
    for (int s = 0; s < 7; ++s)
      CHECK(out.alignment(s) == doctest::Approx(1.0 / 7).epsilon(1e-12));
    Vector mean = enc.states.rowwise().mean();
    CHECK((out.context - mean).norm() < 1e-12);
  }

  SUBCASE("single time step aligns fully to itself") {
    Matrix one = enc.states.col(3);
    AttentionOutput out = attend(one, one, model.params.attn_event);
    REQUIRE(out.alignment.size() == 1);
    CHECK(out.alignment(0) == 1.0);
    CHECK((out.context - one).norm() == 0.0);
  }

  SUBCASE("alignment is a distribution and context is in the convex hull") {
    AttentionOutput out = attend(mention, enc.states, model.params.attn_event);
    double sum = 0.0;
    for (int s = 0; s < 7; ++s) {
      CHECK(out.alignment(s) >= 0.0);
      sum += out.alignment(s);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    for (int r = 0; r < 12; ++r) {
      const double lo = enc.states.row(r).minCoeff();
      const double hi = enc.states.row(r).maxCoeff();
      CHECK(out.context(r) >= lo - 1e-12);
      CHECK(out.context(r) <= hi + 1e-12);
    }
    // rep is the mention state with the context appended.
    REQUIRE(out.rep.size() == 24);
    CHECK((out.rep.head(12) - mention).norm() == 0.0);
    CHECK((out.rep.tail(12) - out.context).norm() == 0.0);
  }

  SUBCASE("swapping two non-mention columns swaps their alignment weights") {
    AttentionOutput base = attend(mention, enc.states, model.params.attn_event);
    Matrix swapped = enc.states;
    swapped.col(1).swap(swapped.col(4));
    AttentionOutput out = attend(mention, swapped, model.params.attn_event);
    CHECK(out.alignment(1) == doctest::Approx(base.alignment(4)).epsilon(1e-12));
    CHECK(out.alignment(4) == doctest::Approx(base.alignment(1)).epsilon(1e-12));
    CHECK(out.alignment(0) == doctest::Approx(base.alignment(0)).epsilon(1e-12));
  }
}

TEST_CASE("forward with a zeroed output layer is uniform") {
  ModelParameters model = small_model(LinkKind::EventTimex, 1);
  model.params.out_w.setZero();
  model.params.out_b.setZero();
  Rng rng(1);
  LinkInstance li = small_instance(LinkKind::EventTimex, rng);
  SRPrediction pred = forward(li, model);
  REQUIRE(pred.probs.rows() == 4);
  REQUIRE(pred.probs.cols() == 4);
  for (int g = 0; g < 4; ++g)
    for (int l = 0; l < 4; ++l)
      CHECK(pred.probs(g, l) == doctest::Approx(0.25).epsilon(1e-12));
  // Ties resolve to the first label in enum order.
  SRVector labels = pred.argmax();
  for (SRLabel l : labels.labels()) CHECK(l == SRLabel::Equal);
}

TEST_CASE("forward is deterministic and pure") {
  ModelParameters model = small_model(LinkKind::EventDct, 2);
  Rng rng(2);
  LinkInstance li = small_instance(LinkKind::EventDct, rng);
  SRPrediction a = forward(li, model);
  SRPrediction b = forward(li, model);
  CHECK(a.probs == b.probs);
  for (int g = 0; g < 4; ++g)
    CHECK(a.probs.row(g).sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("loss closed forms") {
  SRPrediction pred;
  pred.probs = Matrix::Constant(4, 4, 0.25);
  SRVector gold = uniform_vec(SRLabel::After);
  CHECK(loss(pred, gold) == doctest::Approx(4.0 * std::log(4.0)).epsilon(1e-9));

  for (int g = 0; g < 4; ++g) {
    pred.probs.row(g).setZero();
    pred.probs(g, static_cast<int>(gold.at(g))) = 1.0;
  }
  CHECK(loss(pred, gold) == 0.0);

  pred.probs = Matrix::Constant(4, 4, 1.0 / 6.0);
  for (int g = 0; g < 4; ++g) pred.probs(g, static_cast<int>(gold.at(g))) = 0.5;
  CHECK(loss(pred, gold) == doctest::Approx(4.0 * std::log(2.0)).epsilon(1e-9));

  // Zero probability is floored, not infinite.
  pred.probs.setZero();
  CHECK(loss(pred, gold) == doctest::Approx(-4.0 * std::log(1e-12)));
}

TEST_CASE("analytic gradients match central differences") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    for (LinkKind kind : {LinkKind::EventDct, LinkKind::EventTimex}) {
      CAPTURE(seed);
      ModelParameters model = small_model(kind, 100 + seed);
      Rng rng(200 + seed);
      LinkInstance li = small_instance(kind, rng);
      li.tokens[1] = "zz-unknown";  // exercise the shared unknown row
      CHECK(max_gradcheck_error(li, model) < 1e-4);
    }
  }
}

TEST_CASE("baseline mode leaves attention parameters untouched") {
  ModelParameters model = small_model(LinkKind::EventTimex, 17, false);
  Rng rng(17);
  LinkInstance li = small_instance(LinkKind::EventTimex, rng);
  ParameterSet grads = zero_like(model.params);
  gradients(li, *li.gold, model, grads);
  CHECK(grads.attn_event.isZero(0.0));
  CHECK(grads.attn_timex.isZero(0.0));
  CHECK(!grads.out_w.isZero(0.0));
  // And the baseline gradients are still correct.
  CHECK(max_gradcheck_error(li, model) < 1e-4);
}

TEST_CASE("gradients vanish at a saturated perfect prediction") {
  ModelParameters model = small_model(LinkKind::EventDct, 23);
  Rng rng(23);
  LinkInstance li = small_instance(LinkKind::EventDct, rng);
  model.params.out_w.setZero();
  model.params.out_b.setZero();
  for (int g = 0; g < 4; ++g)
    model.params.out_b(4 * g + static_cast<int>(li.gold->at(g)), 0) = 45.0;

  SRPrediction pred = forward(li, model);
  for (int g = 0; g < 4; ++g)
    CHECK(pred.probs(g, static_cast<int>(li.gold->at(g))) > 1.0 - 1e-12);

  ParameterSet grads = zero_like(model.params);
  const double l = gradients(li, *li.gold, model, grads);
  CHECK(l < 1e-8);
  double biggest = 0.0;
  for_each_matrix(grads, [&](const char*, Matrix& g) {
    if (g.size() > 0) biggest = std::max(biggest, g.cwiseAbs().maxCoeff());
  });
  CHECK(biggest < 1e-8);
}

TEST_CASE("gradients accumulate over shared embedding rows") {
  ModelParameters model = small_model(LinkKind::EventDct, 31);
  Rng rng(31);
  LinkInstance li = small_instance(LinkKind::EventDct, rng);
  std::fill(li.tokens.begin(), li.tokens.end(), li.tokens[0]);  // one row, 7 uses
  CHECK(max_gradcheck_error(li, model) < 1e-4);
}

TEST_CASE("complete match accuracy") {
  ModelParameters model = small_model(LinkKind::EventTimex, 41);
  model.params.out_w.setZero();
  model.params.out_b.setZero();  // predicts all-equal everywhere
  std::vector<LinkInstance> data = separable_dataset(LinkKind::EventTimex, 8);
  // Markers cycle after/before/equal/vague → exactly 1/4 gold all-equal.
  CHECK(complete_match_accuracy(model, data) == doctest::Approx(0.25));

  data[0].gold.reset();
  CHECK_THROWS_AS(complete_match_accuracy(model, data), Error);
  CHECK_THROWS_AS(complete_match_accuracy(model, {}), Error);
}

TEST_CASE("training solves a separable dataset") {
  const std::vector<LinkInstance> train_set =
      separable_dataset(LinkKind::EventDct, 50);
  const std::vector<LinkInstance> val_set =
      separable_dataset(LinkKind::EventDct, 20);

  NetConfig cfg;
  cfg.kind = LinkKind::EventDct;
  cfg.attention = true;
  cfg.d_w = 12;
  cfg.d_p = 6;
  cfg.d_h = 10;
  cfg.max_offset = 5;

  TrainOptions opt;
  opt.learning_rate = 0.01;
  opt.batch_size = 10;
  opt.epochs = 30;
  opt.patience = 30;
  opt.seed = 1234;

  TrainResult result = train(train_set, val_set, cfg, opt);
  CHECK(result.best_val == 1.0);
  CHECK(result.best_epoch < 30);
  CHECK(result.epochs_run == result.best_epoch + 1);  // stops once perfect
  CHECK(complete_match_accuracy(result.model, val_set) == 1.0);
  CHECK(complete_match_accuracy(result.model, train_set) == 1.0);
  REQUIRE(result.loss_history.size() ==
          static_cast<std::size_t>(result.epochs_run));
  CHECK(result.loss_history.back() < result.loss_history.front());
}

TEST_CASE("training is deterministic per seed") {
  const std::vector<LinkInstance> train_set =
      separable_dataset(LinkKind::EventTimex, 24);
  NetConfig cfg = small_config(LinkKind::EventTimex);
  TrainOptions opt;
  opt.learning_rate = 0.01;
  opt.batch_size = 8;
  opt.epochs = 4;
  opt.patience = 4;
  opt.seed = 99;

  TrainResult a = train(train_set, {}, cfg, opt);
  TrainResult b = train(train_set, {}, cfg, opt);
  CHECK(a.val_history == b.val_history);
  CHECK(a.loss_history == b.loss_history);

  ScratchDir dir("nn_det");
  save_model(dir.file("a.bin"), a.model);
  save_model(dir.file("b.bin"), b.model);
  CHECK(read_file(dir.file("a.bin")) == read_file(dir.file("b.bin")));

  opt.seed = 100;
  TrainResult c = train(train_set, {}, cfg, opt);
  save_model(dir.file("c.bin"), c.model);
  CHECK(read_file(dir.file("a.bin")) != read_file(dir.file("c.bin")));
}

TEST_CASE("early stopping waits out the patience window") {
  // Validation golds contradict the training golds, so validation accuracy
  // pins to zero once the model locks onto the training signal.
  std::vector<LinkInstance> train_set;
  for (LinkInstance li : separable_dataset(LinkKind::EventDct, 12)) {
    li.gold = uniform_vec(SRLabel::Before);
    train_set.push_back(li);
  }
  std::vector<LinkInstance> val_set;
  for (LinkInstance li : separable_dataset(LinkKind::EventDct, 4)) {
    li.gold = uniform_vec(SRLabel::After);
    val_set.push_back(li);
  }

  NetConfig cfg = small_config(LinkKind::EventDct);
  TrainOptions opt;
  opt.learning_rate = 0.05;
  opt.batch_size = 6;
  opt.epochs = 50;
  opt.patience = 5;
  opt.seed = 7;

  TrainResult result = train(train_set, val_set, cfg, opt);
  CHECK(result.best_val == 0.0);
  CHECK(result.epochs_run == result.best_epoch + 1 + opt.patience);
  CHECK(result.epochs_run < 50);
}

TEST_CASE("train input validation") {
  const std::vector<LinkInstance> data =
      separable_dataset(LinkKind::EventDct, 8);
  NetConfig cfg = small_config(LinkKind::EventDct);
  TrainOptions opt;
  opt.epochs = 1;

  CHECK_THROWS_AS(train({}, {}, cfg, opt), Error);

  std::vector<LinkInstance> mixed = data;
  mixed.push_back(separable_dataset(LinkKind::EventTimex, 1)[0]);
  CHECK_THROWS_AS(train(mixed, {}, cfg, opt), Error);

  std::vector<LinkInstance> no_gold = data;
  no_gold[3].gold.reset();
  CHECK_THROWS_AS(train(no_gold, {}, cfg, opt), Error);

  TrainOptions bad = opt;
  bad.batch_size = 0;
  CHECK_THROWS_AS(train(data, {}, cfg, bad), ConfigError);
  bad = opt;
  bad.learning_rate = 0.0;
  CHECK_THROWS_AS(train(data, {}, cfg, bad), ConfigError);
  bad = opt;
  bad.epochs = 0;
  CHECK_THROWS_AS(train(data, {}, cfg, bad), ConfigError);
  bad = opt;
  bad.patience = 0;
  CHECK_THROWS_AS(train(data, {}, cfg, bad), ConfigError);
}

TEST_CASE("model files round-trip bit-exactly") {
  ModelParameters model = small_model(LinkKind::EventTimex, 55);
  ScratchDir dir("nn_io");
  const std::string path = dir.file("model.bin");
  save_model(path, model);

  ModelParameters back = load_model(path);
  CHECK(back.config.kind == model.config.kind);
  CHECK(back.config.attention == model.config.attention);
  CHECK(back.config.d_w == model.config.d_w);
  CHECK(back.config.d_p == model.config.d_p);
  CHECK(back.config.d_h == model.config.d_h);
  CHECK(back.config.max_offset == model.config.max_offset);
  CHECK(back.vocab == model.vocab);
  for_each_matrix(model.params, [&](const char* name, Matrix& m) {
    for_each_matrix(back.params, [&](const char* bname, Matrix& bm) {
      if (std::string(name) == bname) CHECK(m == bm);
    });
  });
  // The loaded model predicts identically.
  Rng rng(55);
  LinkInstance li = small_instance(LinkKind::EventTimex, rng);
  CHECK(forward(li, model).probs == forward(li, back).probs);

  // Saving the loaded model reproduces the file byte for byte.
  const std::string again = dir.file("again.bin");
  save_model(again, back);
  CHECK(read_file(path) == read_file(again));

  // Event–DCT models (with the empty attn_timex slot) round-trip too.
  ModelParameters ed = small_model(LinkKind::EventDct, 56);
  save_model(dir.file("ed.bin"), ed);
  ModelParameters ed_back = load_model(dir.file("ed.bin"));
  CHECK(ed_back.params.attn_timex.size() == 0);
  CHECK(ed_back.params.word_emb == ed.params.word_emb);
}

TEST_CASE("model loader rejects corruption") {
  ModelParameters model = small_model(LinkKind::EventDct, 60);
  ScratchDir dir("nn_corrupt");
  const std::string path = dir.file("model.bin");
  save_model(path, model);
  const std::string clean = read_file(path);

  // A flipped byte in the middle breaks the checksum.
  std::string flipped = clean;
  flipped[flipped.size() / 2] = static_cast<char>(flipped[flipped.size() / 2] ^ 0x40);
  write_file(path, flipped);
  CHECK_THROWS_AS(load_model(path), ParseError);

  // Truncation.
  write_file(path, clean.substr(0, clean.size() - 9));
  CHECK_THROWS_AS(load_model(path), ParseError);
  write_file(path, clean.substr(0, 5));
  CHECK_THROWS_AS(load_model(path), ParseError);

  // Wrong magic (checksum recomputed so only the magic check can fire).
  CHECK_THROWS_AS(load_model("/nonexistent/model.bin"), IoError);
  write_file(path, clean);
  CHECK(load_model(path).vocab == model.vocab);
}

TEST_CASE("predict matches forward argmax") {
  ModelParameters model = small_model(LinkKind::EventDct, 70);
  Rng rng(70);
  for (int i = 0; i < 5; ++i) {
    LinkInstance li = small_instance(LinkKind::EventDct, rng);
    CHECK(predict(model, li) == forward(li, model).argmax());
  }
}
