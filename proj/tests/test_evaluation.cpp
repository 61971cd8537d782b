#include <doctest.h>

#include <json.hpp>

#include <string>
#include <vector>

#include "chronosr/error.hpp"
#include "chronosr/evaluation.hpp"
#include "chronosr/rng.hpp"
#include "testutil.hpp"

using namespace chronosr;
using testutil::certain_day;
using testutil::pin_fixture;
using testutil::quad;
using testutil::srvec;
using testutil::uniform_vec;

namespace {

SRVector rotate(const SRVector& v) {
  SRVector out;
  for (int i = 0; i < kNumSRs; ++i)
    out.set(i, static_cast<SRLabel>((static_cast<int>(v.at(i)) + 1) % 4));
  return out;
}

IAARecord record(const std::vector<std::vector<std::pair<std::string, std::string>>>& items) {
  IAARecord rec;
  int id = 0;
  for (const auto& cells : items) {
    auto& item = rec.codings["i" + std::to_string(id++)];
    for (const auto& [annotator, value] : cells) item[annotator] = value;
  }
  return rec;
}

}  // namespace

TEST_CASE("perfect predictions score ones everywhere") {
  std::vector<SRVector> golds;
  for (int i = 0; i < 8; ++i)
    golds.push_back(uniform_vec(static_cast<SRLabel>(i % 4)));
  const ScoreReport report = per_sr_scores(golds, golds);

  CHECK(report.instances == 8);
  CHECK(report.complete_match_accuracy == 1.0);
  CHECK(report.complete_match_f1 == 1.0);
  CHECK(report.macro_f1 == doctest::Approx(1.0));
  CHECK(report.micro_f1 == doctest::Approx(1.0));
  for (const SRScores& sr : report.srs) {
    CHECK(sr.accuracy == 1.0);
    CHECK(sr.macro_f1 == doctest::Approx(1.0));
    for (const LabelScore& cell : sr.labels) {
      CHECK(cell.support() == 2);
      CHECK(cell.f1() == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("an everywhere-wrong sr4 zeroes complete match only") {
  std::vector<SRVector> golds;
  std::vector<SRVector> preds;
  for (int i = 0; i < 8; ++i) {
    SRVector g = uniform_vec(static_cast<SRLabel>(i % 4));
    SRVector p = g;
    p.set(3, static_cast<SRLabel>((i + 1) % 4));
    golds.push_back(g);
    preds.push_back(p);
  }
  const ScoreReport report = per_sr_scores(golds, preds);
  for (int i = 0; i < 3; ++i) {
    CHECK(report.srs[static_cast<std::size_t>(i)].accuracy == 1.0);
    CHECK(report.srs[static_cast<std::size_t>(i)].macro_f1 == doctest::Approx(1.0));
  }
  CHECK(report.srs[3].accuracy == 0.0);
  CHECK(report.complete_match_accuracy == 0.0);
  CHECK(report.complete_match_f1 == 0.0);
  CHECK(report.micro_f1 == doctest::Approx(0.75));
}

TEST_CASE("three of four matched gives 0.75") {
  std::vector<SRVector> golds(4, uniform_vec(SRLabel::Before));
  std::vector<SRVector> preds = golds;
  preds[2].set(1, SRLabel::After);
  const ScoreReport report = per_sr_scores(golds, preds);
  CHECK(report.complete_matches == 3);
  CHECK(report.complete_match_accuracy == doctest::Approx(0.75));
}

TEST_CASE("hand-checked confusion counts") {
  // sr1: golds E E A B, preds E A A A; other positions all match.
  std::vector<SRVector> golds = {
      srvec(SRLabel::Equal, SRLabel::Vague, SRLabel::Vague, SRLabel::Vague),
      srvec(SRLabel::Equal, SRLabel::Vague, SRLabel::Vague, SRLabel::Vague),
      srvec(SRLabel::After, SRLabel::Vague, SRLabel::Vague, SRLabel::Vague),
      srvec(SRLabel::Before, SRLabel::Vague, SRLabel::Vague, SRLabel::Vague),
  };
  std::vector<SRVector> preds = golds;
  preds[1].set(0, SRLabel::After);
  preds[3].set(0, SRLabel::After);

  const ScoreReport report = per_sr_scores(golds, preds);
  const SRScores& sr1 = report.srs[0];
  const LabelScore& eq = sr1.labels[static_cast<int>(SRLabel::Equal)];
  CHECK(eq.tp == 1);
  CHECK(eq.fp == 0);
  CHECK(eq.fn == 1);
  CHECK(eq.precision() == doctest::Approx(1.0));
  CHECK(eq.recall() == doctest::Approx(0.5));
  CHECK(eq.f1() == doctest::Approx(2.0 / 3.0));
  const LabelScore& af = sr1.labels[static_cast<int>(SRLabel::After)];
  CHECK(af.tp == 1);
  CHECK(af.fp == 2);
  CHECK(af.fn == 0);
  CHECK(af.precision() == doctest::Approx(1.0 / 3.0));
  CHECK(af.recall() == doctest::Approx(1.0));
  CHECK(af.f1() == doctest::Approx(0.5));
  const LabelScore& bf = sr1.labels[static_cast<int>(SRLabel::Before)];
  CHECK(bf.tp == 0);
  CHECK(bf.fn == 1);
  CHECK(bf.f1() == 0.0);
  CHECK(sr1.accuracy == doctest::Approx(0.5));
  CHECK(sr1.macro_f1 == doctest::Approx((2.0 / 3.0 + 0.5) / 4.0));
  CHECK(report.micro_f1 == doctest::Approx(14.0 / 16.0));
  CHECK(report.complete_match_accuracy == doctest::Approx(0.5));
}

TEST_CASE("complete-match F1 equals accuracy at every coverage level") {
  Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<SRVector> golds;
    std::vector<SRVector> preds;
    const int n = 1 + static_cast<int>(rng.below(40));
    for (int i = 0; i < n; ++i) {
      SRVector g;
      SRVector p;
      for (int k = 0; k < kNumSRs; ++k) {
        g.set(k, static_cast<SRLabel>(rng.below(4)));
        p.set(k, static_cast<SRLabel>(rng.below(4)));
      }
      golds.push_back(g);
      preds.push_back(p);
    }
    const ScoreReport report = per_sr_scores(golds, preds);
    CHECK(report.complete_match_f1 == doctest::Approx(report.complete_match_accuracy).epsilon(1e-12));
  }
}

TEST_CASE("score input validation") {
  std::vector<SRVector> golds(3, uniform_vec(SRLabel::Vague));
  std::vector<SRVector> preds(2, uniform_vec(SRLabel::Vague));
  CHECK_THROWS_AS(per_sr_scores(golds, preds), Error);
  CHECK_THROWS_AS(per_sr_scores({}, {}), Error);
}

TEST_CASE("score report rendering") {
  std::vector<SRVector> golds(4, uniform_vec(SRLabel::Before));
  std::vector<SRVector> preds = golds;
  preds[0] = rotate(preds[0]);
  const ScoreReport report = per_sr_scores(golds, preds);

  const std::string json = score_report_to_json(report);
  const auto parsed = nlohmann::json::parse(json);
  CHECK(parsed["instances"] == 4);
  CHECK(parsed["per_sr"].size() == 4);
  CHECK(parsed["per_sr"][0]["labels"]["before"]["support"] == 4);
  CHECK(parsed["complete_match_accuracy"] == doctest::Approx(0.75));

  const std::string text = score_report_to_text(report);
  CHECK(text.find("sr1") != std::string::npos);
  CHECK(text.find("complete match: 0.750") != std::string::npos);
}

TEST_CASE("event time accuracy is canonical-string equality") {
  const TimeAnchor a = certain_day(1998, 1, 26);
  const TimeAnchor b = certain_day(1998, 2, 6);
  const TimeAnchor open = quad(DayPoint::from_ymd(1998, 1, 26),
                               DayPoint::from_ymd(1998, 1, 26),
                               DayPoint::from_ymd(1998, 1, 26),
                               DayPoint::blank());

  CHECK(event_time_accuracy({a, b}, {a, b}) == 1.0);
  CHECK(event_time_accuracy({a, b}, {a, a}) == 0.5);
  // A blank-containing inferred anchor never matches a certain gold.
  CHECK(event_time_accuracy({a}, {open}) == 0.0);
  // Two identical partially blank anchors do match.
  CHECK(event_time_accuracy({open}, {open}) == 1.0);
  CHECK_THROWS_AS(event_time_accuracy({a}, {a, b}), Error);
  CHECK_THROWS_AS(event_time_accuracy(std::vector<TimeAnchor>{},
                                      std::vector<TimeAnchor>{}),
                  Error);
}

TEST_CASE("event time accuracy over inference records") {
  InferredEvent with_gold;
  with_gold.anchor = certain_day(1998, 1, 26);
  with_gold.gold = certain_day(1998, 1, 26);
  InferredEvent wrong = with_gold;
  wrong.anchor = certain_day(1998, 1, 27);
  InferredEvent no_gold;
  no_gold.anchor = certain_day(1998, 3, 3);

  CHECK(event_time_accuracy({with_gold, wrong, no_gold}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(event_time_accuracy({no_gold}), Error);
}

TEST_CASE("alpha is one for perfect agreement") {
  std::vector<std::vector<std::pair<std::string, std::string>>> items;
  for (int i = 0; i < 10; ++i)
    items.push_back({{"ann1", "cat" + std::to_string(i)},
                     {"ann2", "cat" + std::to_string(i)}});
  CHECK(krippendorff_alpha(record(items)) == 1.0);
}

TEST_CASE("alpha of the two-item fixture is exactly zero") {
  // Items (A,A) and (A,B): observed disagreement 2, expected 2.
  const IAARecord rec = record({{{"ann1", "A"}, {"ann2", "A"}},
                                {{"ann1", "A"}, {"ann2", "B"}}});
  CHECK(krippendorff_alpha(rec) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("alpha with three annotators and a missing cell") {
  // i0: A,A,B  i1: A,A (third missing)  i2: B,B
  // Coincidences: o_AA=3, o_AB=o_BA=1, o_BB=2 → n_A=4, n_B=3, n=7,
  // D_o=2, D_e=(49−16−9)/6=4 → α=0.5.
  const IAARecord rec =
      record({{{"ann1", "A"}, {"ann2", "A"}, {"ann3", "B"}},
              {{"ann1", "A"}, {"ann2", "A"}},
              {{"ann1", "B"}, {"ann2", "B"}}});
  CHECK(krippendorff_alpha(rec) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("alpha ignores items with a single coding") {
  IAARecord rec = record({{{"ann1", "A"}, {"ann2", "A"}, {"ann3", "B"}},
                          {{"ann1", "A"}, {"ann2", "A"}},
                          {{"ann1", "B"}, {"ann2", "B"}}});
  const double base = krippendorff_alpha(rec);
  rec.codings["solo"] = {{"ann1", "C"}};
  CHECK(krippendorff_alpha(rec) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("alpha is invariant to relabeling and annotator order") {
  const IAARecord rec =
      record({{{"ann1", "A"}, {"ann2", "B"}},
              {{"ann1", "B"}, {"ann2", "B"}},
              {{"ann1", "A"}, {"ann2", "A"}},
              {{"ann1", "C"}, {"ann2", "B"}}});
  const double base = krippendorff_alpha(rec);

  IAARecord renamed;
  for (const auto& [item, cells] : rec.codings)
    for (const auto& [ann, v] : cells)
      renamed.codings[item][ann] = "x" + v + "y";
  CHECK(krippendorff_alpha(renamed) == doctest::Approx(base).epsilon(1e-12));

  IAARecord swapped;
  for (const auto& [item, cells] : rec.codings)
    for (const auto& [ann, v] : cells)
      swapped.codings[item][ann == "ann1" ? "ann2" : "ann1"] = v;
  CHECK(krippendorff_alpha(swapped) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("alpha degenerate inputs") {
  // One pairable item is not enough.
  CHECK_THROWS_AS(krippendorff_alpha(record({{{"a", "A"}, {"b", "B"}}})), Error);
  CHECK_THROWS_AS(krippendorff_alpha(IAARecord{}), Error);
  // A single category across all items is perfect agreement by convention.
  CHECK(krippendorff_alpha(record({{{"a", "A"}, {"b", "A"}},
                                   {{"a", "A"}, {"b", "A"}}})) == 1.0);
}

TEST_CASE("iaa tsv parsing") {
  const std::string text =
      "# item  annotator  category\n"
      "e1\tann1\t((1998-01-26,1998-01-26),(1998-01-26,1998-01-26))\n"
      "e1\tann2\t((1998-01-26,1998-01-26),(1998-01-26,1998-01-26))\n"
      "\n"
      "e2\tann1\tA\r\n"
      "e2\tann2\tB\n";
  const IAARecord rec = read_iaa_tsv(text);
  REQUIRE(rec.codings.size() == 2);
  CHECK(rec.codings.at("e1").size() == 2);
  CHECK(rec.codings.at("e2").at("ann2") == "B");
  // Categories X,X,A,B: o_XX=2, o_AB=o_BA=1 → D_o=2, D_e=10/3 → α=0.4.
  CHECK(krippendorff_alpha(rec) == doctest::Approx(0.4).epsilon(1e-9));

  CHECK_THROWS_AS(read_iaa_tsv("one\ttwo\n"), ParseError);
  CHECK_THROWS_AS(read_iaa_tsv("a\tb\tc\td\n"), ParseError);
  CHECK_THROWS_AS(read_iaa_tsv("e1\tann1\tA\ne1\tann1\tB\n"), ParseError);
  CHECK_THROWS_AS(read_iaa_tsv("\tann1\tA\n"), ParseError);
}

TEST_CASE("oracle test on the pinned corpus") {
  const std::vector<Document> docs = {pin_fixture()};

  const OracleResult sw0 = oracle_test(docs, 0);
  CHECK(sw0.events == 2);
  CHECK(sw0.accuracy == doctest::Approx(0.5));  // e2's end pair stays loose
  CHECK(sw0.avg_links == doctest::Approx(2.5));

  const OracleResult sw1 = oracle_test(docs, 1);
  CHECK(sw1.accuracy == 1.0);
  CHECK(sw1.avg_links == doctest::Approx(5.0));

  const OracleResult sw2 = oracle_test(docs, 2);
  CHECK(sw2.accuracy == 1.0);
  CHECK(sw2.avg_links == doctest::Approx(6.0));

  // Larger windows never lose accuracy and never use fewer links.
  CHECK(sw0.accuracy <= sw1.accuracy);
  CHECK(sw1.accuracy <= sw2.accuracy);
  CHECK(sw0.avg_links <= sw1.avg_links);
  CHECK(sw1.avg_links <= sw2.avg_links);
}

TEST_CASE("oracle test with DCT links only") {
  const std::vector<Document> docs = {pin_fixture()};
  for (int sw : {0, 1, 2}) {
    const OracleResult r = oracle_test(docs, sw, false);
    CHECK(r.avg_links == 1.0);  // exactly one link per event
    CHECK(r.accuracy == 0.0);   // before-only clues cannot pin these anchors
  }

  // A corpus without usable timexes behaves like the DCT-only run.
  Document bare = pin_fixture();
  bare.timexes.clear();
  const OracleResult et = oracle_test({bare}, 2, true);
  const OracleResult ed = oracle_test({bare}, 2, false);
  CHECK(et.accuracy == ed.accuracy);
  CHECK(et.avg_links == 1.0);
}

TEST_CASE("oracle test needs gold anchors") {
  Document doc = pin_fixture();
  for (EventMention& ev : doc.events) ev.gold_anchor.reset();
  CHECK_THROWS_AS(oracle_test({doc}, 1), Error);
}

TEST_CASE("oracle result rendering") {
  const OracleResult r = oracle_test({pin_fixture()}, 1);
  const auto parsed = nlohmann::json::parse(oracle_result_to_json(r));
  CHECK(parsed["sentence_window"] == 1);
  CHECK(parsed["timex_links"] == true);
  CHECK(parsed["events"] == 2);
  CHECK(parsed["accuracy"] == doctest::Approx(1.0));
  CHECK(parsed["avg_links"] == doctest::Approx(5.0));
  const std::string text = oracle_result_to_text(r);
  CHECK(text.find("window 1") != std::string::npos);
  CHECK(text.find("avg links 5.000") != std::string::npos);
}
