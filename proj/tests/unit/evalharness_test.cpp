#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "mkg/error.hpp"
#include "mkg/evalharness.hpp"
#include "mkg/synth.hpp"
#include "oracles.hpp"

namespace mkg::eval {
namespace {

ExtractionRecord rec(const std::string& doi, int year, const std::string& formula,
                     std::vector<std::string> props = {}, std::vector<std::string> apps = {}) {
  ExtractionRecord r;
  r.doi = doi;
  r.year = year;
  r.add(Label::Formula, formula);
  for (const auto& p : props) r.add(Label::Property, p);
  for (const auto& a : apps) r.applications.push_back({a, {}, {}, {}});
  return r;
}

TEST(Metrics, HandCounts) {
  const auto m = MetricReport::from_counts(Task::NER, 3, 1, 2);
  EXPECT_DOUBLE_EQ(m.precision, 0.75);
  EXPECT_DOUBLE_EQ(m.recall, 0.6);
  EXPECT_NEAR(m.f1, 0.666667, 1e-6);
  const auto zero = MetricReport::from_counts(Task::ER, 0, 0, 4);
  EXPECT_EQ(zero.precision, 0.0);
  EXPECT_EQ(zero.f1, 0.0);
}

TEST(Metrics, IdentityAndEmpty) {
  Rng rng(2);
  std::vector<ExtractionRecord> gold;
  for (std::size_t i = 0; i < 20; ++i) gold.push_back(fixtures::random_record(rng, i));
  for (Task t : kAllTasks) {
    const auto same = prf1(gold, gold, t);
    EXPECT_EQ(same.f1, 1.0);
    EXPECT_EQ(same.fp, 0u);
    const auto none = prf1(gold, {}, t);
    EXPECT_EQ(none.tp, 0u);
    EXPECT_EQ(none.f1, 0.0);
    EXPECT_GT(none.fn, 0u);
  }
}

TEST(Metrics, TaskSemantics) {
  ExtractionRecord g = rec("d", 2000, "TiO2", {"Band Gap"});
  ExtractionRecord p = g;
  p.entities.clear();
  p.add(Label::Name, "TiO2");
  p.add(Label::Property, "band gap");
  // NER ignores the label and case; RE keeps the label; ER is exact.
  EXPECT_EQ(prf1({g}, {p}, Task::NER).tp, 2u);
  EXPECT_EQ(prf1({g}, {p}, Task::RE).tp, 1u);
  EXPECT_EQ(prf1({g}, {p}, Task::ER).tp, 0u);
  p.doi = "other";
  try {
    prf1({g}, {p}, Task::NER);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DoiMismatch);
  }
}

TEST(Metrics, MatchesOracle) {
  Rng rng(77);
  for (int i = 0; i < 40; ++i) {
    const auto [gold, pred] = fixtures::random_metric_fixture(rng);
    for (Task t : kAllTasks) {
      const auto got = prf1(gold, pred, t);
      const auto want = oracle::prf1(gold, pred, t);
      EXPECT_EQ(got.tp, want.tp);
      EXPECT_EQ(got.fp, want.fp);
      EXPECT_EQ(got.fn, want.fn);
    }
  }
}

GraphStore dated_store() {
  GraphStore s;
  s.insert_record(rec("a", 2016, "X", {"p"}));
  s.insert_record(rec("b", 2019, "Y", {"q"}, {"A"}));
  s.insert_record(rec("c", 2021, "Z", {"r"}));
  return s;
}

TEST(Split, RoutesByYear) {
  const auto s = dated_store();
  const auto split = temporal_split(s, 2018, 2);
  for (const auto& t : split.g_tra.triples()) EXPECT_LT(t.earliest_year, 2018);
  for (const auto& t : split.g_ver.triples()) EXPECT_EQ(t.earliest_year, 2019);
  EXPECT_EQ(split.g_ver.triples().size(), 5u);
  EXPECT_LT(split.g_tra.triples().size() + split.g_ver.triples().size(), s.triples().size());
  EXPECT_FALSE(split.has_empty_side());
  const auto all = temporal_split(s, 2018, 10);
  EXPECT_EQ(all.g_tra.triples().size() + all.g_ver.triples().size(), s.triples().size());
  EXPECT_TRUE(temporal_split(s, 2030, 1).has_empty_side());
  EXPECT_THROW(temporal_split(s, 2018, 0), Error);
}

TEST(Split, Partition) {
  Rng rng(8);
  GraphStore s;
  for (std::size_t i = 0; i < 300; ++i) s.insert_record(fixtures::random_record(rng, i));
  const auto split = temporal_split(s, 2008, 4);
  const auto tra = oracle::edge_keys(split.g_tra);
  const auto ver = oracle::edge_keys(split.g_ver);
  std::vector<oracle::EdgeKey> both;
  std::set_intersection(tra.begin(), tra.end(), ver.begin(), ver.end(), std::back_inserter(both));
  EXPECT_TRUE(both.empty());
  std::size_t expected = 0;
  for (const auto& t : s.triples()) expected += t.earliest_year < 2012;
  EXPECT_EQ(tra.size() + ver.size(), expected);
  EXPECT_TRUE(check_invariants(split.g_tra).empty());
  EXPECT_TRUE(check_invariants(split.g_ver).empty());
}

TEST(Validate, PlantedCurve) {
  const int cutoff = 2010;
  GraphStore future;
  std::vector<PredictedPair> preds;
  for (int i = 0; i < 10; ++i) {
    const auto m = "M" + std::to_string(i);
    preds.push_back({Label::Formula, m, "A"});
    if (i < 3) future.insert_record(rec("f" + m, cutoff + 1, m, {}, {"A"}));
    else if (i < 5) future.insert_record(rec("f" + m, cutoff + 3, m, {}, {"A"}));
  }
  const auto curve = validate_predictions(preds, future, cutoff, 4);
  EXPECT_EQ(curve.percent, (std::vector<double>{0.0, 30.0, 30.0, 50.0}));
  EXPECT_EQ(curve.hits, (std::vector<std::size_t>{0, 3, 3, 5}));
  const auto flat = validate_predictions(preds, GraphStore{}, cutoff, 3);
  EXPECT_EQ(flat.percent, (std::vector<double>{0.0, 0.0, 0.0}));
  GraphStore now;
  for (const auto& p : preds) now.insert_record(rec("n" + p.material, cutoff, p.material, {}, {"A"}));
  EXPECT_EQ(validate_predictions(preds, now, cutoff, 1).percent, std::vector<double>{100.0});

  const auto rows = curve_rows("network", cutoff, curve);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[3].horizon_years, 4);
  EXPECT_EQ(rows[3].percent_reported, 50.0);
}

TEST(Validate, Monotone) {
  const auto corpus = synth::generate({});
  GraphStore s;
  for (const auto& r : corpus.gold) s.insert_record(r);
  const auto split = temporal_split(s, 2012, 1);
  const auto preds = complete::rank_candidates(split.g_tra, complete::CompletionParams{}, 100);
  const auto curve = validate_predictions(to_pairs(split.g_tra, preds), s, 2012, 8);
  for (std::size_t h = 1; h < curve.percent.size(); ++h) {
    EXPECT_GE(curve.percent[h], curve.percent[h - 1]);
  }
  const double base = random_pair_baseline(split.g_tra, s, 2012, 8);
  EXPECT_GT(base, 0.0);
  EXPECT_LT(base, 1.0);
}

TEST(Validate, BaselineByHand) {
  GraphStore train;
  train.insert_record(rec("t1", 2000, "M1", {"p"}, {"A"}));
  train.insert_record(rec("t2", 2000, "M2", {"p"}, {"B"}));
  // Unlinked pairs: (M1, B) and (M2, A); one of them appears later.
  GraphStore future = train;
  future.insert_record(rec("f", 2005, "M2", {}, {"A"}));
  EXPECT_DOUBLE_EQ(random_pair_baseline(train, future, 2005, 1), 0.5);
  EXPECT_DOUBLE_EQ(random_pair_baseline(train, future, 2001, 1), 0.0);
}

TEST(Ablate, NothingDisabledIsZero) {
  const auto corpus = synth::generate({});
  resolve::PipelineConfig cfg;
  cfg.dictionaries = corpus.dictionaries;
  const auto r = ablate(corpus.records, corpus.gold, cfg, std::nullopt);
  for (Task t : kAllTasks) EXPECT_EQ(r.delta_f1.at(t), 0.0);
  const auto ed = ablate(corpus.records, corpus.gold, cfg, resolve::Stage::ED);
  EXPECT_LT(ed.delta_f1.at(Task::ER), 0.0);
}

TEST(Sample, ExclusionAndDeterminism) {
  Rng rng(4);
  GraphStore s;
  for (std::size_t i = 0; i < 200; ++i) s.insert_record(fixtures::random_record(rng, i));
  const auto a = sample_triples(s, 50, 1);
  EXPECT_EQ(a, sample_triples(s, 50, 1));
  EXPECT_NE(a, sample_triples(s, 50, 2));
  EXPECT_EQ(std::set<std::size_t>(a.begin(), a.end()).size(), 50u);
  for (auto i : a) {
    const auto& t = s.triples()[i];
    for (auto n : {t.head, t.tail}) {
      EXPECT_NE(s.node(n).label, Label::DOI);
      EXPECT_NE(s.node(n).label, Label::Domain);
    }
  }
  try {
    sample_triples(s, s.triples().size() + 1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotEnoughTriples);
  }
}

TEST(Trends, StarsAndDomains) {
  GraphStore s;
  auto linked = rec("a", 2010, "M1", {"p1", "p2"});
  linked.applications.push_back({"A", {"energy"}, {}, {}});
  s.insert_record(linked);
  s.insert_record(rec("b", 2010, "M2", {"p1", "p2"}));
  // M2-A becomes a real edge two years later.
  s.insert_record(rec("c", 2012, "M2", {}, {"A"}));
  complete::CompletionParams p;
  const auto table = rank_trends(s, "energy", 2010, 2013, 5, p);
  ASSERT_EQ(table.years, (std::vector<int>{2010, 2011, 2012, 2013}));
  ASSERT_FALSE(table.rankings[0].empty());
  const auto& top = table.rankings[0][0];
  EXPECT_EQ(top.material, "M2");
  EXPECT_EQ(top.reported_year, 2012);
  EXPECT_FALSE(top.reported_by(2011));
  EXPECT_TRUE(top.reported_by(2012));
  EXPECT_TRUE(top.reported_by(2013));
  // Once linked the pair is no longer a candidate.
  for (const auto& e : table.rankings[2]) EXPECT_NE(e.material, "M2");
  EXPECT_EQ(rank_trends(s, "energy", 2011, 2011, 5, p).years.size(), 1u);
  try {
    rank_trends(s, "medicine", 2010, 2011, 5, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownDomain);
  }
}

}  // namespace
}  // namespace mkg::eval
