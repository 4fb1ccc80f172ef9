#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "mkg/complete.hpp"
#include "mkg/error.hpp"

namespace mkg::complete {
namespace {

ExtractionRecord material(const std::string& doi, const std::string& formula,
                          std::vector<std::string> props, std::vector<std::string> descs = {}) {
  ExtractionRecord r;
  r.doi = doi;
  r.year = 2010;
  r.add(Label::Formula, formula);
  for (const auto& p : props) r.add(Label::Property, p);
  for (const auto& d : descs) r.add(Label::Descriptor, d);
  return r;
}

// M1 is unlinked; M2 is linked to A, which carries p1 and d1.
GraphStore small_graph() {
  GraphStore s;
  s.insert_record(material("d1", "M1", {"p1", "p2"}, {"d1"}));
  auto r2 = material("d2", "M2", {"p1", "p3"});
  r2.applications.push_back({"A", {}, {"p1"}, {"d1"}});
  s.insert_record(r2);
  return s;
}

// Five materials with disjoint properties, M1 linked to A, M6 a copy of M1.
GraphStore planted_graph() {
  GraphStore s;
  auto m1 = material("d1", "M1", {"p1", "p2"}, {"x"});
  m1.applications.push_back({"A", {}, {}, {}});
  s.insert_record(m1);
  for (int i = 2; i <= 5; ++i) {
    const auto n = std::to_string(i);
    s.insert_record(material("d" + n, "M" + n, {"q" + n}, {"y" + n}));
  }
  s.insert_record(material("d6", "M6", {"p1", "p2"}, {"x"}));
  return s;
}

NodeId id(const GraphStore& s, Label l, const char* v) { return *s.find(l, v); }

TEST(JMat, Examples) {
  const AttributeSets a = {{Label::Property, {"x", "y"}}, {Label::Descriptor, {"d"}}};
  const AttributeSets b = {{Label::Property, {"y", "z"}}};
  AttributeWeights prop_only;
  prop_only.w = {{Label::Property, 1.0}};
  EXPECT_DOUBLE_EQ(j_mat(a, b, prop_only), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(j_mat(a, b, AttributeWeights::uniform()), 0.2 / 3.0);
  EXPECT_DOUBLE_EQ(j_mat(a, a, prop_only), 1.0);
  EXPECT_DOUBLE_EQ(j_mat({}, {}, prop_only), 0.0);
  AttributeWeights bad;
  bad.w = {{Label::Property, 0.7}};
  try {
    j_mat(a, b, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WeightsNotNormalized);
  }
  bad.w = {{Label::Property, 1.5}, {Label::Descriptor, -0.5}};
  EXPECT_THROW(j_mat(a, b, bad), Error);
}

TEST(Scores, SmallGraph) {
  const auto s = small_graph();
  const auto m1 = id(s, Label::Formula, "M1");
  const auto a = id(s, Label::Application, "A");
  const auto w = AttributeWeights::uniform();
  // Property 1/2 and Descriptor 1, each weighted 1/2 on the application side.
  EXPECT_DOUBLE_EQ(s_score(s, m1, a, w), 0.75);
  // Only M2 links to A; J_mat(M1, M2) is 1/3 on Property times 0.2.
  EXPECT_DOUBLE_EQ(f_score(s, m1, a, w, 5), 0.2 / 3.0);
  // Neighbours {p1, p2, d1} and {M2, p1, d1}.
  EXPECT_DOUBLE_EQ(t_score(s, m1, a), 0.5);
  EXPECT_EQ(candidate_materials(s).size(), 2u);
  EXPECT_EQ(applications(s), std::vector<NodeId>{a});

  const auto preds = rank_candidates(s, CompletionParams{}, 10);
  ASSERT_EQ(preds.size(), 1u);
  EXPECT_EQ(preds[0].material, m1);
  EXPECT_NEAR(preds[0].combined, (0.75 + 0.2 / 3.0 + 0.5) / 3.0, 1e-12);
}

TEST(Scores, WrongNodeKind) {
  const auto s = small_graph();
  const auto m1 = id(s, Label::Formula, "M1");
  const auto a = id(s, Label::Application, "A");
  const auto p = id(s, Label::Property, "p1");
  for (auto [x, y] : {std::pair{a, m1}, std::pair{p, a}, std::pair{m1, p}}) {
    try {
      s_score(s, x, y, AttributeWeights::uniform());
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::WrongNodeKind);
    }
    EXPECT_THROW(t_score(s, x, y), Error);
  }
}

TEST(Scores, FAveragesTopK) {
  GraphStore s;
  s.insert_record(material("d0", "M0", {"a", "b"}));
  // Linked materials with J(M0, .) = 1, 1/2 and 0 on Property.
  const std::vector<std::vector<std::string>> props = {{"a", "b"}, {"a"}, {"z"}};
  for (std::size_t i = 0; i < props.size(); ++i) {
    auto r = material("e" + std::to_string(i), "L" + std::to_string(i), props[i]);
    r.applications.push_back({"A", {}, {}, {}});
    s.insert_record(r);
  }
  AttributeWeights w;
  w.w = {{Label::Property, 1.0}};
  const auto m = id(s, Label::Formula, "M0");
  const auto a = id(s, Label::Application, "A");
  EXPECT_DOUBLE_EQ(f_score(s, m, a, w, 1), 1.0);
  EXPECT_DOUBLE_EQ(f_score(s, m, a, w, 2), 0.75);
  EXPECT_DOUBLE_EQ(f_score(s, m, a, w, 3), 0.5);
  EXPECT_DOUBLE_EQ(f_score(s, m, a, w, 10), 0.5);
}

TEST(Rank, PlantedAnalogyFirst) {
  const auto s = planted_graph();
  CompletionParams p;
  p.alpha = 0.0;
  p.beta = 1.0;
  p.gamma = 0.0;
  const auto preds = rank_candidates(s, p, 3);
  ASSERT_EQ(preds.size(), 3u);
  EXPECT_EQ(s.node(preds[0].material).value, "M6");
  EXPECT_GT(preds[0].combined, preds[1].combined);
  EXPECT_TRUE(rank_candidates(s, p, 0).empty());
  // Linked pairs are never proposed.
  for (const auto& x : rank_candidates(s, p, 100)) EXPECT_NE(s.node(x.material).value, "M1");
}

TEST(Rank, ParallelMatchesSerial) {
  Rng rng(21);
  for (int round = 0; round < 10; ++round) {
    const auto s = fixtures::random_scoring_graph(rng, 30 + rng.below(30), 3 + rng.below(5));
    CompletionParams p;
    p.alpha = 0.5;
    p.beta = 0.3;
    p.gamma = 0.2;
    p.k = 1 + rng.below(5);
    const auto par = rank_candidates(s, p, 40);
    const auto ser = rank_candidates_serial(s, p, 40);
    ASSERT_EQ(par.size(), ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
      EXPECT_EQ(par[i].material, ser[i].material);
      EXPECT_EQ(par[i].application, ser[i].application);
      EXPECT_EQ(par[i].combined, ser[i].combined);
    }
    for (std::size_t i = 1; i < par.size(); ++i) {
      EXPECT_FALSE(ranks_before(s, par[i], par[i - 1]));
    }
  }
}

TEST(Params, FileRoundTripAndErrors) {
  const auto path = std::filesystem::temp_directory_path() / "mkg_params.toml";
  CompletionParams p;
  p.alpha = 0.6;
  p.beta = 0.25;
  p.gamma = 0.15;
  p.k = 7;
  p.weights.w = {{Label::Property, 0.75}, {Label::Descriptor, 0.25}};
  write_params(path, p);
  const auto back = load_params(path);
  EXPECT_DOUBLE_EQ(back.alpha, 0.6);
  EXPECT_DOUBLE_EQ(back.gamma, 0.15);
  EXPECT_EQ(back.k, 7u);
  EXPECT_EQ(back.weights.w, p.weights.w);

  auto expect_kind = [&](const std::string& body, ErrorKind kind) {
    {
      std::ofstream out(path);
      out << body;
    }
    try {
      load_params(path).validate();
      ADD_FAILURE() << body;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), kind) << body;
    }
  };
  expect_kind("alpha = 0.5\nbeta = 0.5\ngamma = 0.5\n", ErrorKind::InvalidArgument);
  expect_kind("colour = 1\n", ErrorKind::InvalidArgument);
  expect_kind("w.Property = 0.5\n", ErrorKind::WeightsNotNormalized);
  expect_kind("alpha = x\n", ErrorKind::InvalidArgument);
  std::filesystem::remove(path);
  EXPECT_THROW(load_params(path), Error);
}

TEST(Grid, Sizes) {
  EXPECT_EQ(simplex_grid(0.05).size(), 231u);
  EXPECT_EQ(simplex_grid(0.5).size(), 6u);
  EXPECT_EQ(simplex_grid(1.0).size(), 3u);
  for (const auto& g : simplex_grid(0.1)) EXPECT_NEAR(g[0] + g[1] + g[2], 1.0, 1e-12);
  EXPECT_THROW(simplex_grid(0.3), Error);
  EXPECT_THROW(simplex_grid(0.0), Error);
}

TEST(Optimize, FindsPlantedLink) {
  const auto tra = planted_graph();
  GraphStore ver;
  auto link = material("v", "M6", {});
  link.applications.push_back({"A", {}, {}, {}});
  ver.insert_record(link);
  GridSpec grid;
  grid.step = 0.25;
  grid.top_k = 1;
  const auto r = optimize_params(tra, ver, grid);
  EXPECT_EQ(r.en, 0u);
  EXPECT_EQ(r.evaluated, 15u);
  EXPECT_GT(r.params.beta, 0.0);
  const auto preds = rank_candidates(tra, r.params, 1);
  EXPECT_EQ(count_hits(tra, preds, ver), 1u);
  try {
    optimize_params(tra, GraphStore{}, grid);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyValidationGraph);
  }
}

TEST(Optimize, AllHitsPickAlphaCorner) {
  const auto tra = planted_graph();
  GraphStore ver;
  for (int i = 2; i <= 6; ++i) {
    auto r = material("v" + std::to_string(i), "M" + std::to_string(i), {});
    r.applications.push_back({"A", {}, {}, {}});
    ver.insert_record(r);
  }
  GridSpec grid;
  grid.step = 0.5;
  grid.top_k = 10;
  const auto r = optimize_params(tra, ver, grid);
  EXPECT_EQ(r.evaluated, 6u);
  EXPECT_EQ(r.en, 0u);
  EXPECT_EQ(r.params.alpha, 1.0);
  EXPECT_EQ(r.params.beta, 0.0);
  EXPECT_EQ(r.params.gamma, 0.0);
}

TEST(Optimize, FOnlySignalFavoursBeta) {
  // M6 copies every attribute of M1, which is linked to A. Decoy D shares the
  // application's own attributes, so S and T point at the wrong pair.
  auto full = [](const std::string& doi, const std::string& formula) {
    auto r = material(doi, formula, {"p1", "p2"}, {"x"});
    r.add(Label::StructurePhase, "olivine");
    r.add(Label::Synthesis, "sol-gel");
    r.add(Label::Characterization, "XRD");
    return r;
  };
  GraphStore tra;
  auto m1 = full("d1", "M1");
  m1.applications.push_back({"A", {}, {"pa"}, {"da"}});
  tra.insert_record(m1);
  tra.insert_record(full("d6", "M6"));
  tra.insert_record(material("dd", "D", {"pa"}, {"da"}));
  const auto m6 = id(tra, Label::Formula, "M6");
  const auto a = id(tra, Label::Application, "A");
  EXPECT_DOUBLE_EQ(f_score(tra, m6, a, AttributeWeights::uniform(), 5), 1.0);

  GraphStore ver;
  auto link = material("v", "M6", {});
  link.applications.push_back({"A", {}, {}, {}});
  ver.insert_record(link);
  GridSpec grid;
  grid.step = 0.25;
  grid.top_k = 1;
  const auto r = optimize_params(tra, ver, grid);
  EXPECT_EQ(r.en, 0u);
  EXPECT_GT(r.params.beta, r.params.alpha);
  EXPECT_GT(r.params.beta, r.params.gamma);
}

TEST(Predictions, CsvLayout) {
  const auto s = planted_graph();
  const auto path = std::filesystem::temp_directory_path() / "mkg_preds.csv";
  write_predictions(path, s, rank_candidates(s, CompletionParams{}, 4));
  std::ifstream in(path);
  std::string line;
  std::size_t rows = 0;
  std::getline(in, line);
  EXPECT_EQ(line, "material_label,material_value,application_value,s,f,t,combined,rank");
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4u);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace mkg::complete
