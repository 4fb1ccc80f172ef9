#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "mkg/embed.hpp"
#include "mkg/error.hpp"
#include "mkg/rng.hpp"
#include "oracles.hpp"

namespace mkg::embed {
namespace {

double norm(const Vector& v) {
  double n = 0;
  for (double x : v) n += x * x;
  return std::sqrt(n);
}

std::vector<std::string> toy_corpus() {
  return {"lithium ion battery cathode with high capacity",
          "sodium ion battery anode with high capacity",
          "perovskite solar cell with high efficiency",
          "organic solar cell with high efficiency",
          "lithium ion battery electrolyte stability",
          "perovskite solar cell stability"};
}

TEST(Embed, DeterministicUnitVectors) {
  const Embedder e;
  const auto a = e.embed("solar cell");
  EXPECT_EQ(a, e.embed("solar cell"));
  EXPECT_NEAR(norm(a), 1.0, 1e-9);
  EXPECT_NEAR(cosine(a, a), 1.0, 1e-12);
  const auto g = e.embed("zqxvw");
  EXPECT_EQ(g.size(), 100u);
  for (double x : g) EXPECT_TRUE(std::isfinite(x));
  EXPECT_NEAR(norm(g), 1.0, 1e-9);
}

TEST(Embed, CaseAndWhitespaceInvariant) {
  const Embedder e;
  EXPECT_EQ(e.embed("Solar  Cell "), e.embed("solar cell"));
  const auto t = Embedder::train(toy_corpus(), {.dim = 8});
  EXPECT_EQ(t.embed("  LITHIUM ion"), t.embed("lithium ion"));
}

TEST(Embed, EmptyPhrase) {
  const Embedder e;
  try {
    e.embed("   ");
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::EmptyPhrase);
  }
}

TEST(Embed, TrainedIsDeterministic) {
  EmbedConfig cfg;
  cfg.dim = 8;
  const auto a = Embedder::train(toy_corpus(), cfg);
  const auto b = Embedder::train(toy_corpus(), cfg);
  EXPECT_TRUE(a.in_vocabulary("lithium"));
  EXPECT_FALSE(a.in_vocabulary("zqxvw"));
  EXPECT_EQ(a.embed("perovskite solar cell"), b.embed("perovskite solar cell"));
  EXPECT_NEAR(norm(a.embed("zqxvw")), 1.0, 1e-9);
}

TEST(Embed, CacheRoundTrip) {
  EmbedConfig cfg;
  cfg.dim = 8;
  const auto corpus = toy_corpus();
  const auto a = Embedder::train(corpus, cfg);
  const auto path = std::filesystem::temp_directory_path() / "mkg_embed_cache_test.bin";
  a.save_cache(path);
  const auto hash = Embedder::hash_corpus(corpus, cfg);
  EXPECT_EQ(hash, a.corpus_hash());
  const auto b = Embedder::load_cache(path, hash, cfg.seed, cfg.dim);
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(b->vocabulary_size(), a.vocabulary_size());
  EXPECT_EQ(b->embed("lithium ion battery"), a.embed("lithium ion battery"));
  EXPECT_FALSE(Embedder::load_cache(path, hash + 1, cfg.seed, cfg.dim).has_value());
  EXPECT_FALSE(Embedder::load_cache(path, hash, cfg.seed + 1, cfg.dim).has_value());
  EXPECT_FALSE(Embedder::load_cache(path, hash, cfg.seed, 9).has_value());
  EXPECT_FALSE(Embedder::load_cache(path.string() + ".missing", hash, cfg.seed, cfg.dim));
  std::filesystem::remove(path);
}

TEST(Cosine, Basics) {
  const Vector x{1, 0}, y{0, 1}, nx{-1, 0};
  EXPECT_DOUBLE_EQ(cosine(x, x), 1.0);
  EXPECT_DOUBLE_EQ(cosine(x, y), 0.0);
  EXPECT_DOUBLE_EQ(cosine(x, nx), -1.0);
  EXPECT_DOUBLE_EQ(cosine(x, Vector{0, 0}), 0.0);
  EXPECT_THROW(cosine(x, Vector{1, 0, 0}), Error);
}

TEST(Dbscan, TwoBlobs) {
  std::vector<Vector> pts = {{1, 0.01}, {1, 0.02}, {1, 0}, {0, 1}, {0.01, 1}, {0.02, 1}};
  const auto c = dbscan(pts, 0.01, 2);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].members, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(c[1].members, (std::vector<std::size_t>{3, 4, 5}));
}

TEST(Dbscan, AllNoiseAndSingleton) {
  std::vector<Vector> spread = {{1, 0}, {0, 1}, {-1, 0}};
  const auto noise = dbscan(spread, 0.1, 2);
  ASSERT_EQ(noise.size(), 1u);
  EXPECT_EQ(noise[0].cluster_id, kNoise);
  EXPECT_EQ(noise[0].members.size(), 3u);
  const auto one = dbscan(std::vector<Vector>{{1, 0}}, 0.1, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].cluster_id, 0);
}

TEST(Dbscan, BadParameters) {
  std::vector<Vector> pts = {{1, 0}};
  try {
    dbscan(pts, 0.0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidEps);
  }
  try {
    dbscan(pts, 0.1, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidMinPts);
  }
}

TEST(Dbscan, BorderGoesToFirstCluster) {
  // The middle point is within eps of both cores but is not a core itself.
  const double a = 0.3;
  auto at = [](double t) { return Vector{std::cos(t), std::sin(t)}; };
  std::vector<Vector> pts = {at(-a), at(-1.5 * a), at(-1.9 * a), at(0),
                             at(a),  at(1.5 * a),  at(1.9 * a)};
  const double eps = 1.0 - std::cos(a) + 1e-9;
  const auto labels = dbscan_labels(pts, eps, 4);
  EXPECT_EQ(labels, (std::vector<int>{0, 0, 0, 0, 1, 1, 1}));
  EXPECT_EQ(labels, oracle::dbscan(pts, eps, 4));
}

TEST(Dbscan, MatchesReference) {
  Rng rng(9);
  for (int inst = 0; inst < 20; ++inst) {
    std::vector<Vector> pts(5 + rng.below(80), Vector(3));
    for (auto& p : pts) {
      for (double& x : p) x = rng.uniform(-1, 1);
    }
    const double eps = rng.uniform(0.01, 0.3);
    const std::size_t min_pts = 1 + rng.below(4);
    EXPECT_EQ(oracle::canonical_labels(dbscan_labels(pts, eps, min_pts)),
              oracle::canonical_labels(oracle::dbscan(pts, eps, min_pts)));
  }
}

TEST(Neighborhoods, ParallelMatchesSerial) {
  Rng rng(10);
  std::vector<Vector> pts(300, Vector(6));
  for (auto& p : pts) {
    for (double& x : p) x = rng.uniform(-1, 1);
  }
  EXPECT_EQ(neighborhoods(pts, 0.2), neighborhoods_serial(pts, 0.2));
}

}  // namespace
}  // namespace mkg::embed
