#pragma once

// Translational embeddings: a triple (h, r, t) is plausible when
// v_h + v_r is close to v_t in L2.

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "mkg/complete.hpp"
#include "mkg/graph.hpp"

namespace mkg::transe {

using Vec = std::vector<double>;

struct IdTriple {
  std::uint32_t head = 0;
  std::uint32_t relation = 0;
  std::uint32_t tail = 0;

  friend bool operator==(const IdTriple&, const IdTriple&) = default;
};

struct TransEConfig {
  std::size_t dim = 50;
  double margin = 1.0;
  double learning_rate = 0.01;
  std::size_t epochs = 100;
  std::size_t negatives = 1;
  std::uint64_t seed = 42;
};

struct EmbeddingTable {
  std::vector<Vec> entities;
  std::vector<Vec> relations;
  std::vector<double> epoch_loss;  // mean loss per positive, one per epoch
  TransEConfig config;

  std::size_t dim() const { return config.dim; }
};

// Random table as training would start it (entities unit length).
EmbeddingTable initial_table(std::size_t n_entities, std::size_t n_relations,
                             const TransEConfig& config);

// Throws Error(EmptyGraph) when `triples` is empty, Error(UnknownId) when an
// id is out of range.
EmbeddingTable train(const std::vector<IdTriple>& triples, std::size_t n_entities,
                     std::size_t n_relations, const TransEConfig& config);

// -||h + r - t||. Throws Error(UnknownId).
double score(const EmbeddingTable& table, std::uint32_t h, std::uint32_t r, std::uint32_t t);
double distance(const Vec& h, const Vec& r, const Vec& t);

// max(0, margin + d(h + r, t) - d(h' + r, t')) and its gradient with respect
// to (h, r, t, h', t'), treating all five as independent vectors.
double margin_loss(const Vec& h, const Vec& r, const Vec& t, const Vec& hn, const Vec& tn,
                   double margin);
std::array<Vec, 5> margin_loss_gradient(const Vec& h, const Vec& r, const Vec& t,
                                        const Vec& hn, const Vec& tn, double margin);

// Raw tail ranking over every entity; 1-based rank of the true tail.
std::size_t tail_rank(const EmbeddingTable& table, const IdTriple& triple);
double mean_reciprocal_rank(const EmbeddingTable& table, const std::vector<IdTriple>& triples);

// Graph adapter: node ids are entity ids, MENTIONED_IN edges are skipped.
std::vector<IdTriple> graph_triples(const graph::GraphStore& store);
std::uint32_t relation_index(RelationKind relation);
EmbeddingTable train(const graph::GraphStore& store, const TransEConfig& config);

// Unlinked (material, application) pairs scored by 1 / (1 + d(m + r, a)).
std::vector<complete::PredictionScore> rank_candidates(const graph::GraphStore& store,
                                                       const EmbeddingTable& table,
                                                       std::size_t top_k);

}  // namespace mkg::transe
