#include "mkg/transe.hpp"

#include <algorithm>
#include <cmath>

#include "mkg/error.hpp"
#include "mkg/rng.hpp"

namespace mkg::transe {

namespace {

void normalize(Vec& v) {
  double n = 0.0;
  for (double x : v) n += x * x;
  n = std::sqrt(n);
  if (n > 0.0) {
    for (double& x : v) x /= n;
  }
}

Vec random_vector(Rng& rng, std::size_t dim) {
  const double bound = 6.0 / std::sqrt(static_cast<double>(dim));
  Vec v(dim);
  for (double& x : v) x = rng.uniform(-bound, bound);
  return v;
}

// (h + r - t) / ||h + r - t||, zero at the origin.
Vec unit_residual(const Vec& h, const Vec& r, const Vec& t, double& norm) {
  Vec d(h.size());
  double n = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    d[i] = h[i] + r[i] - t[i];
    n += d[i] * d[i];
  }
  norm = std::sqrt(n);
  for (double& x : d) x = norm > 0.0 ? x / norm : 0.0;
  return d;
}

void check_id(std::size_t id, std::size_t limit, const char* what) {
  if (id >= limit) {
    throw Error(ErrorKind::UnknownId, std::string(what) + " " + std::to_string(id));
  }
}

}  // namespace

double distance(const Vec& h, const Vec& r, const Vec& t) {
  if (h.size() != r.size() || h.size() != t.size()) {
    throw Error(ErrorKind::DimensionMismatch, "vector sizes differ");
  }
  double n = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double d = h[i] + r[i] - t[i];
    n += d * d;
  }
  return std::sqrt(n);
}

double margin_loss(const Vec& h, const Vec& r, const Vec& t, const Vec& hn, const Vec& tn,
                   double margin) {
  return std::max(0.0, margin + distance(h, r, t) - distance(hn, r, tn));
}

std::array<Vec, 5> margin_loss_gradient(const Vec& h, const Vec& r, const Vec& t,
                                        const Vec& hn, const Vec& tn, double margin) {
  const std::size_t d = h.size();
  std::array<Vec, 5> g{Vec(d, 0.0), Vec(d, 0.0), Vec(d, 0.0), Vec(d, 0.0), Vec(d, 0.0)};
  if (margin_loss(h, r, t, hn, tn, margin) <= 0.0) return g;
  double np = 0.0;
  double nn = 0.0;
  const Vec up = unit_residual(h, r, t, np);
  const Vec un = unit_residual(hn, r, tn, nn);
  for (std::size_t i = 0; i < d; ++i) {
    g[0][i] = up[i];
    g[1][i] = up[i] - un[i];
    g[2][i] = -up[i];
    g[3][i] = -un[i];
    g[4][i] = un[i];
  }
  return g;
}

EmbeddingTable initial_table(std::size_t n_entities, std::size_t n_relations,
                             const TransEConfig& config) {
  if (config.dim == 0) throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
  Rng rng(config.seed);
  EmbeddingTable table;
  table.config = config;
  table.relations.reserve(n_relations);
  for (std::size_t i = 0; i < n_relations; ++i) {
    table.relations.push_back(random_vector(rng, config.dim));
    normalize(table.relations.back());
  }
  table.entities.reserve(n_entities);
  for (std::size_t i = 0; i < n_entities; ++i) {
    table.entities.push_back(random_vector(rng, config.dim));
    normalize(table.entities.back());
  }
  return table;
}

EmbeddingTable train(const std::vector<IdTriple>& triples, std::size_t n_entities,
                     std::size_t n_relations, const TransEConfig& config) {
  if (triples.empty()) throw Error(ErrorKind::EmptyGraph, "no training triples");
  for (const auto& t : triples) {
    check_id(t.head, n_entities, "entity");
    check_id(t.tail, n_entities, "entity");
    check_id(t.relation, n_relations, "relation");
  }
  EmbeddingTable table = initial_table(n_entities, n_relations, config);

  // Corruptions are drawn from entities that occur in training triples.
  std::vector<std::uint32_t> pool;
  for (const auto& t : triples) {
    pool.push_back(t.head);
    pool.push_back(t.tail);
  }
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

  Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(triples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const double lr = config.learning_rate;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double total = 0.0;
    for (std::size_t idx : order) {
      const IdTriple& pos = triples[idx];
      for (std::size_t n = 0; n < std::max<std::size_t>(config.negatives, 1); ++n) {
        IdTriple neg = pos;
        const std::uint32_t repl = pool[rng.below(pool.size())];
        if (rng.chance(0.5)) neg.head = repl;
        else neg.tail = repl;

        Vec& h = table.entities[pos.head];
        Vec& r = table.relations[pos.relation];
        Vec& t = table.entities[pos.tail];
        Vec& hn = table.entities[neg.head];
        Vec& tn = table.entities[neg.tail];
        const double loss = margin_loss(h, r, t, hn, tn, config.margin);
        total += loss;
        if (loss <= 0.0) continue;
        // Gradients first, then updates, so aliased entities stay consistent.
        const auto g = margin_loss_gradient(h, r, t, hn, tn, config.margin);
        for (std::size_t i = 0; i < config.dim; ++i) {
          h[i] -= lr * g[0][i];
          r[i] -= lr * g[1][i];
          t[i] -= lr * g[2][i];
          hn[i] -= lr * g[3][i];
          tn[i] -= lr * g[4][i];
        }
      }
    }
    for (std::uint32_t e : pool) normalize(table.entities[e]);
    table.epoch_loss.push_back(
        total / static_cast<double>(triples.size() * std::max<std::size_t>(config.negatives, 1)));
  }
  return table;
}

double score(const EmbeddingTable& table, std::uint32_t h, std::uint32_t r, std::uint32_t t) {
  check_id(h, table.entities.size(), "entity");
  check_id(t, table.entities.size(), "entity");
  check_id(r, table.relations.size(), "relation");
  return -distance(table.entities[h], table.relations[r], table.entities[t]);
}

std::size_t tail_rank(const EmbeddingTable& table, const IdTriple& triple) {
  const double truth = score(table, triple.head, triple.relation, triple.tail);
  std::size_t rank = 1;
  for (std::uint32_t e = 0; e < table.entities.size(); ++e) {
    if (e == triple.tail) continue;
    if (score(table, triple.head, triple.relation, e) > truth) ++rank;
  }
  return rank;
}

double mean_reciprocal_rank(const EmbeddingTable& table, const std::vector<IdTriple>& triples) {
  if (triples.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& t : triples) sum += 1.0 / static_cast<double>(tail_rank(table, t));
  return sum / static_cast<double>(triples.size());
}

std::uint32_t relation_index(RelationKind relation) {
  for (std::size_t i = 0; i < kAllRelations.size(); ++i) {
    if (kAllRelations[i] == relation) return static_cast<std::uint32_t>(i);
  }
  throw Error(ErrorKind::UnknownId, "relation");
}

std::vector<IdTriple> graph_triples(const graph::GraphStore& store) {
  std::vector<IdTriple> out;
  for (const auto& t : store.triples()) {
    if (t.relation == RelationKind::MENTIONED_IN) continue;
    out.push_back({t.head, relation_index(t.relation), t.tail});
  }
  return out;
}

EmbeddingTable train(const graph::GraphStore& store, const TransEConfig& config) {
  return train(graph_triples(store), store.nodes().size(), kAllRelations.size(), config);
}

std::vector<complete::PredictionScore> rank_candidates(const graph::GraphStore& store,
                                                       const EmbeddingTable& table,
                                                       std::size_t top_k) {
  if (top_k == 0) return {};
  const complete::ScoringContext ctx(store);
  const auto r = relation_index(RelationKind::HAS_APPLICATION);
  std::vector<complete::PredictionScore> all;
  for (graph::NodeId m : ctx.materials()) {
    for (graph::NodeId a : ctx.applications()) {
      if (ctx.linked(m, a)) continue;
      complete::PredictionScore p;
      p.material = m;
      p.application = a;
      p.combined = 1.0 / (1.0 - score(table, m, r, a));
      all.push_back(p);
    }
  }
  complete::sort_predictions(store, all);
  if (all.size() > top_k) all.resize(top_k);
  return all;
}

}  // namespace mkg::transe
