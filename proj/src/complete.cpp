#include "mkg/complete.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "mkg/error.hpp"
#include "mkg/text.hpp"

namespace mkg::complete {

using graph::Node;

namespace {

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t inter = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else {
      ++inter;
      ++i;
      ++j;
    }
  }
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

const std::set<std::string> kEmptySet;

const std::set<std::string>& values_of(const AttributeSets& sets, Label label) {
  auto it = sets.find(label);
  return it == sets.end() ? kEmptySet : it->second;
}

// j_mat without the normalization check.
double weighted_jaccard(const AttributeSets& a, const AttributeSets& b,
                        const AttributeWeights& w) {
  double total = 0.0;
  for (const auto& [label, weight] : w.w) {
    if (weight == 0.0) continue;
    total += weight * jaccard(values_of(a, label), values_of(b, label));
  }
  return std::clamp(total, 0.0, 1.0);
}

// Weights over the labels an application can carry, renormalized.
AttributeWeights application_weights(const AttributeWeights& w) {
  const double p = w.at(Label::Property);
  const double d = w.at(Label::Descriptor);
  AttributeWeights out;
  if (p + d <= 0.0) return out;
  out.w[Label::Property] = p / (p + d);
  out.w[Label::Descriptor] = d / (p + d);
  return out;
}

double sorted_jaccard(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t inter = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) ++i;
    else if (b[j] < a[i]) ++j;
    else {
      ++inter;
      ++i;
      ++j;
    }
  }
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

bool is_attribute_relation(RelationKind r) {
  switch (r) {
    case RelationKind::HAS_PROPERTY:
    case RelationKind::HAS_DESCRIPTOR:
    case RelationKind::HAS_STRUCTURE_PHASE:
    case RelationKind::SYNTHESIZED_BY:
    case RelationKind::CHARACTERIZED_BY:
      return true;
    default:
      return false;
  }
}

}  // namespace

AttributeWeights AttributeWeights::uniform() {
  AttributeWeights out;
  for (Label l : kAttributeLabels) {
    out.w[l] = 1.0 / static_cast<double>(kAttributeLabels.size());
  }
  return out;
}

double AttributeWeights::at(Label label) const {
  auto it = w.find(label);
  return it == w.end() ? 0.0 : it->second;
}

void AttributeWeights::validate() const {
  double sum = 0.0;
  for (const auto& [label, weight] : w) {
    if (!std::isfinite(weight) || weight < 0.0) {
      throw Error(ErrorKind::WeightsNotNormalized,
                  "bad weight for " + std::string(to_string(label)));
    }
    if (std::find(kAttributeLabels.begin(), kAttributeLabels.end(), label) ==
        kAttributeLabels.end()) {
      throw Error(ErrorKind::WeightsNotNormalized,
                  std::string(to_string(label)) + " is not an attribute label");
    }
    sum += weight;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorKind::WeightsNotNormalized, "weights sum to " + std::to_string(sum));
  }
}

double j_mat(const AttributeSets& a, const AttributeSets& b, const AttributeWeights& w) {
  w.validate();
  return weighted_jaccard(a, b, w);
}

void CompletionParams::validate() const {
  for (double x : {alpha, beta, gamma}) {
    if (!std::isfinite(x) || x < 0.0) {
      throw Error(ErrorKind::InvalidArgument, "mixing weights must be non-negative");
    }
  }
  if (std::abs(alpha + beta + gamma - 1.0) > 1e-9) {
    throw Error(ErrorKind::InvalidArgument, "alpha + beta + gamma must equal 1");
  }
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be at least 1");
  weights.validate();
}

CompletionParams load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::FileUnreadable, path.string());
  CompletionParams p;
  bool any_weight = false;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (text::trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::InvalidArgument, "expected key = value", line_no);
    }
    const std::string key(text::trim(line.substr(0, eq)));
    std::string value(text::trim(line.substr(eq + 1)));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "not a number: " + value, line_no);
    }
    if (key == "alpha") p.alpha = v;
    else if (key == "beta") p.beta = v;
    else if (key == "gamma") p.gamma = v;
    else if (key == "k") p.k = static_cast<std::size_t>(std::llround(std::max(v, 0.0)));
    else if (key.rfind("w.", 0) == 0) {
      const auto label = try_label_of(key.substr(2));
      if (!label) throw Error(ErrorKind::InvalidArgument, "unknown label in " + key, line_no);
      if (!any_weight) p.weights.w.clear();
      any_weight = true;
      p.weights.w[*label] = v;
    } else {
      throw Error(ErrorKind::InvalidArgument, "unknown key " + key, line_no);
    }
  }
  p.validate();
  return p;
}

void write_params(const std::filesystem::path& path, const CompletionParams& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  // Shortest form that reads back to the same double.
  auto num = [](double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  };
  out << "alpha = " << num(params.alpha) << '\n'
      << "beta = " << num(params.beta) << '\n'
      << "gamma = " << num(params.gamma) << '\n'
      << "k = " << params.k << '\n';
  for (const auto& [label, weight] : params.weights.w) {
    std::string token;
    for (char c : to_string(label)) {
      if (c != '/') token.push_back(c);
    }
    out << "w." << token << " = " << num(weight) << '\n';
  }
}

std::vector<NodeId> candidate_materials(const GraphStore& store) {
  std::vector<NodeId> out;
  for (Label l : kCoreLabels) {
    for (NodeId id : store.nodes_with_label(l)) {
      for (std::size_t e : store.out_edges(id)) {
        const auto r = store.triples()[e].relation;
        if (is_attribute_relation(r) || r == RelationKind::HAS_APPLICATION) {
          out.push_back(id);
          break;
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeId> applications(const GraphStore& store) {
  return store.nodes_with_label(Label::Application);
}

AttributeSets attribute_sets(const GraphStore& store, NodeId id) {
  AttributeSets out;
  for (std::size_t e : store.out_edges(id)) {
    const auto& t = store.triples()[e];
    if (!is_attribute_relation(t.relation)) continue;
    const auto& tail = store.node(t.tail);
    out[tail.label].insert(tail.value);
  }
  return out;
}

ScoringContext::ScoringContext(const GraphStore& store)
    : store_(&store),
      materials_(candidate_materials(store)),
      applications_(complete::applications(store)) {
  const std::size_t n = store.nodes().size();
  attrs_.resize(n);
  neighbours_.resize(n);
  linked_materials_.resize(n);
  std::vector<NodeId> scored;
  for (Label l : kCoreLabels) {
    const auto& ids = store.nodes_with_label(l);
    scored.insert(scored.end(), ids.begin(), ids.end());
  }
  scored.insert(scored.end(), applications_.begin(), applications_.end());
  for (NodeId id : scored) {
    attrs_[id] = attribute_sets(store, id);
    std::set<NodeId> nb;
    for (std::size_t e : store.out_edges(id)) {
      const NodeId other = store.triples()[e].tail;
      if (other != id && store.node(other).label != Label::DOI) nb.insert(other);
    }
    for (std::size_t e : store.in_edges(id)) {
      const NodeId other = store.triples()[e].head;
      if (other != id && store.node(other).label != Label::DOI) nb.insert(other);
    }
    neighbours_[id].assign(nb.begin(), nb.end());
  }
  for (NodeId a : applications_) {
    for (std::size_t e : store.in_edges(a)) {
      const auto& t = store.triples()[e];
      if (t.relation != RelationKind::HAS_APPLICATION) continue;
      if (!is_core(store.node(t.head).label)) continue;
      linked_materials_[a].push_back(t.head);
      linked_.emplace(t.head, a);
    }
    std::sort(linked_materials_[a].begin(), linked_materials_[a].end());
  }
}

bool ScoringContext::linked(NodeId m, NodeId a) const { return linked_.count({m, a}) > 0; }

void ScoringContext::check(NodeId m, NodeId a) const {
  if (!is_core(store_->node(m).label)) {
    throw Error(ErrorKind::WrongNodeKind, "not a material: " + store_->node(m).value);
  }
  if (store_->node(a).label != Label::Application) {
    throw Error(ErrorKind::WrongNodeKind, "not an application: " + store_->node(a).value);
  }
}

double ScoringContext::s(NodeId m, NodeId a, const AttributeWeights& w) const {
  check(m, a);
  return weighted_jaccard(attrs_[m], attrs_[a], application_weights(w));
}

double ScoringContext::f(NodeId m, NodeId a, const AttributeWeights& w, std::size_t k) const {
  check(m, a);
  std::vector<double> sims;
  for (NodeId other : linked_materials_[a]) {
    if (other != m) sims.push_back(weighted_jaccard(attrs_[m], attrs_[other], w));
  }
  if (sims.empty() || k == 0) return 0.0;
  const std::size_t take = std::min(k, sims.size());
  std::partial_sort(sims.begin(), sims.begin() + static_cast<std::ptrdiff_t>(take), sims.end(),
                    std::greater<>());
  double sum = 0.0;
  for (std::size_t i = 0; i < take; ++i) sum += sims[i];
  return std::clamp(sum / static_cast<double>(take), 0.0, 1.0);
}

double ScoringContext::t(NodeId m, NodeId a) const {
  check(m, a);
  return sorted_jaccard(neighbours_[m], neighbours_[a]);
}

double s_score(const GraphStore& store, NodeId m, NodeId a, const AttributeWeights& w) {
  w.validate();
  return ScoringContext(store).s(m, a, w);
}

double f_score(const GraphStore& store, NodeId m, NodeId a, const AttributeWeights& w,
               std::size_t k) {
  w.validate();
  return ScoringContext(store).f(m, a, w, k);
}

double t_score(const GraphStore& store, NodeId m, NodeId a) {
  return ScoringContext(store).t(m, a);
}

bool ranks_before(const GraphStore& store, const PredictionScore& x, const PredictionScore& y) {
  if (x.combined != y.combined) return x.combined > y.combined;
  if (x.s != y.s) return x.s > y.s;
  if (x.material != y.material) {
    const Node& a = store.node(x.material);
    const Node& b = store.node(y.material);
    if (a.label != b.label) return to_string(a.label) < to_string(b.label);
    if (a.value != b.value) return a.value < b.value;
  }
  return store.node(x.application).value < store.node(y.application).value;
}

void sort_predictions(const GraphStore& store, std::vector<PredictionScore>& preds) {
  std::sort(preds.begin(), preds.end(), [&](const PredictionScore& x, const PredictionScore& y) {
    return ranks_before(store, x, y);
  });
}

namespace {

PredictionScore score_pair(const ScoringContext& ctx, const CompletionParams& p, NodeId m,
                           NodeId a) {
  PredictionScore s;
  s.material = m;
  s.application = a;
  s.s = ctx.s(m, a, p.weights);
  s.f = ctx.f(m, a, p.weights, p.k);
  s.t = ctx.t(m, a);
  s.combined = std::clamp(p.alpha * s.s + p.beta * s.f + p.gamma * s.t, 0.0, 1.0);
  return s;
}

std::vector<PredictionScore> top(const GraphStore& store, std::vector<PredictionScore> all,
                                 std::size_t top_k) {
  const std::size_t keep = std::min(top_k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(),
                    [&](const PredictionScore& x, const PredictionScore& y) {
                      return ranks_before(store, x, y);
                    });
  all.resize(keep);
  return all;
}

}  // namespace

std::vector<PredictionScore> rank_candidates(const ScoringContext& ctx,
                                             const CompletionParams& params,
                                             std::size_t top_k) {
  params.validate();
  if (top_k == 0) return {};
  const auto& mats = ctx.materials();
  const auto& apps = ctx.applications();
  std::vector<std::vector<PredictionScore>> per_material(mats.size());
  const auto n = static_cast<std::ptrdiff_t>(mats.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto& out = per_material[static_cast<std::size_t>(i)];
    const NodeId m = mats[static_cast<std::size_t>(i)];
    for (NodeId a : apps) {
      if (!ctx.linked(m, a)) out.push_back(score_pair(ctx, params, m, a));
    }
  }
  std::vector<PredictionScore> all;
  for (auto& v : per_material) all.insert(all.end(), v.begin(), v.end());
  return top(ctx.store(), std::move(all), top_k);
}

std::vector<PredictionScore> rank_candidates(const GraphStore& store,
                                             const CompletionParams& params,
                                             std::size_t top_k) {
  return rank_candidates(ScoringContext(store), params, top_k);
}

// Reference path: no caches, no threads.
std::vector<PredictionScore> rank_candidates_serial(const GraphStore& store,
                                                    const CompletionParams& params,
                                                    std::size_t top_k) {
  params.validate();
  if (top_k == 0) return {};
  std::set<std::pair<NodeId, NodeId>> linked;
  for (const auto& t : store.triples()) {
    if (t.relation == RelationKind::HAS_APPLICATION) linked.emplace(t.head, t.tail);
  }
  const AttributeWeights app_w = application_weights(params.weights);
  std::vector<PredictionScore> all;
  for (NodeId m : candidate_materials(store)) {
    const AttributeSets ma = attribute_sets(store, m);
    std::set<NodeId> nm;
    for (const auto& t : store.triples()) {
      if (t.head == m && store.node(t.tail).label != Label::DOI) nm.insert(t.tail);
      if (t.tail == m && store.node(t.head).label != Label::DOI) nm.insert(t.head);
    }
    nm.erase(m);
    for (NodeId a : applications(store)) {
      if (linked.count({m, a})) continue;
      PredictionScore p;
      p.material = m;
      p.application = a;
      p.s = weighted_jaccard(ma, attribute_sets(store, a), app_w);

      std::vector<double> sims;
      for (const auto& [head, tail] : linked) {
        if (tail == a && head != m && is_core(store.node(head).label)) {
          sims.push_back(weighted_jaccard(ma, attribute_sets(store, head), params.weights));
        }
      }
      std::sort(sims.rbegin(), sims.rend());
      const std::size_t take = std::min(params.k, sims.size());
      double sum = 0.0;
      for (std::size_t i = 0; i < take; ++i) sum += sims[i];
      p.f = take == 0 ? 0.0 : std::clamp(sum / static_cast<double>(take), 0.0, 1.0);

      std::set<NodeId> na;
      for (const auto& t : store.triples()) {
        if (t.head == a && store.node(t.tail).label != Label::DOI) na.insert(t.tail);
        if (t.tail == a && store.node(t.head).label != Label::DOI) na.insert(t.head);
      }
      na.erase(a);
      p.t = sorted_jaccard({nm.begin(), nm.end()}, {na.begin(), na.end()});
      p.combined =
          std::clamp(params.alpha * p.s + params.beta * p.f + params.gamma * p.t, 0.0, 1.0);
      all.push_back(p);
    }
  }
  sort_predictions(store, all);
  if (all.size() > top_k) all.resize(top_k);
  return all;
}

void write_predictions(const std::filesystem::path& path, const GraphStore& store,
                       const std::vector<PredictionScore>& preds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << "material_label,material_value,application_value,s,f,t,combined,rank\n";
  out << std::fixed << std::setprecision(6);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const auto& p = preds[i];
    const Node& m = store.node(p.material);
    out << text::csv_escape(to_string(m.label)) << ',' << text::csv_escape(m.value) << ','
        << text::csv_escape(store.node(p.application).value) << ',' << p.s << ',' << p.f
        << ',' << p.t << ',' << p.combined << ',' << (i + 1) << '\n';
  }
}

std::vector<std::array<double, 3>> simplex_grid(double step) {
  if (!(step > 0.0) || step > 1.0) {
    throw Error(ErrorKind::InvalidArgument, "grid step must be in (0, 1]");
  }
  const double inv = 1.0 / step;
  const long n = std::lround(inv);
  if (std::abs(inv - static_cast<double>(n)) > 1e-9) {
    throw Error(ErrorKind::InvalidArgument, "grid step must divide 1");
  }
  std::vector<std::array<double, 3>> out;
  for (long i = 0; i <= n; ++i) {
    for (long j = 0; i + j <= n; ++j) {
      out.push_back({static_cast<double>(i) / static_cast<double>(n),
                     static_cast<double>(j) / static_cast<double>(n),
                     static_cast<double>(n - i - j) / static_cast<double>(n)});
    }
  }
  return out;
}

namespace {

bool edge_in(const GraphStore& truth, const Node& material, const Node& application) {
  const auto m = truth.find(material.label, material.value);
  const auto a = truth.find(Label::Application, application.value);
  return m && a && truth.find_triple(*m, RelationKind::HAS_APPLICATION, *a).has_value();
}

}  // namespace

std::size_t count_hits(const GraphStore& scored, const std::vector<PredictionScore>& preds,
                       const GraphStore& truth) {
  std::size_t hits = 0;
  for (const auto& p : preds) {
    hits += edge_in(truth, scored.node(p.material), scored.node(p.application));
  }
  return hits;
}

OptimizationResult optimize_params(const GraphStore& g_tra, const GraphStore& g_ver,
                                   const GridSpec& grid) {
  if (g_ver.triples().empty()) {
    throw Error(ErrorKind::EmptyValidationGraph, "validation graph has no triples");
  }
  const auto points = simplex_grid(grid.step);
  std::vector<AttributeWeights> weight_sets = grid.weight_candidates;
  if (weight_sets.empty()) weight_sets.push_back(AttributeWeights::uniform());
  for (const auto& w : weight_sets) w.validate();

  const ScoringContext ctx(g_tra);
  struct Pair {
    NodeId m, a;
    bool hit;
  };
  // Pairs in tie-break order: material (label, value), then application value.
  std::vector<Pair> pairs;
  for (NodeId m : ctx.materials()) {
    for (NodeId a : ctx.applications()) {
      if (!ctx.linked(m, a)) {
        pairs.push_back({m, a, edge_in(g_ver, g_tra.node(m), g_tra.node(a))});
      }
    }
  }
  std::sort(pairs.begin(), pairs.end(), [&](const Pair& x, const Pair& y) {
    const Node& a = g_tra.node(x.m);
    const Node& b = g_tra.node(y.m);
    if (x.m != y.m) {
      if (a.label != b.label) return to_string(a.label) < to_string(b.label);
      if (a.value != b.value) return a.value < b.value;
    }
    return g_tra.node(x.a).value < g_tra.node(y.a).value;
  });
  const std::size_t keep = std::min(grid.top_k, pairs.size());

  OptimizationResult best;
  bool have_best = false;
  std::vector<double> t(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) t[i] = ctx.t(pairs[i].m, pairs[i].a);

  for (const auto& w : weight_sets) {
    std::vector<double> s(pairs.size());
    std::vector<double> f(pairs.size());
    const auto np = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < np; ++i) {
      const auto& p = pairs[static_cast<std::size_t>(i)];
      s[static_cast<std::size_t>(i)] = ctx.s(p.m, p.a, w);
      f[static_cast<std::size_t>(i)] = ctx.f(p.m, p.a, w, grid.k);
    }

    std::vector<std::size_t> en(points.size());
    const auto ng = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t g = 0; g < ng; ++g) {
      const auto& [alpha, beta, gamma] = points[static_cast<std::size_t>(g)];
      std::vector<double> combined(pairs.size());
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        combined[i] = std::clamp(alpha * s[i] + beta * f[i] + gamma * t[i], 0.0, 1.0);
      }
      std::vector<std::size_t> order(pairs.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep),
                        order.end(), [&](std::size_t x, std::size_t y) {
                          if (combined[x] != combined[y]) return combined[x] > combined[y];
                          if (s[x] != s[y]) return s[x] > s[y];
                          return x < y;
                        });
      std::size_t hits = 0;
      for (std::size_t i = 0; i < keep; ++i) hits += pairs[order[i]].hit;
      en[static_cast<std::size_t>(g)] = keep - hits;
    }

    for (std::size_t g = 0; g < points.size(); ++g) {
      const auto& [alpha, beta, gamma] = points[g];
      const bool better =
          !have_best || en[g] < best.en ||
          (en[g] == best.en &&
           (alpha > best.params.alpha ||
            (alpha == best.params.alpha && beta > best.params.beta)));
      if (better) {
        have_best = true;
        best.en = en[g];
        best.params.alpha = alpha;
        best.params.beta = beta;
        best.params.gamma = gamma;
        best.params.k = grid.k;
        best.params.weights = w;
      }
    }
    best.evaluated += points.size();
  }
  return best;
}

}  // namespace mkg::complete
