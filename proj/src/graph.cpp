#include "mkg/graph.hpp"

#include <algorithm>
#include <cctype>

#include "mkg/error.hpp"
#include "mkg/text.hpp"

namespace mkg::graph {

namespace {

const std::vector<std::size_t> kNoEdges;
const std::vector<NodeId> kNoNodes;

class DraftBuilder {
 public:
  DraftBuilder(const std::string& doi, int year) : doi_(doi), year_(year) {}

  void touch(const NodeKey& node) {
    if (seen_nodes_.insert(node).second) participants_.push_back(node);
  }

  void add(const NodeKey& head, RelationKind relation, const NodeKey& tail) {
    touch(head);
    touch(tail);
    if (seen_edges_.emplace(head, relation, tail).second) {
      drafts_.push_back({head, relation, tail, doi_, year_});
    }
  }

  std::vector<TripleDraft> finish() {
    const NodeKey doi_node{Label::DOI, doi_};
    for (const auto& node : participants_) {
      drafts_.push_back({node, RelationKind::MENTIONED_IN, doi_node, doi_, year_});
    }
    return std::move(drafts_);
  }

 private:
  std::string doi_;
  int year_;
  std::vector<NodeKey> participants_;
  std::set<NodeKey> seen_nodes_;
  std::set<std::tuple<NodeKey, RelationKind, NodeKey>> seen_edges_;
  std::vector<TripleDraft> drafts_;
};

}  // namespace

std::vector<TripleDraft> build_triples(const ExtractionRecord& record) {
  std::set<Label> present;
  for (Label l : kCoreLabels) {
    if (!record.values(l).empty()) present.insert(l);
  }
  const Label head_label = core_priority(present);
  const NodeKey head{head_label, record.values(head_label).front()};

  DraftBuilder b(record.doi, record.year);
  b.touch(head);
  for (const auto& v : record.values(head_label)) b.touch({head_label, v});
  if (head_label == Label::Formula) {
    for (const auto& name : record.values(Label::Name)) {
      b.add(head, RelationKind::HAS_NAME, {Label::Name, name});
    }
  }
  if (head_label != Label::Acronym) {
    for (const auto& acronym : record.values(Label::Acronym)) {
      b.add(head, RelationKind::HAS_ACRONYM, {Label::Acronym, acronym});
    }
  }
  for (Label l : kAttributeLabels) {
    for (const auto& v : record.values(l)) b.add(head, relation_for(l), {l, v});
  }
  const auto& top_domains = record.values(Label::Domain);
  for (const auto& block : record.applications) {
    const NodeKey app{Label::Application, block.value};
    b.add(head, RelationKind::HAS_APPLICATION, app);
    for (const auto& d : block.domains) b.add(app, RelationKind::HAS_DOMAIN, {Label::Domain, d});
    for (const auto& d : top_domains) b.add(app, RelationKind::HAS_DOMAIN, {Label::Domain, d});
    for (const auto& p : block.properties) {
      b.add(app, RelationKind::HAS_PROPERTY, {Label::Property, p});
    }
    for (const auto& d : block.descriptors) {
      b.add(app, RelationKind::HAS_DESCRIPTOR, {Label::Descriptor, d});
    }
  }
  return b.finish();
}

InsertDelta GraphStore::insert(const std::vector<TripleDraft>& drafts) {
  InsertDelta delta;
  for (const auto& d : drafts) {
    bool created = false;
    const NodeId h = intern(d.head.first, d.head.second, &created);
    delta.nodes_created += created;
    const NodeId t = intern(d.tail.first, d.tail.second, &created);
    delta.nodes_created += created;
    if (insert_edge(h, d.relation, t, {d.doi}, d.year)) ++delta.triples_created;
    else ++delta.triples_merged;
  }
  return delta;
}

InsertDelta GraphStore::insert_record(const ExtractionRecord& record) {
  return insert(build_triples(record));
}

NodeId GraphStore::intern(Label label, const std::string& value, bool* created) {
  if (created) *created = false;
  auto it = by_key_.find({label, value});
  if (it != by_key_.end()) return it->second;
  if (value.empty()) throw Error(ErrorKind::InvalidArgument, "empty node value");
  const auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back({id, label, value});
  by_key_.emplace(NodeKey{label, value}, id);
  by_head_.emplace_back();
  by_tail_.emplace_back();
  by_label_[label].push_back(id);
  ++label_counts_[label];
  if (created) *created = true;
  return id;
}

bool GraphStore::insert_edge(NodeId head, RelationKind relation, NodeId tail,
                             const std::set<std::string>& dois, int earliest_year) {
  if (!has_node(head) || !has_node(tail)) {
    throw Error(ErrorKind::UnknownNode, "edge endpoint out of range");
  }
  if (dois.empty()) throw Error(ErrorKind::InvalidArgument, "edge without DOI");
  if (dois.size() == 1) note_doi_year(*dois.begin(), earliest_year);

  auto [it, fresh] = by_triple_.try_emplace({head, relation, tail}, triples_.size());
  if (fresh) {
    triples_.push_back({head, relation, tail, dois, earliest_year});
    by_head_[head].push_back(it->second);
    by_tail_[tail].push_back(it->second);
    for (const auto& d : dois) by_doi_[d].push_back(it->second);
    ++relation_counts_[relation];
    return true;
  }
  Triple& t = triples_[it->second];
  for (const auto& d : dois) {
    if (t.dois.insert(d).second) by_doi_[d].push_back(it->second);
  }
  t.earliest_year = std::min(t.earliest_year, earliest_year);
  return false;
}

std::optional<NodeId> GraphStore::find(Label label, std::string_view value) const {
  auto it = by_key_.find({label, std::string(value)});
  if (it == by_key_.end()) return std::nullopt;
  return it->second;
}

const Node& GraphStore::node(NodeId id) const {
  if (!has_node(id)) throw Error(ErrorKind::UnknownNode, "node " + std::to_string(id));
  return nodes_[id];
}

NodeKey GraphStore::key(NodeId id) const {
  const Node& n = node(id);
  return {n.label, n.value};
}

std::optional<std::size_t> GraphStore::find_triple(NodeId head, RelationKind relation,
                                                   NodeId tail) const {
  auto it = by_triple_.find({head, relation, tail});
  if (it == by_triple_.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::size_t>& GraphStore::out_edges(NodeId id) const {
  return has_node(id) ? by_head_[id] : kNoEdges;
}

const std::vector<std::size_t>& GraphStore::in_edges(NodeId id) const {
  return has_node(id) ? by_tail_[id] : kNoEdges;
}

const std::vector<NodeId>& GraphStore::nodes_with_label(Label label) const {
  auto it = by_label_.find(label);
  return it == by_label_.end() ? kNoNodes : it->second;
}

const std::vector<std::size_t>& GraphStore::triples_of_doi(const std::string& doi) const {
  auto it = by_doi_.find(doi);
  return it == by_doi_.end() ? kNoEdges : it->second;
}

std::optional<int> GraphStore::doi_year(const std::string& doi) const {
  auto it = doi_years_.find(doi);
  if (it == doi_years_.end()) return std::nullopt;
  return it->second;
}

void GraphStore::note_doi_year(const std::string& doi, int year) {
  auto [it, fresh] = doi_years_.try_emplace(doi, year);
  if (!fresh) it->second = std::min(it->second, year);
}

GraphStats GraphStore::stats() const {
  GraphStats s;
  s.node_count = nodes_.size();
  s.edge_count = triples_.size();
  s.per_label = label_counts_;
  s.per_relation = relation_counts_;
  return s;
}

GraphStats GraphStore::recount() const {
  GraphStats s;
  for (const auto& n : nodes_) {
    ++s.node_count;
    ++s.per_label[n.label];
  }
  for (const auto& t : triples_) {
    ++s.edge_count;
    ++s.per_relation[t.relation];
  }
  return s;
}

std::shared_ptr<const GraphStore> SharedGraph::snapshot() const {
  std::lock_guard lock(mutex_);
  return current_;
}

InsertDelta SharedGraph::insert(const std::vector<TripleDraft>& drafts) {
  std::lock_guard lock(mutex_);
  auto next = std::make_shared<GraphStore>(*current_);
  const InsertDelta delta = next->insert(drafts);
  current_ = std::move(next);
  return delta;
}

GraphStore subgraph(const GraphStore& store,
                    const std::function<bool(const Triple&)>& keep) {
  GraphStore out;
  for (const auto& t : store.triples()) {
    if (!keep(t)) continue;
    const Node& h = store.node(t.head);
    const Node& tl = store.node(t.tail);
    const NodeId nh = out.intern(h.label, h.value);
    const NodeId nt = out.intern(tl.label, tl.value);
    for (const auto& d : t.dois) {
      if (auto y = store.doi_year(d)) out.note_doi_year(d, *y);
    }
    out.insert_edge(nh, t.relation, nt, t.dois, t.earliest_year);
  }
  return out;
}

std::set<std::string> dois_of(const GraphStore& store, NodeId id) {
  std::set<std::string> out;
  for (std::size_t e : store.out_edges(id)) {
    const Triple& t = store.triples()[e];
    if (t.relation == RelationKind::MENTIONED_IN) out.insert(store.node(t.tail).value);
  }
  return out;
}

std::set<std::string> provenance(const GraphStore& store, NodeId a, NodeId b) {
  store.node(a);
  store.node(b);
  const auto da = dois_of(store, a);
  const auto db = dois_of(store, b);
  std::set<std::string> out;
  std::set_intersection(da.begin(), da.end(), db.begin(), db.end(),
                        std::inserter(out, out.end()));
  return out;
}

std::vector<std::string> check_invariants(const GraphStore& store) {
  std::vector<std::string> problems;
  const auto& nodes = store.nodes();
  const auto& triples = store.triples();
  for (const auto& n : nodes) {
    if (n.value.empty()) problems.push_back("empty value on node " + std::to_string(n.id));
    if (n.label == Label::DOI) continue;
    if (dois_of(store, n.id).empty()) {
      problems.push_back("no MENTIONED_IN edge on " + std::string(to_string(n.label)) + ":" +
                         n.value);
    }
  }
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const Triple& t = triples[i];
    const std::string where = "triple " + std::to_string(i) + ": ";
    if (t.dois.empty()) problems.push_back(where + "empty DOI set");
    std::optional<int> min_year;
    bool all_known = true;
    for (const auto& d : t.dois) {
      const auto y = store.doi_year(d);
      if (!y) all_known = false;
      else min_year = min_year ? std::min(*min_year, *y) : *y;
    }
    if (all_known && min_year && *min_year != t.earliest_year) {
      problems.push_back(where + "earliest_year does not match DOI years");
    }
    const Label hl = store.node(t.head).label;
    const Label tl = store.node(t.tail).label;
    if (!source_allowed(t.relation, hl)) {
      problems.push_back(where + std::string(to_string(t.relation)) + " from " +
                         std::string(to_string(hl)));
    }
    if ((t.relation == RelationKind::MENTIONED_IN) != (tl == Label::DOI)) {
      problems.push_back(where + "DOI tail mismatch");
    }
    const auto& out = store.out_edges(t.head);
    const auto& in = store.in_edges(t.tail);
    if (std::find(out.begin(), out.end(), i) == out.end() ||
        std::find(in.begin(), in.end(), i) == in.end() ||
        store.find_triple(t.head, t.relation, t.tail) != i) {
      problems.push_back(where + "index mismatch");
    }
    for (const auto& d : t.dois) {
      const auto& by_doi = store.triples_of_doi(d);
      if (std::find(by_doi.begin(), by_doi.end(), i) == by_doi.end()) {
        problems.push_back(where + "DOI index mismatch");
      }
    }
  }
  for (Label l : kAllLabels) {
    for (NodeId id : store.nodes_with_label(l)) {
      if (store.node(id).label != l) problems.push_back("label index mismatch");
    }
  }
  if (!(store.stats() == store.recount())) problems.push_back("counters drifted");
  return problems;
}

// ---- pattern matching ----------------------------------------------------

namespace {

class PatternParser {
 public:
  explicit PatternParser(std::string_view s) : s_(s) {}

  Pattern run() {
    Pattern p;
    skip_ws();
    p.nodes.push_back(node());
    skip_ws();
    while (!done()) {
      expect('-');
      p.edges.push_back(edge());
      expect('-');
      expect('>');
      skip_ws();
      p.nodes.push_back(node());
      skip_ws();
    }
    std::size_t total = 0;
    for (const auto& e : p.edges) total += e.max_hops;
    if (total > kMaxPatternEdges) {
      throw Error(ErrorKind::MalformedPattern,
                  "pattern spans " + std::to_string(total) + " edges, limit is " +
                      std::to_string(kMaxPatternEdges));
    }
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::MalformedPattern, what + " at offset " + std::to_string(pos_));
  }
  bool done() const { return pos_ >= s_.size(); }
  void skip_ws() {
    while (!done() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  void expect(char c) {
    skip_ws();
    if (done() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string until(char close) {
    std::string out;
    bool quoted = false;
    while (!done()) {
      const char c = s_[pos_];
      if (c == '"') {
        quoted = !quoted;
      } else if (c == '\\' && quoted && pos_ + 1 < s_.size()) {
        out.push_back(s_[++pos_]);
      } else if (c == close && !quoted) {
        ++pos_;
        return out;
      } else {
        out.push_back(c);
      }
      ++pos_;
    }
    fail(std::string("missing '") + close + "'");
  }

  NodeConstraint node() {
    expect('(');
    const std::string body = until(')');
    NodeConstraint c;
    const auto eq = body.find('=');
    const std::string label_part(text::trim(body.substr(0, eq)));
    if (!label_part.empty() && label_part != "?") {
      c.label = try_label_of(label_part);
      if (!c.label) fail("unknown label '" + label_part + "'");
    }
    if (eq != std::string::npos) {
      const std::string value(text::trim(body.substr(eq + 1)));
      if (value.empty()) fail("empty value");
      if (value != "?") c.value = value;
    }
    return c;
  }

  EdgeConstraint edge() {
    expect('[');
    const std::string body(text::trim(until(']')));
    EdgeConstraint e;
    if (body == "*") return e;
    if (body.rfind("*..", 0) == 0) {
      const std::string k = body.substr(3);
      if (k.empty() || !std::all_of(k.begin(), k.end(), [](unsigned char ch) {
            return std::isdigit(ch);
          })) {
        fail("bad hop bound");
      }
      e.max_hops = std::stoul(k);
      if (e.max_hops < 1) fail("hop bound must be at least 1");
      if (e.max_hops > kMaxPatternEdges) fail("hop bound above limit");
      return e;
    }
    e.relation = try_relation_of(body);
    if (!e.relation) fail("unknown relation '" + body + "'");
    return e;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

bool satisfies(const Node& n, const NodeConstraint& c) {
  if (c.label && n.label != *c.label) return false;
  if (c.value && !text::iequals(n.value, *c.value)) return false;
  return true;
}

std::set<NodeId> reach(const GraphStore& store, NodeId from, const EdgeConstraint& e) {
  std::set<NodeId> out;
  std::set<NodeId> frontier{from};
  for (std::size_t hop = 1; hop <= e.max_hops && !frontier.empty(); ++hop) {
    std::set<NodeId> next;
    for (NodeId n : frontier) {
      for (std::size_t idx : store.out_edges(n)) {
        const Triple& t = store.triples()[idx];
        if (e.relation && t.relation != *e.relation) continue;
        next.insert(t.tail);
      }
    }
    if (hop >= e.min_hops) out.insert(next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

void extend(const GraphStore& store, const Pattern& p, Binding& current,
            std::set<Binding>& results) {
  const std::size_t i = current.size() - 1;
  if (i == p.edges.size()) {
    results.insert(current);
    return;
  }
  for (NodeId next : reach(store, current.back(), p.edges[i])) {
    if (!satisfies(store.node(next), p.nodes[i + 1])) continue;
    current.push_back(next);
    extend(store, p, current, results);
    current.pop_back();
  }
}

}  // namespace

Pattern parse_pattern(std::string_view text) { return PatternParser(text).run(); }

std::vector<Binding> match_pattern(const GraphStore& store, const Pattern& pattern) {
  if (pattern.nodes.size() != pattern.edges.size() + 1) {
    throw Error(ErrorKind::MalformedPattern, "node/edge count mismatch");
  }
  std::set<Binding> results;
  const auto& first = pattern.nodes.front();
  auto try_start = [&](NodeId id) {
    if (!satisfies(store.node(id), first)) return;
    Binding b{id};
    extend(store, pattern, b, results);
  };
  if (first.label) {
    for (NodeId id : store.nodes_with_label(*first.label)) try_start(id);
  } else {
    for (const auto& n : store.nodes()) try_start(n.id);
  }
  return {results.begin(), results.end()};
}

std::vector<Binding> match_pattern(const GraphStore& store, std::string_view pattern) {
  return match_pattern(store, parse_pattern(pattern));
}

std::vector<TripleRecord> triple_multiset(const GraphStore& store) {
  std::vector<TripleRecord> out;
  out.reserve(store.triples().size());
  for (const auto& t : store.triples()) {
    out.emplace_back(store.key(t.head), t.relation, store.key(t.tail), t.dois,
                     t.earliest_year);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mkg::graph
