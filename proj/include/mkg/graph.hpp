#pragma once

// Provenance-carrying multigraph built from resolved extraction records.
//
// Nodes are unique by (label, value); ids are assigned in creation order.
// Triples are unique by (head, relation, tail) and carry the set of DOIs
// that assert them plus the earliest publication year among those DOIs.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "mkg/ingest.hpp"
#include "mkg/ontology.hpp"

namespace mkg::graph {

using NodeId = std::uint32_t;
using NodeKey = std::pair<Label, std::string>;

struct Node {
  NodeId id = 0;
  Label label = Label::Name;
  std::string value;
};

struct Triple {
  NodeId head = 0;
  RelationKind relation = RelationKind::MENTIONED_IN;
  NodeId tail = 0;
  std::set<std::string> dois;
  int earliest_year = 0;
};

// A triple before node ids are known.
struct TripleDraft {
  NodeKey head;
  RelationKind relation = RelationKind::MENTIONED_IN;
  NodeKey tail;
  std::string doi;
  int year = 0;

  friend bool operator==(const TripleDraft&, const TripleDraft&) = default;
};

// Head is the first value of the highest-priority core label. Throws
// Error(NoCoreLabel).
std::vector<TripleDraft> build_triples(const ExtractionRecord& record);

struct InsertDelta {
  std::size_t nodes_created = 0;
  std::size_t triples_created = 0;
  std::size_t triples_merged = 0;
};

struct GraphStats {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::map<Label, std::size_t> per_label;
  std::map<RelationKind, std::size_t> per_relation;

  friend bool operator==(const GraphStats&, const GraphStats&) = default;
};

class GraphStore {
 public:
  InsertDelta insert(const std::vector<TripleDraft>& drafts);
  InsertDelta insert_record(const ExtractionRecord& record);

  // Returns the id of (label, value), creating the node if needed.
  NodeId intern(Label label, const std::string& value, bool* created = nullptr);
  // Adds or merges one edge; earliest_year becomes the minimum seen.
  // Returns true when the edge is new.
  bool insert_edge(NodeId head, RelationKind relation, NodeId tail,
                   const std::set<std::string>& dois, int earliest_year);

  std::optional<NodeId> find(Label label, std::string_view value) const;
  const Node& node(NodeId id) const;  // throws Error(UnknownNode)
  bool has_node(NodeId id) const { return id < nodes_.size(); }
  NodeKey key(NodeId id) const;

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Triple>& triples() const { return triples_; }
  std::optional<std::size_t> find_triple(NodeId head, RelationKind relation,
                                         NodeId tail) const;

  // Triple indexes.
  const std::vector<std::size_t>& out_edges(NodeId id) const;
  const std::vector<std::size_t>& in_edges(NodeId id) const;
  const std::vector<NodeId>& nodes_with_label(Label label) const;
  const std::vector<std::size_t>& triples_of_doi(const std::string& doi) const;

  std::optional<int> doi_year(const std::string& doi) const;
  // Records a publication year, keeping the minimum.
  void note_doi_year(const std::string& doi, int year);
  const std::map<std::string, int>& doi_years() const { return doi_years_; }

  // Maintained counters, O(1).
  GraphStats stats() const;
  // Same numbers from a full scan.
  GraphStats recount() const;

  bool empty() const { return nodes_.empty(); }

 private:
  std::vector<Node> nodes_;
  std::map<NodeKey, NodeId> by_key_;
  std::vector<Triple> triples_;
  std::map<std::tuple<NodeId, RelationKind, NodeId>, std::size_t> by_triple_;
  std::vector<std::vector<std::size_t>> by_head_;
  std::vector<std::vector<std::size_t>> by_tail_;
  std::map<Label, std::vector<NodeId>> by_label_;
  std::map<std::string, std::vector<std::size_t>> by_doi_;
  std::map<std::string, int> doi_years_;
  std::map<Label, std::size_t> label_counts_;
  std::map<RelationKind, std::size_t> relation_counts_;
};

// Copy-on-write holder: one writer, readers keep immutable snapshots.
class SharedGraph {
 public:
  SharedGraph() : current_(std::make_shared<const GraphStore>()) {}
  explicit SharedGraph(GraphStore store)
      : current_(std::make_shared<const GraphStore>(std::move(store))) {}

  std::shared_ptr<const GraphStore> snapshot() const;
  InsertDelta insert(const std::vector<TripleDraft>& drafts);

 private:
  mutable std::mutex mutex_;
  std::shared_ptr<const GraphStore> current_;
};

// Keeps the triples accepted by `keep`, with their nodes, DOI sets and years.
GraphStore subgraph(const GraphStore& store, const std::function<bool(const Triple&)>& keep);

// DOI values reached from `id` by MENTIONED_IN.
std::set<std::string> dois_of(const GraphStore& store, NodeId id);
// dois_of(a) ∩ dois_of(b). Throws Error(UnknownNode).
std::set<std::string> provenance(const GraphStore& store, NodeId a, NodeId b);

// Violations of the structural invariants, empty when the store is sound.
std::vector<std::string> check_invariants(const GraphStore& store);

// ---- pattern matching ----------------------------------------------------
//
//   (Label=value)-[REL]->(Label=?)-[*]->(?)-[*..3]->(Application)
//
// Node: "(?)", "(Label)", "(Label=?)", "(Label=value)" or "(Label=\"value\")".
// Edge: "[REL]", "[*]" (any one relation) or "[*..k]" (1..k hops).
// Values compare case-insensitively. At most 4 edges in total.

struct NodeConstraint {
  std::optional<Label> label;
  std::optional<std::string> value;
};

struct EdgeConstraint {
  std::optional<RelationKind> relation;
  std::size_t min_hops = 1;
  std::size_t max_hops = 1;
};

struct Pattern {
  std::vector<NodeConstraint> nodes;
  std::vector<EdgeConstraint> edges;
};

inline constexpr std::size_t kMaxPatternEdges = 4;

Pattern parse_pattern(std::string_view text);  // throws Error(MalformedPattern)

// One node id per pattern node. Sorted, unique.
using Binding = std::vector<NodeId>;
std::vector<Binding> match_pattern(const GraphStore& store, const Pattern& pattern);
std::vector<Binding> match_pattern(const GraphStore& store, std::string_view pattern);

// ---- persistence ---------------------------------------------------------

// `<urn:mkg:Label:value>`, `<urn:doi:...>`, `<urn:mkg:rel:REL>`.
std::string node_uri(const Node& node);
std::string relation_uri(RelationKind relation);

// N-Triples: one rdf:type line per node (id order), then one line per
// triple. DOI sets and years go to the "<path>.prov.nt" sidecar as
// reified statements.
void export_rdf(const GraphStore& store, const std::filesystem::path& path);
GraphStore import_rdf(const std::filesystem::path& path);

// nodes.csv (id,label,value) and edges.csv
// (src_id,dst_id,relation,dois,earliest_year) inside `dir`.
void export_csv(const GraphStore& store, const std::filesystem::path& dir);
GraphStore import_csv(const std::filesystem::path& dir);

// Directory: CSV, "*.nt": RDF.
GraphStore import_store(const std::filesystem::path& path);

// (head key, relation, tail key, dois, year) for every triple, sorted.
using TripleRecord = std::tuple<NodeKey, RelationKind, NodeKey, std::set<std::string>, int>;
std::vector<TripleRecord> triple_multiset(const GraphStore& store);

}  // namespace mkg::graph
