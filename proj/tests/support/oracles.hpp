#pragma once

// Slow, obviously-correct reference computations used by the tests.

#include <array>
#include <cstddef>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "mkg/embed.hpp"
#include "mkg/evalharness.hpp"
#include "mkg/graph.hpp"
#include "mkg/ingest.hpp"

namespace oracle {

struct Counts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Set comparison per DOI over plain vectors, no shared code with prf1.
Counts prf1(const std::vector<mkg::ExtractionRecord>& gold,
            const std::vector<mkg::ExtractionRecord>& pred, mkg::eval::Task task);

// Textbook DBSCAN over cosine distance: core points, union of core-core
// links, border points to the lowest-numbered adjacent cluster.
std::vector<int> dbscan(const std::vector<mkg::embed::Vector>& points, double eps,
                        std::size_t min_pts);

// Relabels clusters in order of first appearance; noise stays -1.
std::vector<int> canonical_labels(const std::vector<int>& labels);

// DOI values joined to a node by a linear scan over every triple.
std::set<std::string> dois_by_scan(const mkg::graph::GraphStore& store, mkg::graph::NodeId id);
std::set<std::string> provenance_by_scan(const mkg::graph::GraphStore& store,
                                         mkg::graph::NodeId a, mkg::graph::NodeId b);

using EdgeKey = std::tuple<std::string, std::string, std::string, std::string, std::string,
                           std::string, int>;
// (head label, head value, relation, tail label, tail value, dois, year), sorted.
std::vector<EdgeKey> edge_keys(const mkg::graph::GraphStore& store);
std::vector<std::pair<std::string, std::string>> node_keys(const mkg::graph::GraphStore& store);

// Central differences of the TransE margin loss for each of (h, r, t, h', t').
std::array<std::vector<double>, 5> loss_gradient_fd(
    const std::vector<double>& h, const std::vector<double>& r, const std::vector<double>& t,
    const std::vector<double>& hn, const std::vector<double>& tn, double margin, double step);

}  // namespace oracle
