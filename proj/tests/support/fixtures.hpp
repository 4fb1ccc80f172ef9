#pragma once

// Deterministic random inputs shared by unit tests, the acceptance runner
// and the benchmarks.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mkg/graph.hpp"
#include "mkg/ingest.hpp"
#include "mkg/resolve.hpp"
#include "mkg/rng.hpp"
#include "mkg/transe.hpp"

namespace fixtures {

std::string data_path(const std::string& name);

// At least one core label; values drawn from small pools so records share
// nodes, with separators, quotes and non-ASCII text mixed in.
mkg::ExtractionRecord random_record(mkg::Rng& rng, std::size_t index);

// Gold records and a perturbed prediction for the same DOIs (some dropped,
// some values changed, some spurious ones added).
std::pair<std::vector<mkg::ExtractionRecord>, std::vector<mkg::ExtractionRecord>>
random_metric_fixture(mkg::Rng& rng);

// Store with `materials` core nodes and `apps` applications, random
// attribute edges drawn from small pools and a few HAS_APPLICATION links.
mkg::graph::GraphStore random_scoring_graph(mkg::Rng& rng, std::size_t materials,
                                            std::size_t apps);

struct ToyKg {
  std::vector<mkg::transe::IdTriple> triples;
  std::size_t entities = 0;
  std::size_t relations = 0;
};
ToyKg load_toy_kg();

struct ResolutionCase {
  mkg::Label label;
  std::string raw;
  std::string expected;
};
std::vector<ResolutionCase> load_resolution_fixture();

}  // namespace fixtures
