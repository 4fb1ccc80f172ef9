#pragma once

// Material-application link prediction.
//
//   S(m,a)  weighted Jaccard between the Property/Descriptor neighbours of
//           the material and of the application.
//   F(m,a)  mean of the top-k J_mat(m, m') over materials m' already linked
//           to a.
//   T(m,a)  Jaccard of the undirected neighbourhoods, DOI nodes excluded.
//
//   combined = alpha*S + beta*F + gamma*T

#include <array>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mkg/graph.hpp"
#include "mkg/ontology.hpp"

namespace mkg::complete {

using graph::GraphStore;
using graph::NodeId;

struct AttributeWeights {
  std::map<Label, double> w;

  static AttributeWeights uniform();
  double at(Label label) const;
  // Throws Error(WeightsNotNormalized) unless finite, >= 0 and summing to 1.
  void validate() const;
};

using AttributeSets = std::map<Label, std::set<std::string>>;

// Sum over weighted labels of w_i * |A_i ∩ B_i| / |A_i ∪ B_i|; a label with
// both sets empty contributes 0.
double j_mat(const AttributeSets& a, const AttributeSets& b, const AttributeWeights& w);

struct CompletionParams {
  double alpha = 1.0 / 3.0;
  double beta = 1.0 / 3.0;
  double gamma = 1.0 / 3.0;
  std::size_t k = 5;
  AttributeWeights weights = AttributeWeights::uniform();

  // Throws Error(InvalidArgument) or Error(WeightsNotNormalized).
  void validate() const;
};

// key = value lines: alpha, beta, gamma, k, w.<Label>.
CompletionParams load_params(const std::filesystem::path& path);
void write_params(const std::filesystem::path& path, const CompletionParams& params);

struct PredictionScore {
  NodeId material = 0;
  NodeId application = 0;
  double s = 0.0;
  double f = 0.0;
  double t = 0.0;
  double combined = 0.0;
};

// Core nodes that head at least one attribute or application edge.
std::vector<NodeId> candidate_materials(const GraphStore& store);
std::vector<NodeId> applications(const GraphStore& store);

// Attribute values hanging off `id`, by label.
AttributeSets attribute_sets(const GraphStore& store, NodeId id);

// Throw Error(WrongNodeKind) unless m is a core node and a an Application.
double s_score(const GraphStore& store, NodeId m, NodeId a, const AttributeWeights& w);
double f_score(const GraphStore& store, NodeId m, NodeId a, const AttributeWeights& w,
               std::size_t k);
double t_score(const GraphStore& store, NodeId m, NodeId a);

// Per-store caches shared by every candidate pair.
class ScoringContext {
 public:
  explicit ScoringContext(const GraphStore& store);

  const GraphStore& store() const { return *store_; }
  const std::vector<NodeId>& materials() const { return materials_; }
  const std::vector<NodeId>& applications() const { return applications_; }
  bool linked(NodeId m, NodeId a) const;

  double s(NodeId m, NodeId a, const AttributeWeights& w) const;
  double f(NodeId m, NodeId a, const AttributeWeights& w, std::size_t k) const;
  double t(NodeId m, NodeId a) const;

 private:
  void check(NodeId m, NodeId a) const;

  const GraphStore* store_;
  std::vector<NodeId> materials_;
  std::vector<NodeId> applications_;
  // Indexed by node id; filled for materials and applications.
  std::vector<AttributeSets> attrs_;
  std::vector<std::vector<NodeId>> neighbours_;  // sorted
  std::vector<std::vector<NodeId>> linked_materials_;
  std::set<std::pair<NodeId, NodeId>> linked_;
};

// combined desc, s desc, material (label, value), application value.
bool ranks_before(const GraphStore& store, const PredictionScore& x, const PredictionScore& y);
void sort_predictions(const GraphStore& store, std::vector<PredictionScore>& preds);

// All unlinked (material, application) pairs, best topK first.
std::vector<PredictionScore> rank_candidates(const GraphStore& store,
                                             const CompletionParams& params,
                                             std::size_t top_k);
std::vector<PredictionScore> rank_candidates_serial(const GraphStore& store,
                                                    const CompletionParams& params,
                                                    std::size_t top_k);
std::vector<PredictionScore> rank_candidates(const ScoringContext& ctx,
                                             const CompletionParams& params,
                                             std::size_t top_k);

// Columns: material_label, material_value, application_value, s, f, t,
// combined, rank.
void write_predictions(const std::filesystem::path& path, const GraphStore& store,
                       const std::vector<PredictionScore>& preds);

// ---- parameter search ------------------------------------------------------

struct GridSpec {
  double step = 0.05;
  std::size_t top_k = 200;
  std::size_t k = 5;
  // Empty: uniform weights only.
  std::vector<AttributeWeights> weight_candidates;
};

// (alpha, beta, gamma) with every component a multiple of step.
// Throws Error(InvalidArgument) unless 1/step is an integer.
std::vector<std::array<double, 3>> simplex_grid(double step);

struct OptimizationResult {
  CompletionParams params;
  std::size_t en = 0;
  std::size_t evaluated = 0;
};

// Prediction (material, application) keys present as HAS_APPLICATION edges
// in `truth`.
std::size_t count_hits(const GraphStore& scored, const std::vector<PredictionScore>& preds,
                       const GraphStore& truth);

// Minimizes En = |top-K list| - hits over the grid. Ties prefer larger
// alpha, then larger beta. Throws Error(EmptyValidationGraph).
OptimizationResult optimize_params(const GraphStore& g_tra, const GraphStore& g_ver,
                                   const GridSpec& grid);

}  // namespace mkg::complete
