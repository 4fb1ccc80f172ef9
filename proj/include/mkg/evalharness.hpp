#pragma once

// Extraction metrics, temporal splits, prediction validation curves,
// ablations, review sampling and per-year rank trends.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mkg/complete.hpp"
#include "mkg/graph.hpp"
#include "mkg/ingest.hpp"
#include "mkg/resolve.hpp"

namespace mkg::eval {

using graph::GraphStore;

enum class Task { NER, RE, ER };
std::string_view to_string(Task task);
inline constexpr std::array<Task, 3> kAllTasks = {Task::NER, Task::RE, Task::ER};

struct MetricReport {
  Task task = Task::NER;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  static MetricReport from_counts(Task task, std::size_t tp, std::size_t fp, std::size_t fn);
};

// Comparable items of one record for a task:
//   NER  folded entity strings, label ignored
//   RE   label + folded entity + owning application ("" at top level)
//   ER   label + exact string + owning application
std::set<std::string> task_items(const ExtractionRecord& record, Task task);

// Micro-averaged over records keyed by DOI. A predicted DOI absent from gold
// throws Error(DoiMismatch); gold records without a prediction count as empty.
MetricReport prf1(const std::vector<ExtractionRecord>& gold,
                  const std::vector<ExtractionRecord>& pred, Task task);

// ---- temporal split --------------------------------------------------------

struct SplitGraphs {
  GraphStore g_tra;  // earliest_year < cutoff
  GraphStore g_ver;  // cutoff <= earliest_year < cutoff + delta
  int cutoff = 0;
  int delta = 1;
  std::vector<std::string> warnings;  // one per empty side

  bool has_empty_side() const { return !warnings.empty(); }
};

// Throws Error(InvalidArgument) when delta < 1.
SplitGraphs temporal_split(const GraphStore& store, int cutoff, int delta);

// ---- validation ------------------------------------------------------------

struct PredictedPair {
  Label material_label = Label::Formula;
  std::string material;
  std::string application;

  friend bool operator==(const PredictedPair&, const PredictedPair&) = default;
  friend auto operator<=>(const PredictedPair&, const PredictedPair&) = default;
};

std::vector<PredictedPair> to_pairs(const GraphStore& store,
                                    const std::vector<complete::PredictionScore>& preds);

struct ValidationCurve {
  std::size_t predictions = 0;
  // percent[h - 1]: share of predictions whose HAS_APPLICATION edge exists in
  // the graph with earliest_year < cutoff + h.
  std::vector<double> percent;
  std::vector<std::size_t> hits;

  double final_percent() const { return percent.empty() ? 0.0 : percent.back(); }
};

ValidationCurve validate_predictions(const std::vector<PredictedPair>& preds,
                                     const GraphStore& future, int cutoff, int horizon);

// Expected hit rate of a uniformly random unlinked pair of `train`, as a
// fraction: share of candidate pairs that appear as HAS_APPLICATION edges in
// `future` with cutoff <= earliest_year < cutoff + horizon.
double random_pair_baseline(const GraphStore& train, const GraphStore& future, int cutoff,
                            int horizon);

struct CurveRow {
  std::string method;
  int cutoff = 0;
  int horizon_years = 0;
  double percent_reported = 0.0;
};

std::vector<CurveRow> curve_rows(const std::string& method, int cutoff,
                                 const ValidationCurve& curve);
void write_curves(const std::filesystem::path& path, const std::vector<CurveRow>& rows);

// ---- ablation --------------------------------------------------------------

struct AblationReport {
  std::optional<resolve::Stage> disabled;
  std::map<Task, MetricReport> full;
  std::map<Task, MetricReport> ablated;
  std::map<Task, double> delta_f1;  // ablated - full
};

// `records` are raw extractions, `gold` the expected resolved records.
AblationReport ablate(const std::vector<ExtractionRecord>& records,
                      const std::vector<ExtractionRecord>& gold,
                      const resolve::PipelineConfig& config,
                      std::optional<resolve::Stage> component);

// ---- review sampling ---------------------------------------------------------

// Indices of triples with no DOI or Domain endpoint, sampled uniformly
// without replacement. Throws Error(NotEnoughTriples).
std::vector<std::size_t> sample_triples(const GraphStore& store, std::size_t n,
                                        std::uint64_t seed);
void write_review_sheet(const std::filesystem::path& path, const GraphStore& store,
                        const std::vector<std::size_t>& sample);

// ---- rank trends -----------------------------------------------------------

struct TrendEntry {
  std::size_t rank = 0;
  Label material_label = Label::Formula;
  std::string material;
  std::string application;
  double score = 0.0;
  // Year the pair first appears as an edge in the full graph.
  std::optional<int> reported_year;

  bool reported_by(int year) const { return reported_year && *reported_year <= year; }
};

struct TrendTable {
  std::string domain;
  std::vector<int> years;
  std::vector<std::vector<TrendEntry>> rankings;  // one list per year
};

// For each year y, ranks unlinked pairs over triples with earliest_year <= y,
// restricted to applications carrying HAS_DOMAIN -> domain. Throws
// Error(UnknownDomain).
TrendTable rank_trends(const GraphStore& store, const std::string& domain, int first_year,
                       int last_year, std::size_t top_n,
                       const complete::CompletionParams& params);

// year, rank, material_label, material, application, score, reported_year,
// then one star column per table year.
void write_trends(const std::filesystem::path& path, const TrendTable& table);

}  // namespace mkg::eval
