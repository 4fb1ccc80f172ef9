#pragma once

// Entity resolution cascade applied to extraction records before graph
// construction:
//
//   ER-NF/A  acronyms mislabeled as Name/Formula move to Acronym; generic
//            non-material terms are dropped; name/acronym pairs found in
//            the abstract add the acronym.
//   ER-N/F   Name and Formula are swapped where the formula grammar says so.
//   ER-ED    strict labels are mapped onto expert dictionaries (misses are
//            dropped); loose labels are folded and kept.
//
// Every mutation is recorded as one AuditEntry.

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mkg/chemlex.hpp"
#include "mkg/embed.hpp"
#include "mkg/ingest.hpp"
#include "mkg/ontology.hpp"

namespace mkg::resolve {

// Lowercase, punctuation to spaces, collapse whitespace, singularize each
// word. Idempotent.
std::string fold(std::string_view s);

struct CanonEntry {
  std::string canonical;
  std::set<std::string> variants;
  std::string source = "manual";  // "cluster:<id>", "noise" or "manual"
};

// Label-scoped dictionary: canonical term -> surface variants.
class CanonMap {
 public:
  // Throws Error(WrongLabelClass) unless label is STRICT or LOOSE.
  explicit CanonMap(Label label);

  Label label() const { return label_; }

  // Registers `canonical` (and `variant` when non-empty). Throws
  // Error(DictionaryConflict) when a folded key already belongs to another
  // canonical term.
  void add(const std::string& canonical, const std::string& variant = {},
           const std::string& source = "manual");

  // Exact match on the folded surface form.
  std::optional<std::string> lookup(std::string_view surface) const;

  const std::map<std::string, CanonEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool contains_canonical(const std::string& term) const {
    return entries_.count(term) > 0;
  }

 private:
  void claim(const std::string& key, const std::string& canonical);

  Label label_;
  std::map<std::string, CanonEntry> entries_;
  std::unordered_map<std::string, std::string> by_key_;
};

using Dictionaries = std::map<Label, CanonMap>;

// Tab-separated "label<TAB>canonical<TAB>variant"; '#' lines and a
// "label..." header are skipped. Throws Error(MalformedFile) with the line.
Dictionaries read_dictionaries(std::istream& in);
Dictionaries load_dictionaries(const std::filesystem::path& path);
void merge_dictionaries(Dictionaries& into, const Dictionaries& from);
void write_dictionaries(const std::filesystem::path& path, const Dictionaries& dicts);

enum class Outcome { Canonical, Dropped, Raw };

struct Standardized {
  Outcome outcome = Outcome::Dropped;
  std::string value;
  double score = 0.0;  // 1 for exact matches, cosine for nearest matches
};

// Dictionary with pre-embedded surface forms for nearest-term search.
class Standardizer {
 public:
  Standardizer(const CanonMap& dict, const embed::Embedder& embedder, double tau_d);
  // Loose labels without a dictionary: every value folds to Raw.
  explicit Standardizer(Label loose_label);

  Label label() const { return label_; }
  Standardized operator()(std::string_view entity) const;

 private:
  Label label_;
  const CanonMap* dict_ = nullptr;
  const embed::Embedder* embedder_ = nullptr;
  double tau_d_ = 0.85;
  std::vector<std::string> canonical_of_;
  std::vector<embed::Vector> vectors_;
};

// One-shot convenience over Standardizer. Throws Error(WrongLabelClass)
// when `label` is not STRICT/LOOSE or differs from dict.label().
Standardized standardize(std::string_view entity, Label label, const CanonMap& dict,
                         const embed::Embedder& embedder, double tau_d = 0.85);

enum class Stage { NfA, NF, ED };
enum class Action { Relabel, Merge, Map, Drop, Keep, Link };

std::string_view to_string(Stage stage);
std::string_view to_string(Action action);

struct AuditEntry {
  std::string doi;
  Stage stage = Stage::NfA;
  Action action = Action::Keep;
  Label before_label = Label::Name;
  std::string before_value;
  std::optional<std::pair<Label, std::string>> after;
  std::optional<double> score;
  // Application value for entities nested under an application block.
  std::string context;

  friend bool operator==(const AuditEntry&, const AuditEntry&) = default;
};

void write_audit(const std::filesystem::path& path, const std::vector<AuditEntry>& audit);

std::set<std::string> default_generic_terms();

struct PipelineConfig {
  double tau_a = 0.5;
  double tau_d = 0.85;
  bool enable_nf_a = true;
  bool enable_n_f = true;
  bool enable_ed = true;
  chemlex::LexConfig lex;
  // Folded core values that never denote a specific material.
  std::set<std::string> generic_terms = default_generic_terms();
  Dictionaries dictionaries;
  embed::Embedder embedder;
};

enum class RecordFlag { Ok, CoreLost, NoCore };

struct PipelineResult {
  std::vector<ExtractionRecord> records;
  std::vector<RecordFlag> flags;
  std::vector<AuditEntry> audit;

  // Records with Ok flag, in order.
  std::vector<ExtractionRecord> graph_ready() const;
  // Ok records whose resolution needed no correction.
  std::vector<ExtractionRecord> high_confidence() const;
};

class Resolver {
 public:
  // Throws Error(MissingDictionary) when ER-ED is enabled and a STRICT
  // label has no dictionary.
  explicit Resolver(const PipelineConfig& config);

  ExtractionRecord nf_a(const ExtractionRecord& record,
                        std::optional<std::string_view> source_text,
                        std::vector<AuditEntry>& audit) const;
  ExtractionRecord n_f(const ExtractionRecord& record,
                       std::vector<AuditEntry>& audit) const;
  ExtractionRecord ed(const ExtractionRecord& record,
                      std::vector<AuditEntry>& audit) const;

  // Enabled stages in fixed order; source text comes from record.text.
  ExtractionRecord run(const ExtractionRecord& record,
                       std::vector<AuditEntry>& audit) const;

  PipelineResult apply(const std::vector<ExtractionRecord>& records) const;

 private:
  const Standardizer& standardizer(Label label) const;

  const PipelineConfig& config_;
  std::map<Label, Standardizer> standardizers_;
};

PipelineResult apply_pipeline(const std::vector<ExtractionRecord>& records,
                              const PipelineConfig& config);

struct ClusterRow {
  int cluster_id = embed::kNoise;
  Label label = Label::Application;
  std::string canonical;
  std::string variant;
  std::size_t frequency = 0;
};

struct ClusterReport {
  std::vector<ClusterRow> rows;
  std::size_t cluster_count = 0;
  std::size_t noise_count = 0;
};

// Embeds the distinct strings, clusters them and suggests the most frequent
// member of each cluster as its canonical term. Noise points become their
// own canonical. Throws Error(WrongLabelClass) unless all entities share
// one STRICT label.
ClusterReport build_dictionary(const std::vector<std::pair<std::string, Label>>& entities,
                               double eps, std::size_t min_pts,
                               const embed::Embedder& embedder);

// "cluster_id<TAB>label<TAB>canonical<TAB>variant"; noise rows use "noise".
void write_cluster_report(const std::filesystem::path& path, const ClusterReport& report);
ClusterReport read_cluster_report(std::istream& in);
ClusterReport load_cluster_report(const std::filesystem::path& path);
Dictionaries import_report(const ClusterReport& report);

}  // namespace mkg::resolve
