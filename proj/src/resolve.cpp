#include "mkg/resolve.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "mkg/error.hpp"
#include "mkg/text.hpp"

namespace mkg::resolve {

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string singularize(std::string word) {
  static const std::set<std::string> kKeep = {
      "series", "species", "gas", "lens", "bus", "plus", "news", "chassis"};
  if (word.size() <= 3 || kKeep.count(word) || ends_with(word, "ics")) return word;
  if (ends_with(word, "ies") && word.size() > 4) {
    word.resize(word.size() - 3);
    return word + "y";
  }
  if (ends_with(word, "sses") || ends_with(word, "ches") || ends_with(word, "shes") ||
      ends_with(word, "xes")) {
    word.resize(word.size() - 2);
    return word;
  }
  if (ends_with(word, "s") && !ends_with(word, "ss") && !ends_with(word, "us") &&
      !ends_with(word, "is")) {
    word.pop_back();
  }
  return word;
}

}  // namespace

std::string fold(std::string_view s) {
  std::string spaced;
  spaced.reserve(s.size());
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    spaced.push_back(std::isalnum(c) || c >= 0x80
                         ? static_cast<char>(std::tolower(c))
                         : ' ');
  }
  std::string out;
  std::istringstream words(spaced);
  for (std::string w; words >> w;) {
    if (!out.empty()) out.push_back(' ');
    out += singularize(std::move(w));
  }
  return out;
}

CanonMap::CanonMap(Label label) : label_(label) {
  if (!is_strict(label) && !is_loose(label)) {
    throw Error(ErrorKind::WrongLabelClass,
                std::string(to_string(label)) + " is not dictionary-normalized");
  }
}

void CanonMap::claim(const std::string& key, const std::string& canonical) {
  if (key.empty()) {
    throw Error(ErrorKind::DictionaryConflict, "term folds to nothing: " + canonical);
  }
  auto [it, fresh] = by_key_.emplace(key, canonical);
  if (!fresh && it->second != canonical) {
    throw Error(ErrorKind::DictionaryConflict,
                "\"" + key + "\" maps to both \"" + it->second + "\" and \"" +
                    canonical + "\"");
  }
}

void CanonMap::add(const std::string& canonical_raw, const std::string& variant_raw,
                   const std::string& source) {
  const std::string canonical(text::trim(canonical_raw));
  const std::string variant(text::trim(variant_raw));
  if (canonical.empty()) throw Error(ErrorKind::InvalidArgument, "empty canonical term");
  claim(fold(canonical), canonical);
  if (!variant.empty()) claim(fold(variant), canonical);
  auto [it, fresh] = entries_.try_emplace(canonical);
  if (fresh) {
    it->second.canonical = canonical;
    it->second.source = source;
  }
  if (!variant.empty() && variant != canonical) it->second.variants.insert(variant);
}

std::optional<std::string> CanonMap::lookup(std::string_view surface) const {
  auto it = by_key_.find(fold(surface));
  if (it == by_key_.end()) return std::nullopt;
  return it->second;
}

Dictionaries read_dictionaries(std::istream& in) {
  Dictionaries dicts;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty() || line[0] == '#') continue;
    const auto cols = text::split(line, '\t');
    if (cols.size() < 2 || cols.size() > 3) {
      throw Error(ErrorKind::MalformedFile, "expected label, canonical, variant", line_no);
    }
    if (line_no == 1 && text::iequals(cols[0], "label")) continue;
    const auto label = try_label_of(cols[0]);
    if (!label) throw Error(ErrorKind::MalformedFile, "unknown label " + cols[0], line_no);
    try {
      auto [it, fresh] = dicts.try_emplace(*label, *label);
      it->second.add(cols[1], cols.size() == 3 ? cols[2] : std::string());
    } catch (const Error& e) {
      throw Error(ErrorKind::MalformedFile, e.what(), line_no);
    }
  }
  return dicts;
}

Dictionaries load_dictionaries(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::FileUnreadable, path.string());
  return read_dictionaries(in);
}

void merge_dictionaries(Dictionaries& into, const Dictionaries& from) {
  for (const auto& [label, map] : from) {
    auto [it, fresh] = into.try_emplace(label, label);
    for (const auto& [canonical, entry] : map.entries()) {
      it->second.add(canonical, {}, entry.source);
      for (const auto& v : entry.variants) it->second.add(canonical, v, entry.source);
    }
  }
}

void write_dictionaries(const std::filesystem::path& path, const Dictionaries& dicts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << "label\tcanonical\tvariant\n";
  for (const auto& [label, map] : dicts) {
    for (const auto& [canonical, entry] : map.entries()) {
      out << to_string(label) << '\t' << canonical << '\t' << '\n';
      for (const auto& v : entry.variants) {
        out << to_string(label) << '\t' << canonical << '\t' << v << '\n';
      }
    }
  }
}

Standardizer::Standardizer(const CanonMap& dict, const embed::Embedder& embedder,
                           double tau_d)
    : label_(dict.label()), dict_(&dict), embedder_(&embedder), tau_d_(tau_d) {
  for (const auto& [canonical, entry] : dict.entries()) {
    canonical_of_.push_back(canonical);
    vectors_.push_back(embedder.embed(fold(canonical)));
    for (const auto& v : entry.variants) {
      const std::string key = fold(v);
      if (key.empty()) continue;
      canonical_of_.push_back(canonical);
      vectors_.push_back(embedder.embed(key));
    }
  }
}

Standardizer::Standardizer(Label loose_label) : label_(loose_label) {
  if (!is_loose(loose_label)) {
    throw Error(ErrorKind::WrongLabelClass,
                std::string(to_string(loose_label)) + " requires a dictionary");
  }
}

Standardized Standardizer::operator()(std::string_view entity) const {
  const std::string key = fold(entity);
  if (dict_ != nullptr && !key.empty()) {
    if (auto exact = dict_->lookup(key)) return {Outcome::Canonical, *exact, 1.0};
    const auto v = embedder_->embed(key);
    double best = -2.0;
    const std::string* best_term = nullptr;
    for (std::size_t i = 0; i < vectors_.size(); ++i) {
      const double c = embed::cosine(v, vectors_[i]);
      if (c > best || (c == best && best_term && canonical_of_[i] < *best_term)) {
        best = c;
        best_term = &canonical_of_[i];
      }
    }
    if (best_term != nullptr && best >= tau_d_) {
      return {Outcome::Canonical, *best_term, best};
    }
    if (is_strict(label_)) return {Outcome::Dropped, std::string(entity), std::max(best, 0.0)};
  }
  if (is_strict(label_)) return {Outcome::Dropped, std::string(entity), 0.0};
  return {Outcome::Raw, key.empty() ? std::string(text::trim(entity)) : key, 0.0};
}

Standardized standardize(std::string_view entity, Label label, const CanonMap& dict,
                         const embed::Embedder& embedder, double tau_d) {
  if (!is_strict(label) && !is_loose(label)) {
    throw Error(ErrorKind::WrongLabelClass,
                std::string(to_string(label)) + " is not dictionary-normalized");
  }
  if (dict.label() != label) {
    throw Error(ErrorKind::WrongLabelClass, "dictionary is for " +
                                                std::string(to_string(dict.label())));
  }
  return Standardizer(dict, embedder, tau_d)(entity);
}

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::NfA: return "ER-NF/A";
    case Stage::NF: return "ER-N/F";
    case Stage::ED: return "ER-ED";
  }
  return "";
}

std::string_view to_string(Action action) {
  switch (action) {
    case Action::Relabel: return "relabel";
    case Action::Merge: return "merge";
    case Action::Map: return "map";
    case Action::Drop: return "drop";
    case Action::Keep: return "keep";
    case Action::Link: return "link";
  }
  return "";
}

void write_audit(const std::filesystem::path& path, const std::vector<AuditEntry>& audit) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << "doi\tstage\taction\tbefore_label\tbefore_value\tafter_label\tafter_value\tscore\t"
         "context\n";
  for (const auto& e : audit) {
    out << e.doi << '\t' << to_string(e.stage) << '\t' << to_string(e.action) << '\t'
        << to_string(e.before_label) << '\t' << e.before_value << '\t';
    if (e.after) out << to_string(e.after->first) << '\t' << e.after->second;
    else out << '\t';
    out << '\t';
    if (e.score) out << *e.score;
    out << '\t' << e.context << '\n';
  }
}

std::set<std::string> default_generic_terms() {
  return {"material", "sample", "composite", "catalyst", "electrode", "film",
          "compound", "precursor", "product", "system", "device", "substrate"};
}

std::vector<ExtractionRecord> PipelineResult::graph_ready() const {
  std::vector<ExtractionRecord> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (flags[i] == RecordFlag::Ok) out.push_back(records[i]);
  }
  return out;
}

std::vector<ExtractionRecord> PipelineResult::high_confidence() const {
  std::set<std::string> corrected;
  for (const auto& e : audit) corrected.insert(e.doi);
  std::vector<ExtractionRecord> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (flags[i] == RecordFlag::Ok && !corrected.count(records[i].doi)) {
      out.push_back(records[i]);
    }
  }
  return out;
}

Resolver::Resolver(const PipelineConfig& config) : config_(config) {
  if (config.enable_ed) {
    for (Label label : kStrictLabels) {
      auto it = config.dictionaries.find(label);
      if (it == config.dictionaries.end()) {
        throw Error(ErrorKind::MissingDictionary, std::string(to_string(label)));
      }
      standardizers_.emplace(label, Standardizer(it->second, config.embedder, config.tau_d));
    }
    for (Label label : kLooseLabels) {
      auto it = config.dictionaries.find(label);
      if (it == config.dictionaries.end()) {
        standardizers_.emplace(label, Standardizer(label));
      } else {
        standardizers_.emplace(label,
                               Standardizer(it->second, config.embedder, config.tau_d));
      }
    }
  }
}

const Standardizer& Resolver::standardizer(Label label) const {
  return standardizers_.at(label);
}

namespace {

AuditEntry entry(const std::string& doi, Stage stage, Action action, Label label,
                 std::string value) {
  AuditEntry e;
  e.doi = doi;
  e.stage = stage;
  e.action = action;
  e.before_label = label;
  e.before_value = std::move(value);
  return e;
}

// Moves `value` from `from` to `to`, emitting Relabel or Merge.
void move_entity(ExtractionRecord& r, Label from, Label to, const std::string& value,
                 Stage stage, std::vector<AuditEntry>& audit) {
  r.remove(from, value);
  const bool fresh = r.add(to, value);
  auto e = entry(r.doi, stage, fresh ? Action::Relabel : Action::Merge, from, value);
  e.after = {to, value};
  audit.push_back(std::move(e));
}

}  // namespace

ExtractionRecord Resolver::nf_a(const ExtractionRecord& record,
                                std::optional<std::string_view> source_text,
                                std::vector<AuditEntry>& audit) const {
  ExtractionRecord r = record;
  for (Label label : {Label::Formula, Label::Name}) {
    const auto values = r.values(label);
    for (const auto& value : values) {
      if (config_.generic_terms.count(fold(value))) {
        r.remove(label, value);
        audit.push_back(entry(r.doi, Stage::NfA, Action::Drop, label, value));
        continue;
      }
      const auto verdict = chemlex::classify_entity_kind(value, config_.lex);
      if (verdict.kind == Label::Acronym) {
        move_entity(r, label, Label::Acronym, value, Stage::NfA, audit);
      }
    }
  }

  if (!source_text || source_text->empty()) return r;
  for (const auto& pair : chemlex::extract_name_acronym_pairs(*source_text)) {
    const auto& acronyms = r.values(Label::Acronym);
    if (std::find(acronyms.begin(), acronyms.end(), pair.acronym) != acronyms.end()) {
      continue;
    }
    const auto names = r.values(Label::Name);
    if (names.empty()) continue;
    const auto pair_vec = config_.embedder.embed(pair.name);
    double best = -2.0;
    const std::string* best_name = nullptr;
    for (const auto& name : names) {
      const double c = embed::cosine(pair_vec, config_.embedder.embed(name));
      if (c > best) {
        best = c;
        best_name = &name;
      }
    }
    if (best < config_.tau_a) continue;
    auto e = entry(r.doi, Stage::NfA, Action::Link, Label::Name, *best_name);
    e.after = {Label::Acronym, pair.acronym};
    e.score = best;
    r.add(Label::Acronym, pair.acronym);
    audit.push_back(std::move(e));
  }
  return r;
}

ExtractionRecord Resolver::n_f(const ExtractionRecord& record,
                               std::vector<AuditEntry>& audit) const {
  ExtractionRecord r = record;
  for (const auto& value : record.values(Label::Name)) {
    if (chemlex::classify_entity_kind(value, config_.lex).kind == Label::Formula) {
      move_entity(r, Label::Name, Label::Formula, value, Stage::NF, audit);
    }
  }
  for (const auto& value : record.values(Label::Formula)) {
    // Single-element formulas ("Si") stay: the grammar accepts them.
    if (chemlex::classify_entity_kind(value, config_.lex).kind == Label::Name &&
        !chemlex::parse_formula(value, config_.lex)) {
      move_entity(r, Label::Formula, Label::Name, value, Stage::NF, audit);
    }
  }
  return r;
}

namespace {

// Standardizes one list in place. Map keeps the position; Merge and Drop
// remove the entry.
void standardize_list(std::vector<std::string>& list, Label label,
                      const Standardizer& std_fn, const std::string& doi,
                      const std::string& context, std::vector<AuditEntry>& audit) {
  std::vector<std::string> out;
  for (const auto& value : list) {
    const auto result = std_fn(value);
    if (result.outcome == Outcome::Dropped) {
      auto e = entry(doi, Stage::ED, Action::Drop, label, value);
      e.score = result.score;
      e.context = context;
      audit.push_back(std::move(e));
      continue;
    }
    const bool duplicate = std::find(out.begin(), out.end(), result.value) != out.end();
    if (result.value == value && !duplicate) {
      out.push_back(value);
      continue;
    }
    auto e = entry(doi, Stage::ED, duplicate ? Action::Merge : Action::Map, label, value);
    e.after = {label, result.value};
    e.score = result.score;
    e.context = context;
    audit.push_back(std::move(e));
    if (!duplicate) out.push_back(result.value);
  }
  list = std::move(out);
}

}  // namespace

ExtractionRecord Resolver::ed(const ExtractionRecord& record,
                              std::vector<AuditEntry>& audit) const {
  ExtractionRecord r = record;
  for (Label label : {Label::Descriptor, Label::Property, Label::StructurePhase,
                      Label::Synthesis, Label::Characterization}) {
    auto it = r.entities.find(label);
    if (it == r.entities.end()) continue;
    standardize_list(it->second, label, standardizer(label), r.doi, {}, audit);
    if (it->second.empty()) r.entities.erase(it);
  }

  const auto& app_std = standardizer(Label::Application);
  std::vector<ApplicationBlock> apps;
  for (const auto& block : r.applications) {
    const auto result = app_std(block.value);
    if (result.outcome == Outcome::Dropped) {
      auto e = entry(r.doi, Stage::ED, Action::Drop, Label::Application, block.value);
      e.score = result.score;
      audit.push_back(std::move(e));
      for (Label l : {Label::Domain, Label::Property, Label::Descriptor}) {
        for (const auto& v : block.nested(l)) {
          auto n = entry(r.doi, Stage::ED, Action::Drop, l, v);
          n.context = block.value;
          audit.push_back(std::move(n));
        }
      }
      continue;
    }
    ApplicationBlock mapped = block;
    mapped.value = result.value;
    for (Label l : {Label::Property, Label::Descriptor}) {
      standardize_list(mapped.nested(l), l, standardizer(l), r.doi, mapped.value, audit);
    }
    auto existing = std::find_if(apps.begin(), apps.end(), [&](const ApplicationBlock& a) {
      return a.value == mapped.value;
    });
    if (result.value != block.value || existing != apps.end()) {
      auto e = entry(r.doi, Stage::ED,
                     existing != apps.end() ? Action::Merge : Action::Map,
                     Label::Application, block.value);
      e.after = {Label::Application, mapped.value};
      e.score = result.score;
      audit.push_back(std::move(e));
    }
    if (existing == apps.end()) {
      apps.push_back(std::move(mapped));
      continue;
    }
    for (Label l : {Label::Domain, Label::Property, Label::Descriptor}) {
      auto& target = existing->nested(l);
      for (const auto& v : mapped.nested(l)) {
        if (std::find(target.begin(), target.end(), v) == target.end()) {
          target.push_back(v);
        } else {
          auto n = entry(r.doi, Stage::ED, Action::Merge, l, v);
          n.after = {l, v};
          n.context = mapped.value;
          audit.push_back(std::move(n));
        }
      }
    }
  }
  r.applications = std::move(apps);
  return r;
}

ExtractionRecord Resolver::run(const ExtractionRecord& record,
                               std::vector<AuditEntry>& audit) const {
  ExtractionRecord r = record;
  if (config_.enable_nf_a) r = nf_a(r, std::string_view(record.text), audit);
  if (config_.enable_n_f) r = n_f(r, audit);
  if (config_.enable_ed) r = ed(r, audit);
  return r;
}

PipelineResult Resolver::apply(const std::vector<ExtractionRecord>& records) const {
  PipelineResult result;
  result.records.resize(records.size());
  result.flags.resize(records.size(), RecordFlag::Ok);
  std::vector<std::vector<AuditEntry>> audits(records.size());
  std::vector<std::string> failures(records.size());

  const auto n = static_cast<std::ptrdiff_t>(records.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      result.records[k] = run(records[k], audits[k]);
    } catch (const std::exception& e) {
      failures[k] = e.what();
    }
  }
  for (std::size_t k = 0; k < records.size(); ++k) {
    if (!failures[k].empty()) {
      throw Error(ErrorKind::InvalidArgument, records[k].doi + ": " + failures[k]);
    }
    if (!records[k].has_core()) {
      result.flags[k] = RecordFlag::NoCore;
    } else if (!result.records[k].has_core()) {
      result.flags[k] = RecordFlag::CoreLost;
    }
    result.audit.insert(result.audit.end(), audits[k].begin(), audits[k].end());
  }
  return result;
}

PipelineResult apply_pipeline(const std::vector<ExtractionRecord>& records,
                              const PipelineConfig& config) {
  return Resolver(config).apply(records);
}

ClusterReport build_dictionary(const std::vector<std::pair<std::string, Label>>& entities,
                               double eps, std::size_t min_pts,
                               const embed::Embedder& embedder) {
  ClusterReport report;
  if (entities.empty()) return report;
  const Label label = entities.front().second;
  for (const auto& [value, l] : entities) {
    if (l != label || !is_strict(l)) {
      throw Error(ErrorKind::WrongLabelClass,
                  "build_dictionary needs entities of one strict label");
    }
  }

  std::vector<std::string> distinct;
  std::map<std::string, std::size_t> frequency;
  for (const auto& [raw, l] : entities) {
    std::string value(text::trim(raw));
    if (value.empty()) continue;
    if (frequency[value]++ == 0) distinct.push_back(value);
  }
  std::vector<embed::Vector> points;
  points.reserve(distinct.size());
  for (const auto& v : distinct) {
    const std::string key = fold(v);
    points.push_back(embedder.embed(key.empty() ? v : key));
  }

  for (const auto& cluster : embed::dbscan(points, eps, min_pts)) {
    if (cluster.cluster_id == embed::kNoise) {
      for (std::size_t i : cluster.members) {
        report.rows.push_back({embed::kNoise, label, distinct[i], distinct[i], frequency[distinct[i]]});
        ++report.noise_count;
      }
      continue;
    }
    std::size_t best = cluster.members.front();
    for (std::size_t i : cluster.members) {
      if (frequency[distinct[i]] > frequency[distinct[best]]) best = i;
    }
    for (std::size_t i : cluster.members) {
      report.rows.push_back({cluster.cluster_id, label, distinct[best], distinct[i],
                             frequency[distinct[i]]});
    }
    ++report.cluster_count;
  }
  return report;
}

void write_cluster_report(const std::filesystem::path& path, const ClusterReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << "cluster_id\tlabel\tcanonical\tvariant\n";
  for (const auto& row : report.rows) {
    if (row.cluster_id == embed::kNoise) out << "noise";
    else out << row.cluster_id;
    out << '\t' << to_string(row.label) << '\t' << row.canonical << '\t' << row.variant
        << '\n';
  }
}

ClusterReport read_cluster_report(std::istream& in) {
  ClusterReport report;
  std::set<int> clusters;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty() || line[0] == '#') continue;
    const auto cols = text::split(line, '\t');
    if (cols.size() != 4) {
      throw Error(ErrorKind::MalformedFile, "expected 4 columns", line_no);
    }
    if (line_no == 1 && cols[0] == "cluster_id") continue;
    ClusterRow row;
    if (cols[0] == "noise") {
      row.cluster_id = embed::kNoise;
      ++report.noise_count;
    } else {
      try {
        row.cluster_id = std::stoi(cols[0]);
      } catch (const std::exception&) {
        throw Error(ErrorKind::MalformedFile, "bad cluster id " + cols[0], line_no);
      }
      clusters.insert(row.cluster_id);
    }
    const auto label = try_label_of(cols[1]);
    if (!label) throw Error(ErrorKind::MalformedFile, "unknown label " + cols[1], line_no);
    row.label = *label;
    row.canonical = std::string(text::trim(cols[2]));
    row.variant = std::string(text::trim(cols[3]));
    if (row.canonical.empty()) {
      throw Error(ErrorKind::MalformedFile, "empty canonical term", line_no);
    }
    report.rows.push_back(std::move(row));
  }
  report.cluster_count = clusters.size();
  return report;
}

ClusterReport load_cluster_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::FileUnreadable, path.string());
  return read_cluster_report(in);
}

Dictionaries import_report(const ClusterReport& report) {
  Dictionaries dicts;
  for (const auto& row : report.rows) {
    auto [it, fresh] = dicts.try_emplace(row.label, row.label);
    const std::string source = row.cluster_id == embed::kNoise
                                   ? "noise"
                                   : "cluster:" + std::to_string(row.cluster_id);
    it->second.add(row.canonical, row.variant, source);
  }
  return dicts;
}

}  // namespace mkg::resolve
