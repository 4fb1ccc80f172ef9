#include "mkg/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <optional>

#include "json.hpp"
#include "mkg/error.hpp"
#include "mkg/text.hpp"

namespace mkg {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<std::string>& ApplicationBlock::nested(Label label) {
  switch (label) {
    case Label::Domain: return domains;
    case Label::Property: return properties;
    case Label::Descriptor: return descriptors;
    default: break;
  }
  throw Error(ErrorKind::WrongLabelClass,
              std::string(to_string(label)) + " cannot nest under Application");
}

const std::vector<std::string>& ApplicationBlock::nested(Label label) const {
  return const_cast<ApplicationBlock*>(this)->nested(label);
}

const std::vector<std::string>& ExtractionRecord::values(Label label) const {
  static const std::vector<std::string> kEmpty;
  auto it = entities.find(label);
  return it == entities.end() ? kEmpty : it->second;
}

bool ExtractionRecord::add(Label label, std::string value) {
  auto& list = entities[label];
  if (std::find(list.begin(), list.end(), value) != list.end()) return false;
  list.push_back(std::move(value));
  return true;
}

bool ExtractionRecord::remove(Label label, std::string_view value) {
  auto it = entities.find(label);
  if (it == entities.end()) return false;
  auto pos = std::find(it->second.begin(), it->second.end(), value);
  if (pos == it->second.end()) return false;
  it->second.erase(pos);
  if (it->second.empty()) entities.erase(it);
  return true;
}

bool ExtractionRecord::has_core() const {
  return std::any_of(kCoreLabels.begin(), kCoreLabels.end(),
                     [&](Label l) { return !values(l).empty(); });
}

std::size_t ExtractionRecord::mention_count() const {
  std::size_t n = 0;
  for (const auto& [label, list] : entities) n += list.size();
  for (const auto& app : applications) {
    n += 1 + app.domains.size() + app.properties.size() +
         app.descriptors.size();
  }
  return n;
}

namespace {

[[noreturn]] void malformed(const std::string& msg, std::size_t line_no) {
  throw Error(ErrorKind::MalformedSyntax, msg, line_no);
}

Label label_at(const std::string& key, std::size_t line_no) {
  auto label = try_label_of(key);
  if (!label) throw Error(ErrorKind::UnknownLabel, key, line_no);
  return *label;
}

void push_unique(std::vector<std::string>& list, std::string value) {
  if (std::find(list.begin(), list.end(), value) == list.end()) {
    list.push_back(std::move(value));
  }
}

// Accepts an array of strings or a lone string. Blank strings are skipped.
std::vector<std::string> string_list(const json& value, std::string_view key,
                                     std::size_t line_no) {
  std::vector<std::string> out;
  auto take = [&](const json& item) {
    if (!item.is_string()) {
      malformed("non-string entry under \"" + std::string(key) + "\"", line_no);
    }
    std::string s(text::trim(item.get_ref<const std::string&>()));
    if (!s.empty()) push_unique(out, std::move(s));
  };
  if (value.is_array()) {
    for (const auto& item : value) take(item);
  } else if (value.is_string()) {
    take(value);
  } else if (!value.is_null()) {
    malformed("\"" + std::string(key) + "\" must be an array of strings",
              line_no);
  }
  return out;
}

void add_application(std::vector<ApplicationBlock>& apps,
                     ApplicationBlock block) {
  for (auto& existing : apps) {
    if (existing.value != block.value) continue;
    for (Label l : {Label::Domain, Label::Property, Label::Descriptor}) {
      for (auto& v : block.nested(l)) push_unique(existing.nested(l), v);
    }
    return;
  }
  apps.push_back(std::move(block));
}

std::vector<ApplicationBlock> application_list(const json& value,
                                               std::size_t line_no) {
  std::vector<ApplicationBlock> out;
  if (value.is_null()) return out;
  json items = value;
  if (!items.is_array()) items = json::array({value});
  for (const auto& item : items) {
    ApplicationBlock block;
    if (item.is_string()) {
      block.value = std::string(text::trim(item.get_ref<const std::string&>()));
    } else if (item.is_object()) {
      auto v = item.find("value");
      if (v == item.end() || !v->is_string()) {
        malformed("application object needs a string \"value\"", line_no);
      }
      block.value = std::string(text::trim(v->get_ref<const std::string&>()));
      for (auto it = item.begin(); it != item.end(); ++it) {
        if (it.key() == "value") continue;
        const Label label = label_at(it.key(), line_no);
        if (label != Label::Domain && label != Label::Property &&
            label != Label::Descriptor) {
          malformed("\"" + it.key() + "\" cannot nest under Application",
                    line_no);
        }
        block.nested(label) = string_list(it.value(), it.key(), line_no);
      }
    } else {
      malformed("application entries must be strings or objects", line_no);
    }
    if (block.value.empty()) continue;
    add_application(out, std::move(block));
  }
  return out;
}

}  // namespace

ExtractionRecord parse_record(std::string_view line, std::size_t line_no) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error& e) {
    malformed(e.what(), line_no);
  }
  if (!doc.is_object()) malformed("record must be a JSON object", line_no);

  ExtractionRecord record;
  auto doi = doc.find("doi");
  if (doi == doc.end() || !doi->is_string() ||
      text::trim(doi->get_ref<const std::string&>()).empty()) {
    throw Error(ErrorKind::MissingDoi, "", line_no);
  }
  record.doi = std::string(text::trim(doi->get_ref<const std::string&>()));

  auto year = doc.find("year");
  if (year == doc.end() || year->is_null()) {
    throw Error(ErrorKind::MissingYear, record.doi, line_no);
  }
  if (!year->is_number_integer()) malformed("\"year\" must be an integer", line_no);
  const auto y = year->get<long long>();
  if (y < kMinYear || y > kMaxYear) {
    malformed("year " + std::to_string(y) + " outside 1900-2100", line_no);
  }
  record.year = static_cast<int>(y);

  if (auto t = doc.find("text"); t != doc.end() && !t->is_null()) {
    if (!t->is_string()) malformed("\"text\" must be a string", line_no);
    record.text = t->get<std::string>();
  }

  auto response = doc.find("response");
  if (response == doc.end() || !response->is_object()) {
    malformed("\"response\" object missing", line_no);
  }
  for (auto it = response->begin(); it != response->end(); ++it) {
    const Label label = label_at(it.key(), line_no);
    if (label == Label::Application) {
      for (auto& block : application_list(it.value(), line_no)) {
        add_application(record.applications, std::move(block));
      }
      continue;
    }
    for (auto& v : string_list(it.value(), it.key(), line_no)) {
      record.add(label, std::move(v));
    }
  }
  // add() may leave an empty list behind when every value was blank.
  std::erase_if(record.entities, [](const auto& kv) { return kv.second.empty(); });
  return record;
}

std::string serialize_record(const ExtractionRecord& record) {
  ordered_json doc;
  doc["doi"] = record.doi;
  doc["year"] = record.year;
  if (!record.text.empty()) doc["text"] = record.text;
  ordered_json response = ordered_json::object();
  for (Label label : kAllLabels) {
    if (label == Label::Application) {
      if (record.applications.empty()) continue;
      ordered_json apps = ordered_json::array();
      for (const auto& app : record.applications) {
        if (app.flat()) {
          apps.push_back(app.value);
          continue;
        }
        ordered_json obj;
        obj["value"] = app.value;
        obj["Domain"] = app.domains;
        obj["Property"] = app.properties;
        obj["Descriptor"] = app.descriptors;
        apps.push_back(std::move(obj));
      }
      response[std::string(to_string(label))] = std::move(apps);
      continue;
    }
    const auto& list = record.values(label);
    if (!list.empty()) response[std::string(to_string(label))] = list;
  }
  doc["response"] = std::move(response);
  return doc.dump();
}

void merge_into(ExtractionRecord& target, const ExtractionRecord& other) {
  target.year = std::min(target.year, other.year);
  if (target.text.empty()) target.text = other.text;
  for (const auto& [label, list] : other.entities) {
    for (const auto& v : list) target.add(label, v);
  }
  for (const auto& app : other.applications) {
    add_application(target.applications, app);
  }
}

CorpusStats compute_stats(const std::vector<ExtractionRecord>& records) {
  CorpusStats stats;
  stats.record_count = records.size();
  for (const auto& r : records) {
    ++stats.year_histogram[r.year];
    for (const auto& [label, list] : r.entities) {
      stats.per_label_counts[label] += list.size();
    }
    for (const auto& app : r.applications) {
      ++stats.per_label_counts[Label::Application];
      for (Label l : {Label::Domain, Label::Property, Label::Descriptor}) {
        if (!app.nested(l).empty()) {
          stats.per_label_counts[l] += app.nested(l).size();
        }
      }
    }
  }
  return stats;
}

Corpus load_corpus(std::istream& in) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));

  const auto n = static_cast<std::ptrdiff_t>(lines.size());
  std::vector<std::optional<ExtractionRecord>> parsed(lines.size());
  std::vector<std::string> errors(lines.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& line = lines[static_cast<std::size_t>(i)];
    const std::size_t line_no = static_cast<std::size_t>(i) + 1;
    if (text::trim(line).empty()) {
      errors[static_cast<std::size_t>(i)] = "blank line";
      continue;
    }
    try {
      parsed[static_cast<std::size_t>(i)] = parse_record(line, line_no);
    } catch (const Error& e) {
      errors[static_cast<std::size_t>(i)] = e.what();
    }
  }

  Corpus corpus;
  std::map<std::string, std::size_t> by_doi;
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    if (!parsed[i]) {
      corpus.rejects.push_back({i + 1, errors[i]});
      continue;
    }
    auto [it, fresh] = by_doi.emplace(parsed[i]->doi, corpus.records.size());
    if (fresh) {
      corpus.records.push_back(std::move(*parsed[i]));
    } else {
      merge_into(corpus.records[it->second], *parsed[i]);
      ++corpus.stats.merged_count;
    }
  }
  const std::size_t merged = corpus.stats.merged_count;
  corpus.stats = compute_stats(corpus.records);
  corpus.stats.merged_count = merged;
  corpus.stats.reject_count = corpus.rejects.size();
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::FileUnreadable, path.string());
  return load_corpus(in);
}

void write_records(const std::filesystem::path& path,
                   const std::vector<ExtractionRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  for (const auto& r : records) out << serialize_record(r) << '\n';
  if (!out) throw Error(ErrorKind::IoError, "write failed: " + path.string());
}

}  // namespace mkg
