#pragma once

// Extraction records: one line of JSON per paper,
//
//   {"doi": "10.1/x", "year": 2016, "text": "...optional abstract...",
//    "response": {"Formula": ["LiFePO4"],
//                 "Application": ["cathode",
//                                 {"value": "battery", "Domain": ["energy"],
//                                  "Property": [], "Descriptor": []}]}}
//
// Gold annotation files use the same format.

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mkg/ontology.hpp"

namespace mkg {

struct ApplicationBlock {
  std::string value;
  std::vector<std::string> domains;
  std::vector<std::string> properties;
  std::vector<std::string> descriptors;

  bool flat() const {
    return domains.empty() && properties.empty() && descriptors.empty();
  }
  std::vector<std::string>& nested(Label label);
  const std::vector<std::string>& nested(Label label) const;

  friend bool operator==(const ApplicationBlock&,
                         const ApplicationBlock&) = default;
};

struct ExtractionRecord {
  std::string doi;
  int year = 0;
  // Source abstract; empty when the producer did not ship it.
  std::string text;
  // Every label except Application. Lists are never empty and hold no
  // duplicates.
  std::map<Label, std::vector<std::string>> entities;
  std::vector<ApplicationBlock> applications;

  const std::vector<std::string>& values(Label label) const;
  // Appends unless already present. Returns false on duplicate.
  bool add(Label label, std::string value);
  bool remove(Label label, std::string_view value);
  bool has_core() const;
  std::size_t mention_count() const;

  friend bool operator==(const ExtractionRecord&,
                         const ExtractionRecord&) = default;
};

inline constexpr int kMinYear = 1900;
inline constexpr int kMaxYear = 2100;

// Throws Error with kind MissingDoi, MissingYear, UnknownLabel or
// MalformedSyntax; `line_no` is attached to the error.
ExtractionRecord parse_record(std::string_view line, std::size_t line_no = 0);
std::string serialize_record(const ExtractionRecord& record);

// Label-wise set union of `other` into `target`; target keeps its year
// unless other is earlier.
void merge_into(ExtractionRecord& target, const ExtractionRecord& other);

struct CorpusStats {
  std::size_t record_count = 0;
  std::map<Label, std::size_t> per_label_counts;
  std::map<int, std::size_t> year_histogram;
  std::size_t reject_count = 0;
  // Lines whose DOI repeated an earlier record and were merged into it.
  std::size_t merged_count = 0;
};

struct RejectedLine {
  std::size_t line = 0;
  std::string message;
};

struct Corpus {
  std::vector<ExtractionRecord> records;
  CorpusStats stats;
  std::vector<RejectedLine> rejects;
};

CorpusStats compute_stats(const std::vector<ExtractionRecord>& records);

// Malformed lines (including blank ones) are counted and skipped;
// record_count + merged_count + reject_count == number of lines.
Corpus load_corpus(std::istream& in);
// Throws Error(FileUnreadable).
Corpus load_corpus(const std::filesystem::path& path);

void write_records(const std::filesystem::path& path,
                   const std::vector<ExtractionRecord>& records);

}  // namespace mkg
