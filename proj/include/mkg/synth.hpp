#pragma once

// Seeded synthetic extraction corpus.
//
// Materials come in families. Members of a family share attribute values
// (properties, descriptors, phase, synthesis, characterization) and are
// eventually linked to the family's applications, each member at its own
// year. Raw records carry the surface noise the resolution cascade is meant
// to remove: strict values written as dictionary variants, loose values in
// odd casing, acronyms and formulas filed under Name, generic terms, and
// acronyms that only appear in the abstract.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mkg/ingest.hpp"
#include "mkg/resolve.hpp"

namespace mkg::synth {

struct SynthConfig {
  std::uint64_t seed = 7;
  std::size_t families = 13;
  std::size_t materials_per_family = 8;
  int first_year = 2000;
  int last_year = 2020;
  double record_rate = 0.6;  // chance of a record per material per active year
  double noise_link_rate = 0.02;
  double acronym_as_name_rate = 0.08;
  double formula_as_name_rate = 0.05;
  double generic_term_rate = 0.04;
  double text_acronym_rate = 0.1;
  double variant_rate = 0.5;
};

struct PlantedLink {
  std::string formula;
  std::string application;
  int year = 0;
};

struct SynthCorpus {
  std::vector<ExtractionRecord> records;  // raw
  std::vector<ExtractionRecord> gold;     // expected after resolution, same order
  resolve::Dictionaries dictionaries;
  std::vector<PlantedLink> links;         // first year of every material-application pair
  std::map<std::string, std::size_t> tallies;
};

// Dictionaries for the strict labels over the built-in vocabulary.
resolve::Dictionaries default_dictionaries();

// Throws Error(InvalidArgument) for impossible configurations.
SynthCorpus generate(const SynthConfig& config);

}  // namespace mkg::synth
