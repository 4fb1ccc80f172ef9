// Writes a seeded synthetic extraction corpus:
//   corpus.jsonl       raw records
//   gold.jsonl         expected records after resolution
//   dictionaries.tsv   expert dictionaries for the strict labels
//   links.csv          first year of every planted material-application link

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "mkg/error.hpp"
#include "mkg/synth.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"Synthetic materials extraction corpus"};
  mkg::synth::SynthConfig config;
  std::string out_dir;
  std::string dict_only;
  app.add_option("--out-dir", out_dir, "Output directory");
  app.add_option("--dictionaries", dict_only, "Only write the built-in dictionaries here");
  app.add_option("--seed", config.seed, "Generator seed")->capture_default_str();
  app.add_option("--families", config.families)->capture_default_str();
  app.add_option("--members", config.materials_per_family)->capture_default_str();
  app.add_option("--first-year", config.first_year)->capture_default_str();
  app.add_option("--last-year", config.last_year)->capture_default_str();
  app.add_option("--variant-rate", config.variant_rate)->capture_default_str();
  app.add_option("--formula-as-name-rate", config.formula_as_name_rate)->capture_default_str();
  app.add_option("--acronym-as-name-rate", config.acronym_as_name_rate)->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    if (!dict_only.empty()) {
      mkg::resolve::write_dictionaries(dict_only, mkg::synth::default_dictionaries());
      return 0;
    }
    if (out_dir.empty()) {
      std::cerr << "--out-dir or --dictionaries is required\n";
      return 2;
    }
    fs::create_directories(out_dir);
    const auto corpus = mkg::synth::generate(config);
    const fs::path dir(out_dir);
    mkg::write_records(dir / "corpus.jsonl", corpus.records);
    mkg::write_records(dir / "gold.jsonl", corpus.gold);
    mkg::resolve::write_dictionaries(dir / "dictionaries.tsv", corpus.dictionaries);
    std::ofstream links(dir / "links.csv");
    links << "formula,application,year\n";
    for (const auto& l : corpus.links) {
      links << l.formula << ',' << '"' << l.application << '"' << ',' << l.year << '\n';
    }
    for (const auto& [k, v] : corpus.tallies) std::cout << k << ": " << v << '\n';
  } catch (const mkg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == mkg::ErrorKind::InvalidArgument ? 2 : 1;
  }
  return 0;
}
