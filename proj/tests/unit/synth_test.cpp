#include <gtest/gtest.h>

#include "mkg/error.hpp"
#include "mkg/resolve.hpp"
#include "mkg/synth.hpp"

namespace mkg::synth {
namespace {

TEST(Synth, DeterministicPerSeed) {
  const auto a = generate({});
  const auto b = generate({});
  EXPECT_EQ(a.records, b.records);
  EXPECT_EQ(a.gold, b.gold);
  SynthConfig other;
  other.seed = 8;
  EXPECT_NE(generate(other).records, a.records);
}

TEST(Synth, ShapeAndYears) {
  SynthConfig cfg;
  const auto c = generate(cfg);
  ASSERT_EQ(c.records.size(), c.gold.size());
  EXPECT_EQ(c.tallies.at("materials"), cfg.families * cfg.materials_per_family);
  std::set<std::string> dois;
  for (std::size_t i = 0; i < c.records.size(); ++i) {
    EXPECT_EQ(c.records[i].doi, c.gold[i].doi);
    EXPECT_TRUE(dois.insert(c.records[i].doi).second);
    EXPECT_GE(c.records[i].year, cfg.first_year);
    EXPECT_LE(c.records[i].year, cfg.last_year);
    EXPECT_TRUE(c.gold[i].has_core());
  }
  for (const auto& l : c.links) {
    EXPECT_GE(l.year, cfg.first_year);
    EXPECT_LE(l.year, cfg.last_year);
  }
}

TEST(Synth, GoldUsesCanonicalValues) {
  const auto c = generate({});
  for (const auto& r : c.gold) {
    for (const auto& b : r.applications) {
      EXPECT_TRUE(c.dictionaries.at(Label::Application).contains_canonical(b.value));
    }
    for (const auto& v : r.values(Label::Synthesis)) {
      EXPECT_TRUE(c.dictionaries.at(Label::Synthesis).contains_canonical(v));
    }
  }
}

TEST(Synth, NoiseRatesControlTallies) {
  SynthConfig clean;
  clean.variant_rate = 0.0;
  clean.formula_as_name_rate = 0.0;
  clean.acronym_as_name_rate = 0.0;
  const auto c = generate(clean);
  EXPECT_EQ(c.tallies.count("strict_variant") ? c.tallies.at("strict_variant") : 0u, 0u);
  EXPECT_EQ(c.tallies.count("formula_as_name") ? c.tallies.at("formula_as_name") : 0u, 0u);
  const auto noisy = generate({});
  EXPECT_GT(noisy.tallies.at("strict_variant"), 0u);
  EXPECT_GT(noisy.tallies.at("formula_as_name"), 0u);
}

TEST(Synth, RejectsImpossibleConfigs) {
  for (auto tweak : {+[](SynthConfig& c) { c.families = 0; },
                     +[](SynthConfig& c) { c.families = 14; },
                     +[](SynthConfig& c) { c.last_year = c.first_year + 2; }}) {
    SynthConfig c;
    tweak(c);
    try {
      generate(c);
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
    }
  }
}

TEST(Synth, DictionariesCoverStrictLabels) {
  const auto d = default_dictionaries();
  for (Label l : kStrictLabels) {
    ASSERT_TRUE(d.count(l));
    EXPECT_GT(d.at(l).size(), 0u);
  }
}

}  // namespace
}  // namespace mkg::synth
