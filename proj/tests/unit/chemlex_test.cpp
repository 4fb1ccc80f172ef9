#include <gtest/gtest.h>

#include <map>

#include "mkg/chemlex.hpp"

namespace mkg::chemlex {
namespace {

using Parts = std::vector<std::pair<std::string, double>>;

TEST(Formula, SimpleParts) {
  const auto h2o = parse_formula("H2O");
  ASSERT_TRUE(h2o);
  EXPECT_EQ(h2o.ast->parts(), (Parts{{"H", 2}, {"O", 1}}));
  const auto lfp = parse_formula("LiFePO4");
  ASSERT_TRUE(lfp);
  EXPECT_EQ(lfp.ast->parts(), (Parts{{"Li", 1}, {"Fe", 1}, {"P", 1}, {"O", 4}}));
}

TEST(Formula, RejectsAcronyms) {
  const auto r = parse_formula("PVDF");
  EXPECT_FALSE(r);
  EXPECT_EQ(r.reject.position, 2u);
  EXPECT_FALSE(parse_formula("lithium"));
  EXPECT_FALSE(parse_formula("Fe2O3 nanorods"));
  EXPECT_FALSE(parse_formula("(Fe2O3"));
}

TEST(Formula, IsotopesOnlyWhenEnabled) {
  EXPECT_FALSE(parse_formula("D2O"));
  LexConfig cfg;
  cfg.allow_isotopes = true;
  EXPECT_TRUE(parse_formula("D2O", cfg));
}

TEST(Formula, LosslessSerialization) {
  for (const char* s : {"H2O", "LiFePO4", "Ca(OH)2", "CuSO4·5H2O", "Li0.5CoO2", "Pt/C",
                        "Au@SiO2", "[Fe(CN)6]3", "LiCoO2-Al2O3", "Na2CO3.10H2O", "Ti3C2",
                        "LiNi0.8Co0.15Al0.05O2"}) {
    const auto r = parse_formula(s);
    ASSERT_TRUE(r) << s << ": " << r.reject.reason;
    EXPECT_EQ(serialize(*r.ast), s);
  }
}

TEST(Formula, GroupsMultiply) {
  const auto r = parse_formula("Ca(OH)2");
  ASSERT_TRUE(r);
  double h = 0;
  for (const auto& [sym, n] : r.ast->parts()) {
    if (sym == "H") h += n;
  }
  EXPECT_DOUBLE_EQ(h, 2.0);
}

std::map<std::string, double> totals(const char* s) {
  const auto r = parse_formula(s);
  EXPECT_TRUE(r) << s;
  std::map<std::string, double> out;
  if (r) {
    for (const auto& [sym, n] : r.ast->parts()) out[sym] += n;
  }
  return out;
}

TEST(Formula, AsciiDotHydrates) {
  const std::map<std::string, double> soda = {{"Na", 2}, {"C", 1}, {"O", 13}, {"H", 20}};
  EXPECT_EQ(totals("Na2CO3.10H2O"), soda);
  EXPECT_EQ(totals("CuSO4.5H2O"), totals("CuSO4·5H2O"));
  EXPECT_EQ(totals("CuSO4.H2O"), totals("CuSO4·H2O"));
  // Without water after it the dot is a decimal point.
  const std::map<std::string, double> lco = {{"Li", 0.5}, {"Co", 1}, {"O", 2}};
  EXPECT_EQ(totals("Li0.5CoO2"), lco);
  EXPECT_DOUBLE_EQ(totals("Fe2.5O4")["Fe"], 2.5);
}

TEST(Formula, PeriodicTable) {
  EXPECT_EQ(periodic_table_size(), 118u);
  EXPECT_TRUE(is_element_symbol("Og"));
  EXPECT_FALSE(is_element_symbol("D"));
}

TEST(Classify, Kinds) {
  EXPECT_EQ(classify_entity_kind("Copper Indium Gallium Selenide").kind, Label::Name);
  EXPECT_EQ(classify_entity_kind("LiFePO4").kind, Label::Formula);
  EXPECT_EQ(classify_entity_kind("PVDF").kind, Label::Acronym);
  EXPECT_EQ(classify_entity_kind("titania").kind, Label::Name);
  const auto composite = classify_entity_kind("NiFeN HC/NF");
  EXPECT_EQ(composite.kind, Label::Name);
  EXPECT_FALSE(composite.reasons.empty());
}

TEST(Classify, OverridesWin) {
  EXPECT_EQ(classify_entity_kind("NO").kind, Label::Formula);
  EXPECT_EQ(classify_entity_kind("HER").kind, Label::Acronym);
  EXPECT_EQ(classify_entity_kind("IT").kind, Label::Acronym);
}

TEST(Classify, AlwaysHasReasons) {
  for (const char* s : {"x", "TiO2", "Ab", "SOMETHING LONG", "ZnO nanorod", "C"}) {
    const auto v = classify_entity_kind(s);
    EXPECT_FALSE(v.reasons.empty()) << s;
    EXPECT_GE(v.confidence, 0.0);
    EXPECT_LE(v.confidence, 1.0);
  }
}

TEST(Pairs, Extraction) {
  const auto p = extract_name_acronym_pairs("polyvinylidene fluoride (PVDF) films");
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].name, "polyvinylidene fluoride");
  EXPECT_EQ(p[0].acronym, "PVDF");
  EXPECT_TRUE(extract_name_acronym_pairs("reported in (2019)").empty());
  EXPECT_TRUE(extract_name_acronym_pairs("no parentheses at all").empty());
  const auto two = extract_name_acronym_pairs(
      "We used reduced graphene oxide (RGO) and metal organic framework (MOF) layers.");
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[1].acronym, "MOF");
}

}  // namespace
}  // namespace mkg::chemlex
