#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "mkg/error.hpp"
#include "mkg/ingest.hpp"
#include "mkg/rng.hpp"
#include "mkg/synth.hpp"

namespace mkg {
namespace {

ErrorKind kind_of(const std::string& line) {
  try {
    parse_record(line, 7);
  } catch (const Error& e) {
    EXPECT_EQ(e.line(), 7u);
    return e.kind();
  }
  ADD_FAILURE() << "accepted: " << line;
  return ErrorKind::InvalidArgument;
}

TEST(Ingest, ParsesResponse) {
  const auto r = parse_record(
      R"({"doi":"10.1/x","year":2016,"response":{"Formula":["LiFePO4"],"Property":["high capacity"]}})");
  EXPECT_EQ(r.doi, "10.1/x");
  EXPECT_EQ(r.year, 2016);
  EXPECT_EQ(r.values(Label::Formula), std::vector<std::string>{"LiFePO4"});
  EXPECT_EQ(r.values(Label::Property), std::vector<std::string>{"high capacity"});
  EXPECT_EQ(r.mention_count(), 2u);
}

TEST(Ingest, EmptyResponseIsValid) {
  const auto r = parse_record(R"({"doi":"10.1/z","year":2015,"response":{}})");
  EXPECT_EQ(r.mention_count(), 0u);
}

TEST(Ingest, Errors) {
  EXPECT_EQ(kind_of(R"({"doi":"10.1/y","year":2018,"response":{"Color":["red"]}})"),
            ErrorKind::UnknownLabel);
  EXPECT_EQ(kind_of(R"({"year":2018,"response":{}})"), ErrorKind::MissingDoi);
  EXPECT_EQ(kind_of(R"({"doi":"  ","year":2018,"response":{}})"), ErrorKind::MissingDoi);
  EXPECT_EQ(kind_of(R"({"doi":"10.1/y","response":{}})"), ErrorKind::MissingYear);
  EXPECT_EQ(kind_of(R"({"doi":"10.1/y","year":1800,"response":{}})"), ErrorKind::MalformedSyntax);
  EXPECT_EQ(kind_of(R"({"doi":"10.1/y","year":2018,)"), ErrorKind::MalformedSyntax);
}

TEST(Ingest, ApplicationForms) {
  const auto r = parse_record(
      R"({"doi":"d","year":2020,"response":{"Application":["cathode",)"
      R"({"value":"battery","Domain":["energy"],"Property":["high rate"],"Descriptor":[]}]}})");
  ASSERT_EQ(r.applications.size(), 2u);
  EXPECT_TRUE(r.applications[0].flat());
  EXPECT_EQ(r.applications[1].value, "battery");
  EXPECT_EQ(r.applications[1].domains, std::vector<std::string>{"energy"});
  EXPECT_EQ(r.applications[1].properties, std::vector<std::string>{"high rate"});
}

TEST(Ingest, SerializeRoundTrip) {
  Rng rng(5);
  for (std::size_t i = 0; i < 300; ++i) {
    auto r = fixtures::random_record(rng, i);
    r.text = i % 3 ? "" : "Abstract with \"quotes\" and\nnewline.";
    EXPECT_EQ(parse_record(serialize_record(r)), r);
  }
}

TEST(Ingest, LoadCountsRejects) {
  std::istringstream in(
      "{\"doi\":\"a\",\"year\":2001,\"response\":{}}\n"
      "not json\n"
      "{\"doi\":\"b\",\"year\":2002,\"response\":{\"Name\":[\"titania\"]}}\n");
  const auto c = load_corpus(in);
  EXPECT_EQ(c.records.size(), 2u);
  EXPECT_EQ(c.stats.reject_count, 1u);
  ASSERT_EQ(c.rejects.size(), 1u);
  EXPECT_EQ(c.rejects[0].line, 2u);
  EXPECT_EQ(c.records[0].doi, "a");
  EXPECT_EQ(c.stats.year_histogram.at(2002), 1u);
}

TEST(Ingest, EmptyInput) {
  std::istringstream in("");
  const auto c = load_corpus(in);
  EXPECT_TRUE(c.records.empty());
  EXPECT_EQ(c.stats.record_count, 0u);
  EXPECT_EQ(c.stats.reject_count, 0u);
  EXPECT_TRUE(c.stats.per_label_counts.empty());
}

TEST(Ingest, DuplicateDoiMerges) {
  std::istringstream in(
      "{\"doi\":\"a\",\"year\":2005,\"response\":{\"Formula\":[\"TiO2\"]}}\n"
      "{\"doi\":\"a\",\"year\":2003,\"response\":{\"Formula\":[\"TiO2\",\"ZnO\"]}}\n");
  const auto c = load_corpus(in);
  ASSERT_EQ(c.records.size(), 1u);
  EXPECT_EQ(c.records[0].year, 2003);
  EXPECT_EQ(c.records[0].values(Label::Formula), (std::vector<std::string>{"TiO2", "ZnO"}));
  EXPECT_EQ(c.stats.merged_count, 1u);
  EXPECT_EQ(c.stats.record_count + c.stats.merged_count + c.stats.reject_count, 2u);
}

TEST(Ingest, MissingFile) {
  try {
    load_corpus(std::filesystem::path("/nonexistent/x.jsonl"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::FileUnreadable);
  }
}

TEST(Ingest, StatsMatchGeneratorTally) {
  const auto corpus = synth::generate({});
  std::ostringstream buf;
  for (const auto& r : corpus.records) buf << serialize_record(r) << '\n';
  std::istringstream in(buf.str());
  const auto c = load_corpus(in);
  EXPECT_EQ(c.stats.record_count, corpus.tallies.at("records"));
  std::map<Label, std::size_t> want;
  for (const auto& r : corpus.records) {
    for (const auto& [l, v] : r.entities) want[l] += v.size();
    for (const auto& b : r.applications) {
      ++want[Label::Application];
      want[Label::Domain] += b.domains.size();
      want[Label::Property] += b.properties.size();
      want[Label::Descriptor] += b.descriptors.size();
    }
  }
  for (const auto& [l, n] : want) {
    if (n) EXPECT_EQ(c.stats.per_label_counts.at(l), n) << to_string(l);
  }
}

}  // namespace
}  // namespace mkg
