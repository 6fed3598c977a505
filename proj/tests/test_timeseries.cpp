#include "rlens/timeseries.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace rlens;

namespace {

PhasedSeries ingest_text(const std::string& body, const PhaseSplit& split) {
  std::istringstream in(body);
  return ingest_timeseries_stream(in, split, "test.csv");
}

const std::string kThreeRows =
    "step,demand_kw,solar_kw\n"
    "0,1.0,0.5\n"
    "1,2.0,0.0\n"
    "2,3.0,4.0\n";

}  // namespace

TEST(IngestTimeseries, MinimalValidSplit) {
  const auto phased = ingest_text(kThreeRows, {{0, 1}, {1, 2}, {2, 3}});
  EXPECT_EQ(phased.train.size(), 1u);
  EXPECT_EQ(phased.validation.size(), 1u);
  EXPECT_EQ(phased.test.size(), 1u);
  EXPECT_DOUBLE_EQ(phased.train.demand_kw[0], 1.0);
  EXPECT_DOUBLE_EQ(phased.validation.demand_kw[0], 2.0);
  EXPECT_DOUBLE_EQ(phased.test.solar_kw[0], 4.0);
  EXPECT_EQ(phased.test.offset, 2u);
}

TEST(IngestTimeseries, OverlappingRangesRejected) {
  try {
    ingest_text(kThreeRows, {{0, 2}, {1, 3}, {2, 3}});
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("overlap"), std::string::npos);
  }
}

TEST(IngestTimeseries, NegativeDemandIsAParseErrorWithLineNumber) {
  const std::string body =
      "step,demand_kw,solar_kw\n"
      "0,1.0,0.5\n"
      "1,-1,0.0\n";
  try {
    ingest_text(body, {{0, 1}, {1, 2}, {2, 3}});
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(":3"), std::string::npos);
  }
}

TEST(IngestTimeseries, MalformedRowReported) {
  const std::string body =
      "step,demand_kw,solar_kw\n"
      "0,abc,0.5\n";
  EXPECT_THROW(ingest_text(body, {{0, 1}, {1, 2}, {2, 3}}), ParseError);
}

TEST(IngestTimeseries, EmptySliceRejected) {
  EXPECT_THROW(ingest_text(kThreeRows, {{0, 1}, {1, 1}, {2, 3}}), ConfigError);
}

TEST(IngestTimeseries, RangeBeyondSeriesRejected) {
  EXPECT_THROW(ingest_text(kThreeRows, {{0, 1}, {1, 2}, {2, 9}}), ConfigError);
}

TEST(IngestTimeseries, BadHeaderRejected) {
  EXPECT_THROW(ingest_text("a,b,c\n0,1,1\n", {{0, 1}, {1, 2}, {2, 3}}), ParseError);
}

TEST(SyntheticSeries, DeterministicAndNonnegative) {
  std::vector<double> d1, s1, d2, s2;
  synthetic_timeseries(d1, s1);
  synthetic_timeseries(d2, s2);
  EXPECT_EQ(d1, d2);
  EXPECT_EQ(s1, s2);
  EXPECT_EQ(d1.size(), 960u);
  for (std::size_t i = 0; i < d1.size(); ++i) {
    EXPECT_GE(d1[i], 0.0);
    EXPECT_GE(s1[i], 0.0);
  }
  // night at the start of each day
  EXPECT_DOUBLE_EQ(s1[0], 0.0);
}

TEST(SyntheticSeries, BundledCsvMatchesGenerator) {
  std::ifstream bundled(std::string(RLENS_TEST_DATA_DIR) + "/microgrid_default.csv");
  ASSERT_TRUE(bundled.good()) << "bundled data/microgrid_default.csv missing";
  std::ostringstream want;
  std::vector<double> d, s;
  synthetic_timeseries(d, s);
  write_timeseries_csv(want, d, s);
  std::stringstream got;
  got << bundled.rdbuf();
  EXPECT_EQ(got.str(), want.str());
}

TEST(DefaultPhaseSplit, SeventyTenTwenty) {
  const auto split = default_phase_split(960);
  EXPECT_EQ(split.train.begin, 0u);
  EXPECT_EQ(split.train.end, 672u);
  EXPECT_EQ(split.validation.end, 768u);
  EXPECT_EQ(split.test.end, 960u);
}
