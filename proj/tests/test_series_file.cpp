#include <gtest/gtest.h>

#include "rescale/series_file.hpp"

using namespace rescale;

namespace {

constexpr const char* kCsv =
    "# base: 6\n"
    "# ratio: 2\n"
    "# per_copy: true\n"
    "# units: ebits\n"
    "N,value,sigma\n"
    "6,0.167,0.001\n"
    "12,0.308,0.001\n";

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidValue;
}

}  // namespace

TEST(SeriesCsv, ParsesMetadataAndRecords) {
  const auto f = parse_series_csv(kCsv);
  EXPECT_EQ(f.base, 6u);
  EXPECT_EQ(f.ratio, 2u);
  EXPECT_TRUE(f.per_copy);
  EXPECT_EQ(f.units, "ebits");
  ASSERT_EQ(f.records.size(), 2u);
  EXPECT_EQ(f.records[1].n, 12u);
  EXPECT_DOUBLE_EQ(f.records[1].value, 0.308);
}

TEST(SeriesCsv, PerCopyBecomesTotals) {
  const auto s = parse_series_csv(kCsv).to_series();
  EXPECT_NEAR(s.at(6).value(), 1.002, 1e-15);
  EXPECT_NEAR(s.at(6).sigma(), 0.006, 1e-15);
  EXPECT_NEAR(s.at(12).value(), 3.696, 1e-15);
}

TEST(SeriesCsv, TotalsStayAsIs) {
  const auto s = parse_series_csv("# base: 1\n# ratio: 2\nN,value,sigma\n1,0.5,0\n2,0.9,0.01\n").to_series();
  EXPECT_EQ(s.at(2).value(), 0.9);
}

TEST(SeriesCsv, Errors) {
  EXPECT_EQ(kind_of([] { parse_series_csv("# base: 6\n6,0.1,0.0\n"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_series_csv("# base: 6\nN,value,sigma\n6,abc,0.0\n"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_series_csv("# base: 6\nN,value,sigma\n6,0.1\n"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_series_csv("# base: 6\nN,value,sigma\n6,0.1,-0.1\n"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_series_csv("# base: 6\nN,value,sigma\n7,0.1,0.1\n"); }), ErrorKind::NotOnLattice);
  EXPECT_EQ(kind_of([] { parse_series_csv("# per_copy: maybe\nN,value,sigma\n"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_series_csv("# base: 1\nN,value,sigma\n2,0.1,0\n2,0.2,0\n").to_series(); }),
            ErrorKind::ParseError);
}

TEST(SeriesJson, MirrorsCsv) {
  const auto f = parse_series_json(R"({"base": 6, "ratio": 2, "per_copy": true,
      "records": [{"N": 6, "value": 0.167, "sigma": 0.001}, {"N": 12, "value": 0.308, "sigma": 0.001}]})");
  const auto c = parse_series_csv(kCsv);
  EXPECT_EQ(f.base, c.base);
  EXPECT_EQ(f.units, "ebits");
  ASSERT_EQ(f.records.size(), c.records.size());
  for (std::size_t i = 0; i < f.records.size(); ++i) {
    EXPECT_EQ(f.records[i].n, c.records[i].n);
    EXPECT_EQ(f.records[i].value, c.records[i].value);
    EXPECT_EQ(f.records[i].sigma, c.records[i].sigma);
  }
}

TEST(SeriesJson, Errors) {
  EXPECT_EQ(kind_of([] { parse_series_json("{not json"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_series_json(R"({"base": 6})"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_series_json(R"({"base": 6, "ratio": 2, "records": [{"N": 5, "value": 1, "sigma": 0}]})"); }),
            ErrorKind::NotOnLattice);
}

TEST(SeriesFormat, ExtensionDispatch) {
  EXPECT_EQ(parse_series("a.csv", kCsv).records.size(), 2u);
  EXPECT_EQ(kind_of([] { parse_series("a.txt", kCsv); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { load_series("/nonexistent/file.csv"); }), ErrorKind::ParseError);
}
