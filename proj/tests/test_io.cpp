#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ectstab/io.hpp"
#include "support.hpp"

using namespace ectstab;
using namespace ectstab::testing;

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(0.25), "0.25");
  EXPECT_EQ(format_double(-2.0), "-2");
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
}

TEST(Sha256, KnownDigest) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(ShapeJson, FixtureAndRoundTrip) {
  const auto s = shape_from_json(parse_json(read_text_file(ECTSTAB_DATA_DIR "/fixtures/square_cycle.json"), "square"));
  EXPECT_EQ(s.complex.vertices.size(), 4u);
  EXPECT_EQ(s.complex.edges.size(), 4u);
  EXPECT_EQ(s.complex.euler_characteristic(), 0);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = random_shape(rng, 2 + trial % 2);
    const auto y = shape_from_json(parse_json(shape_to_json(x).dump(), "x"));
    EXPECT_EQ(shape_to_json(x).dump(), shape_to_json(y).dump());
  }
}

TEST(ShapeJson, Malformed) {
  EXPECT_THROW(parse_json("{\"dim\": 2,", "bad"), Error);
  try {
    shape_from_json(parse_json(R"({"dim": 2, "vertices": [{"id": "p", "pos": [0]}], "edges": []})", "short"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::validation);
  }
  try {
    read_text_file("/nonexistent/shape.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::io);
  }
}

TEST(FieldJson, RoundTrip) {
  std::mt19937_64 rng(9);
  const auto s = random_shape(rng, 2);
  const auto f = ect_field(s, make_directions(2, 12, 4), 2.0);
  const auto g = field_from_json(parse_json(field_to_json(f).dump(), "f"));
  EXPECT_EQ(ect_distance(f, g), 0.0);
  EXPECT_TRUE(f.directions.same_vectors(g.directions));
  for (std::size_t i = 0; i < f.curves.size(); ++i) EXPECT_EQ(f.curves[i], g.curves[i]);
  EXPECT_THROW(field_from_json(Json::object()), Error);
}

TEST(FieldCsv, Layout) {
  const auto s = shape_from_json(parse_json(read_text_file(ECTSTAB_DATA_DIR "/fixtures/square_cycle.json"), "square"));
  const auto csv = field_to_csv(ect_field(s, make_directions(2, 4), 2.0));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "direction,breakpoint,value");
  EXPECT_NE(csv.find("0,-inf,0\n"), std::string::npos);
}

TEST(CurveJson, RoundTrip) {
  const auto c = preset_curve("blob");
  const auto j = curve_to_json(c, "blob");
  EXPECT_TRUE(j.at("simple").get<bool>());
  const auto d = curve_from_json(parse_json(j.dump(), "c"));
  EXPECT_EQ(d.coeffs(), c.coeffs());
  EXPECT_THROW(coeffs_from_json(Json::array()), Error);
  EXPECT_THROW(coeffs_from_json(parse_json(R"([{"re": 1}])", "c")), Error);
}

TEST(SamplesCsv, RoundTripAndErrors) {
  const auto s = sample_noisy(preset_curve("ellipse"), 25, 0.01, 2u);
  const auto t = samples_from_csv("# header comment\n" + samples_to_csv(s));
  ASSERT_EQ(t.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(t[i].param, s[i].param);
    EXPECT_EQ(t[i].point, s[i].point);
  }
  EXPECT_THROW(samples_from_csv("param,x0,x1\n0.1,abc,2\n"), Error);
  EXPECT_THROW(samples_from_csv("param,x0,x1\n0.1\n"), Error);
}

TEST(ConfigJson, DefaultsAndOverrides) {
  const auto c = config_from_json(parse_json(read_text_file(ECTSTAB_DATA_DIR "/experiment_default.json"), "cfg"));
  EXPECT_EQ(c.curve, "blob");
  EXPECT_EQ(c.ns, (std::vector<int>{20, 50, 100}));
  EXPECT_EQ(c.seeds.size(), 20u);
  EXPECT_DOUBLE_EQ(c.gp_noise_variance(), 0.002 * 0.002);
  const auto back = config_from_json(config_to_json(c));
  EXPECT_EQ(config_to_json(back).dump(), config_to_json(c).dump());
  EXPECT_THROW(config_from_json(parse_json(R"({"curve": "pentagon"})", "cfg")), Error);
  EXPECT_THROW(config_from_json(parse_json(R"({"ns": "many"})", "cfg")), Error);
}

TEST(Meta, CsvHeader) {
  Meta m;
  m.config = {{"a", 2.0}};
  m.add_input("samples", "abc");
  const auto h = m.csv_header();
  EXPECT_EQ(h.rfind("# tool: ectstab ", 0), 0u);
  EXPECT_NE(h.find("ba7816bf"), std::string::npos);
  EXPECT_EQ(m.to_json().at("version"), kVersion);
}
