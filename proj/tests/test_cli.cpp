#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "ectstab/io.hpp"

using namespace ectstab;
namespace fs = std::filesystem;

namespace {

const std::string fixtures = ECTSTAB_DATA_DIR "/fixtures/";

struct CmdResult {
  int code;
  std::string out, err;
};

class Cli : public ::testing::Test {
 protected:
  fs::path dir;

  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("ectstab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  std::string path(const std::string& name) const { return (dir / name).string(); }

  CmdResult run(const std::string& args) const {
    const std::string cmd = std::string("\"") + ECTSTAB_CLI + "\" " + args + " > \"" + path("stdout") + "\" 2> \"" +
                            path("stderr") + "\"";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read_text_file(path("stdout")),
            read_text_file(path("stderr"))};
  }

  void write(const std::string& name, const std::string& text) const { write_text_file(path(name), text); }
};

}  // namespace

TEST_F(Cli, SquareField) {
  const auto r = run("ect --complex " + fixtures + "square_cycle.json --directions 4 --a 2 --out " + path("f.json") +
                     " --csv " + path("f.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto f = field_from_json(parse_json(read_text_file(path("f.json")), "f"));
  ASSERT_EQ(f.curves.size(), 4u);
  for (const auto& c : f.curves)
    for (auto v : c.values()) EXPECT_TRUE(v == 0 || v == 1);
  EXPECT_NE(read_text_file(path("f.csv")).find("direction,breakpoint,value"), std::string::npos);
  EXPECT_EQ(run("sect --field " + path("f.json")).code, 0);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("ect --complex " + path("missing.json")).code, 2);
  const auto small = run("ect --complex " + fixtures + "square_cycle.json --a 1.0");
  EXPECT_EQ(small.code, 3);
  EXPECT_NE(small.err.find("vertex 'c'"), std::string::npos) << small.err;
  EXPECT_EQ(run("ect --complex " + fixtures + "degenerate_loop.json").code, 3);
  EXPECT_EQ(run("validate --complex " + fixtures + "degenerate_loop.json").code, 3);
  EXPECT_EQ(run("validate --complex " + fixtures + "square_cycle.json").code, 0);
  EXPECT_EQ(run("ect --directions 4").code, 3);
  EXPECT_NE(run("no-such-command").code, 0);

  ASSERT_EQ(run("ect --complex " + fixtures + "square_cycle.json --directions 4 --a 2 --out " + path("a.json")).code, 0);
  ASSERT_EQ(run("ect --complex " + fixtures + "square_cycle.json --directions 8 --a 2 --out " + path("b.json")).code, 0);
  EXPECT_EQ(run("dist --field1 " + path("a.json") + " --field2 " + path("b.json")).code, 4);
  write("bad.json", "{\"kind\": \"ect_field\", ");
  EXPECT_EQ(run("dist --field1 " + path("a.json") + " --field2 " + path("bad.json")).code, 3);
}

TEST_F(Cli, ShiftedPoints) {
  ASSERT_EQ(run("ect --complex " + fixtures + "point_at_0.json --directions 2 --out " + path("p0.json")).code, 0);
  ASSERT_EQ(run("ect --complex " + fixtures + "point_at_0.25.json --directions 2 --out " + path("p1.json")).code, 0);
  const auto r = run("dist --field1 " + path("p0.json") + " --field2 " + path("p1.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = parse_json(r.out, "dist");
  EXPECT_DOUBLE_EQ(j.at("ect_distance").get<double>(), 0.25);
  EXPECT_LE(j.at("sect_distance").get<double>(), 0.75);
}

TEST_F(Cli, Curves) {
  auto r = run("gen-curve --preset circle");
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = parse_json(r.out, "circle");
  EXPECT_NEAR(j.at("length").get<double>(), 6.283185307179586, 1e-12);
  EXPECT_NEAR(j.at("curvature_bound").get<double>(), 1.0, 1e-12);
  r = run("gen-curve --preset blob --out " + path("blob.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  j = parse_json(read_text_file(path("blob.json")), "blob");
  EXPECT_TRUE(j.at("simple").get<bool>());
  write("bad.json", "[{\"j\": 1, \"re\": ");
  EXPECT_EQ(run("gen-curve --coeffs " + path("bad.json")).code, 3);
  EXPECT_EQ(run("gen-curve --preset pentagon").code, 3);

  ASSERT_EQ(run("sample --curve " + path("blob.json") + " --n 30 --seed 4 --out " + path("s.csv")).code, 0);
  r = run("smooth --samples " + path("s.csv") + " --m-points 128 --out " + path("est.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(run("validate --complex " + path("est.json") + " --a 2").code, 0);
  EXPECT_EQ(run("ect --complex " + path("est.json") + " --a 2 --directions 8").code, 0);
}

TEST_F(Cli, Bounds) {
  const auto r = run("bounds --M 2 --length 3.141592653589793 --eps 0.01 --interpolation-eps 0.05");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = parse_json(r.out, "bounds");
  EXPECT_EQ(j.at("n").at(0).get<long>(), 9);
  EXPECT_NEAR(j.at("total").get<double>(), 4.344, 5e-4);
  EXPECT_TRUE(j.contains("interpolation_bound"));
  EXPECT_EQ(run("bounds --M 2").code, 3);
  EXPECT_EQ(run("bounds --M 2 --length 1 --eps 0").code, 3);
}

TEST_F(Cli, ExperimentRepeatsAndFailures) {
  write("cfg.json", R"({"curve": "ellipse", "a": 2.5, "ns": [8, 16], "seeds": [0, 1], "directions": 8,
    "m_points": 64, "posterior_samples": 2, "reference_points": 512, "table_grid": 256})");
  ASSERT_EQ(run("experiment --config " + path("cfg.json") + " --outdir " + path("o1") + " --threads 1").code, 0);
  ASSERT_EQ(run("experiment --config " + path("cfg.json") + " --outdir " + path("o2") + " --threads 3").code, 0);
  EXPECT_EQ(read_text_file(path("o1/results.csv")), read_text_file(path("o2/results.csv")));
  EXPECT_EQ(read_text_file(path("o1/summary.json")), read_text_file(path("o2/summary.json")));

  write("cfg2.json", R"({"curve": "ellipse", "a": 2.5, "ns": [2, 8], "seeds": [0], "directions": 8,
    "m_points": 64, "posterior_samples": 1, "reference_points": 512, "table_grid": 256})");
  const auto r = run("experiment --config " + path("cfg2.json") + " --outdir " + path("o3"));
  EXPECT_EQ(r.code, 5);
  EXPECT_NE(read_text_file(path("o3/results.csv")).find(",failed,"), std::string::npos);
  write("cfg3.json", R"({"curve": "ellipse", "ns": "lots"})");
  EXPECT_EQ(run("experiment --config " + path("cfg3.json") + " --outdir " + path("o4")).code, 3);
}
