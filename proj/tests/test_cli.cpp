#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cli.hpp"

using oddsphere::cli::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = oddsphere::cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

std::string temp_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST(Cli, GammaPrintsIntervalAroundClosedForm) {
  auto r = run({"gamma", "--alpha", "2", "--tol", "1e-8"});
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  double truth = std::pow(std::numbers::pi, 4) / 90 - 1;
  EXPECT_LE(j["gamma"][0].get<double>(), truth);
  EXPECT_GE(j["gamma"][1].get<double>(), truth);
  EXPECT_LE(j["width"].get<double>(), 1e-8);
}

TEST(Cli, LemmaCheckPasses) {
  auto r = run({"lemma-check", "--alpha", "1", "--trials", "100", "--seed", "7", "--support", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_LT(j["max_ratio"].get<double>(), 1.0);
  EXPECT_EQ(j["violations"].get<int>(), 0);
}

TEST(Cli, InputErrorsExitWithTwo) {
  EXPECT_EQ(run({"toeplitz", "--symbol", "z1*zb1", "--d", "1", "--alpha", "1", "--degree", "-1"}).code, 2);
  EXPECT_EQ(run({"gamma", "--alpha", "1", "--bogus", "3"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"gamma", "--tol", "1e-8"}).code, 2);  // missing --alpha
  EXPECT_EQ(run({"gamma", "--alpha", "1", "--tol", "0"}).code, 2);
  EXPECT_EQ(run({"gamma", "--alpha", "0.5"}).code, 2);
  EXPECT_EQ(run({"weights", "--d", "0", "--alpha", "1", "--degree", "2"}).code, 2);
  EXPECT_EQ(run({"toeplitz", "--symbol", "z1", "--d", "1", "--alpha", "1.5", "--degree", "2", "--exact"}).code, 2);
  EXPECT_EQ(run({"toeplitz", "--symbol", "z1", "--d", "1", "--alpha", "1", "--degree", "2", "--format", "xml"}).code, 2);
}

TEST(Cli, MalformedSymbolReportsOffset) {
  auto r = run({"toeplitz", "--symbol", "z1 + q2", "--d", "1", "--alpha", "1", "--degree", "2"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("offset 5"), std::string::npos) << r.err;
  EXPECT_EQ(lines(r.err).size(), 1u);
  r = run({"toeplitz", "--symbol", "z3", "--d", "2", "--alpha", "2", "--degree", "2"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("offset"), std::string::npos) << r.err;
}

TEST(Cli, HelpExitsZero) {
  auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("qgh"), std::string::npos);
  EXPECT_EQ(run({"rho", "--help"}).code, 0);
}

TEST(Cli, WeightsCsv) {
  auto r = run({"weights", "--d", "1", "--alpha", "1", "--degree", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 5u);
  EXPECT_EQ(ls[0], "index,multi_index,norm_sq,basis_coeff");
  EXPECT_EQ(ls[1], "1,\"[0]\",1,1");
  EXPECT_EQ(ls[2].substr(0, 12), "2,\"[1]\",1/2,");
  EXPECT_EQ(ls[3].substr(0, 12), "3,\"[2]\",1/3,");
  EXPECT_NEAR(std::stod(ls[3].substr(12)), std::sqrt(3.0), 1e-15);
  EXPECT_EQ(ls[4].rfind("# config: {", 0), 0u);

  r = run({"weights", "--d", "2", "--alpha", "2.5", "--degree", "1"});
  ASSERT_EQ(r.code, 0);
  ls = lines(r.out);
  ASSERT_EQ(ls.size(), 5u);
  EXPECT_EQ(ls[2].substr(0, 10), "2,\"[0,1]\",");
  // ||z2||^2 = Gamma(3.5) / Gamma(4.5) = 1/3.5
  EXPECT_NEAR(std::stod(split(ls[2])[3]), 1 / 3.5, 1e-15);
}

TEST(Cli, ToeplitzJsonMatchesLibrary) {
  auto r = run({"toeplitz", "--symbol", "z1", "--d", "1", "--alpha", "1", "--degree", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_EQ(j["M"].get<int>(), 4);
  const auto& re = j["entries"]["re"];
  ASSERT_EQ(re.size(), 16u);
  // <T_z e_0, e_1> = sqrt(N(1)^2 / (N(0) N(1))) = sqrt(1/2)
  EXPECT_NEAR(re[1 * 4 + 0].get<double>(), std::sqrt(0.5), 1e-15);
  EXPECT_EQ(re[0].get<double>(), 0.0);
  double lo = j["norm_interval"][0], hi = j["norm_interval"][1];
  EXPECT_LE(lo, 1.0);
  EXPECT_GE(hi, 1.0 - 1e-12);
}

TEST(Cli, ToeplitzExactAndCsv) {
  auto r = run({"toeplitz", "--symbol", "z1", "--d", "1", "--alpha", "1", "--degree", "2", "--exact", "--format",
                "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto ls = lines(r.out);
  EXPECT_EQ(ls[0], "row,col,re,im,coeff_re,coeff_im,radicand");
  ASSERT_EQ(ls.size(), 4u);  // two nonzero entries plus the trailer
  auto f = split(ls[1]);
  EXPECT_EQ(f[0], "2");
  EXPECT_EQ(f[1], "1");
  // coeff * sqrt(radicand) = (1/2) * sqrt(2)
  EXPECT_EQ(f[4], "1/2");
  EXPECT_EQ(f[6], "2");
  EXPECT_EQ(ls.back().rfind("# config: ", 0), 0u);

  r = run({"toeplitz", "--symbol", "z1*zb1", "--d", "1", "--alpha", "1", "--degree", "2", "--exact"});
  ASSERT_EQ(r.code, 0);
  json j = json::parse(r.out);
  ASSERT_EQ(j["exact_entries"].size(), 9u);
  // <T_{|z|^2} e_0, e_0> = N(1)/N(0) = 1/2, radicand 1
  EXPECT_EQ(j["exact_entries"][0]["coeff_re"], "1/2");
  EXPECT_EQ(j["exact_entries"][0]["radicand"], "1");
}

TEST(Cli, HarmonicExtendReport) {
  auto r = run({"harmonic-extend", "--symbol", "z1*zb1", "--d", "1", "--exact"});
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_TRUE(j["report"]["laplacian_zero"].get<bool>());
  EXPECT_LT(j["report"]["boundary_residual_max"].get<double>(), 1e-14);
  ASSERT_EQ(j["extension"]["terms"].size(), 1u);
  EXPECT_EQ(j["extension"]["terms"][0]["re"], "1");
  EXPECT_EQ(oddsphere::parse_symbol(j["text"].get<std::string>(), 1),
            oddsphere::ExactSymbol::constant(1, oddsphere::GaussRational(1)));

  r = run({"harmonic-extend", "--symbol", "z1^2*zb1^2 + z2*zb1 + z1*zb2", "--d", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  j = json::parse(r.out);
  EXPECT_TRUE(j["report"]["laplacian_zero"].get<bool>());
  EXPECT_LT(j["report"]["boundary_residual_max"].get<double>(), 1e-12);
  EXPECT_TRUE(j["extension"]["terms"][0]["re"].is_number());

  EXPECT_EQ(run({"harmonic-extend", "--symbol", "z1", "--d", "1"}).code, 2);  // not real-valued
}

TEST(Cli, CommutatorDecayExact) {
  auto r = run({"commutator-decay", "--d", "1", "--alpha", "1", "--degree", "8", "--exact"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto ls = lines(r.out);
  EXPECT_EQ(ls[0], "degree,max_abs,max_abs_exact");
  ASSERT_EQ(ls.size(), 1u + 7u + 1u);  // degrees 0..6 are free of truncation effects
  for (int k = 0; k <= 6; ++k) {
    auto f = split(ls[1 + k]);
    EXPECT_EQ(f[0], std::to_string(k));
    EXPECT_EQ(f[2], "1/" + std::to_string((k + 1) * (k + 2)));
    EXPECT_NEAR(std::stod(f[1]), 1.0 / ((k + 1) * (k + 2)), 1e-13);
  }
}

TEST(Cli, UDiffAndKernelCheck) {
  auto r = run({"u-diff", "--d", "1", "--alpha", "3", "--degree", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 1u + 11u + 1u);
  EXPECT_EQ(ls[0], "degree,max_abs");
  EXPECT_EQ(std::stod(split(ls[1])[1]), 0.0);  // T_z has no entries in degree-0 rows
  EXPECT_GT(std::stod(split(ls[2])[1]), std::stod(split(ls[11])[1]));
  EXPECT_EQ(run({"u-diff", "--d", "1", "--alpha", "1", "--degree", "4"}).code, 2);  // alpha must exceed d

  r = run({"kernel-check", "--d", "2", "--alpha", "2", "--degree", "40", "--points", "5", "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  ls = lines(r.out);
  ASSERT_EQ(ls.size(), 7u);
  for (int i = 1; i <= 5; ++i) EXPECT_LT(std::stod(split(ls[i])[5]), 1e-7);
}

TEST(Cli, RhoBetweenAntipodalPoints) {
  auto r = run({"rho", "--d", "1", "--alpha", "1", "--mu", "point:1,0", "--nu", "point:-1,0", "--degree", "2",
                "--pairs", "512", "--cutoff", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_NEAR(j["value"].get<double>(), 2.0, 0.04);

  r = run({"rho", "--d", "1", "--alpha", "1", "--mu", "vector:2", "--nu", "vector:2", "--cutoff", "4", "--pairs",
           "100"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["value"].get<double>(), 0.0, 1e-8);
}

TEST(Cli, RhoStateSpecs) {
  std::string path = temp_file("oddsphere_density.json", R"({"M": 3, "re": [[0.5,0,0],[0,0.5,0],[0,0,0]]})");
  auto r = run({"rho", "--d", "1", "--alpha", "2", "--mu", "density:" + path, "--nu", "vector:1", "--cutoff", "2",
                "--pairs", "100", "--support", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_GT(json::parse(r.out)["value"].get<double>(), 0.0);
  auto base = std::vector<std::string>{"rho", "--d", "1", "--alpha", "1", "--cutoff", "3", "--pairs", "50"};
  auto with = [&](std::string mu) {
    auto a = base;
    a.insert(a.end(), {"--mu", mu, "--nu", "vector:1"});
    return run(a).code;
  };
  EXPECT_EQ(with("point:0.6"), 2);           // wrong coordinate count
  EXPECT_EQ(with("point:0.5,0.5"), 2);       // not on the sphere
  EXPECT_EQ(with("vector:0"), 2);
  EXPECT_EQ(with("vector:99"), 2);           // beyond the truncation
  EXPECT_EQ(with("vector:x"), 2);
  EXPECT_EQ(with("mixed:1"), 2);
  EXPECT_EQ(with("density:/nonexistent.json"), 2);
  EXPECT_EQ(with("density:" + path), 2);     // size does not match cutoff 3
}

TEST(Cli, QghCsvIsReproducible) {
  std::vector<std::string> args{"qgh", "--d", "1", "--alpha-list", "1,4", "--degree", "2", "--cutoff", "4",
                                "--pairs", "100", "--seed", "3", "--vectors", "2", "--random-states", "1",
                                "--points", "2"};
  auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  auto ls = lines(a.out);
  ASSERT_EQ(ls.size(), 4u);
  EXPECT_EQ(ls[0], "alpha,lp_hausdorff_estimate,upper_bound_2gamma_lo,upper_bound_2gamma_hi");
  auto r1 = split(ls[1]), r4 = split(ls[2]);
  EXPECT_EQ(r1[0], "1");
  EXPECT_GT(std::stod(r1[1]), std::stod(r4[1]));
  EXPECT_LE(std::stod(r4[1]), std::stod(r4[3]) + 0.05);
  ASSERT_EQ(ls[3].rfind("# config: ", 0), 0u);
  json cfg = json::parse(ls[3].substr(10));
  EXPECT_EQ(cfg["alpha_list"], json({1.0, 4.0}));
  EXPECT_EQ(cfg["seed"], 3);

  EXPECT_EQ(run({"qgh", "--d", "2", "--alpha-list", "1,4"}).code, 2);  // alpha < d
  EXPECT_EQ(run({"qgh", "--d", "1", "--alpha-list", "1,x"}).code, 2);
}

TEST(Cli, ConfigFileMergesAndFlagsWin) {
  std::string path = temp_file("oddsphere_cfg.json", R"({"alpha": 2, "tol": 1e-8})");
  auto r = run({"gamma", "--config", path});
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_EQ(j["alpha"].get<double>(), 2.0);
  EXPECT_EQ(j["config"]["tol"].get<double>(), 1e-8);

  r = run({"gamma", "--alpha", "3", "--config=" + path});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["alpha"].get<double>(), 3.0);

  std::string lists = temp_file("oddsphere_cfg_list.json",
                                R"({"d": 1, "alpha-list": [1, 4], "cutoff": 3, "pairs": 50, "support": 2, "vectors": 1,
                                    "random-states": 0, "points": 1})");
  r = run({"qgh", "--config", lists});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out).size(), 4u);

  std::string flag = temp_file("oddsphere_cfg_flag.json", R"({"exact": true, "symbol": "z1", "d": 1})");
  r = run({"toeplitz", "--config", flag, "--alpha", "1", "--degree", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(json::parse(r.out).contains("exact_entries"));

  std::string bad = temp_file("oddsphere_cfg_bad.json", R"({"alpha": 2, "colour": "red"})");
  EXPECT_EQ(run({"gamma", "--config", bad}).code, 2);
  EXPECT_EQ(run({"gamma", "--config", "/nonexistent.json"}).code, 2);
  std::string broken = temp_file("oddsphere_cfg_broken.json", "{");
  EXPECT_EQ(run({"gamma", "--config", broken}).code, 2);
}
