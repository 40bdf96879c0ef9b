// Copyright 2026 The gbslab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gbs/cli.h"

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "gbs/sample_set.h"
#include "gbs/sectioned_text.h"
#include "gbs/table.h"
#include "gtest/gtest.h"

using namespace gbs;
namespace fs = std::filesystem;

namespace {

const std::string kConfigs = GBS_CONFIG_DIR;

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome gbslab(const std::vector<std::string> &args) {
  std::ostringstream out;
  std::ostringstream err;
  Outcome r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string &name) {
  fs::path dir = fs::path(::testing::TempDir()) / ("gbslab_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string spec(const std::string &name) { return kConfigs + "/" + name; }

// Byte comparison against tests/golden; GBS_UPDATE_GOLDEN=1 rewrites the files.
void expect_golden(const fs::path &produced, const std::string &golden_name) {
  fs::path golden = fs::path(GBS_GOLDEN_DIR) / golden_name;
  std::string actual = read_text(produced.string());
  if (std::getenv("GBS_UPDATE_GOLDEN") != nullptr) {
    fs::create_directories(golden.parent_path());
    write_text(golden.string(), actual);
  }
  ASSERT_TRUE(fs::exists(golden)) << golden << " missing; run with GBS_UPDATE_GOLDEN=1";
  EXPECT_EQ(actual, read_text(golden.string())) << "differs from " << golden;
}

void expect_same_files(const fs::path &a, const fs::path &b) {
  int compared = 0;
  for (const auto &entry : fs::directory_iterator(a)) {
    fs::path other = b / entry.path().filename();
    ASSERT_TRUE(fs::exists(other)) << other;
    EXPECT_EQ(read_text(entry.path().string()), read_text(other.string())) << entry.path().filename();
    ++compared;
  }
  EXPECT_GT(compared, 0);
}

}  // namespace

TEST(cli, simulate_golden) {
  fs::path dir = scratch("simulate");
  Outcome r = gbslab({"simulate", "--spec", spec("m6_easy.spec"), "--out", dir.string(), "--seed", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  expect_golden(dir / "distribution.csv", "simulate_m6/distribution.csv");
  expect_golden(dir / "normalization.csv", "simulate_m6/normalization.csv");
  Table t = read_table((dir / "distribution.csv").string());
  EXPECT_EQ(t.rows.size(), 64u);
}

TEST(cli, simulate_vacuum_and_spec_list) {
  fs::path dir = scratch("simulate_vacuum");
  write_text((dir / "vacuum.spec").string(), "[network]\nmodes = 3\n");
  Outcome r = gbslab({"simulate", "--spec", (dir / "vacuum.spec").string(), "--out", (dir / "one").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  Table t = read_table((dir / "one" / "distribution.csv").string());
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0], (std::vector<std::string>{"000", "1"}));

  r = gbslab({"simulate", "--spec", spec("m6_easy.spec") + "," + spec("m8_reference.spec"), "--out",
              (dir / "many").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "many" / "m6_easy" / "distribution.csv"));
  EXPECT_TRUE(fs::exists(dir / "many" / "m8_reference" / "distribution.csv"));
}

TEST(cli, simulate_refusals) {
  fs::path dir = scratch("simulate_refusals");
  Outcome big = gbslab({"simulate", "--spec", spec("synthetic_100.spec"), "--out", dir.string()});
  EXPECT_EQ(big.code, cli::kExitScale);
  EXPECT_NE(big.err.find("gbslab sample"), std::string::npos) << big.err;

  write_text((dir / "bad.spec").string(), "[network]\nmodes = 4\n[source.0]\nkind = tmss\nmodes = 0, 1\nr = abc\n");
  Outcome bad = gbslab({"simulate", "--spec", (dir / "bad.spec").string(), "--out", dir.string()});
  EXPECT_EQ(bad.code, cli::kExitConfig);
  EXPECT_NE(bad.err.find("[source.0]"), std::string::npos) << bad.err;
}

TEST(cli, sample_golden_and_config) {
  fs::path dir = scratch("sample");
  write_text((dir / "run.cfg").string(),
             "[run]\nseed = 7\nworkers = 2\n[sample]\nmodels = ideal, enum, mcmc, thermal, distinguishable, uniform\n"
             "samples = 40\nburn_in = 50\nthinning = 5\nchains = 2\n");
  Outcome r = gbslab({"sample", "--config", (dir / "run.cfg").string(), "--spec", spec("m6_easy.spec"), "--out",
                      (dir / "out").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char *model : {"ideal_chain", "ideal_enum", "ideal_mcmc", "thermal", "distinguishable", "uniform"}) {
    std::string file = std::string("samples_") + model + ".txt";
    expect_golden(dir / "out" / file, "sample_m6/" + file);
    SampleSet s = load_samples((dir / "out" / file).string());
    EXPECT_EQ(s.size(), 40);
    EXPECT_EQ(s.modes(), 6);
    EXPECT_EQ(s.meta().seed, 7u);
    EXPECT_NE(s.meta().spec_hash, "none");
  }
}

TEST(cli, sample_reproducibility) {
  fs::path dir = scratch("sample_repro");
  std::vector<std::string> base = {"sample", "--spec", spec("m8_reference.spec"), "--models",
                                   "ideal,thermal,distinguishable,uniform", "--samples", "500", "--seed", "11"};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return gbslab(args);
  };
  ASSERT_EQ(with({"--out", (dir / "a").string()}).code, 0);
  ASSERT_EQ(with({"--out", (dir / "b").string()}).code, 0);
  expect_same_files(dir / "a", dir / "b");
  ASSERT_EQ(with({"--out", (dir / "c").string(), "--workers", "4"}).code, 0);
  expect_same_files(dir / "a", dir / "c");
}

TEST(cli, sample_edge_cases) {
  fs::path dir = scratch("sample_edges");
  Outcome r = gbslab({"sample", "--spec", spec("m6_easy.spec"), "--samples", "0", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::string text = read_text((dir / "samples_ideal_chain.txt").string());
  EXPECT_EQ(text.find_first_not_of("#", 0), 1u);
  for (const std::string &line : split(text, '\n')) {
    EXPECT_TRUE(line.empty() || line[0] == '#') << line;
  }
  Outcome unknown = gbslab({"sample", "--spec", spec("m6_easy.spec"), "--models", "boson", "--out", dir.string()});
  EXPECT_EQ(unknown.code, cli::kExitConfig);
  Outcome band = gbslab({"sample", "--spec", spec("m6_easy.spec"), "--models", "uniform", "--clicks-band", "2..3",
                         "--samples", "200", "--out", dir.string()});
  ASSERT_EQ(band.code, 0);
  SampleSet u = load_samples((dir / "samples_uniform.txt").string());
  for (const ClickPattern &p : u.patterns()) {
    EXPECT_GE(p.clicks(), 2);
    EXPECT_LE(p.clicks(), 3);
  }
}

TEST(cli, validate_verdicts_and_golden) {
  fs::path dir = scratch("validate");
  ASSERT_EQ(gbslab({"sample", "--spec", spec("m10_reference.spec"), "--models", "ideal,thermal,uniform", "--samples",
                    "5000", "--seed", "2", "--out", dir.string()})
                .code,
            0);
  std::vector<std::string> common = {"validate", "--spec", spec("m10_reference.spec"), "--seed", "9"};
  auto validate = [&](const std::string &file, const std::string &out) {
    std::vector<std::string> args = common;
    args.insert(args.end(), {"--samples-file", (dir / file).string(), "--out", (dir / out).string()});
    return gbslab(args);
  };
  Outcome ideal = validate("samples_ideal_chain.txt", "ideal");
  ASSERT_EQ(ideal.code, 0) << ideal.err;
  EXPECT_EQ(ideal.out.find("FAIL"), std::string::npos) << ideal.out;
  for (const char *f : {"report.csv", "cij_hist.csv", "click_hist.csv", "hog_trajectory.csv", "prob_curve.csv"}) {
    expect_golden(dir / "ideal" / f, std::string("validate_m10/") + f);
  }
  Outcome again = validate("samples_ideal_chain.txt", "ideal_again");
  ASSERT_EQ(again.code, 0);
  expect_same_files(dir / "ideal", dir / "ideal_again");

  Outcome thermal = validate("samples_thermal.txt", "thermal");
  ASSERT_EQ(thermal.code, 0);
  EXPECT_NE(thermal.out.find("FAIL hog_excludes_thermal"), std::string::npos) << thermal.out;
  Outcome uniform = validate("samples_uniform.txt", "uniform");
  ASSERT_EQ(uniform.code, 0);
  EXPECT_NE(uniform.out.find("FAIL curve_matches_ideal"), std::string::npos) << uniform.out;

  Outcome report = gbslab({"report", "--out", (dir / "ideal").string()});
  ASSERT_EQ(report.code, 0) << report.err;
  for (const char *f : {"cij_hist.svg", "click_hist.svg", "hog_trajectory.svg", "prob_curve.svg"}) {
    expect_golden(dir / "ideal" / f, std::string("validate_m10/") + f);
  }
}

TEST(cli, validate_missing_inputs_are_listed) {
  fs::path dir = scratch("validate_missing");
  Outcome r = gbslab({"validate", "--spec", (dir / "none.spec").string(), "--overlay", (dir / "x.txt").string(),
                      "--out", dir.string()});
  EXPECT_EQ(r.code, cli::kExitConfig);
  EXPECT_NE(r.err.find("none.spec"), std::string::npos);
  EXPECT_NE(r.err.find("--samples-file"), std::string::npos);
  EXPECT_NE(r.err.find("x.txt"), std::string::npos);
}

TEST(cli, bench_outputs) {
  fs::path dir = scratch("bench");
  std::vector<std::string> args = {"bench", "--spec", spec("synthetic_100.spec"), "--k-range", "4..20", "--seed", "3",
                                   "--cost-model", "published"};
  auto run_into = [&](const std::string &out) {
    std::vector<std::string> a = args;
    a.insert(a.end(), {"--out", (dir / out).string()});
    return gbslab(a);
  };
  ASSERT_EQ(run_into("a").code, 0);
  ASSERT_EQ(run_into("b").code, 0);
  Table a = read_table((dir / "a" / "bench.csv").string());
  Table b = read_table((dir / "b" / "bench.csv").string());
  ASSERT_EQ(a.rows.size(), 17u);
  for (size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i][0], b.rows[i][0]);
    EXPECT_EQ(a.rows[i][4], b.rows[i][4]);
    EXPECT_EQ(a.rows[i][5], b.rows[i][5]);
  }
  expect_golden(dir / "a" / "cost.csv", "bench/cost_published.csv");
  EXPECT_EQ(read_text((dir / "a" / "cost.csv").string()), read_text((dir / "b" / "cost.csv").string()));

  Outcome too_big = gbslab({"bench", "--spec", spec("synthetic_100.spec"), "--k-range", "20..30", "--out",
                            (dir / "c").string()});
  EXPECT_EQ(too_big.code, cli::kExitScale);
  Outcome short_fit = gbslab({"bench", "--spec", spec("synthetic_100.spec"), "--k-range", "4..6", "--out",
                              (dir / "d").string()});
  EXPECT_EQ(short_fit.code, cli::kExitConfig);
}

TEST(cli, haar_outputs) {
  fs::path dir = scratch("haar");
  ASSERT_EQ(gbslab({"haar", "--modes", "4", "--seed", "3", "--out", (dir / "small").string()}).code, 0);
  expect_golden(dir / "small" / "unitary.csv", "haar_m4/unitary.csv");
  expect_golden(dir / "small" / "haar_report.csv", "haar_m4/haar_report.csv");

  ASSERT_EQ(gbslab({"haar", "--seed", "1", "--out", (dir / "big").string()}).code, 0);
  Table report = read_table((dir / "big" / "haar_report.csv").string());
  ASSERT_EQ(report.rows[2][0], "unitarity_residual");
  EXPECT_LE(std::stod(report.rows[2][1]), 1e-12);
  EXPECT_EQ(report.rows[0][1], "100");
}

TEST(cli, report_on_empty_directory) {
  fs::path dir = scratch("report_empty");
  Outcome r = gbslab({"report", "--out", dir.string()});
  EXPECT_EQ(r.code, cli::kExitConfig);
  EXPECT_NE(r.err.find("hog_trajectory.csv"), std::string::npos);
  EXPECT_NE(r.err.find("bench.csv"), std::string::npos);
}

TEST(cli, config_errors) {
  fs::path dir = scratch("config");
  write_text((dir / "typo.cfg").string(), "[run]\nseed = 4\nsed = 5\n");
  Outcome typo = gbslab({"haar", "--config", (dir / "typo.cfg").string(), "--out", dir.string()});
  EXPECT_EQ(typo.code, cli::kExitConfig);
  EXPECT_NE(typo.err.find("sed"), std::string::npos);
  write_text((dir / "section.cfg").string(), "[sampler]\nsamples = 4\n");
  EXPECT_EQ(gbslab({"haar", "--config", (dir / "section.cfg").string()}).code, cli::kExitConfig);
  EXPECT_EQ(gbslab({"frobnicate"}).code, cli::kExitConfig);
  EXPECT_EQ(gbslab({"sample", "--spec", spec("m6_easy.spec"), "--clicks-band", "5..2"}).code, cli::kExitConfig);
  EXPECT_EQ(gbslab({"--help"}).code, 0);

  // Flags override the config file.
  write_text((dir / "seed.cfg").string(), "[run]\nseed = 4\n[haar]\nmodes = 3\n");
  ASSERT_EQ(gbslab({"haar", "--config", (dir / "seed.cfg").string(), "--seed", "5", "--out", dir.string()}).code, 0);
  Table t = read_table((dir / "haar_report.csv").string());
  EXPECT_EQ(t.meta[1], (std::pair<std::string, std::string>{"seed", "5"}));
  EXPECT_EQ(t.rows[0][1], "3");
}

TEST(cli, parse_range) {
  EXPECT_EQ(cli::parse_range("6..10"), (std::pair<int, int>{6, 10}));
  EXPECT_EQ(cli::parse_range(" 0 .. 0 "), (std::pair<int, int>{0, 0}));
  EXPECT_THROW(cli::parse_range("6-10"), ConfigError);
  EXPECT_THROW(cli::parse_range("9..3"), ConfigError);
}
