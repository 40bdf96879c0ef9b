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

// Acceptance run: one PASS/FAIL line per criterion, with the measured quantities.
//
//   gbs_acceptance            run every criterion
//   gbs_acceptance 3 9        run the listed criteria only

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gbs/bench.h"
#include "gbs/cli.h"
#include "gbs/haar.h"
#include "gbs/mocks.h"
#include "gbs/probability.h"
#include "gbs/samplers.h"
#include "gbs/table.h"
#include "gbs/validation.h"
#include "test_specs.h"

namespace {

using namespace gbs;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string &what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<void(Outcome &)> run;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

int worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

double tvd(const std::vector<double> &a, const std::vector<double> &b) { return fidelity_tvd(a, b).tvd; }

void closed_forms(Outcome &o) {
  double worst = 0;
  for (double r : {0.0, 0.5, 1.0, 1.5}) {
    GaussianState smss = GaussianState::vacuum(1).with_smss(0, r, 0.3);
    worst = std::max(worst, std::abs(click_probability(smss, ClickPattern::from_string("0")) - 1 / std::cosh(r)));
    double nbar = std::sinh(r) * std::sinh(r);
    GaussianState thermal = GaussianState::vacuum(1).with_thermal(0, nbar);
    worst = std::max(worst,
                     std::abs(click_probability(thermal, ClickPattern::from_string("1")) - nbar / (nbar + 1)));
    GaussianState tmss = GaussianState::vacuum(2).with_tmss(0, 1, r, 0.3);
    double c = std::cosh(r);
    worst = std::max(worst, std::abs(click_probability(tmss, ClickPattern::from_string("00")) - 1 / (c * c)));
  }
  o.detail << "max deviation " << num(worst);
  o.require(worst <= 1e-10, "deviation <= 1e-10");
}

void normalization(Outcome &o) {
  Rng rng(2026);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    int m = 1 + static_cast<int>(rng.below(10));
    std::vector<double> p = full_distribution(build(fixtures::random_lossy_spec(m, rng)));
    CompensatedSum total;
    for (double x : p) {
      total.add(x);
    }
    worst = std::max(worst, std::abs(total.value() - 1));
  }
  o.detail << "100 specs, max |sum - 1| " << num(worst);
  o.require(worst <= 1e-9, "|sum - 1| <= 1e-9");
}

void hafnian_sum(Outcome &o) {
  Rng rng(3);
  double worst = 0;
  int patterns = 0;
  for (int trial = 0; trial < 12; ++trial) {
    int m = 1 + trial % 3;
    ExperimentSpec spec = fixtures::random_pure_spec(m, rng, 0.1, 0.45);
    GaussianState s = build(spec);
    std::vector<std::pair<FockPattern, double>> fock;
    for (const FockPattern &p : fock_patterns_up_to(m, 12)) {
      fock.push_back({p, fock_probability(s, p)});
    }
    for (const auto &[pattern, prob] : click_from_fock(fock)) {
      worst = std::max(worst, std::abs(click_probability(s, pattern) - prob));
      ++patterns;
    }
  }
  o.detail << patterns << " click patterns on 12 lossless specs (m <= 3, r <= 0.45), max deviation " << num(worst);
  o.require(worst <= 1e-4, "deviation <= 1e-4");
}

void dual_formalism(Outcome &o) {
  Rng rng(4);
  double worst = 0;
  int patterns = 0;
  for (int trial = 0; trial < 12; ++trial) {
    int m = 1 + trial % 3;
    ExperimentSpec spec = fixtures::random_pure_spec(m, rng, 0.2, 1.0);
    GaussianState s = build(spec);
    for (const FockPattern &p : fock_patterns_up_to(m, 6)) {
      worst = std::max(worst, std::abs(fock_probability(s, p) - fock_oracle(spec, p).probability));
      ++patterns;
    }
  }
  o.detail << patterns << " Fock patterns (<= 6 photons, m <= 3), max deviation " << num(worst);
  o.require(worst <= 1e-6, "deviation <= 1e-6");
}

void sampler_agreement(Outcome &o) {
  ExperimentSpec spec = fixtures::reference_spec("m8_reference.spec");
  GaussianState s = build(spec);
  SamplerOptions opts;
  opts.chains = 8;
  opts.workers = worker_count();
  const int64_t n = 100000;
  std::vector<double> e = enumerate_sampler(s, n, 1, opts).empirical_distribution();
  std::vector<double> c = chain_rule_sampler(s, n, 2, opts).empirical_distribution();
  McmcDiagnostics diag;
  std::vector<double> m = mcmc_sampler(spec, n, 3, {}, opts, {}, &diag).empirical_distribution();
  double ec = tvd(e, c);
  double em = tvd(e, m);
  double cm = tvd(c, m);
  o.detail << "m=8, 10^5 each: TVD enum-chain " << num(ec) << ", enum-mcmc " << num(em) << ", chain-mcmc "
           << num(cm) << "; mcmc acceptance " << num(diag.acceptance_rate());
  o.require(std::max({ec, em, cm}) <= 0.05, "pairwise TVD <= 0.05");
}

void fig4b_regime(Outcome &o) {
  GaussianState s = build(fixtures::reference_spec("m6_easy.spec"));
  SamplerOptions opts;
  opts.chains = 8;
  opts.workers = worker_count();
  SampleSet samples = chain_rule_sampler(s, 100000, 6, opts);
  FidelityTvd fd = fidelity_tvd(full_distribution(s), samples.empirical_distribution());
  o.detail << "m=6 three-TMSS, 10^5 samples: F " << num(fd.fidelity) << ", D " << num(fd.tvd)
           << " (published experiment: F 0.990, D 0.103)";
  o.require(fd.fidelity >= 0.99, "F >= 0.99");
  o.require(fd.tvd <= 0.11, "D <= 0.11");
}

void dimension(Outcome &o) {
  boost::multiprecision::cpp_int full = boost::multiprecision::cpp_int(1) << 100;
  boost::multiprecision::cpp_int dim = state_space_dimension(100, 76);
  double rel = static_cast<double>(full - dim) / static_cast<double>(full);
  o.detail << "dimension(100, 76) = " << num(static_cast<double>(dim)) << ", relative gap to 2^100 " << num(rel);
  o.require(rel >= 0 && rel <= 1e-6, "within 1e-6 of 2^100");
}

void fig4_analogs(Outcome &o) {
  ExperimentSpec spec = fixtures::reference_spec("m10_reference.spec");
  GaussianState ideal = build(spec);
  SamplerOptions opts;
  opts.chains = 8;
  opts.workers = worker_count();
  const int64_t n = 100000;
  SampleSet ideal_samples = enumerate_sampler(ideal, n, 81, opts);
  SampleSet thermal = thermal_mock_sampler(spec, n, 82, opts);
  SampleSet dist = distinguishable_mock_sampler(spec, n, 83, opts);
  SampleSet uniform = uniform_band_sampler(spec.modes, 6, 10, n, 84, opts);

  ClickHistogramComparison clicks =
      click_histogram_compare({{"ideal", &ideal_samples}, {"thermal", &thermal}, {"distinguishable", &dist}});
  int shift_t = std::abs(clicks.peaks[1] - clicks.peaks[0]);
  int shift_d = std::abs(clicks.peaks[2] - clicks.peaks[0]);
  o.detail << "m=10: click peaks ideal/thermal/distinguishable " << clicks.peaks[0] << "/" << clicks.peaks[1] << "/"
           << clicks.peaks[2];
  o.require(shift_t >= 1 && shift_d >= 1, "peak shift >= 1");

  PairCorrelations c_ideal = pair_correlations(ideal_samples);
  double sep_t = compare_correlations(c_ideal, pair_correlations(thermal)).sigma;
  double sep_d = compare_correlations(c_ideal, pair_correlations(dist)).sigma;
  o.detail << "; C_ij separation " << num(sep_t) << " / " << num(sep_d) << " sigma";
  o.require(sep_t > 5 && sep_d > 5, "C_ij separation > 5 sigma");

  ValidationOptions vopts;
  vopts.seed = 85;
  ValidationReport on_ideal = validate_samples(spec, ideal_samples, {}, vopts);
  ValidationReport on_thermal = validate_samples(spec, thermal, {}, vopts);
  ValidationReport on_uniform = validate_samples(spec, uniform, {}, vopts);
  double hog_ideal = on_ideal.scalar("hog_confidence_thermal");
  double hog_ideal_d = on_ideal.scalar("hog_confidence_distinguishable");
  double hog_thermal = on_thermal.scalar("hog_confidence_thermal");
  o.detail << "; HOG after " << on_ideal.scalar("hog_samples") << " band samples: ideal batch " << num(hog_ideal)
           << " vs thermal, " << num(hog_ideal_d) << " vs distinguishable, thermal batch " << num(hog_thermal);
  o.require(hog_ideal >= 0.99 && hog_ideal_d >= 0.99, "ideal HOG confidence >= 0.99");
  o.require(hog_thermal <= 0.01, "thermal HOG confidence <= 0.01");
  double p_uniform = on_uniform.scalar("curve_ks_p_vs_ideal");
  double p_ideal = on_ideal.scalar("curve_ks_p_vs_ideal");
  o.detail << "; probability curve KS p: uniform " << num(p_uniform) << ", ideal " << num(p_ideal);
  o.require(p_uniform < 0.01, "uniform rejected at p < 0.01");
}

void kernel_scaling(Outcome &o) {
  ExperimentSpec spec = fixtures::reference_spec("synthetic_100.spec");
  BenchOptions opts;
  opts.repetitions = 5;
  std::vector<TimingRecord> records = time_torontonian(16, 24, spec, 9, opts);
  ScalingFit fit = fit_scaling(records);
  auto band = fit.ratio_band(0.95);
  double anchor = published_anchor_model().ratio();
  o.detail << "k=16..24: ratio " << num(fit.ratio()) << " per click, 95% band [" << num(band.first) << ", "
           << num(band.second) << "], r^2 " << num(fit.r_squared) << "; published anchor ratio " << num(anchor)
           << "; t(24) " << num(records.back().wall_seconds) << " s";
  o.require(fit.ratio() >= 1.8 && fit.ratio() <= 2.6, "ratio in [1.8, 2.6]");
  o.require(fit.r_squared >= 0.95, "r^2 >= 0.95");
  o.require(anchor >= band.first && anchor <= band.second, "anchor ratio inside the fitted band");
}

void haar(Outcome &o) {
  HaarReport r = haar_checks(haar_unitary(100, 2026));
  o.detail << "m=100: residual " << num(r.unitarity_residual) << ", " << r.elements << " elements, amplitude p "
           << num(r.amplitude_p) << ", phase p " << num(r.phase_p);
  o.require(r.unitary_ok(1e-12), "residual <= 1e-12");
  o.require(r.elements == 5000, "5000 elements tested");
  o.require(r.amplitude_p > 0.01 && r.phase_p > 0.01, "distribution p > 0.01");
}

void reproducibility(Outcome &o) {
  fs::path root = fs::temp_directory_path() / "gbs_acceptance_repro";
  fs::remove_all(root);
  fs::create_directories(root);
  std::string cfg = (root / "run.cfg").string();
  write_text(cfg,
             "[run]\nseed = 7\nworkers = 2\n[sample]\nmodels = ideal, enum, mcmc, thermal, distinguishable, uniform\n"
             "samples = 40\nburn_in = 50\nthinning = 5\nchains = 2\n");
  auto spec = [](const std::string &name) { return std::string(GBS_CONFIG_DIR) + "/" + name; };
  auto commands = [&](const fs::path &out) {
    std::string d = out.string();
    return std::vector<std::vector<std::string>>{
        {"simulate", "--spec", spec("m6_easy.spec"), "--out", d + "/simulate_m6", "--seed", "1"},
        {"sample", "--config", cfg, "--spec", spec("m6_easy.spec"), "--out", d + "/sample_m6"},
        {"haar", "--modes", "4", "--seed", "3", "--out", d + "/haar_m4"},
        {"sample", "--spec", spec("m10_reference.spec"), "--models", "ideal", "--samples", "5000", "--seed", "2",
         "--out", d + "/draws"},
        {"validate", "--spec", spec("m10_reference.spec"), "--seed", "9", "--samples-file",
         d + "/draws/samples_ideal_chain.txt", "--out", d + "/validate_m10"},
        {"report", "--out", d + "/validate_m10"},
        {"bench", "--spec", spec("synthetic_100.spec"), "--k-range", "4..12", "--seed", "3", "--cost-model", "published",
         "--out", d + "/bench"},
    };
  };
  std::ostringstream sink;
  for (const char *run : {"a", "b"}) {
    for (const auto &args : commands(root / run)) {
      int code = cli::run(args, sink, sink);
      if (code != 0) {
        o.require(false, args[0] + " exited " + std::to_string(code));
        return;
      }
    }
  }
  int identical = 0;
  int differing = 0;
  for (const auto &entry : fs::recursive_directory_iterator(root / "a")) {
    if (!entry.is_regular_file() || entry.path().filename() == "bench.csv") {
      continue;
    }
    fs::path rel = fs::relative(entry.path(), root / "a");
    bool same = read_text(entry.path().string()) == read_text((root / "b" / rel).string());
    same ? ++identical : ++differing;
    if (!same) {
      o.detail << " differs: " << rel.string();
    }
  }
  int golden_match = 0;
  int golden_total = 0;
  fs::path golden_root(GBS_GOLDEN_DIR);
  for (const auto &entry : fs::recursive_directory_iterator(golden_root)) {
    if (!entry.is_regular_file() || entry.path().parent_path().filename() == "bench") {
      continue;
    }
    fs::path rel = fs::relative(entry.path(), golden_root);
    ++golden_total;
    fs::path produced = root / "a" / rel;
    if (fs::exists(produced) && read_text(produced.string()) == read_text(entry.path().string())) {
      ++golden_match;
    } else {
      o.detail << " golden mismatch: " << rel.string();
    }
  }
  Table a = read_table((root / "a" / "bench" / "bench.csv").string());
  Table b = read_table((root / "b" / "bench" / "bench.csv").string());
  bool bench_same = a.rows.size() == b.rows.size();
  for (size_t i = 0; bench_same && i < a.rows.size(); ++i) {
    bench_same = a.rows[i][0] == b.rows[i][0] && a.rows[i][4] == b.rows[i][4] && a.rows[i][5] == b.rows[i][5];
  }
  o.detail << identical << " files byte-identical across reruns, " << differing << " differ; " << golden_match << "/"
           << golden_total << " golden files match; bench.csv k/value/error columns "
           << (bench_same ? "identical" : "differ") << " (wall times excluded)";
  o.require(differing == 0 && identical > 0, "reruns byte-identical");
  o.require(golden_match == golden_total && golden_total > 0, "golden files match");
  o.require(bench_same, "bench deterministic columns identical");
  fs::remove_all(root);
}

}  // namespace

int main(int argc, char **argv) {
  std::vector<Criterion> criteria = {
      {1, "closed_form_probabilities", 1, closed_forms},
      {2, "normalization", 60, normalization},
      {3, "torontonian_equals_hafnian_sum", 60, hafnian_sum},
      {4, "hafnian_vs_permanent_oracle", 60, dual_formalism},
      {5, "sampler_agreement", 600, sampler_agreement},
      {6, "fidelity_tvd_easy_regime", 600, fig4b_regime},
      {7, "state_space_dimension", 1, dimension},
      {8, "mock_separation_m10", 600, fig4_analogs},
      {9, "kernel_scaling", 1800, kernel_scaling},
      {10, "haar_validation", 60, haar},
      {11, "reproducibility", 600, reproducibility},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    selected.push_back(std::atoi(argv[i]));
  }
  set_warning_sink([](const std::string &) {});
  int failures = 0;
  for (const Criterion &c : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
      continue;
    }
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception &e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(seconds <= c.budget_seconds, "runtime within " + num(c.budget_seconds) + " s");
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.id << " " << c.name << " (" << num(seconds) << " s): "
              << o.detail.str() << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
