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

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "gbs/bench.h"
#include "gbs/common.h"
#include "gbs/experiment.h"
#include "gbs/haar.h"
#include "gbs/mocks.h"
#include "gbs/probability.h"
#include "gbs/sample_set.h"
#include "gbs/sectioned_text.h"
#include "gbs/svg.h"
#include "gbs/table.h"
#include "gbs/validation.h"

namespace gbs::cli {

namespace fs = std::filesystem;

namespace {

using Meta = std::vector<std::pair<std::string, std::string>>;

Meta provenance(const std::string &spec_hash, uint64_t seed) {
  return {{"spec_hash", spec_hash}, {"seed", std::to_string(seed)}, {"version", kVersion}};
}

std::string lower(std::string s) {
  for (char &c : s) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return s;
}

std::vector<std::string> list(const std::string &text) {
  std::vector<std::string> out;
  for (const std::string &item : split(text, ',')) {
    if (!trim(item).empty()) {
      out.push_back(trim(item));
    }
  }
  return out;
}

int int_value(long long v, const std::string &what) {
  if (v < 0 || v > 1000000000) {
    throw ConfigError(what + " out of range: " + std::to_string(v));
  }
  return static_cast<int>(v);
}

const std::string &single_spec(const RunConfig &c) {
  if (c.specs.size() != 1) {
    throw ConfigError(c.command + " needs exactly one --spec");
  }
  return c.specs.front();
}

SamplerOptions sampler_options(const RunConfig &c, const std::string &spec_hash) {
  SamplerOptions opts;
  opts.chains = c.chains;
  opts.workers = c.workers;
  opts.spec_hash = spec_hash;
  return opts;
}

KernelOptions kernel_options(const RunConfig &c) {
  KernelOptions k = c.kernel;
  k.workers = c.workers;
  return k;
}

void write_file(const fs::path &path, const std::string &text, std::ostream &out) {
  write_text(path.string(), text);
  out << "wrote " << path.string() << "\n";
}

int cmd_simulate(const RunConfig &c, std::ostream &out) {
  if (c.specs.empty()) {
    throw ConfigError("simulate needs --spec");
  }
  for (const std::string &path : c.specs) {
    ExperimentSpec spec = load_spec(path);
    if (spec.modes > c.max_modes) {
      throw ScaleError("simulate: " + path + " has m=" + std::to_string(spec.modes) +
                       " modes, above the exact limit of " + std::to_string(c.max_modes) +
                       "; use `gbslab sample` for larger devices");
    }
    std::vector<double> p = full_distribution(build(spec), c.max_modes);
    Table dist;
    dist.meta = provenance(spec.hash(), c.seed);
    dist.meta.emplace_back("m", std::to_string(spec.modes));
    dist.header = {"pattern", "probability"};
    CompensatedSum total;
    int64_t nonzero = 0;
    double min_p = 0;
    for (size_t i = 0; i < p.size(); ++i) {
      total.add(p[i]);
      min_p = std::min(min_p, p[i]);
      if (p[i] != 0) {
        ++nonzero;
        dist.add_row({ClickPattern::from_index(i, spec.modes).to_string(), format_number(p[i])});
      }
    }
    Table norm;
    norm.meta = dist.meta;
    norm.header = {"name", "value"};
    norm.add_row({"patterns", std::to_string(p.size())});
    norm.add_row({"nonzero", std::to_string(nonzero)});
    norm.add_row({"total", format_number(total.value())});
    norm.add_row({"deviation", format_number(total.value() - 1)});
    norm.add_row({"min_probability", format_number(min_p)});
    fs::path dir(c.out);
    if (c.specs.size() > 1) {
      dir /= fs::path(path).stem();
    }
    fs::create_directories(dir);
    write_file(dir / "distribution.csv", format_table(dist), out);
    write_file(dir / "normalization.csv", format_table(norm), out);
    if (std::abs(total.value() - 1) > 1e-9) {
      throw NumericalError("distribution of " + path + " sums to " + format_number(total.value()));
    }
  }
  return kExitOk;
}

SampleSet draw_model(ModelTag tag, const ExperimentSpec &spec, const RunConfig &c, const SamplerOptions &opts) {
  switch (tag) {
    case ModelTag::kIdealEnum:
      return enumerate_sampler(build(spec), c.samples, c.seed, opts, c.max_modes);
    case ModelTag::kIdealChain:
      return chain_rule_sampler(build(spec), c.samples, c.seed, opts, kernel_options(c));
    case ModelTag::kIdealMcmc:
      return mcmc_sampler(spec, c.samples, c.seed, c.mcmc, opts, kernel_options(c));
    case ModelTag::kThermal:
      return thermal_mock_sampler(spec, c.samples, c.seed, opts);
    case ModelTag::kDistinguishable:
      return distinguishable_mock_sampler(spec, c.samples, c.seed, opts);
    case ModelTag::kUniform: {
      auto [lo, hi] = c.clicks_band.value_or(std::pair<int, int>{0, spec.modes});
      return uniform_band_sampler(spec.modes, std::min(lo, spec.modes), std::min(hi, spec.modes), c.samples, c.seed,
                                  opts);
    }
  }
  throw std::logic_error("unhandled model");
}

int cmd_sample(const RunConfig &c, std::ostream &out) {
  ExperimentSpec spec = load_spec(single_spec(c));
  if (c.samples < 0) {
    throw ConfigError("--samples must be non-negative");
  }
  std::vector<ModelTag> tags;
  for (const std::string &name : c.models) {
    tags.push_back(parse_model_tag(name));
  }
  if (tags.empty()) {
    throw ConfigError("sample needs at least one model");
  }
  fs::create_directories(c.out);
  for (ModelTag tag : tags) {
    SampleSet s = draw_model(tag, spec, c, sampler_options(c, spec.hash()));
    fs::path path = fs::path(c.out) / ("samples_" + lower(to_string(tag)) + ".txt");
    write_file(path, format_samples(s), out);
  }
  return kExitOk;
}

int cmd_validate(const RunConfig &c, std::ostream &out) {
  std::vector<std::string> missing;
  if (c.specs.size() != 1) {
    missing.push_back("--spec (experiment file)");
  } else if (!fs::exists(c.specs.front())) {
    missing.push_back(c.specs.front() + " (experiment file)");
  }
  if (c.sample_file.empty()) {
    missing.push_back("--samples-file (samples under test)");
  } else if (!fs::exists(c.sample_file)) {
    missing.push_back(c.sample_file + " (samples under test)");
  }
  for (const std::string &o : c.overlays) {
    if (!fs::exists(o)) {
      missing.push_back(o + " (overlay samples)");
    }
  }
  if (!missing.empty()) {
    std::string msg = "validate is missing inputs:";
    for (const std::string &m : missing) {
      msg += "\n  " + m;
    }
    throw ConfigError(msg);
  }
  ExperimentSpec spec = load_spec(c.specs.front());
  SampleSet samples = load_samples(c.sample_file);
  std::vector<SampleSet> overlay_sets;
  for (const std::string &o : c.overlays) {
    overlay_sets.push_back(load_samples(o));
  }
  std::vector<const SampleSet *> overlays;
  for (const SampleSet &s : overlay_sets) {
    overlays.push_back(&s);
  }
  ValidationOptions opts;
  if (c.clicks_band) {
    opts.band_lo = c.clicks_band->first;
    opts.band_hi = c.clicks_band->second;
  }
  opts.n_reference = c.n_reference;
  opts.hog_samples = c.hog_samples;
  opts.seed = c.seed;
  opts.max_exact_modes = c.max_modes;
  opts.kernel = kernel_options(c);
  ValidationReport report = validate_samples(spec, samples, overlays, opts);
  Meta meta = provenance(spec.hash(), c.seed);
  meta.emplace_back("samples", fs::path(c.sample_file).filename().string());
  meta.emplace_back("samples_model", to_string(samples.meta().model));
  meta.emplace_back("samples_spec_hash", samples.meta().spec_hash);
  if (samples.meta().spec_hash != "none" && samples.meta().spec_hash != spec.hash()) {
    warn("samples were drawn for spec " + samples.meta().spec_hash + ", validating against " + spec.hash());
  }
  report.write(c.out, meta);
  for (const Verdict &v : report.verdicts) {
    out << (v.pass ? "PASS " : "FAIL ") << v.name << " " << v.detail << "\n";
  }
  return kExitOk;
}

int cmd_bench(const RunConfig &c, std::ostream &out) {
  ExperimentSpec spec = load_spec(single_spec(c));
  BenchOptions opts;
  opts.repetitions = c.repetitions;
  opts.kernel = c.kernel;
  opts.kernel.workers = 1;
  std::vector<TimingRecord> records = time_torontonian(c.k_range.first, c.k_range.second, spec, c.seed, opts);
  Table timing = timing_table(records);
  timing.meta = provenance(spec.hash(), c.seed);
  ScalingFit model;
  if (c.cost_model == "published") {
    model = published_anchor_model();
  } else if (c.cost_model == "fit") {
    if (records.size() < 5) {
      throw ConfigError("cost model 'fit' needs a k range of at least 5 values; use cost_model = published");
    }
    model = fit_scaling(records);
  } else {
    throw ConfigError("unknown cost model '" + c.cost_model + "' (expected fit or published)");
  }
  if (records.size() >= 5) {
    ScalingFit fit = c.cost_model == "fit" ? model : fit_scaling(records);
    auto band = fit.ratio_band();
    timing.meta.emplace_back("fit_ratio", format_number(fit.ratio()));
    timing.meta.emplace_back("fit_ratio_lo", format_number(band.first));
    timing.meta.emplace_back("fit_ratio_hi", format_number(band.second));
    timing.meta.emplace_back("fit_r_squared", format_number(fit.r_squared));
    out << "fitted ratio " << format_number(fit.ratio()) << " per click, 95% band [" << format_number(band.first)
        << ", " << format_number(band.second) << "], r^2 " << format_number(fit.r_squared) << "\n";
  }
  std::vector<double> counts;
  if (c.histogram == "published") {
    counts = published_click_histogram();
  } else {
    for (int64_t k : load_samples(c.histogram).click_histogram()) {
      counts.push_back(static_cast<double>(k));
    }
  }
  CostEstimate cost = estimate_classical_cost(counts, model);
  Table cost_table = cost.to_table();
  Meta meta = provenance(spec.hash(), c.seed);
  meta.emplace_back("cost_model", c.cost_model);
  meta.emplace_back("histogram", c.histogram == "published" ? "published" : fs::path(c.histogram).filename().string());
  meta.emplace_back("ratio", format_number(model.ratio()));
  cost_table.meta.insert(cost_table.meta.begin(), meta.begin(), meta.end());
  fs::create_directories(c.out);
  write_file(fs::path(c.out) / "bench.csv", format_table(timing), out);
  write_file(fs::path(c.out) / "cost.csv", format_table(cost_table), out);
  out << "total cost " << format_number(cost.total_seconds) << " s, peak at N=" << cost.peak() << "\n";
  return kExitOk;
}

int cmd_haar(const RunConfig &c, std::ostream &out) {
  if (c.haar_modes < 1) {
    throw ConfigError("--modes must be positive");
  }
  CMatrix u = haar_unitary(c.haar_modes, c.seed);
  HaarReport r = haar_checks(u);
  Meta meta = provenance("none", c.seed);
  meta.emplace_back("modes", std::to_string(c.haar_modes));
  std::string header;
  for (const auto &[k, v] : meta) {
    header += "# " + k + "=" + v + "\n";
  }
  Table report;
  report.meta = meta;
  report.header = {"name", "value"};
  report.add_row({"modes", std::to_string(r.modes)});
  report.add_row({"elements", std::to_string(r.elements)});
  report.add_row({"unitarity_residual", format_number(r.unitarity_residual)});
  report.add_row({"amplitude_ks", format_number(r.amplitude_ks)});
  report.add_row({"amplitude_p", format_number(r.amplitude_p)});
  report.add_row({"phase_ks", format_number(r.phase_ks)});
  report.add_row({"phase_p", format_number(r.phase_p)});
  report.add_row({"unitary_ok", r.unitary_ok() ? "1" : "0"});
  report.add_row({"distribution_ok", r.distribution_ok() ? "1" : "0"});
  fs::create_directories(c.out);
  write_file(fs::path(c.out) / "unitary.csv", header + format_unitary_csv(u), out);
  write_file(fs::path(c.out) / "haar_report.csv", format_table(report), out);
  out << "unitarity residual " << format_number(r.unitarity_residual) << ", amplitude p "
      << format_number(r.amplitude_p) << ", phase p " << format_number(r.phase_p) << "\n";
  if (!r.unitary_ok()) {
    throw NumericalError("unitarity residual " + format_number(r.unitarity_residual) + " above 1e-12");
  }
  return kExitOk;
}

struct ReportPlot {
  std::string file;
  PlotSpec spec;
};

std::vector<ReportPlot> report_plots() {
  return {
      {"cij_hist.csv", {"Two-point correlations", "C_ij", "pairs", "bin_lo", "bin_hi", {}, "", false}},
      {"click_hist.csv", {"Click-number distribution", "clicks", "fraction", "clicks", "", {}, "_fraction", false}},
      {"hog_trajectory.csv",
       {"HOG confidence", "samples", "confidence", "t", "", {"confidence_thermal", "confidence_distinguishable"}, "",
        false}},
      {"prob_curve.csv",
       {"Ideal log-probability curve", "log10 p_ideal", "density", "bin_lo", "bin_hi", {}, "_density", false}},
      {"bench.csv", {"Torontonian wall time", "clicks k", "seconds", "k", "", {"median_seconds"}, "", true}},
      {"cost.csv", {"Classical cost per click number", "N", "seconds", "N", "", {"cost_seconds"}, "", true}},
  };
}

int cmd_report(const RunConfig &c, std::ostream &out) {
  fs::path dir(c.out);
  int rendered = 0;
  std::vector<ReportPlot> plots = report_plots();
  for (const ReportPlot &p : plots) {
    fs::path in = dir / p.file;
    if (!fs::exists(in)) {
      continue;
    }
    Table t = read_table(in.string());
    PlotSpec spec = p.spec;
    if (p.file == "cij_hist.csv") {
      spec.y.assign(t.header.begin() + 2, t.header.end());
    }
    write_file(dir / (fs::path(p.file).stem().string() + ".svg"), render_svg(t, spec), out);
    ++rendered;
  }
  if (rendered == 0) {
    std::string msg = "report found nothing to render in " + dir.string() + "; expected any of:";
    for (const ReportPlot &p : plots) {
      msg += "\n  " + p.file;
    }
    throw ConfigError(msg);
  }
  return kExitOk;
}

}  // namespace

std::pair<int, int> parse_range(const std::string &text) {
  size_t dots = text.find("..");
  if (dots == std::string::npos) {
    throw ConfigError("range '" + text + "' is not of the form lo..hi");
  }
  int lo = int_value(parse_int(trim(text.substr(0, dots)), "range start"), "range start");
  int hi = int_value(parse_int(trim(text.substr(dots + 2)), "range end"), "range end");
  if (hi < lo) {
    throw ConfigError("range '" + text + "' is empty");
  }
  return {lo, hi};
}

void apply_config_file(const std::string &path, RunConfig &c) {
  SectionedText cfg = SectionedText::load(path);
  cfg.reject_unknown_sections({"run", "kernel", "simulate", "sample", "validate", "bench", "haar"});
  if (auto v = cfg.get("run", "spec")) {
    c.specs = list(*v);
  }
  if (auto v = cfg.get("run", "out")) {
    c.out = *v;
  }
  if (auto v = cfg.get("run", "seed")) {
    c.seed = static_cast<uint64_t>(parse_int(*v, "run.seed"));
  }
  c.workers = int_value(cfg.get_int("run", "workers", c.workers), "run.workers");
  c.kernel.max_clicks = int_value(cfg.get_int("kernel", "max_clicks", c.kernel.max_clicks), "kernel.max_clicks");
  c.kernel.chunks = int_value(cfg.get_int("kernel", "chunks", c.kernel.chunks), "kernel.chunks");
  c.max_modes = int_value(cfg.get_int("simulate", "max_modes", c.max_modes), "simulate.max_modes");
  if (auto v = cfg.get("sample", "models")) {
    c.models = list(*v);
  }
  c.samples = cfg.get_int("sample", "samples", c.samples);
  c.chains = int_value(cfg.get_int("sample", "chains", c.chains), "sample.chains");
  c.mcmc.burn_in = int_value(cfg.get_int("sample", "burn_in", c.mcmc.burn_in), "sample.burn_in");
  c.mcmc.thinning = int_value(cfg.get_int("sample", "thinning", c.mcmc.thinning), "sample.thinning");
  if (auto v = cfg.get("sample", "clicks_band")) {
    c.clicks_band = parse_range(*v);
  }
  if (auto v = cfg.get("validate", "samples_file")) {
    c.sample_file = *v;
  }
  if (auto v = cfg.get("validate", "overlays")) {
    c.overlays = list(*v);
  }
  if (auto v = cfg.get("validate", "clicks_band")) {
    c.clicks_band = parse_range(*v);
  }
  c.n_reference = cfg.get_int("validate", "n_reference", c.n_reference);
  c.hog_samples = int_value(cfg.get_int("validate", "hog_samples", c.hog_samples), "validate.hog_samples");
  if (auto v = cfg.get("bench", "k_range")) {
    c.k_range = parse_range(*v);
  }
  c.repetitions = int_value(cfg.get_int("bench", "repetitions", c.repetitions), "bench.repetitions");
  if (auto v = cfg.get("bench", "histogram")) {
    c.histogram = *v;
  }
  if (auto v = cfg.get("bench", "cost_model")) {
    c.cost_model = *v;
  }
  c.haar_modes = int_value(cfg.get_int("haar", "modes", c.haar_modes), "haar.modes");
  cfg.reject_unused();
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Gaussian boson sampling laboratory", "gbslab"};
  app.require_subcommand(1);
  std::string config_path;
  std::vector<std::string> specs;
  std::string out_dir;
  uint64_t seed = 0;
  int workers = 1;
  std::string models;
  int64_t samples = 0;
  std::string band;
  int kernel_max_clicks = 0;
  std::string samples_file;
  std::vector<std::string> overlays;
  std::string k_range;
  int modes = 0;
  std::string cost_model;
  std::string histogram;
  app.add_option("--config", config_path, "sectioned config file");
  auto *o_spec = app.add_option("--spec", specs, "experiment file(s)")->delimiter(',');
  auto *o_out = app.add_option("--out", out_dir, "output directory");
  auto *o_seed = app.add_option("--seed", seed, "random seed");
  auto *o_workers = app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  auto *o_models = app.add_option("--models", models, "comma-separated sampler models");
  auto *o_samples = app.add_option("--samples", samples, "number of samples");
  auto *o_band = app.add_option("--clicks-band", band, "click band lo..hi");
  auto *o_kmax = app.add_option("--kernel-max-clicks", kernel_max_clicks, "largest Torontonian attempted");
  auto *o_file = app.add_option("--samples-file", samples_file, "sample file to validate");
  auto *o_overlay = app.add_option("--overlay", overlays, "extra sample files for histogram overlays")->delimiter(',');
  auto *o_krange = app.add_option("--k-range", k_range, "bench click range lo..hi");
  auto *o_modes = app.add_option("--modes", modes, "haar matrix size");
  auto *o_cost = app.add_option("--cost-model", cost_model, "fit or published");
  auto *o_hist = app.add_option("--histogram", histogram, "published or a sample file");
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate", "exact click distribution"},          {"sample", "draw samples from one or more models"},
      {"validate", "run the validation suite on samples"}, {"bench", "time the Torontonian and estimate cost"},
      {"haar", "draw and check a Haar unitary"},          {"report", "render CSV outputs to SVG"}};
  for (const auto &[name, help] : commands) {
    app.add_subcommand(name, help)->fallthrough();
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }
  try {
    RunConfig c;
    c.command = app.get_subcommands().front()->get_name();
    if (!config_path.empty()) {
      apply_config_file(config_path, c);
    }
    if (o_spec->count()) {
      c.specs = specs;
    }
    if (o_out->count()) {
      c.out = out_dir;
    }
    if (o_seed->count()) {
      c.seed = seed;
    }
    if (o_workers->count()) {
      c.workers = workers;
    }
    if (o_models->count()) {
      c.models = list(models);
    }
    if (o_samples->count()) {
      c.samples = samples;
    }
    if (o_band->count()) {
      c.clicks_band = parse_range(band);
    }
    if (o_kmax->count()) {
      c.kernel.max_clicks = kernel_max_clicks;
    }
    if (o_file->count()) {
      c.sample_file = samples_file;
    }
    if (o_overlay->count()) {
      c.overlays = overlays;
    }
    if (o_krange->count()) {
      c.k_range = parse_range(k_range);
    }
    if (o_modes->count()) {
      c.haar_modes = modes;
    }
    if (o_cost->count()) {
      c.cost_model = cost_model;
    }
    if (o_hist->count()) {
      c.histogram = histogram;
    }
    if (c.command == "simulate") {
      return cmd_simulate(c, out);
    }
    if (c.command == "sample") {
      return cmd_sample(c, out);
    }
    if (c.command == "validate") {
      return cmd_validate(c, out);
    }
    if (c.command == "bench") {
      return cmd_bench(c, out);
    }
    if (c.command == "haar") {
      return cmd_haar(c, out);
    }
    return cmd_report(c, out);
  } catch (const ConfigError &e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ScaleError &e) {
    err << "scale refusal: " << e.what() << "\n";
    return kExitScale;
  } catch (const NumericalError &e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument &e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const fs::filesystem_error &e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace gbs::cli
