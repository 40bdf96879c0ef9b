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

#include "gbs/validation.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <map>
#include <memory>
#include <numbers>
#include <numeric>

#include "gbs/mocks.h"
#include "gbs/samplers.h"

namespace gbs {

namespace {

double normalization(std::span<const double> p, const char *name) {
  double total = std::accumulate(p.begin(), p.end(), 0.0);
  if (!(total > 0)) {
    throw std::invalid_argument(std::string(name) + " has no probability mass");
  }
  if (std::abs(total - 1) > 1e-6) {
    warn(std::string(name) + " sums to " + format_number(total) + "; renormalizing");
    return total;
  }
  return 1.0;
}

ProbabilityFn memoize(ProbabilityFn fn) {
  auto cache = std::make_shared<std::map<ClickPattern, double>>();
  return [fn = std::move(fn), cache](const ClickPattern &p) {
    auto it = cache->find(p);
    if (it != cache->end()) {
      return it->second;
    }
    double v = fn(p);
    cache->emplace(p, v);
    return v;
  };
}

double safe_log10(double p) {
  return std::log10(std::max(p, 1e-300));
}

double mean_of(std::span<const double> v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sd_of(std::span<const double> v) {
  if (v.size() < 2) {
    return 0;
  }
  double m = mean_of(v);
  double s = 0;
  for (double x : v) {
    s += (x - m) * (x - m);
  }
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

std::vector<double> fractions(const std::vector<int64_t> &counts) {
  int64_t total = std::accumulate(counts.begin(), counts.end(), int64_t{0});
  std::vector<double> f(counts.size(), 0.0);
  for (size_t i = 0; i < counts.size(); ++i) {
    f[i] = total > 0 ? static_cast<double>(counts[i]) / static_cast<double>(total) : 0.0;
  }
  return f;
}

double wilson_hilferty_sigma(double chi2, double dof) {
  if (dof <= 0) {
    return 0;
  }
  if (std::isinf(chi2)) {
    return std::numeric_limits<double>::infinity();
  }
  double c = 2.0 / (9.0 * dof);
  return (std::cbrt(chi2 / dof) - (1 - c)) / std::sqrt(c);
}

}  // namespace

FidelityTvd fidelity_tvd(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("fidelity_tvd: dimensions " + std::to_string(p.size()) + " and " +
                                std::to_string(q.size()) + " differ");
  }
  double np = normalization(p, "first distribution");
  double nq = normalization(q, "second distribution");
  FidelityTvd r;
  for (size_t i = 0; i < p.size(); ++i) {
    double a = std::max(p[i] / np, 0.0);
    double b = std::max(q[i] / nq, 0.0);
    r.fidelity += std::sqrt(a * b);
    r.tvd += std::abs(a - b);
  }
  r.tvd /= 2;
  r.fidelity = std::min(r.fidelity, 1.0);
  r.tvd = std::min(r.tvd, 1.0);
  return r;
}

double expected_sampling_tvd(std::span<const double> p, int64_t n) {
  if (n <= 0) {
    throw std::invalid_argument("expected_sampling_tvd needs n > 0");
  }
  double s = 0;
  for (double x : p) {
    s += std::sqrt(std::max(x * (1 - x), 0.0));
  }
  return s / std::sqrt(2 * std::numbers::pi * static_cast<double>(n));
}

ChiSquareResult chi_square_gof(std::span<const int64_t> counts, std::span<const double> p, double min_expected) {
  if (counts.size() != p.size()) {
    throw std::invalid_argument("chi_square_gof: counts and probabilities differ in length");
  }
  double norm = normalization(p, "model distribution");
  double n = static_cast<double>(std::accumulate(counts.begin(), counts.end(), int64_t{0}));
  ChiSquareResult r;
  if (n == 0) {
    return r;
  }
  std::vector<std::pair<double, double>> cells;  // (observed, expected)
  double obs = 0;
  double exp = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    obs += static_cast<double>(counts[i]);
    exp += n * p[i] / norm;
    if (exp >= min_expected) {
      cells.emplace_back(obs, exp);
      obs = exp = 0;
    }
  }
  if (obs > 0 || exp > 0) {
    if (cells.empty()) {
      cells.emplace_back(obs, exp);
    } else {
      cells.back().first += obs;
      cells.back().second += exp;
    }
  }
  for (const auto &[o, e] : cells) {
    r.statistic += e > 0 ? (o - e) * (o - e) / e : (o > 0 ? std::numeric_limits<double>::infinity() : 0.0);
  }
  r.dof = static_cast<double>(cells.size()) - 1;
  r.p_value = r.dof > 0 ? chi_square_sf(r.statistic, r.dof) : 1.0;
  return r;
}

ChiSquareResult chi_square_homogeneity(std::span<const int64_t> a, std::span<const int64_t> b, double min_count) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("chi_square_homogeneity: histograms differ in length");
  }
  double na = static_cast<double>(std::accumulate(a.begin(), a.end(), int64_t{0}));
  double nb = static_cast<double>(std::accumulate(b.begin(), b.end(), int64_t{0}));
  ChiSquareResult r;
  if (na == 0 || nb == 0) {
    return r;
  }
  std::vector<std::pair<double, double>> cells;
  double ca = 0;
  double cb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    ca += static_cast<double>(a[i]);
    cb += static_cast<double>(b[i]);
    if (ca + cb >= min_count) {
      cells.emplace_back(ca, cb);
      ca = cb = 0;
    }
  }
  if (ca + cb > 0) {
    if (cells.empty()) {
      cells.emplace_back(ca, cb);
    } else {
      cells.back().first += ca;
      cells.back().second += cb;
    }
  }
  double ka = std::sqrt(nb / na);
  double kb = std::sqrt(na / nb);
  for (const auto &[x, y] : cells) {
    double d = ka * x - kb * y;
    r.statistic += d * d / (x + y);
  }
  r.dof = static_cast<double>(cells.size()) - 1;
  r.p_value = r.dof > 0 ? chi_square_sf(r.statistic, r.dof) : 1.0;
  return r;
}

namespace {

struct PairCounts {
  double n = 0;
  double ci = 0;
  double cj = 0;
  double cij = 0;
};

PairCounts count_pair(const SampleSet &samples, int i, int j) {
  if (samples.empty()) {
    throw std::invalid_argument("two-point correlation of an empty sample set");
  }
  if (i == j) {
    throw std::invalid_argument("two-point correlation needs i != j");
  }
  if (i < 0 || j < 0 || i >= samples.modes() || j >= samples.modes()) {
    throw std::out_of_range("mode index out of range");
  }
  PairCounts c;
  c.n = static_cast<double>(samples.size());
  for (const ClickPattern &p : samples.patterns()) {
    c.ci += p[i];
    c.cj += p[j];
    c.cij += p[i] && p[j];
  }
  return c;
}

double pair_value(const PairCounts &c) {
  return c.cij / c.n - (c.ci / c.n) * (c.cj / c.n);
}

double pair_stderr(const PairCounts &c) {
  double pi = c.ci / c.n;
  double pj = c.cj / c.n;
  double f11 = c.cij / c.n;
  double f10 = pi - f11;
  double f01 = pj - f11;
  double f00 = 1 - f11 - f10 - f01;
  auto sq = [](double x) { return x * x; };
  double e2 = f11 * sq((1 - pi) * (1 - pj)) + f10 * sq((1 - pi) * pj) + f01 * sq(pi * (1 - pj)) + f00 * sq(pi * pj);
  double var = std::max(e2 - sq(pair_value(c)), 0.0) / c.n;
  return std::sqrt(var);
}

}  // namespace

double two_point_empirical(const SampleSet &samples, int i, int j) {
  return pair_value(count_pair(samples, i, j));
}

double two_point_stderr(const SampleSet &samples, int i, int j) {
  return pair_stderr(count_pair(samples, i, j));
}

PairCorrelations pair_correlations(const SampleSet &samples) {
  if (samples.empty()) {
    throw std::invalid_argument("pair correlations of an empty sample set");
  }
  int m = samples.modes();
  std::vector<double> single(m, 0.0);
  std::vector<double> joint(static_cast<size_t>(m) * m, 0.0);
  for (const ClickPattern &p : samples.patterns()) {
    std::vector<int> on = p.clicked_modes();
    for (size_t a = 0; a < on.size(); ++a) {
      single[on[a]] += 1;
      for (size_t b = a + 1; b < on.size(); ++b) {
        joint[static_cast<size_t>(on[a]) * m + on[b]] += 1;
      }
    }
  }
  PairCorrelations out;
  double n = static_cast<double>(samples.size());
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      PairCounts c{n, single[i], single[j], joint[static_cast<size_t>(i) * m + j]};
      out.pairs.emplace_back(i, j);
      out.values.push_back(pair_value(c));
      out.stderrs.push_back(pair_stderr(c));
    }
  }
  return out;
}

PairCorrelations pair_correlations(int modes, const std::function<double(std::span<const int>)> &silent) {
  std::vector<double> s(modes);
  for (int i = 0; i < modes; ++i) {
    int one[] = {i};
    s[i] = silent(one);
  }
  PairCorrelations out;
  for (int i = 0; i < modes; ++i) {
    for (int j = i + 1; j < modes; ++j) {
      int two[] = {i, j};
      out.pairs.emplace_back(i, j);
      out.values.push_back(silent(two) - s[i] * s[j]);
      out.stderrs.push_back(0.0);
    }
  }
  return out;
}

PairCorrelations pair_correlations(const GaussianState &state) {
  return pair_correlations(state.modes(), [&](std::span<const int> z) { return silent_probability(state, z); });
}

int64_t Histogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), int64_t{0});
}

Histogram make_histogram(std::span<const double> values, std::span<const double> edges) {
  if (edges.size() < 2) {
    throw std::invalid_argument("histogram needs at least two edges");
  }
  Histogram h;
  h.edges.assign(edges.begin(), edges.end());
  h.counts.assign(edges.size() - 1, 0);
  for (double v : values) {
    auto it = std::upper_bound(edges.begin(), edges.end(), v);
    long bin = static_cast<long>(it - edges.begin()) - 1;
    bin = std::clamp(bin, 0L, static_cast<long>(h.counts.size()) - 1);
    ++h.counts[bin];
  }
  return h;
}

std::vector<double> common_edges(const std::vector<std::span<const double>> &series, int bins) {
  if (bins < 1) {
    throw std::invalid_argument("need at least one bin");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (auto s : series) {
    for (double v : s) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo)) {
    lo = hi = 0;
  }
  if (hi - lo < 1e-12) {
    lo -= 1e-3;
    hi += 1e-3;
  }
  std::vector<double> edges(bins + 1);
  for (int b = 0; b <= bins; ++b) {
    edges[b] = lo + (hi - lo) * b / bins;
  }
  return edges;
}

CorrelationComparison compare_correlations(const PairCorrelations &a, const PairCorrelations &b, int bins) {
  if (a.values.size() != b.values.size()) {
    throw std::invalid_argument("correlation sets cover different pairs");
  }
  CorrelationComparison r;
  for (size_t k = 0; k < a.values.size(); ++k) {
    double d = a.values[k] - b.values[k];
    double var = a.stderrs[k] * a.stderrs[k] + b.stderrs[k] * b.stderrs[k];
    if (var > 0) {
      r.chi_square += d * d / var;
      ++r.pairs;
    } else if (std::abs(d) > 1e-15) {
      r.chi_square = std::numeric_limits<double>::infinity();
      ++r.pairs;
    }
  }
  r.p_value = r.pairs > 0 ? chi_square_sf(r.chi_square, r.pairs) : 1.0;
  r.sigma = wilson_hilferty_sigma(r.chi_square, r.pairs);
  if (bins <= 0) {
    bins = 1 + static_cast<int>(std::ceil(std::log2(std::max<size_t>(a.values.size(), 1))));
  }
  std::vector<double> edges = common_edges({a.values, b.values}, bins);
  std::vector<double> fa = fractions(make_histogram(a.values, edges).counts);
  std::vector<double> fb = fractions(make_histogram(b.values, edges).counts);
  for (size_t i = 0; i < fa.size(); ++i) {
    r.histogram_tvd += std::abs(fa[i] - fb[i]) / 2;
  }
  return r;
}

CorrelationHistogram correlation_histogram(const std::vector<std::pair<std::string, PairCorrelations>> &series,
                                           int bins) {
  CorrelationHistogram h;
  std::vector<std::span<const double>> spans;
  for (const auto &[name, c] : series) {
    spans.emplace_back(c.values);
  }
  h.edges = common_edges(spans, bins);
  for (const auto &[name, c] : series) {
    h.names.push_back(name);
    h.counts.push_back(make_histogram(c.values, h.edges).counts);
  }
  return h;
}

Table CorrelationHistogram::to_table() const {
  Table t;
  t.header = {"bin_lo", "bin_hi"};
  for (const std::string &n : names) {
    t.header.push_back(n);
  }
  for (size_t b = 0; b + 1 < edges.size(); ++b) {
    std::vector<std::string> row{format_number(edges[b]), format_number(edges[b + 1])};
    for (const auto &c : counts) {
      row.push_back(std::to_string(c[b]));
    }
    t.add_row(std::move(row));
  }
  return t;
}

double hog_confidence(double log_odds) {
  if (std::isnan(log_odds)) {
    return 0.5;
  }
  if (log_odds >= 0) {
    return 1 / (1 + std::exp(-log_odds));
  }
  double e = std::exp(log_odds);
  return e / (1 + e);
}

HogResult hog_test(const SampleSet &samples, const ProbabilityFn &p_ideal, const ProbabilityFn &p_alt,
                   const HogOptions &opts) {
  HogResult r;
  double shift = opts.log_mass_ideal - opts.log_mass_alt;
  double log_odds = 0;
  if (!opts.reference_ideal_probabilities.empty()) {
    r.heavy_threshold = median(opts.reference_ideal_probabilities);
  }
  int64_t heavy = 0;
  for (const ClickPattern &s : samples.patterns()) {
    int k = s.clicks();
    if (k < opts.band_lo || k > opts.band_hi) {
      throw std::invalid_argument("hog_test: sample " + s.to_string() + " lies outside the click band");
    }
    double pi = p_ideal(s);
    double pa = p_alt(s);
    if (!(pa > 0)) {
      pa = std::numeric_limits<double>::denorm_min();
      ++r.floored;
    }
    log_odds += std::log(pi) - std::log(pa) - shift;
    r.log_odds.push_back(log_odds);
    r.confidence.push_back(hog_confidence(log_odds));
    if (!std::isnan(r.heavy_threshold) && pi > r.heavy_threshold) {
      ++heavy;
    }
  }
  if (!std::isnan(r.heavy_threshold) && !samples.empty()) {
    r.heavy_fraction = static_cast<double>(heavy) / static_cast<double>(samples.size());
  }
  return r;
}

SampleSet ideal_band_samples(const GaussianState &state, int lo, int hi, int64_t n, uint64_t seed,
                             const KernelOptions &kernel) {
  int m = state.modes();
  if (lo < 0 || hi < lo) {
    throw std::invalid_argument("click band needs 0 <= lo <= hi");
  }
  if (m <= 14) {
    std::vector<double> p = full_distribution(state);
    for (size_t i = 0; i < p.size(); ++i) {
      int k = std::popcount(i);
      if (k < lo || k > hi) {
        p[i] = 0;
      }
    }
    std::vector<double> cdf(p.size());
    std::partial_sum(p.begin(), p.end(), cdf.begin());
    double total = cdf.back();
    if (!(total > 0) && n > 0) {
      throw std::invalid_argument("click band [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                  "] has zero probability");
    }
    SampleSet out = run_streams(m, ModelTag::kIdealEnum, n, seed, {},
                                [&](Rng &rng, int64_t count, int, std::vector<ClickPattern> &sink) {
                                  for (int64_t s = 0; s < count; ++s) {
                                    double u = rng.uniform() * total;
                                    size_t idx = std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
                                    idx = std::min(idx, cdf.size() - 1);
                                    while (p[idx] <= 0 && idx > 0) {
                                      --idx;
                                    }
                                    sink.push_back(ClickPattern::from_index(idx, m));
                                  }
                                });
    out.meta().extra.emplace_back("band", std::to_string(lo) + "-" + std::to_string(hi));
    return out;
  }
  SampleMeta meta;
  meta.model = ModelTag::kIdealChain;
  meta.seed = seed;
  meta.extra.emplace_back("band", std::to_string(lo) + "-" + std::to_string(hi));
  SampleSet out(m, meta);
  int64_t drawn = 0;
  for (uint64_t round = 0; out.size() < n; ++round) {
    int64_t batch = std::max<int64_t>(1000, 2 * (n - out.size()));
    SampleSet more = chain_rule_sampler(state, batch, splitmix64(seed + round), {}, kernel);
    drawn += batch;
    for (const ClickPattern &p : more.patterns()) {
      if (p.clicks() >= lo && p.clicks() <= hi && out.size() < n) {
        out.add(p);
      }
    }
    if (drawn >= 1000000 && out.size() * 10000 < drawn) {
      throw ScaleError("click band [" + std::to_string(lo) + ", " + std::to_string(hi) +
                       "] holds under 1e-4 of the ideal mass; widen the band");
    }
  }
  return out;
}

ProbabilityCurve probability_curve(const ProbabilityFn &p_ideal, const SampleSet &reference_ideal,
                                   const SampleSet &reference_uniform, const SampleSet &samples, int bins) {
  ProbabilityFn p = memoize(p_ideal);
  ProbabilityCurve c;
  auto map_points = [&](const SampleSet &s) {
    std::vector<double> v;
    v.reserve(static_cast<size_t>(s.size()));
    for (const ClickPattern &x : s.patterns()) {
      v.push_back(safe_log10(p(x)));
    }
    return v;
  };
  c.reference_points = map_points(reference_ideal);
  c.uniform_points = map_points(reference_uniform);
  c.sample_points = map_points(samples);
  c.edges = common_edges({c.reference_points.empty() ? std::span<const double>(c.sample_points)
                                                     : std::span<const double>(c.reference_points)},
                         bins);
  c.reference = make_histogram(c.reference_points, c.edges);
  c.uniform = make_histogram(c.uniform_points, c.edges);
  c.samples = make_histogram(c.sample_points, c.edges);
  if (!c.sample_points.empty() && !c.reference_points.empty()) {
    c.sample_vs_reference = ks_test(c.sample_points, c.reference_points);
    c.sample_chi_square = chi_square_homogeneity(c.samples.counts, c.reference.counts);
  }
  if (!c.uniform_points.empty() && !c.reference_points.empty()) {
    c.uniform_vs_reference = ks_test(c.uniform_points, c.reference_points);
  }
  if (!c.sample_points.empty() && !c.uniform_points.empty()) {
    c.sample_vs_uniform = ks_test(c.sample_points, c.uniform_points);
  }
  double sd = sd_of(c.reference_points);
  double gap = mean_of(c.reference_points) - mean_of(c.uniform_points);
  c.uniform_separation = sd > 0 ? gap / sd : (std::abs(gap) > 0 ? std::numeric_limits<double>::infinity() : 0.0);
  return c;
}

ProbabilityCurve probability_curve(const GaussianState &state, const SampleSet &samples, int lo, int hi,
                                   int64_t n_reference, uint64_t seed, int bins, const KernelOptions &kernel) {
  ClickProbability engine(state, kernel);
  SampleSet band = samples.filter_clicks(lo, hi);
  SampleSet ideal = ideal_band_samples(state, lo, hi, n_reference, splitmix64(seed ^ 0x6375727665ull), kernel);
  SampleSet uniform = uniform_band_sampler(state.modes(), lo, hi, n_reference, splitmix64(seed ^ 0x756e69ull));
  return probability_curve([&](const ClickPattern &p) { return engine(p); }, ideal, uniform, band, bins);
}

Table ProbabilityCurve::to_table() const {
  Table t;
  t.header = {"bin_lo", "bin_hi", "theory_count", "theory_density", "uniform_count", "uniform_density",
              "sample_count", "sample_density"};
  auto density = [&](const Histogram &h, size_t b) {
    double total = static_cast<double>(h.total());
    double width = edges[b + 1] - edges[b];
    return total > 0 ? static_cast<double>(h.counts[b]) / (total * width) : 0.0;
  };
  for (size_t b = 0; b + 1 < edges.size(); ++b) {
    t.add_row({format_number(edges[b]), format_number(edges[b + 1]), std::to_string(reference.counts[b]),
               format_number(density(reference, b)), std::to_string(uniform.counts[b]),
               format_number(density(uniform, b)), std::to_string(samples.counts[b]),
               format_number(density(samples, b))});
  }
  return t;
}

ClickHistogramComparison click_histogram_compare(const std::vector<std::pair<std::string, const SampleSet *>> &sets) {
  ClickHistogramComparison c;
  if (sets.empty()) {
    return c;
  }
  int m = sets.front().second->modes();
  for (const auto &[name, s] : sets) {
    if (s->modes() != m) {
      throw std::invalid_argument("click histograms need sample sets with the same m");
    }
    c.names.push_back(name);
    std::vector<int64_t> h = s->click_histogram();
    c.peaks.push_back(static_cast<int>(std::max_element(h.begin(), h.end()) - h.begin()));
    double mean = 0;
    for (int k = 0; k <= m; ++k) {
      mean += k * static_cast<double>(h[k]);
    }
    c.means.push_back(s->empty() ? 0.0 : mean / static_cast<double>(s->size()));
    c.counts.push_back(std::move(h));
  }
  size_t n = sets.size();
  c.tvd.assign(n, std::vector<double>(n, 0.0));
  c.shape_p_value.assign(n, std::vector<double>(n, 1.0));
  for (size_t a = 0; a < n; ++a) {
    for (size_t b = 0; b < n; ++b) {
      std::vector<double> fa = fractions(c.counts[a]);
      std::vector<double> fb = fractions(c.counts[b]);
      double d = 0;
      for (size_t k = 0; k < fa.size(); ++k) {
        d += std::abs(fa[k] - fb[k]) / 2;
      }
      c.tvd[a][b] = d;
      if (a != b) {
        c.shape_p_value[a][b] = chi_square_homogeneity(c.counts[a], c.counts[b]).p_value;
      }
    }
  }
  return c;
}

Table ClickHistogramComparison::to_table() const {
  Table t;
  t.header = {"clicks"};
  for (const std::string &n : names) {
    t.header.push_back(n + "_count");
  }
  for (const std::string &n : names) {
    t.header.push_back(n + "_fraction");
  }
  if (counts.empty()) {
    return t;
  }
  std::vector<std::vector<double>> f;
  for (const auto &c : counts) {
    f.push_back(fractions(c));
  }
  for (size_t k = 0; k < counts.front().size(); ++k) {
    std::vector<std::string> row{std::to_string(k)};
    for (const auto &c : counts) {
      row.push_back(std::to_string(c[k]));
    }
    for (const auto &x : f) {
      row.push_back(format_number(x[k]));
    }
    t.add_row(std::move(row));
  }
  return t;
}

double expected_clicks(const GaussianState &state) {
  double total = 0;
  for (int i = 0; i < state.modes(); ++i) {
    int one[] = {i};
    total += 1 - silent_probability(state, one);
  }
  return total;
}

double ValidationReport::scalar(const std::string &name) const {
  for (const auto &[k, v] : scalars) {
    if (k == name) {
      return v;
    }
  }
  throw std::out_of_range("no scalar named " + name);
}

const Verdict *ValidationReport::verdict(const std::string &name) const {
  for (const Verdict &v : verdicts) {
    if (v.name == name) {
      return &v;
    }
  }
  return nullptr;
}

bool ValidationReport::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict &v) { return v.pass; });
}

Table ValidationReport::report_table() const {
  Table t;
  t.header = {"kind", "name", "value", "detail"};
  for (const auto &[k, v] : scalars) {
    t.add_row({"scalar", k, format_number(v), ""});
  }
  for (const Verdict &v : verdicts) {
    t.add_row({"verdict", v.name, v.pass ? "PASS" : "FAIL", v.detail});
  }
  return t;
}

void ValidationReport::write(const std::string &dir,
                             const std::vector<std::pair<std::string, std::string>> &meta) const {
  std::filesystem::create_directories(dir);
  auto with_meta = [&](Table t) {
    t.meta = meta;
    return t;
  };
  std::filesystem::path base(dir);
  write_table(with_meta(report_table()), (base / "report.csv").string());
  write_table(with_meta(cij_hist), (base / "cij_hist.csv").string());
  write_table(with_meta(click_hist), (base / "click_hist.csv").string());
  write_table(with_meta(hog_trajectory), (base / "hog_trajectory.csv").string());
  write_table(with_meta(prob_curve), (base / "prob_curve.csv").string());
}

ValidationReport validate_samples(const ExperimentSpec &spec, const SampleSet &samples,
                                  const std::vector<const SampleSet *> &overlays, const ValidationOptions &opts) {
  if (samples.modes() != spec.modes) {
    throw std::invalid_argument("samples have m=" + std::to_string(samples.modes()) + " but the spec has m=" +
                                std::to_string(spec.modes));
  }
  if (samples.empty()) {
    throw std::invalid_argument("no samples to validate");
  }
  ValidationReport report;
  auto scalar = [&](const std::string &k, double v) { report.scalars.emplace_back(k, v); };
  auto verdict = [&](const std::string &k, bool pass, const std::string &detail) {
    report.verdicts.push_back({k, pass, detail});
  };
  int m = spec.modes;
  int lo = std::clamp(opts.band_lo, 0, m);
  int hi = std::clamp(opts.band_hi, lo, m);
  GaussianState ideal_state = build(spec);
  GaussianState thermal_state = build(thermal_equivalent(spec));
  DistinguishableModel dist_model(spec);
  ClickProbability ideal_engine(ideal_state, opts.kernel);
  ClickProbability thermal_engine(thermal_state, opts.kernel);
  ProbabilityFn p_ideal = memoize([&](const ClickPattern &p) { return ideal_engine(p); });
  ProbabilityFn p_thermal = memoize([&](const ClickPattern &p) { return thermal_engine(p); });
  ProbabilityFn p_dist = memoize([&](const ClickPattern &p) { return dist_model.pmf(p); });
  double n = static_cast<double>(samples.size());
  scalar("samples", n);

  // Full distribution, when it fits.
  bool exact = m <= opts.max_exact_modes;
  std::vector<double> exact_ideal;
  if (exact) {
    exact_ideal = full_distribution(ideal_state, opts.max_exact_modes);
    std::vector<double> emp = samples.empirical_distribution();
    FidelityTvd fd = fidelity_tvd(exact_ideal, emp);
    std::vector<int64_t> counts(exact_ideal.size(), 0);
    for (const ClickPattern &p : samples.patterns()) {
      ++counts[p.index()];
    }
    ChiSquareResult gof = chi_square_gof(counts, exact_ideal);
    scalar("fidelity", fd.fidelity);
    scalar("tvd", fd.tvd);
    scalar("tvd_sampling_expected", expected_sampling_tvd(exact_ideal, samples.size()));
    scalar("distribution_gof_p", gof.p_value);
    verdict("distribution_matches_ideal", gof.p_value > 1e-3,
            "chi-square goodness of fit p=" + format_number(gof.p_value));
  }

  // Two-point correlations.
  PairCorrelations c_samples = pair_correlations(samples);
  PairCorrelations c_ideal = pair_correlations(ideal_state);
  PairCorrelations c_thermal = pair_correlations(thermal_state);
  PairCorrelations c_dist = pair_correlations(m, [&](std::span<const int> z) { return dist_model.silent(z); });
  CorrelationComparison vs_ideal = compare_correlations(c_samples, c_ideal);
  CorrelationComparison vs_thermal = compare_correlations(c_samples, c_thermal);
  CorrelationComparison vs_dist = compare_correlations(c_samples, c_dist);
  scalar("cij_p_vs_ideal", vs_ideal.p_value);
  scalar("cij_hist_tvd_vs_ideal", vs_ideal.histogram_tvd);
  scalar("cij_sigma_vs_thermal", vs_thermal.sigma);
  scalar("cij_sigma_vs_distinguishable", vs_dist.sigma);
  verdict("cij_matches_ideal", vs_ideal.p_value > 1e-3, "pairwise chi-square p=" + format_number(vs_ideal.p_value));
  verdict("cij_excludes_thermal", vs_thermal.sigma > 5, "separation " + format_number(vs_thermal.sigma) + " sigma");
  verdict("cij_excludes_distinguishable", vs_dist.sigma > 5,
          "separation " + format_number(vs_dist.sigma) + " sigma");
  std::vector<std::pair<std::string, PairCorrelations>> cij_series{
      {"samples", c_samples}, {"ideal_theory", c_ideal}, {"thermal_theory", c_thermal},
      {"distinguishable_theory", c_dist}};
  for (size_t k = 0; k < overlays.size(); ++k) {
    cij_series.emplace_back(std::string(to_string(overlays[k]->meta().model)) + "_" + std::to_string(k),
                            pair_correlations(*overlays[k]));
  }
  report.cij_hist = correlation_histogram(cij_series, opts.cij_bins).to_table();

  // Click-number histogram.
  std::vector<std::pair<std::string, const SampleSet *>> sets{{"samples", &samples}};
  for (size_t k = 0; k < overlays.size(); ++k) {
    sets.emplace_back(std::string(to_string(overlays[k]->meta().model)) + "_" + std::to_string(k), overlays[k]);
  }
  ClickHistogramComparison clicks = click_histogram_compare(sets);
  report.click_hist = clicks.to_table();
  double mean_expected = expected_clicks(ideal_state);
  std::vector<double> per_sample;
  per_sample.reserve(samples.patterns().size());
  for (const ClickPattern &p : samples.patterns()) {
    per_sample.push_back(p.clicks());
  }
  double mean_stderr = sd_of(per_sample) / std::sqrt(n);
  scalar("mean_clicks", clicks.means[0]);
  scalar("mean_clicks_expected", mean_expected);
  scalar("mean_clicks_stderr", mean_stderr);
  scalar("click_peak", clicks.peaks[0]);
  verdict("mean_clicks_match_ideal", std::abs(clicks.means[0] - mean_expected) <= 3 * mean_stderr + 1e-12,
          "mean " + format_number(clicks.means[0]) + " vs " + format_number(mean_expected));

  // Band-restricted tests.
  SampleSet band = samples.filter_clicks(lo, hi);
  scalar("band_lo", lo);
  scalar("band_hi", hi);
  scalar("band_samples", static_cast<double>(band.size()));
  Table hog_table;
  hog_table.header = {"t", "log_odds_thermal", "confidence_thermal", "log_odds_distinguishable",
                      "confidence_distinguishable"};
  Table curve_table;
  if (band.size() < 20) {
    verdict("hog_excludes_thermal", false, "fewer than 20 samples in the click band");
    verdict("hog_excludes_distinguishable", false, "fewer than 20 samples in the click band");
    verdict("curve_matches_ideal", false, "fewer than 20 samples in the click band");
    verdict("curve_excludes_uniform", false, "fewer than 20 samples in the click band");
    report.hog_trajectory = hog_table;
    report.prob_curve = ProbabilityCurve{}.to_table();
    return report;
  }
  SampleSet hog_batch(m, band.meta());
  for (int64_t k = 0; k < std::min<int64_t>(band.size(), opts.hog_samples); ++k) {
    hog_batch.add(band.patterns()[k]);
  }
  SampleSet reference = ideal_band_samples(ideal_state, lo, hi, opts.n_reference,
                                           splitmix64(opts.seed ^ 0x6375727665ull), opts.kernel);
  std::vector<double> reference_p;
  for (const ClickPattern &p : reference.patterns()) {
    reference_p.push_back(p_ideal(p));
  }
  HogOptions hog_thermal{lo, hi, 0, 0, reference_p};
  HogOptions hog_dist = hog_thermal;
  if (exact) {
    double mi = 0;
    double mt = 0;
    double md = 0;
    std::vector<double> exact_thermal = full_distribution(thermal_state, opts.max_exact_modes);
    for (size_t i = 0; i < exact_ideal.size(); ++i) {
      int k = std::popcount(i);
      if (k >= lo && k <= hi) {
        mi += exact_ideal[i];
        mt += exact_thermal[i];
        md += p_dist(ClickPattern::from_index(i, m));
      }
    }
    hog_thermal.log_mass_ideal = hog_dist.log_mass_ideal = std::log(mi);
    hog_thermal.log_mass_alt = std::log(mt);
    hog_dist.log_mass_alt = std::log(md);
  }
  scalar("hog_band_normalized", exact ? 1 : 0);
  HogResult h_t = hog_test(hog_batch, p_ideal, p_thermal, hog_thermal);
  HogResult h_d = hog_test(hog_batch, p_ideal, p_dist, hog_dist);
  for (size_t t = 0; t < h_t.confidence.size(); ++t) {
    hog_table.add_row({std::to_string(t + 1), format_number(h_t.log_odds[t]), format_number(h_t.confidence[t]),
                       format_number(h_d.log_odds[t]), format_number(h_d.confidence[t])});
  }
  report.hog_trajectory = hog_table;
  HogResult heavy = hog_test(band, p_ideal, p_thermal, hog_thermal);
  scalar("hog_samples", static_cast<double>(hog_batch.size()));
  scalar("hog_confidence_thermal", h_t.final_confidence());
  scalar("hog_confidence_distinguishable", h_d.final_confidence());
  scalar("heavy_fraction", heavy.heavy_fraction);
  verdict("hog_excludes_thermal", h_t.final_confidence() >= 0.99,
          "confidence " + format_number(h_t.final_confidence()) + " after " + std::to_string(hog_batch.size()));
  verdict("hog_excludes_distinguishable", h_d.final_confidence() >= 0.99,
          "confidence " + format_number(h_d.final_confidence()) + " after " + std::to_string(hog_batch.size()));

  SampleSet uniform = uniform_band_sampler(m, lo, hi, opts.n_reference, splitmix64(opts.seed ^ 0x756e69ull));
  ProbabilityCurve curve = probability_curve(p_ideal, reference, uniform, band, opts.curve_bins);
  report.prob_curve = curve.to_table();
  scalar("curve_ks_p_vs_ideal", curve.sample_vs_reference.p_value);
  scalar("curve_chi2_p_vs_ideal", curve.sample_chi_square.p_value);
  scalar("curve_ks_p_vs_uniform", curve.sample_vs_uniform.p_value);
  scalar("curve_uniform_separation", curve.uniform_separation);
  verdict("curve_matches_ideal", curve.sample_vs_reference.p_value > 0.01,
          "KS p=" + format_number(curve.sample_vs_reference.p_value));
  verdict("curve_excludes_uniform", curve.sample_vs_uniform.p_value < 0.01,
          "KS p=" + format_number(curve.sample_vs_uniform.p_value));
  return report;
}

}  // namespace gbs
