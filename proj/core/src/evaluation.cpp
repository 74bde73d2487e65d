// Copyright 2026 The tcv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tcv/evaluation.hpp"

#include "tcv/geo.hpp"
#include "tcv/parallel.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

namespace tcv
{

double pa(std::span<const EdgeId> pred, std::span<const EdgeId> truth)
{
  if (pred.empty() && truth.empty()) {
    throw DataError("PA of two empty sequences");
  }
  const std::size_t overlap = std::min(pred.size(), truth.size());
  std::size_t hits = 0;
  for (std::size_t j = 0; j < overlap; ++j) {
    hits += pred[j] == truth[j] ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(std::max(pred.size(), truth.size()));
}

double de(
  std::span<const EdgeId> pred, std::span<const EdgeId> truth, const RoadNetwork & net, std::optional<EdgeId> anchor)
{
  if (pred.empty() && truth.empty()) {
    throw DataError("DE of two empty sequences");
  }
  if (truth.empty()) {
    return 0.0;
  }
  if (pred.empty() && !anchor) {
    throw DataError("DE of an empty prediction needs an anchor segment");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < truth.size(); ++j) {
    const EdgeId p = j < pred.size() ? pred[j] : (pred.empty() ? *anchor : pred.back());
    sum += p == truth[j] ? 0.0 : haversine_km(net.edge_midpoint(p), net.edge_midpoint(truth[j]));
  }
  return sum / static_cast<double>(truth.size());
}

double pr(std::span<const ScoredPair> results)
{
  if (results.empty()) {
    throw DataError("PR of an empty result set");
  }
  std::size_t exact = 0;
  for (const auto & r : results) {
    exact += r.pred == r.truth ? 1 : 0;
  }
  return static_cast<double>(exact) / static_cast<double>(results.size());
}

OneStep one_step_metrics(std::span<const ScoredPair> results, const RoadNetwork & net)
{
  OneStep out;
  std::size_t total = 0;
  std::size_t correct = 0;
  double dist = 0.0;
  for (const auto & r : results) {
    if (r.truth.empty() || r.pred.empty()) {
      continue;
    }
    ++total;
    if (r.pred.front() == r.truth.front()) {
      ++correct;
    } else {
      dist += haversine_km(net.edge_midpoint(r.pred.front()), net.edge_midpoint(r.truth.front()));
    }
  }
  if (total > 0) {
    out.oa = static_cast<double>(correct) / static_cast<double>(total);
    out.ode = dist / static_cast<double>(total);
  }
  return out;
}

double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b)
{
  if (a.size() != b.size()) {
    throw DataError("label vectors differ in length");
  }
  const auto n = static_cast<double>(a.size());
  auto comb2 = [](double x) { return x * (x - 1.0) / 2.0; };
  std::map<std::pair<std::size_t, std::size_t>, double> table;
  std::map<std::size_t, double> rows;
  std::map<std::size_t, double> cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    table[{a[i], b[i]}] += 1.0;
    rows[a[i]] += 1.0;
    cols[b[i]] += 1.0;
  }
  double index = 0.0;
  for (const auto & [key, v] : table) {
    index += comb2(v);
  }
  double sum_a = 0.0;
  double sum_b = 0.0;
  for (const auto & [key, v] : rows) {
    sum_a += comb2(v);
  }
  for (const auto & [key, v] : cols) {
    sum_b += comb2(v);
  }
  const double total = comb2(n);
  const double expected = total > 0.0 ? sum_a * sum_b / total : 0.0;
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) {
    return 1.0;  // both partitions trivial and therefore identical
  }
  return (index - expected) / (max_index - expected);
}

namespace
{

struct TrialResult
{
  std::vector<EdgeId> pred;
  std::vector<EdgeId> truth;  // full truth half
  EdgeId anchor = 0;
  bool truncated = false;
};

std::string fmt(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::ofstream open_csv(const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
  return out;
}

}  // namespace

EvalReport run_experiment(
  const RoutePredictor & predictor, const TrajectoryDataset & test, std::size_t m_max, const RoadNetwork & net,
  const std::filesystem::path & out_dir)
{
  if (test.trajectories.empty()) {
    throw DataError("evaluation needs a non-empty test set");
  }
  if (m_max == 0) {
    throw DataError("m_max must be >= 1");
  }
  const std::size_t N = test.size();
  std::vector<TrialResult> trials(N);
  parallel_for(N, [&](std::size_t i) {
    auto [query, truth] = split_query_truth(test.trajectories[i]);
    if (truth.segments.empty()) {
      throw DataError("test trajectory " + std::to_string(test.trajectories[i].id) + " is too short to split");
    }
    const std::size_t m = std::min(truth.size(), m_max);
    PredictionResult r = predictor.predict(query.segments, m);
    trials[i].pred = std::move(r.predicted);
    trials[i].truth = std::move(truth.segments);
    trials[i].anchor = query.segments.back();
    trials[i].truncated = r.truncated;
  });

  EvalReport rep;
  rep.method = predictor.method();
  rep.n_test = N;
  rep.predicted_length_histogram.assign(m_max + 1, 0);
  std::vector<ScoredPair> pairs;
  std::vector<ScoredPair> first_steps;
  pairs.reserve(N);
  double pa_sum = 0.0;
  double de_sum = 0.0;
  double ode_sum = 0.0;
  std::size_t oa_hits = 0;
  for (const auto & t : trials) {
    const std::size_t m = std::min(t.truth.size(), m_max);
    const std::span<const EdgeId> window(t.truth.data(), m);
    pa_sum += pa(t.pred, window);
    de_sum += de(t.pred, window, net, t.anchor);
    pairs.push_back({t.pred, {window.begin(), window.end()}});
    const std::span<const EdgeId> first_pred(t.pred.data(), std::min<std::size_t>(1, t.pred.size()));
    const std::span<const EdgeId> first_truth(t.truth.data(), 1);
    oa_hits += (!first_pred.empty() && first_pred[0] == first_truth[0]) ? 1 : 0;
    ode_sum += de(first_pred, first_truth, net, t.anchor);
    rep.n_truncated += t.truncated ? 1 : 0;
    ++rep.predicted_length_histogram[t.pred.size()];
  }
  const auto n = static_cast<double>(N);
  rep.avg_pa = pa_sum / n;
  rep.avg_de = de_sum / n;
  rep.pr = pr(pairs);
  rep.oa = static_cast<double>(oa_hits) / n;
  rep.ode = ode_sum / n;

  for (std::size_t s = 1; s <= m_max; ++s) {
    StepPoint pt;
    pt.step = s;
    double ps = 0.0;
    double ds = 0.0;
    for (const auto & t : trials) {
      if (t.truth.size() < s) {
        continue;
      }
      const std::span<const EdgeId> p(t.pred.data(), std::min(s, t.pred.size()));
      const std::span<const EdgeId> tr(t.truth.data(), s);
      ps += pa(p, tr);
      ds += de(p, tr, net, t.anchor);
      ++pt.support;
    }
    if (pt.support > 0) {
      pt.avg_pa = ps / static_cast<double>(pt.support);
      pt.avg_de = ds / static_cast<double>(pt.support);
    }
    rep.per_step.push_back(pt);
  }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_summary_csv({rep}, out_dir / "summary.csv");
    write_per_step_csv(rep, out_dir / "per_step.csv");
    write_length_histogram_csv(rep, out_dir / "length_histogram.csv");
  }
  return rep;
}

void write_summary_csv(const std::vector<EvalReport> & reports, const std::filesystem::path & path)
{
  auto out = open_csv(path);
  out << "method,avg_pa,avg_de_km,pr_pct,oa,ode_km,n_test,n_truncated\n";
  for (const auto & r : reports) {
    out << r.method << ',' << fmt(r.avg_pa) << ',' << fmt(r.avg_de) << ',' << fmt(100.0 * r.pr) << ',' << fmt(r.oa)
        << ',' << fmt(r.ode) << ',' << r.n_test << ',' << r.n_truncated << '\n';
  }
}

void write_per_step_csv(const EvalReport & report, const std::filesystem::path & path)
{
  auto out = open_csv(path);
  out << "step,avg_pa,avg_de_km,support\n";
  for (const auto & p : report.per_step) {
    out << p.step << ',' << fmt(p.avg_pa) << ',' << fmt(p.avg_de) << ',' << p.support << '\n';
  }
}

void write_length_histogram_csv(const EvalReport & report, const std::filesystem::path & path)
{
  auto out = open_csv(path);
  out << "predicted_length,count\n";
  for (std::size_t len = 0; len < report.predicted_length_histogram.size(); ++len) {
    out << len << ',' << report.predicted_length_histogram[len] << '\n';
  }
}

}  // namespace tcv
