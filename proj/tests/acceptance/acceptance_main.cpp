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

#include "support/walkthrough.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "tcv/baselines.hpp"
#include "tcv/evaluation.hpp"
#include "tcv/model_io.hpp"
#include "tcv/parallel.hpp"
#include "tcv/synthgen.hpp"
#include "tcv/traj_distance.hpp"
#include "tcv/vat.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace tcv;

namespace
{

struct Outcome
{
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char * pattern, double v)
{
  char buf[128];
  std::snprintf(buf, sizeof(buf), pattern, v);
  return buf;
}

fs::path g_out;

// ---------------------------------------------------------------------------
// 1. DTW against exhaustive warping-path enumeration.

Outcome dtw_oracle()
{
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  std::size_t identity_misses = 0;
  for (int pair = 0; pair < 200; ++pair) {
    const std::size_t nodes = 4 + rng() % 6;
    const auto net = testing::random_network(rng, nodes, std::min<std::size_t>(12, nodes + rng() % 6));
    const auto d = all_pairs_segment_distances(net);
    const auto a = testing::random_walk(rng, net, 1 + rng() % 8);
    const auto b = testing::random_walk(rng, net, 1 + rng() % 8);
    auto cost = [&](EdgeId x, EdgeId y) { return d(x, y); };
    auto oracle = [&](const std::vector<EdgeId> & p, const std::vector<EdgeId> & q) {
      return oracle::dtw_enumerate(p, q, cost, [&](std::size_t i, std::size_t j) {
        return oracle::band_oracle(i, j, p.size(), q.size());
      });
    };
    const double got = traj_dtw(std::span<const EdgeId>(a), std::span<const EdgeId>(b), d);
    worst = std::max(worst, std::abs(got - oracle(a, b)));
    std::vector<EdgeId> rb(b.rbegin(), b.rend());
    const double rev = traj_dtw(std::span<const EdgeId>(a), std::span<const EdgeId>(rb), d);
    const double nd = nd_traj_dtw(std::span<const EdgeId>(a), std::span<const EdgeId>(b), d);
    if (nd != std::min(got, rev)) {
      ++identity_misses;
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && identity_misses == 0 && secs < 10.0,
          "max |dtw - oracle| = " + fmt("%.3g", worst) + ", nd identity misses = " +
            std::to_string(identity_misses) + ", " + fmt("%.2f s", secs)};
}

// ---------------------------------------------------------------------------
// 2. Segment distances against midpoint-augmented Floyd-Warshall.

Outcome graph_distance_oracle()
{
  std::mt19937_64 rng(2002);
  double worst = 0.0;
  std::size_t triangle_violations = 0;
  for (int round = 0; round < 50; ++round) {
    const std::size_t nodes = 3 + rng() % 14;
    const auto net = testing::random_network(rng, nodes, std::min<std::size_t>(30, nodes - 1 + rng() % 16));
    const auto d = all_pairs_segment_distances(net);
    const auto fw = oracle::midpoint_floyd_warshall(net);
    const std::size_t m = net.edge_count();
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        worst = std::max(worst, std::abs(d(i, j) - fw[i][j]));
        for (std::size_t k = 0; k < m; ++k) {
          if (d(i, k) > d(i, j) + d(j, k) + 1e-9) {
            ++triangle_violations;
          }
        }
      }
    }
  }
  return {worst <= 1e-9 && triangle_violations == 0,
          "max entry error = " + fmt("%.3g", worst) + ", triangle violations = " +
            std::to_string(triangle_violations)};
}

// ---------------------------------------------------------------------------
// 3. cut_k is single linkage; iVAT is the min-max closure.

Outcome single_linkage_equivalence()
{
  std::mt19937_64 rng(3003);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  std::size_t partition_mismatches = 0;
  std::size_t cuts = 0;
  double worst = 0.0;
  for (int round = 0; round < 100; ++round) {
    const std::size_t n = 2 + rng() % 39;
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    DistanceMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        d[i][j] = d[j][i] = u(rng);
        m(i, j) = m(j, i) = d[i][j];
      }
    }
    const auto v = vat(m);
    for (std::size_t k = 1; k <= n; ++k) {
      ++cuts;
      if (oracle::partition_of(cut_k(v, k)) != oracle::single_linkage(d, k)) {
        ++partition_mismatches;
      }
    }
    const auto iv = ivat(v);
    const auto closure = oracle::minmax_closure(d);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        worst = std::max(worst, std::abs(iv(i, j) - closure[v.permutation[i]][v.permutation[j]]));
      }
    }
  }
  return {partition_mismatches == 0 && worst <= 1e-9,
          std::to_string(cuts) + " cuts, " + std::to_string(partition_mismatches) + " mismatches, max iVAT error " +
            fmt("%.3g", worst)};
}

// ---------------------------------------------------------------------------
// 4. Representative trajectory trace and cycle guard.

Outcome representative_trace()
{
  const std::vector<Trajectory> members{
    testing::traj(1, {0, 1, 2}), testing::traj(2, {0, 1, 2}), testing::traj(3, {0, 1})};
  std::vector<const Trajectory *> ptrs;
  for (const auto & t : members) ptrs.push_back(&t);
  const auto c = build_cluster_model(0, ptrs, 0.3);
  const bool trace_ok = c.rt.segments == std::vector<EdgeId>{0, 1, 2} && c.rt.count_score == 5;

  TransitionCounts cyc;
  cyc.pairs = {{{0, 1}, 2}, {{1, 0}, 2}};
  cyc.pass = {{0, 2}, {1, 2}};
  cyc.origin = {{0, 2}};
  cyc.trajectories = 2;
  const auto frs = compute_frs(cyc, 0.3);
  const auto rt = representative_trajectory(cyc, frs, compute_fss(cyc, frs, 0.3));
  bool guard_ok = rt.segments.size() <= cyc.pass.size();

  // Random dense cyclic count structures.
  std::mt19937_64 rng(4004);
  for (int round = 0; round < 500 && guard_ok; ++round) {
    TransitionCounts w;
    const EdgeId segs = 2 + static_cast<EdgeId>(rng() % 8);
    w.trajectories = 10;
    for (EdgeId a = 0; a < segs; ++a) {
      w.pass[a] = 5 + rng() % 6;
      w.origin[a] = rng() % 3;
      for (EdgeId b = 0; b < segs; ++b) {
        if (a != b && rng() % 2) w.pairs[{a, b}] = 1 + rng() % 5;
      }
    }
    const auto f = compute_frs(w, 0.3);
    const auto r = representative_trajectory(w, f, compute_fss(w, f, 0.3));
    guard_ok = r.segments.size() <= static_cast<std::size_t>(segs);
  }
  return {trace_ok && guard_ok,
          std::string("RT trace ") + (trace_ok ? "<e0,e1,e2> score 5" : "wrong") + ", cycle guard " +
            (guard_ok ? "bounded" : "exceeded")};
}

// ---------------------------------------------------------------------------
// 5. Nine-trajectory walkthrough.

Outcome walkthrough()
{
  const testing::WalkthroughFixture fx;
  const auto model = fx.train().model;
  std::map<TrajectoryId, std::size_t> cluster_of;
  for (const auto & c : model.clusters) {
    for (TrajectoryId id : c.members) cluster_of[id] = c.cluster_id;
  }
  const auto & ts = fx.ds.trajectories;
  auto same = [&](TrajectoryId a, TrajectoryId b) { return cluster_of.at(a) == cluster_of.at(b); };
  // Sub-trajectories join their forward parent; reversed twins stay apart.
  bool ok = model.K() == 6 && model.k_nondirectional == 4;
  ok = ok && is_subtrajectory(ts[1], ts[0]) && same(2, 1);
  ok = ok && is_subtrajectory(ts[2], ts[0]) && same(3, 1);
  ok = ok && is_subtrajectory(ts[7], ts[5]) && same(8, 6);
  ok = ok && ts[3] == reverse(Trajectory{4, ts[0].segments}) && !same(4, 1);
  ok = ok && ts[6] == reverse(Trajectory{7, ts[5].segments}) && !same(7, 6);
  std::set<std::size_t> singles{cluster_of.at(4), cluster_of.at(5), cluster_of.at(7), cluster_of.at(9)};
  ok = ok && singles.size() == 4;
  for (const auto & c : model.clusters) {
    if (singles.count(c.cluster_id)) ok = ok && c.members.size() == 1;
  }
  std::ostringstream os;
  os << "k=" << model.k_nondirectional << " K=" << model.K() << " partition {";
  for (const auto & c : model.clusters) {
    os << "{";
    for (std::size_t i = 0; i < c.members.size(); ++i) os << (i ? "," : "") << c.members[i];
    os << "}";
  }
  os << "}";
  return {ok, os.str()};
}

// ---------------------------------------------------------------------------
// Planted-pattern data shared by criteria 6, 10, 11 and 13.

GeneratorSpec planted_spec(std::size_t per_pattern, std::uint64_t seed)
{
  GeneratorSpec spec;
  spec.rows = 10;
  spec.cols = 10;
  spec.direction_mix = 0.5;
  spec.truncation_prob = 0.1;
  spec.seed = seed;
  spec.patterns = {
    {expand_waypoints(10, {{0, 0}, {0, 9}, {4, 9}}), per_pattern},
    {expand_waypoints(10, {{9, 9}, {9, 0}, {5, 0}}), per_pattern},
    {expand_waypoints(10, {{2, 1}, {2, 7}, {7, 7}}), per_pattern},
    {expand_waypoints(10, {{8, 1}, {8, 6}, {4, 6}}), per_pattern},
  };
  return spec;
}

PipelineConfig planted_config()
{
  PipelineConfig cfg;
  cfg.k_prime = 150;
  cfg.n = 500;
  cfg.alpha_stage1 = 30.0;
  cfg.seed = 7;
  return cfg;
}

struct Planted
{
  GeneratorSpec spec = planted_spec(1250, 5);
  RoadNetwork net = make_grid_network(spec.rows, spec.cols, spec.spacing_deg);
  SegmentDistanceMatrix d = all_pairs_segment_distances(net);
  GeneratedData data = generate(spec, net);
  std::map<TrajectoryId, std::size_t> label_of;
  TrajectoryDataset train;
  TrajectoryDataset test;
  TrainedModel model;
  double train_seconds = 0.0;

  Planted()
  {
    for (const auto & l : data.labels) label_of[l.id] = 2 * l.pattern + (l.reversed ? 1 : 0);
    std::tie(train, test) = split_train_test(data.dataset, 0.8, 17);
  }
};

Planted & planted()
{
  static Planted p;
  return p;
}

std::size_t longest_pattern(const Planted & p)
{
  std::size_t m = 0;
  for (const auto & pat : p.spec.patterns) m = std::max(m, pat.nodes.size() - 1);
  return m;
}

// ---------------------------------------------------------------------------
// 6. Planted-pattern recovery.

Outcome planted_recovery()
{
  auto & p = planted();
  set_thread_count(1);
  const auto t0 = Clock::now();
  p.model = train(p.train, p.net, p.d, planted_config()).model;
  p.train_seconds = seconds_since(t0);
  const auto labels = membership_labels(p.model, p.train);
  std::vector<std::size_t> truth;
  for (const auto & t : p.train.trajectories) truth.push_back(p.label_of.at(t.id));
  const double ari = adjusted_rand_index(labels, truth);
  const ClusivatPredictor predictor(p.model, p.d, p.model.config.lambda_window);
  const auto rep = run_experiment(predictor, p.test, longest_pattern(p), p.net, g_out / "planted");
  const double total = seconds_since(t0);
  set_thread_count(0);
  const bool ok = p.model.K() == 8 && ari >= 0.95 && rep.avg_pa >= 0.90 && rep.pr >= 0.80 && total < 300.0;
  return {ok, "K=" + std::to_string(p.model.K()) + fmt(" ARI=%.4f", ari) + fmt(" PA=%.4f", rep.avg_pa) +
                fmt(" PR=%.4f", rep.pr) + fmt(" DE=%.4f km", rep.avg_de) + fmt(" train %.1f s", p.train_seconds) +
                fmt(" total %.1f s (1 thread)", total)};
}

// ---------------------------------------------------------------------------
// 7. Clustered chains against one global chain on a shared corridor.
//
//   source A: row 2, cols 0 -> 4      source B: row 2, cols 8 -> 4
//   corridor: col 4, rows 2 -> 4
//   branch A: row 4, cols 4 -> 0      branch B: row 4, cols 4 -> 8

struct Corridor
{
  RoadNetwork net = make_grid_network(5, 9, 0.01);
  SegmentDistanceMatrix d = all_pairs_segment_distances(net);

  std::vector<EdgeId> route(std::vector<std::pair<std::size_t, std::size_t>> waypoints) const
  {
    return node_path_edges(net, expand_waypoints(9, waypoints));
  }
};

Outcome corridor_separation()
{
  const Corridor c;
  const auto route_a = c.route({{2, 0}, {2, 4}, {4, 4}, {4, 0}});
  const auto route_b = c.route({{2, 8}, {2, 4}, {4, 4}, {4, 8}});
  std::vector<Trajectory> all;
  TrajectoryId id = 0;
  for (int i = 0; i < 700; ++i) all.push_back({id++, route_a});
  for (int i = 0; i < 300; ++i) all.push_back({id++, route_b});
  const auto [train_set, test_set] = split_train_test(testing::dataset(all, c.net), 0.8, 3);

  PipelineConfig cfg;
  cfg.k_prime = 10;
  cfg.n = 100;
  cfg.alpha_stage1 = 1.0;
  const auto model = train(train_set, c.net, c.d, cfg).model;
  const auto global = global_mm_train(train_set);

  TrajectoryDataset test_a{{}, test_set.network_ref};
  TrajectoryDataset test_b{{}, test_set.network_ref};
  for (const auto & t : test_set.trajectories) (t.segments == route_a ? test_a : test_b).trajectories.push_back(t);

  const ClusivatPredictor clus(model, c.d, 3);
  const GlobalChainPredictor chain(global);
  const std::size_t m = route_a.size();
  const auto ca = run_experiment(clus, test_a, m, c.net);
  const auto cb = run_experiment(clus, test_b, m, c.net);
  const auto gb = run_experiment(chain, test_b, m, c.net);
  const bool ok = model.K() == 2 && ca.avg_pa == 1.0 && cb.avg_pa == 1.0 && gb.avg_pa < 0.85;
  return {ok, "K=" + std::to_string(model.K()) + fmt(" clusivat PA major=%.4f", ca.avg_pa) +
                fmt(" minor=%.4f", cb.avg_pa) + fmt("; global PA minor=%.4f", gb.avg_pa)};
}

// ---------------------------------------------------------------------------
// 8. Lambda-window ablation.
//
// A 12 x 9 grid with a long vertical corridor C on column 4 (rows 0 -> 8).
// Training: P1 = A + C + X with A on row 0 from the west and X on row 8 to
// the west; P2 = B + C + Y mirrored on the east side.  Some P1 copies stop
// inside C, so P1's chain is less certain than P2's along the corridor.
// Test queries follow A + C + Y and are cut deep inside C: a short window
// sees only corridor segments and picks P2, an unbounded window is pulled
// to P1 by the western source.

Outcome lambda_ablation()
{
  const RoadNetwork net = make_grid_network(12, 9, 0.01);
  const auto d = all_pairs_segment_distances(net);
  auto route = [&](std::vector<std::pair<std::size_t, std::size_t>> w) {
    return node_path_edges(net, expand_waypoints(9, w));
  };
  const auto p1 = route({{0, 0}, {0, 4}, {8, 4}, {8, 0}});
  const auto p2 = route({{0, 8}, {0, 4}, {8, 4}, {8, 8}});
  const auto switcher = route({{0, 0}, {0, 4}, {8, 4}, {8, 8}});
  const std::size_t corridor_start = 4;
  std::vector<Trajectory> all;
  TrajectoryId id = 0;
  for (int i = 0; i < 300; ++i) all.push_back({id++, p1});
  for (int i = 0; i < 300; ++i) all.push_back({id++, p2});
  for (int i = 0; i < 120; ++i) {
    // Stop after corridor segment 3..8.
    const std::size_t keep = corridor_start + 3 + static_cast<std::size_t>(i % 6);
    all.push_back({id++, {p1.begin(), p1.begin() + static_cast<std::ptrdiff_t>(keep)}});
  }
  const auto ds = testing::dataset(all, net);
  PipelineConfig cfg;
  cfg.k_prime = 12;
  cfg.n = 120;
  cfg.alpha_stage1 = 1.0;
  const auto model = train(ds, net, d, cfg).model;

  // Query = A + first four corridor segments; truth = rest of C + Y.
  std::vector<Trajectory> queries;
  for (int i = 0; i < 20; ++i) queries.push_back({1000000 + i, switcher});
  const auto test = testing::dataset(queries, net);

  fs::create_directories(g_out);
  std::ofstream csv(g_out / "lambda_curve.csv");
  csv << "lambda,avg_pa,avg_de_km\n";
  std::map<std::size_t, double> de_at;
  std::ostringstream os;
  for (std::size_t lambda : {std::size_t{1}, std::size_t{2}, std::size_t{3}, std::size_t{4}, std::size_t{5},
                             kUnbounded}) {
    const ClusivatPredictor p(model, d, lambda);
    const auto rep = run_experiment(p, test, switcher.size(), net);
    de_at[lambda] = rep.avg_de;
    const std::string name = lambda == kUnbounded ? std::string("inf") : std::to_string(lambda);
    csv << name << ',' << fmt("%.6f", rep.avg_pa) << ',' << fmt("%.6f", rep.avg_de) << '\n';
    os << " DE(" << name << ")=" << fmt("%.3f", rep.avg_de);
  }
  const bool ok = de_at[3] < de_at[kUnbounded];
  return {ok, "K=" + std::to_string(model.K()) + os.str() + " km -> lambda_curve.csv"};
}

// ---------------------------------------------------------------------------
// 9. Alpha sweep on hierarchical patterns.
//
// Four well separated groups; inside each group two routes with different
// sources share a corridor and then split.  Coarse cuts merge the two routes
// of a group, fine cuts keep them apart.

Outcome alpha_sweep()
{
  GeneratorSpec spec;
  spec.rows = 20;
  spec.cols = 20;
  spec.direction_mix = 0.0;
  spec.seed = 23;
  auto add_group = [&](std::size_t r0, std::size_t c0, std::size_t major, std::size_t minor) {
    // Sources on rows r0 and r0+2, shared corridor on column c0+3, branches
    // on rows r0+6 and r0+8.
    spec.patterns.push_back(
      {expand_waypoints(20, {{r0, c0}, {r0, c0 + 3}, {r0 + 6, c0 + 3}, {r0 + 6, c0 + 6}}), major});
    spec.patterns.push_back(
      {expand_waypoints(20, {{r0 + 2, c0 + 6}, {r0 + 2, c0 + 3}, {r0 + 8, c0 + 3}, {r0 + 8, c0}}), minor});
  };
  add_group(0, 0, 60, 30);
  add_group(0, 11, 50, 40);
  add_group(11, 0, 70, 20);
  add_group(11, 11, 45, 45);
  const auto net = make_grid_network(spec.rows, spec.cols, spec.spacing_deg);
  const auto d = all_pairs_segment_distances(net);
  const auto gen = generate(spec, net);
  const auto [train_set, test_set] = split_train_test(gen.dataset, 0.7, 29);
  std::size_t m_max = 0;
  for (const auto & p : spec.patterns) m_max = std::max(m_max, p.nodes.size() - 1);

  fs::create_directories(g_out);
  std::ofstream csv(g_out / "alpha_curve.csv");
  csv << "alpha,k,K,ari,avg_pa,avg_de_km\n";
  std::vector<std::size_t> ks;
  std::vector<std::size_t> small_ks;
  std::vector<double> des;
  std::map<TrajectoryId, std::size_t> pattern_of;
  for (const auto & l : gen.labels) pattern_of[l.id] = l.pattern;
  std::vector<std::size_t> truth;
  for (const auto & t : train_set.trajectories) truth.push_back(pattern_of.at(t.id));
  const std::vector<double> alphas{16.0, 8.0, 4.0, 2.0, 1.0, 0.5, 0.2};  // decreasing
  for (double alpha : alphas) {
    PipelineConfig cfg;
    cfg.k_prime = 8;
    cfg.n = 40;
    cfg.alpha_stage1 = alpha;
    cfg.seed = 31;
    const auto model = train(train_set, net, d, cfg).model;
    const double ari = adjusted_rand_index(membership_labels(model, train_set), truth);
    // Full history: the sources are what tells the routes of a group apart.
    const ClusivatPredictor p(model, d, kUnbounded);
    const auto rep = run_experiment(p, test_set, m_max, net);
    ks.push_back(model.K());
    small_ks.push_back(model.k_nondirectional);
    des.push_back(rep.avg_de);
    csv << fmt("%.2f", alpha) << ',' << model.k_nondirectional << ',' << model.K() << ',' << fmt("%.6f", ari)
        << ',' << fmt("%.6f", rep.avg_pa) << ','
        << fmt("%.6f", rep.avg_de) << '\n';
  }
  bool ok = true;
  std::ostringstream os;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (i > 0) ok = ok && ks[i] >= ks[i - 1] && des[i] <= des[i - 1] + 1e-12;
    os << fmt("alpha=%.2f", alphas[i]) << " k=" << small_ks[i] << " K=" << ks[i] << fmt(" DE=%.4f; ", des[i]);
  }
  os << "-> alpha_curve.csv";
  return {ok, os.str()};
}

// ---------------------------------------------------------------------------
// 10. Training time scales about linearly in the number of trajectories.

Outcome scaling()
{
  const auto spec10 = planted_spec(2500, 41);
  const auto spec20 = planted_spec(5000, 41);
  const auto net = make_grid_network(spec10.rows, spec10.cols, spec10.spacing_deg);
  const auto d = all_pairs_segment_distances(net);  // warm, shared by both runs
  const auto small = generate(spec10, net);
  const auto large = generate(spec20, net);
  const auto cfg = planted_config();
  auto timed = [&](const TrajectoryDataset & ds) {
    double best = 1e300;
    for (int rep = 0; rep < 2; ++rep) {
      const auto t0 = Clock::now();
      const auto r = train(ds, net, d, cfg);
      best = std::min(best, seconds_since(t0));
      if (r.model.K() == 0) best = 1e300;
    }
    return best;
  };
  set_thread_count(1);
  const double t10 = timed(small.dataset);
  const double t20 = timed(large.dataset);
  set_thread_count(0);
  const double ratio = t20 / t10;
  return {ratio <= 2.5, fmt("10k: %.2f s, ", t10) + fmt("20k: %.2f s, ", t20) + fmt("ratio %.3f", ratio)};
}

// ---------------------------------------------------------------------------
// 11. Prediction latency on the planted model.

Outcome latency()
{
  auto & p = planted();
  if (p.model.clusters.empty()) {
    p.model = train(p.train, p.net, p.d, planted_config()).model;
  }
  const std::size_t m = longest_pattern(p);
  set_thread_count(1);
  const auto t0 = Clock::now();
  std::size_t produced = 0;
  for (const auto & t : p.test.trajectories) {
    const auto query = split_query_truth(t).first;
    produced += predict(p.model, p.d, {query.segments, m, p.model.config.lambda_window}).predicted.size();
  }
  const double per = seconds_since(t0) / static_cast<double>(p.test.size());
  set_thread_count(0);
  return {per * 1e3 <= 10.0, fmt("%.4f ms per trajectory", per * 1e3) + " (m=" + std::to_string(m) + ", " +
                               std::to_string(p.test.size()) + " queries, " + std::to_string(produced) +
                               " segments)"};
}

// ---------------------------------------------------------------------------
// 12. Markov invariants and EM behaviour.

Outcome markov_invariants()
{
  std::mt19937_64 rng(12012);
  std::size_t row_violations = 0;
  std::size_t em_violations = 0;
  for (int round = 0; round < 1000; ++round) {
    const std::size_t nodes = 5 + rng() % 8;
    const auto net = testing::random_network(rng, nodes, nodes + rng() % 8);
    std::vector<Trajectory> ts;
    const std::size_t count = 4 + rng() % 20;
    for (std::size_t i = 0; i < count; ++i) {
      // Walks that never repeat a segment: one (i, j) event per trajectory.
      std::vector<EdgeId> walk{static_cast<EdgeId>(rng() % net.edge_count())};
      std::set<EdgeId> used{walk[0]};
      const std::size_t len = 2 + rng() % 8;
      while (walk.size() < len) {
        std::vector<EdgeId> options;
        for (EdgeId e : net.adjacent_segments(walk.back())) {
          if (!used.count(e)) options.push_back(e);
        }
        if (options.empty()) break;
        walk.push_back(options[rng() % options.size()]);
        used.insert(walk.back());
      }
      ts.push_back({static_cast<TrajectoryId>(i), walk});
    }
    const auto ds = testing::dataset(ts, net);
    const auto probs = to_probabilities(build_counts(std::span<const Trajectory>(ds.trajectories)));
    for (const auto & [from, row] : probs.rows()) {
      double sum = 0.0;
      for (const auto & t : row) {
        if (t.probability < 0.0 || t.probability > 1.0) ++row_violations;
        sum += t.probability;
      }
      if (sum > 1.0 + 1e-9) ++row_violations;
    }
    MmmParams mp;
    mp.components = 1 + rng() % 3;
    mp.seed = rng();
    mp.max_iters = 50;
    const auto mm = mmm_train(ds, net, mp);
    for (std::size_t it = 1; it < mm.objective_trace.size(); ++it) {
      if (mm.objective_trace[it] < mm.objective_trace[it - 1] - 1e-9) ++em_violations;
    }
  }

  const auto net = make_grid_network(10, 10, 0.01);
  GeneratorSpec spec;
  spec.direction_mix = 0.5;
  spec.truncation_prob = 0.2;
  spec.patterns = {{expand_waypoints(10, {{0, 0}, {0, 9}}), 100}, {expand_waypoints(10, {{9, 0}, {9, 9}}), 100}};
  const auto gen = generate(spec, net);
  MmmParams mp;
  mp.components = 2;
  const auto mm = mmm_train(gen.dataset, net, mp);
  double weakest = 1.0;
  std::map<std::size_t, std::set<std::size_t>> components_of_pattern;
  for (std::size_t i = 0; i < gen.labels.size(); ++i) {
    const auto & r = mm.responsibilities[i];
    const auto best = static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
    weakest = std::min(weakest, r[best]);
    components_of_pattern[gen.labels[i].pattern].insert(best);
  }
  const bool separated = components_of_pattern[0].size() == 1 && components_of_pattern[1].size() == 1 &&
                         *components_of_pattern[0].begin() != *components_of_pattern[1].begin();
  const bool ok = row_violations == 0 && em_violations == 0 && separated && weakest >= 0.99;
  return {ok, "row violations " + std::to_string(row_violations) + ", EM decreases " +
                std::to_string(em_violations) + fmt(", disjoint-pattern min responsibility %.6f", weakest) +
                (separated ? " (separated)" : " (mixed)")};
}

// ---------------------------------------------------------------------------
// 13. Byte-identical results across runs and thread counts.

Outcome determinism()
{
  const auto spec = planted_spec(300, 77);
  const auto net = make_grid_network(spec.rows, spec.cols, spec.spacing_deg);
  auto run = [&](std::size_t threads) {
    set_thread_count(threads);
    const auto d = all_pairs_segment_distances(net);
    const auto gen = generate(spec, net);
    const auto [tr, te] = split_train_test(gen.dataset, 0.8, 5);
    const auto cfg = planted_config();
    const auto model = train(tr, net, d, cfg).model;
    const ClusivatPredictor p(model, d, 3);
    const auto dir = g_out / ("determinism_t" + std::to_string(threads));
    fs::remove_all(dir);
    run_experiment(p, te, 16, net, dir);
    std::ostringstream bytes;
    bytes << serialize_model(model) << '\n' << std::ifstream(dir / "summary.csv").rdbuf() << '\n'
          << std::ifstream(dir / "per_step.csv").rdbuf();
    std::ostringstream dall;
    dall.write(reinterpret_cast<const char *>(d.entries().data()),
               static_cast<std::streamsize>(d.entries().size() * sizeof(double)));
    return bytes.str() + dall.str();
  };
  const auto a = run(1);
  const auto b = run(1);
  const auto c = run(4);
  set_thread_count(0);
  return {a == b && a == c, std::string("repeat ") + (a == b ? "identical" : "differs") + ", 1 vs 4 threads " +
                              (a == c ? "identical" : "differs") + " (" + std::to_string(a.size()) + " bytes)"};
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"tcv acceptance suite"};
  std::string out = "acceptance_artifacts";
  std::vector<int> only;
  app.add_option("--out", out, "Directory for curve CSVs");
  app.add_option("--only", only, "Run only these criteria");
  CLI11_PARSE(app, argc, argv);
  g_out = out;
  fs::create_directories(g_out);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
    {"DTW oracle", dtw_oracle},
    {"graph-distance oracle", graph_distance_oracle},
    {"single-linkage equivalence", single_linkage_equivalence},
    {"representative trajectory trace", representative_trace},
    {"nine-trajectory walkthrough", walkthrough},
    {"planted-pattern recovery", planted_recovery},
    {"clustered vs global chain", corridor_separation},
    {"lambda-window ablation", lambda_ablation},
    {"alpha sweep", alpha_sweep},
    {"training scaling", scaling},
    {"prediction latency", latency},
    {"Markov invariants", markov_invariants},
    {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), number) == only.end()) {
      continue;
    }
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception & ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << number << "] " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
