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

#include "tcv/baselines.hpp"

#include "tcv/parallel.hpp"
#include "tcv/traj_distance.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <random>
#include <set>

namespace tcv
{

namespace
{

constexpr std::size_t kNoPath = std::numeric_limits<std::size_t>::max();

std::vector<const Trajectory *> pointers(const TrajectoryDataset & ds)
{
  std::vector<const Trajectory *> out;
  out.reserve(ds.size());
  for (const auto & t : ds.trajectories) {
    out.push_back(&t);
  }
  return out;
}

}  // namespace

// --------------------------------------------------------------------------
// Global chain

GlobalChainModel global_mm_train(const TrajectoryDataset & ds)
{
  if (ds.trajectories.empty()) {
    throw DataError("global chain needs a non-empty dataset");
  }
  GlobalChainModel m;
  m.counts = build_counts(std::span<const Trajectory>(ds.trajectories));
  m.probs = to_probabilities(m.counts);
  m.network_ref = ds.network_ref;
  return m;
}

PredictionResult GlobalChainPredictor::predict(std::span<const EdgeId> partial, std::size_t steps) const
{
  StepPolicy policy{
    [](std::span<const EdgeId>, bool) { return std::size_t{0}; },
    [&](std::size_t, EdgeId current) { return next_location(model_.probs, current); },
    {},
  };
  return sequential_predict(partial, steps, 1, policy);
}

// --------------------------------------------------------------------------
// NETSCAN

std::vector<Count> segment_densities(const TrajectoryDataset & ds, const RoadNetwork & net)
{
  std::vector<Count> density(net.edge_count(), 0);
  for (const auto & t : ds.trajectories) {
    std::vector<EdgeId> seen(t.segments);
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (EdgeId e : seen) {
      if (e >= density.size()) {
        throw DataError("trajectory " + std::to_string(t.id) + " uses unknown edge " + std::to_string(e));
      }
      ++density[e];
    }
  }
  return density;
}

std::vector<std::vector<EdgeId>> netscan_dense_paths(
  const std::vector<Count> & density, const RoadNetwork & net, const NetscanParams & params)
{
  if (params.density_threshold == 0 || params.similarity_threshold == 0) {
    throw DataError("NETSCAN thresholds must be > 0");
  }
  if (density.size() != net.edge_count()) {
    throw DataError("density vector does not match the network");
  }
  const std::size_t E = density.size();
  bool any = false;
  for (Count c : density) {
    any = any || c >= params.density_threshold;
  }
  if (!any) {
    throw DataError("no segment meets density threshold " + std::to_string(params.density_threshold));
  }

  std::vector<bool> used(E, false);
  auto diff = [](Count a, Count b) { return a > b ? a - b : b - a; };
  // Best unused segment at `node` that continues from `end`.
  auto best_extension = [&](NodeId node, EdgeId end) -> std::optional<EdgeId> {
    std::optional<EdgeId> best;
    for (EdgeId c : net.incident_edges(node)) {
      if (used[c] || density[c] < params.density_threshold) {
        continue;
      }
      if (diff(density[c], density[end]) > params.similarity_threshold) {
        continue;
      }
      if (!best || density[c] > density[*best] || (density[c] == density[*best] && c < *best)) {
        best = c;
      }
    }
    return best;
  };
  auto other_end = [&](EdgeId e, NodeId n) { return net.edge(e).a == n ? net.edge(e).b : net.edge(e).a; };

  std::vector<std::vector<EdgeId>> paths;
  while (true) {
    std::optional<EdgeId> seed;
    for (EdgeId e = 0; e < E; ++e) {
      if (!used[e] && density[e] >= params.density_threshold && (!seed || density[e] > density[*seed])) {
        seed = e;
      }
    }
    if (!seed) {
      break;
    }
    used[*seed] = true;
    std::deque<EdgeId> path{*seed};
    NodeId tail = net.edge(*seed).b;
    NodeId head = net.edge(*seed).a;
    while (auto next = best_extension(tail, path.back())) {
      used[*next] = true;
      path.push_back(*next);
      tail = other_end(*next, tail);
    }
    while (auto prev = best_extension(head, path.front())) {
      used[*prev] = true;
      path.push_front(*prev);
      head = other_end(*prev, head);
    }
    if (path.size() >= params.min_path_segments) {
      paths.emplace_back(path.begin(), path.end());
    }
  }
  return paths;
}

namespace
{

std::vector<std::size_t> edge_to_path(const std::vector<std::vector<EdgeId>> & paths, std::size_t edge_count)
{
  std::vector<std::size_t> out(edge_count, kNoPath);
  for (std::size_t p = 0; p < paths.size(); ++p) {
    for (EdgeId e : paths[p]) {
      if (e < edge_count) {
        out[e] = p;
      }
    }
  }
  return out;
}

}  // namespace

std::size_t netscan_assign(
  std::span<const EdgeId> segments, const std::vector<std::vector<EdgeId>> & paths,
  const std::vector<std::size_t> & path_of_edge, const SegmentDistanceMatrix & d)
{
  if (paths.empty()) {
    throw DataError("NETSCAN model has no dense paths");
  }
  std::vector<std::size_t> shared(paths.size(), 0);
  std::vector<std::size_t> longest_run(paths.size(), 0);
  std::set<EdgeId> seen;
  std::size_t run_path = kNoPath;
  std::size_t run = 0;
  for (EdgeId e : segments) {
    const std::size_t p = e < path_of_edge.size() ? path_of_edge[e] : kNoPath;
    if (p != kNoPath && seen.insert(e).second) {
      ++shared[p];
    }
    run = (p != kNoPath && p == run_path) ? run + 1 : (p == kNoPath ? 0 : 1);
    run_path = p;
    if (p != kNoPath) {
      longest_run[p] = std::max(longest_run[p], run);
    }
  }
  std::size_t best = kNoPath;
  for (std::size_t p = 0; p < paths.size(); ++p) {
    if (shared[p] == 0) {
      continue;
    }
    if (best == kNoPath || shared[p] > shared[best] ||
        (shared[p] == shared[best] && longest_run[p] > longest_run[best])) {
      best = p;
    }
  }
  if (best != kNoPath) {
    return best;
  }
  // Dense paths carry no travel direction, so compare against both orientations.
  double best_distance = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < paths.size(); ++p) {
    const double dist = nd_traj_dtw(segments, paths[p], d);
    if (dist < best_distance) {
      best_distance = dist;
      best = p;
    }
  }
  return best;
}

NetscanModel netscan_train(
  const TrajectoryDataset & ds, const RoadNetwork & net, const SegmentDistanceMatrix & d, const NetscanParams & params)
{
  if (ds.trajectories.empty()) {
    throw DataError("NETSCAN needs a non-empty dataset");
  }
  NetscanModel m;
  m.params = params;
  m.network_ref = ds.network_ref;
  m.dense_paths = netscan_dense_paths(segment_densities(ds, net), net, params);
  if (m.dense_paths.empty()) {
    throw DataError(
      "no dense path reaches " + std::to_string(params.min_path_segments) + " segments at density threshold " +
      std::to_string(params.density_threshold));
  }
  const auto path_of_edge = edge_to_path(m.dense_paths, net.edge_count());
  std::vector<std::size_t> group(ds.size());
  parallel_for(ds.size(), [&](std::size_t i) {
    group[i] = netscan_assign(ds.trajectories[i].segments, m.dense_paths, path_of_edge, d);
  });
  std::vector<std::vector<const Trajectory *>> members(m.dense_paths.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    m.assignment[ds.trajectories[i].id] = group[i];
    members[group[i]].push_back(&ds.trajectories[i]);
  }
  for (const auto & g : members) {
    m.path_counts.push_back(build_counts(std::span<const Trajectory * const>(g)));
    m.path_probs.push_back(to_probabilities(m.path_counts.back()));
  }
  const auto all = pointers(ds);
  m.global_counts = build_counts(std::span<const Trajectory * const>(all));
  m.global_probs = to_probabilities(m.global_counts);
  return m;
}

NetscanParams netscan_search(
  const TrajectoryDataset & ds, const RoadNetwork & net, std::size_t target_paths, std::size_t min_path_segments)
{
  const auto density = segment_densities(ds, net);
  std::vector<Count> levels;
  for (Count c : density) {
    if (c > 0) {
      levels.push_back(c);
    }
  }
  if (levels.empty()) {
    throw DataError("dataset covers no segment");
  }
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  const Count max_density = levels.front();
  std::vector<Count> similarities{max_density, std::max<Count>(1, max_density / 2), std::max<Count>(1, max_density / 4)};
  similarities.erase(std::unique(similarities.begin(), similarities.end()), similarities.end());

  std::optional<NetscanParams> best;
  std::size_t best_gap = std::numeric_limits<std::size_t>::max();
  for (Count level : levels) {
    for (Count sim : similarities) {
      NetscanParams p{level, sim, min_path_segments};
      const std::size_t found = netscan_dense_paths(density, net, p).size();
      if (found == 0) {
        continue;
      }
      const std::size_t gap = found > target_paths ? found - target_paths : target_paths - found;
      if (gap < best_gap) {
        best_gap = gap;
        best = p;
      }
    }
  }
  if (!best) {
    throw DataError("no NETSCAN threshold yields a dense path of " + std::to_string(min_path_segments) + " segments");
  }
  return *best;
}

NetscanPredictor::NetscanPredictor(const NetscanModel & model, const SegmentDistanceMatrix & d, std::size_t lambda_window)
: model_(model), d_(d), lambda_(lambda_window), path_of_edge_(edge_to_path(model.dense_paths, d.size()))
{
}

PredictionResult NetscanPredictor::predict(std::span<const EdgeId> partial, std::size_t steps) const
{
  StepPolicy policy{
    [&](std::span<const EdgeId> window, bool) {
      return netscan_assign(window, model_.dense_paths, path_of_edge_, d_);
    },
    [&](std::size_t p, EdgeId current) { return next_location(model_.path_probs[p], current); },
    [&](EdgeId current) { return next_location(model_.global_probs, current); },
  };
  return sequential_predict(partial, steps, lambda_, policy);
}

// --------------------------------------------------------------------------
// Mixture of Markov chains

double MmmModel::initial_probability(std::size_t c, EdgeId e) const
{
  const auto & comp = components.at(c);
  const double eps = params.epsilon;
  return (eps + comp.initial_counts.at(e)) / (static_cast<double>(edge_count()) * eps + comp.mass);
}

double MmmModel::transition_probability(std::size_t c, EdgeId from, EdgeId to) const
{
  const auto & comp = components.at(c);
  const auto first = adjacency.begin() + static_cast<std::ptrdiff_t>(offsets.at(from));
  const auto last = adjacency.begin() + static_cast<std::ptrdiff_t>(offsets.at(from + 1));
  const auto it = std::lower_bound(first, last, to);
  if (it == last || *it != to) {
    return 0.0;
  }
  const double eps = params.epsilon;
  const auto deg = static_cast<double>(last - first);
  return (eps + comp.transition_counts[static_cast<std::size_t>(it - adjacency.begin())]) /
         (deg * eps + comp.outgoing[from]);
}

namespace
{

// Index of (from, to) in the compressed adjacency, or npos.
std::size_t transition_slot(const MmmModel & m, EdgeId from, EdgeId to)
{
  const auto first = m.adjacency.begin() + static_cast<std::ptrdiff_t>(m.offsets[from]);
  const auto last = m.adjacency.begin() + static_cast<std::ptrdiff_t>(m.offsets[from + 1]);
  const auto it = std::lower_bound(first, last, to);
  if (it == last || *it != to) {
    return kNoPath;
  }
  return static_cast<std::size_t>(it - m.adjacency.begin());
}

double log_sum_exp(const std::vector<double> & v)
{
  const double hi = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(hi)) {
    return hi;
  }
  double s = 0.0;
  for (double x : v) {
    s += std::exp(x - hi);
  }
  return hi + std::log(s);
}

struct Encoded
{
  EdgeId origin = 0;
  std::vector<std::size_t> slots;  // transition slots along the trajectory
};

// Re-estimates every component from responsibilities (rows of `resp`).
void m_step(MmmModel & m, const std::vector<Encoded> & data, const std::vector<std::vector<double>> & resp)
{
  const std::size_t C = m.components.size();
  const std::size_t E = m.edge_count();
  const double eps = m.params.epsilon;
  double total = 0.0;
  for (std::size_t c = 0; c < C; ++c) {
    auto & comp = m.components[c];
    comp.mass = 0.0;
    comp.initial_counts.assign(E, 0.0);
    comp.transition_counts.assign(m.adjacency.size(), 0.0);
    comp.outgoing.assign(E, 0.0);
    for (std::size_t n = 0; n < data.size(); ++n) {
      const double r = resp[n][c];
      comp.mass += r;
      comp.initial_counts[data[n].origin] += r;
      for (std::size_t s : data[n].slots) {
        comp.transition_counts[s] += r;
      }
    }
    for (EdgeId e = 0; e < E; ++e) {
      double out = 0.0;
      for (std::size_t s = m.offsets[e]; s < m.offsets[e + 1]; ++s) {
        out += comp.transition_counts[s];
      }
      comp.outgoing[e] = out;
    }
    total += comp.mass;
  }
  for (auto & comp : m.components) {
    comp.weight = (eps + comp.mass) / (static_cast<double>(C) * eps + total);
  }
}

// Per-component log tables for fast likelihood evaluation.
struct LogTables
{
  std::vector<double> log_weight;
  std::vector<std::vector<double>> log_initial;
  std::vector<std::vector<double>> log_transition;
};

LogTables log_tables(const MmmModel & m)
{
  LogTables t;
  const std::size_t E = m.edge_count();
  for (std::size_t c = 0; c < m.components.size(); ++c) {
    t.log_weight.push_back(std::log(m.components[c].weight));
    std::vector<double> li(E);
    for (EdgeId e = 0; e < E; ++e) {
      li[e] = std::log(m.initial_probability(c, e));
    }
    std::vector<double> lt(m.adjacency.size());
    for (EdgeId e = 0; e < E; ++e) {
      for (std::size_t s = m.offsets[e]; s < m.offsets[e + 1]; ++s) {
        lt[s] = std::log(m.transition_probability(c, e, m.adjacency[s]));
      }
    }
    t.log_initial.push_back(std::move(li));
    t.log_transition.push_back(std::move(lt));
  }
  return t;
}

// E-step: fills responsibilities and returns the penalized objective.
double e_step(const MmmModel & m, const std::vector<Encoded> & data, std::vector<std::vector<double>> & resp)
{
  const std::size_t C = m.components.size();
  const LogTables t = log_tables(m);
  std::vector<double> row_ll(data.size());
  parallel_for(data.size(), [&](std::size_t n) {
    std::vector<double> lp(C);
    for (std::size_t c = 0; c < C; ++c) {
      double v = t.log_weight[c] + t.log_initial[c][data[n].origin];
      for (std::size_t s : data[n].slots) {
        v += t.log_transition[c][s];
      }
      lp[c] = v;
    }
    const double z = log_sum_exp(lp);
    row_ll[n] = z;
    for (std::size_t c = 0; c < C; ++c) {
      resp[n][c] = std::exp(lp[c] - z);
    }
  });
  double objective = 0.0;
  for (double v : row_ll) {
    objective += v;
  }
  // Dirichlet(1 + eps) prior on weights, initial distributions and rows.
  const double eps = m.params.epsilon;
  for (std::size_t c = 0; c < C; ++c) {
    double prior = t.log_weight[c];
    for (double v : t.log_initial[c]) {
      prior += v;
    }
    for (double v : t.log_transition[c]) {
      prior += v;
    }
    objective += eps * prior;
  }
  return objective;
}

double jaccard_distance(const std::vector<EdgeId> & a, const std::vector<EdgeId> & b)
{
  std::size_t inter = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++inter;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  const std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : 1.0 - static_cast<double>(inter) / static_cast<double>(uni);
}

// Farthest-first seeds on edge-set Jaccard distance, then hard assignment.
std::vector<std::vector<double>> initial_responsibilities(const TrajectoryDataset & ds, std::size_t C, std::uint64_t seed)
{
  const std::size_t N = ds.size();
  std::vector<std::vector<EdgeId>> sets(N);
  for (std::size_t n = 0; n < N; ++n) {
    sets[n] = ds.trajectories[n].segments;
    std::sort(sets[n].begin(), sets[n].end());
    sets[n].erase(std::unique(sets[n].begin(), sets[n].end()), sets[n].end());
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> seeds{static_cast<std::size_t>(rng() % N)};
  std::vector<double> nearest(N, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> owner(N, 0);
  for (std::size_t c = 0;; ++c) {
    const auto & s = sets[seeds[c]];
    for (std::size_t n = 0; n < N; ++n) {
      const double dist = jaccard_distance(sets[n], s);
      if (dist < nearest[n]) {
        nearest[n] = dist;
        owner[n] = c;
      }
    }
    if (seeds.size() == C) {
      break;
    }
    std::size_t far = 0;
    double far_d = -1.0;
    for (std::size_t n = 0; n < N; ++n) {
      if (nearest[n] > far_d && std::find(seeds.begin(), seeds.end(), n) == seeds.end()) {
        far_d = nearest[n];
        far = n;
      }
    }
    seeds.push_back(far);
  }
  for (std::size_t c = 0; c < C; ++c) {
    owner[seeds[c]] = c;
  }
  std::vector<std::vector<double>> resp(N, std::vector<double>(C, 0.0));
  for (std::size_t n = 0; n < N; ++n) {
    resp[n][owner[n]] = 1.0;
  }
  return resp;
}

MmmModel empty_model(const RoadNetwork & net, const MmmParams & params)
{
  MmmModel m;
  m.params = params;
  m.offsets.reserve(net.edge_count() + 1);
  m.offsets.push_back(0);
  for (EdgeId e = 0; e < net.edge_count(); ++e) {
    const auto adj = net.adjacent_segments(e);
    m.adjacency.insert(m.adjacency.end(), adj.begin(), adj.end());
    m.offsets.push_back(m.adjacency.size());
  }
  m.components.resize(params.components);
  m.network_ref = net.fingerprint();
  return m;
}

std::vector<Encoded> encode(const MmmModel & m, const TrajectoryDataset & ds)
{
  std::vector<Encoded> data(ds.size());
  for (std::size_t n = 0; n < ds.size(); ++n) {
    const auto & seg = ds.trajectories[n].segments;
    if (seg.empty()) {
      throw DataError("trajectory " + std::to_string(ds.trajectories[n].id) + " is empty");
    }
    for (EdgeId e : seg) {
      if (e >= m.edge_count()) {
        throw DataError("trajectory " + std::to_string(ds.trajectories[n].id) + " uses unknown edge " + std::to_string(e));
      }
    }
    data[n].origin = seg.front();
    for (std::size_t i = 1; i < seg.size(); ++i) {
      const std::size_t s = transition_slot(m, seg[i - 1], seg[i]);
      if (s == kNoPath) {
        throw DataError("trajectory " + std::to_string(ds.trajectories[n].id) + " has a non-adjacent transition");
      }
      data[n].slots.push_back(s);
    }
  }
  return data;
}

}  // namespace

MmmModel mmm_train(const TrajectoryDataset & ds, const RoadNetwork & net, const MmmParams & params)
{
  if (params.components == 0) {
    throw DataError("MMM needs at least one component");
  }
  if (ds.trajectories.empty()) {
    throw DataError("MMM needs a non-empty dataset");
  }
  if (params.components > ds.size()) {
    throw DataError(
      "MMM components (" + std::to_string(params.components) + ") exceed trajectories (" + std::to_string(ds.size()) +
      ")");
  }
  if (!(params.epsilon > 0.0)) {
    throw DataError("MMM smoothing epsilon must be > 0");
  }
  MmmModel m = empty_model(net, params);
  const auto data = encode(m, ds);
  auto resp = initial_responsibilities(ds, params.components, params.seed);
  m_step(m, data, resp);
  const std::size_t iters = std::max<std::size_t>(1, params.max_iters);
  for (std::size_t it = 0; it < iters; ++it) {
    const double objective = e_step(m, data, resp);
    m.objective_trace.push_back(objective);
    if (it > 0 && objective - m.objective_trace[it - 1] < params.tol) {
      break;
    }
    if (it + 1 == iters) {
      break;
    }
    m_step(m, data, resp);
  }
  m.responsibilities = std::move(resp);
  return m;
}

double mmm_log_likelihood(const MmmModel & m, std::size_t c, std::span<const EdgeId> segments, bool with_initial)
{
  if (segments.empty()) {
    throw DataError("likelihood of an empty trajectory");
  }
  double v = 0.0;
  if (with_initial) {
    v += std::log(m.initial_probability(c, segments.front()));
  }
  for (std::size_t i = 1; i < segments.size(); ++i) {
    v += std::log(m.transition_probability(c, segments[i - 1], segments[i]));
  }
  return v;
}

std::vector<double> mmm_posterior(const MmmModel & m, std::span<const EdgeId> segments, bool with_initial)
{
  for (EdgeId e : segments) {
    if (e >= m.edge_count()) {
      throw DataError("trajectory uses unknown edge " + std::to_string(e));
    }
  }
  const std::size_t C = m.components.size();
  std::vector<double> lp(C);
  for (std::size_t c = 0; c < C; ++c) {
    lp[c] = std::log(m.components[c].weight) + mmm_log_likelihood(m, c, segments, with_initial);
  }
  const double z = log_sum_exp(lp);
  std::vector<double> post(C);
  for (std::size_t c = 0; c < C; ++c) {
    // A query the model cannot explain at all gets the prior weights.
    post[c] = std::isfinite(z) ? std::exp(lp[c] - z) : m.components[c].weight;
  }
  return post;
}

std::optional<EdgeId> mmm_next(const MmmModel & m, std::size_t c, EdgeId current)
{
  std::optional<EdgeId> best;
  double best_p = 0.0;
  for (std::size_t s = m.offsets.at(current); s < m.offsets.at(current + 1); ++s) {
    const double p = m.transition_probability(c, current, m.adjacency[s]);
    if (p > best_p) {
      best_p = p;
      best = m.adjacency[s];
    }
  }
  return best;
}

std::vector<MmmCvResult> mmm_cross_validate(
  const TrajectoryDataset & ds, const RoadNetwork & net, const std::vector<std::size_t> & candidates,
  std::size_t folds, MmmParams base)
{
  if (folds < 2 || folds > ds.size()) {
    throw DataError("cross-validation needs 2 <= folds <= trajectories");
  }
  std::vector<std::size_t> order(ds.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(base.seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<MmmCvResult> out;
  for (std::size_t comps : candidates) {
    base.components = comps;
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t f = 0; f < folds; ++f) {
      TrajectoryDataset train_set;
      std::vector<const Trajectory *> held;
      train_set.network_ref = ds.network_ref;
      for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const auto & t = ds.trajectories[order[pos]];
        if (pos % folds == f) {
          held.push_back(&t);
        } else {
          train_set.trajectories.push_back(t);
        }
      }
      const MmmModel m = mmm_train(train_set, net, base);
      for (const Trajectory * t : held) {
        std::vector<double> lp(m.components.size());
        for (std::size_t c = 0; c < lp.size(); ++c) {
          lp[c] = std::log(m.components[c].weight) + mmm_log_likelihood(m, c, t->segments, true);
        }
        total += log_sum_exp(lp);
        ++count;
      }
    }
    out.push_back({comps, total / static_cast<double>(count)});
  }
  return out;
}

PredictionResult MmmPredictor::predict(std::span<const EdgeId> partial, std::size_t steps) const
{
  StepPolicy policy{
    [&](std::span<const EdgeId> window, bool whole) {
      const auto post = mmm_posterior(model_, window, whole);
      std::size_t best = 0;
      for (std::size_t c = 1; c < post.size(); ++c) {
        if (post[c] > post[best]) {
          best = c;
        }
      }
      return best;
    },
    [&](std::size_t c, EdgeId current) { return mmm_next(model_, c, current); },
    {},
  };
  return sequential_predict(partial, steps, lambda_, policy);
}

}  // namespace tcv
