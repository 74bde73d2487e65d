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

#include "tcv/pipeline.hpp"

#include "tcv/parallel.hpp"
#include "tcv/traj_distance.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

namespace tcv
{

namespace
{

template <typename F>
auto run_stage(const char * stage, F && body) -> decltype(body())
{
  try {
    return body();
  } catch (const DataError & ex) {
    throw DataError(std::string("stage ") + stage + ": " + ex.what());
  }
}

}  // namespace

void PipelineConfig::validate() const
{
  if (k_prime == 0) {
    throw DataError("config: k_prime must be positive");
  }
  if (n < k_prime) {
    throw DataError("config: n must be >= k_prime");
  }
  if (n < 2) {
    throw DataError("config: sample size n must be at least 2");
  }
  if (!(min_t > 0.0 && min_t <= 1.0)) {
    throw DataError("config: min_t must lie in (0, 1]");
  }
  if (!(alpha_stage1 > 0.0) || !(stage2_alpha() > 0.0)) {
    throw DataError("config: alpha values must be positive");
  }
  if (min_len > max_len) {
    throw DataError("config: min_len must not exceed max_len");
  }
  if (lambda_window == 0) {
    throw DataError("config: lambda_window must be >= 1");
  }
  if (cut_mode == CutMode::kK && (k == 0 || k > n)) {
    throw DataError("config: cut_mode k needs 1 <= k <= n");
  }
}

std::vector<std::size_t> directional_split(
  std::span<const Trajectory * const> members, const SegmentDistanceMatrix & d, double alpha)
{
  const std::size_t size = members.size();
  if (size <= 1) {
    return std::vector<std::size_t>(size, 0);
  }
  if (size == 2) {
    // A two-object MST cut is degenerate under the alpha rule; split a pair only
    // when aligning against the reversal is strictly better.
    const double directional = traj_dtw(*members[0], *members[1], d);
    const double non_directional = nd_traj_dtw(*members[0], *members[1], d);
    return {0, directional > non_directional ? std::size_t{1} : std::size_t{0}};
  }
  const auto matrix = pairwise_matrix(members, d, DistanceMode::kDirectional);
  return cut_alpha(vat(matrix), alpha);
}

TrainResult train(
  const TrajectoryDataset & ds, const RoadNetwork & net, const SegmentDistanceMatrix & d, const PipelineConfig & cfg)
{
  cfg.validate();
  if (ds.size() < cfg.n) {
    throw DataError(
      "dataset has " + std::to_string(ds.size()) + " trajectories, fewer than the sample size n = " +
      std::to_string(cfg.n));
  }
  auto sample = run_stage("(i) MMRS", [&] {
    return mmrs_sample(std::span<const Trajectory>(ds.trajectories), cfg.k_prime, cfg.n, d, cfg.seed);
  });
  return train_from_sample(ds, net, d, cfg, std::move(sample));
}

TrainResult train_from_sample(
  const TrajectoryDataset & ds, const RoadNetwork & net, const SegmentDistanceMatrix & d, const PipelineConfig & cfg,
  MMRSSample sample)
{
  cfg.validate();
  if (!ds.network_ref.empty() && ds.network_ref != net.fingerprint()) {
    throw DataError("dataset was ingested against a different road network");
  }
  if (d.size() != net.edge_count()) {
    throw DataError("segment distance matrix does not match the network size");
  }
  std::sort(sample.sample.begin(), sample.sample.end());
  sample.sample.erase(std::unique(sample.sample.begin(), sample.sample.end()), sample.sample.end());
  if (sample.sample.size() < 2) {
    throw DataError("sample must contain at least two trajectories");
  }
  for (std::size_t idx : sample.sample) {
    if (idx >= ds.size()) {
      throw DataError("sample index out of range");
    }
  }

  TrainResult result;
  TrainDiagnostics & diag = result.diagnostics;
  std::vector<const Trajectory *> sampled;
  for (std::size_t idx : sample.sample) {
    sampled.push_back(&ds.trajectories[idx]);
  }

  // (ii) non-directional clusters of the sample.
  run_stage("(ii) iVAT", [&] {
    const auto dn = pairwise_matrix(std::span<const Trajectory * const>(sampled), d, DistanceMode::kNonDirectional);
    diag.stage1_vat = vat(dn);
    diag.stage1_ivat = ivat(diag.stage1_vat);
    diag.stage1_labels = cfg.cut_mode == CutMode::kK ? cut_k(diag.stage1_vat, cfg.k)
                                                     : cut_alpha(diag.stage1_vat, cfg.alpha_stage1);
  });
  const std::size_t k = cluster_count(diag.stage1_labels);

  // (iii) directional split inside each non-directional cluster.
  std::vector<std::vector<std::size_t>> groups(k);  // sample positions
  for (std::size_t p = 0; p < sampled.size(); ++p) {
    groups[diag.stage1_labels[p]].push_back(p);
  }
  std::vector<std::vector<std::size_t>> sub_labels(k);
  run_stage("(iii) directional split", [&] {
    parallel_for(k, [&](std::size_t g) {
      std::vector<const Trajectory *> members;
      for (std::size_t p : groups[g]) {
        members.push_back(sampled[p]);
      }
      sub_labels[g] = directional_split(members, d, cfg.stage2_alpha());
    });
  });
  std::vector<std::vector<const Trajectory *>> sample_clusters;
  for (std::size_t g = 0; g < k; ++g) {
    const std::size_t parts = cluster_count(sub_labels[g]);
    const std::size_t base = sample_clusters.size();
    sample_clusters.resize(base + parts);
    for (std::size_t m = 0; m < groups[g].size(); ++m) {
      sample_clusters[base + sub_labels[g][m]].push_back(sampled[groups[g][m]]);
    }
  }
  const std::size_t K = sample_clusters.size();

  // (iv) sample-level W, M, FRS, FSS and RT.
  std::vector<ClusterModel> sample_models(K);
  run_stage("(iv) representative trajectories", [&] {
    parallel_for(K, [&](std::size_t c) { sample_models[c] = build_cluster_model(c, sample_clusters[c], cfg.min_t); });
  });

  // (v) hybrid NPR of every non-sampled trajectory; cluster statistics stay
  // frozen during this step, so assignments are order independent.
  std::vector<std::size_t> cluster_of(ds.size(), K);
  for (std::size_t c = 0; c < K; ++c) {
    for (const Trajectory * t : sample_clusters[c]) {
      cluster_of[static_cast<std::size_t>(t - ds.trajectories.data())] = c;
    }
  }
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (cluster_of[i] == K) {
      rest.push_back(i);
    }
  }
  std::vector<char> by_probability(rest.size(), 0);
  run_stage("(v) hybrid NPR", [&] {
    parallel_for(rest.size(), [&](std::size_t r) {
      const auto decision =
        hybrid_npr_assign(ds.trajectories[rest[r]], std::span<const ClusterModel>(sample_models), d);
      cluster_of[rest[r]] = decision.cluster_index;
      by_probability[r] = decision.by_probability ? 1 : 0;
    });
  });
  diag.assigned_by_probability = static_cast<std::size_t>(std::count(by_probability.begin(), by_probability.end(), 1));
  diag.assigned_by_rt_distance = rest.size() - diag.assigned_by_probability;

  // (vi)-(vii) rebuild everything from full membership.
  std::vector<std::vector<const Trajectory *>> full(K);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    full[cluster_of[i]].push_back(&ds.trajectories[i]);
  }
  TrainedModel & model = result.model;
  model.clusters.resize(K);
  run_stage("(vi) cluster rebuild", [&] {
    parallel_for(K, [&](std::size_t c) { model.clusters[c] = build_cluster_model(c, full[c], cfg.min_t); });
  });
  model.global_counts = build_counts(std::span<const Trajectory>(ds.trajectories));
  model.global_probs = to_probabilities(model.global_counts);
  model.k_nondirectional = k;
  model.config = cfg;
  model.network_ref = net.fingerprint();
  diag.sample = std::move(sample);
  return result;
}

std::vector<std::size_t> membership_labels(const TrainedModel & m, const TrajectoryDataset & ds)
{
  std::unordered_map<TrajectoryId, std::size_t> cluster_of;
  for (const auto & c : m.clusters) {
    for (TrajectoryId id : c.members) {
      cluster_of[id] = c.cluster_id;
    }
  }
  std::vector<std::size_t> labels;
  labels.reserve(ds.size());
  for (const auto & t : ds.trajectories) {
    const auto it = cluster_of.find(t.id);
    if (it == cluster_of.end()) {
      throw DataError("trajectory " + std::to_string(t.id) + " is not a member of any cluster");
    }
    labels.push_back(it->second);
  }
  return labels;
}

}  // namespace tcv
