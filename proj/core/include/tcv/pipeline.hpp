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

#ifndef TCV_PIPELINE_HPP_
#define TCV_PIPELINE_HPP_

#include "tcv/cluster_model.hpp"
#include "tcv/markov.hpp"
#include "tcv/mmrs.hpp"
#include "tcv/road_network.hpp"
#include "tcv/trajectory.hpp"
#include "tcv/vat.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tcv
{

enum class CutMode
{
  kAlpha,  // MST edges above alpha * mean magnitude
  kK,      // the k-1 longest MST edges (stage 1 only)
};

struct PipelineConfig
{
  std::size_t k_prime = 150;
  std::size_t n = 500;
  double alpha_stage1 = 0.05;
  std::optional<double> alpha_stage2;  // defaults to alpha_stage1
  double min_t = 0.3;
  std::uint64_t seed = 1;
  std::size_t min_len = 5;
  std::size_t max_len = 200;
  std::size_t lambda_window = 3;  // kUnbounded = whole history
  CutMode cut_mode = CutMode::kAlpha;
  std::size_t k = 0;  // only read when cut_mode == kK

  double stage2_alpha() const { return alpha_stage2.value_or(alpha_stage1); }
  /// Throws DataError naming the first violated constraint.
  void validate() const;

  bool operator==(const PipelineConfig &) const = default;
};

/// Flat JSON object with the field names above. Unknown keys are rejected.
std::string config_to_json(const PipelineConfig & cfg);
PipelineConfig config_from_json(const std::string & text, PipelineConfig base = {});

struct TrainedModel
{
  std::vector<ClusterModel> clusters;  // K directional clusters, ids 0..K-1
  std::size_t k_nondirectional = 0;
  TransitionCounts global_counts;
  TransitionMatrix global_probs;
  PipelineConfig config;
  std::string network_ref;

  std::size_t K() const { return clusters.size(); }
  bool operator==(const TrainedModel &) const = default;
};

struct TrainDiagnostics
{
  MMRSSample sample;
  VATResult stage1_vat;
  DistanceMatrix stage1_ivat;
  std::vector<std::size_t> stage1_labels;  // per sample position
  std::size_t assigned_by_probability = 0;
  std::size_t assigned_by_rt_distance = 0;
};

struct TrainResult
{
  TrainedModel model;
  TrainDiagnostics diagnostics;
};

/// Training steps (i)-(vii): MMRS sample, non-directional iVAT clustering,
/// per-cluster directional split, sample-level cluster models, hybrid NPR of
/// the remaining trajectories, then counts, RTs and chains rebuilt from the
/// full membership.
TrainResult train(
  const TrajectoryDataset & ds, const RoadNetwork & net, const SegmentDistanceMatrix & d, const PipelineConfig & cfg);

/// Steps (ii)-(vii) on a given sample (indices into ds.trajectories).
TrainResult train_from_sample(
  const TrajectoryDataset & ds, const RoadNetwork & net, const SegmentDistanceMatrix & d, const PipelineConfig & cfg,
  MMRSSample sample);

/// Directional split of one non-directional cluster (stage iii). Returns
/// sub-labels per member, numbered from 0.
std::vector<std::size_t> directional_split(
  std::span<const Trajectory * const> members, const SegmentDistanceMatrix & d, double alpha);

/// Cluster label of every training trajectory, aligned with ds.trajectories.
std::vector<std::size_t> membership_labels(const TrainedModel & m, const TrajectoryDataset & ds);

void save_model(const TrainedModel & m, const std::filesystem::path & path);
TrainedModel load_model(const std::filesystem::path & path);
std::string serialize_model(const TrainedModel & m);
TrainedModel deserialize_model(const std::string & bytes);

}  // namespace tcv

#endif  // TCV_PIPELINE_HPP_
