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

#ifndef TCV_CLUSTER_MODEL_HPP_
#define TCV_CLUSTER_MODEL_HPP_

#include "tcv/markov.hpp"
#include "tcv/road_network.hpp"
#include "tcv/trajectory.hpp"

#include <set>
#include <span>
#include <vector>

namespace tcv
{

struct RepresentativeTrajectory
{
  std::vector<EdgeId> segments;
  Count count_score = 0;
  EdgeId origin_fss = 0;

  bool operator==(const RepresentativeTrajectory &) const = default;
};

struct ClusterModel
{
  std::size_t cluster_id = 0;
  std::vector<TrajectoryId> members;
  TransitionCounts counts;  // W
  TransitionMatrix probs;   // M
  std::set<EdgeId> frs;
  std::set<EdgeId> fss;
  RepresentativeTrajectory rt;

  bool operator==(const ClusterModel &) const = default;
};

/// Segments traversed by at least min_t * N_j member trajectories.
std::set<EdgeId> compute_frs(const TransitionCounts & w, double min_t);
std::set<EdgeId> compute_frs(std::span<const Trajectory> members, double min_t);

/// Frequent segments at which at least min_t * N_j members start.
std::set<EdgeId> compute_fss(const TransitionCounts & w, const std::set<EdgeId> & frs, double min_t);
std::set<EdgeId> compute_fss(std::span<const Trajectory> members, double min_t);

/// Greedy imaginary trajectories grown from each FSS along the largest
/// transition count, restricted to FRS and never revisiting a segment. The
/// one with the highest count score wins (then longer, then lower FSS id).
/// With no FSS, growth starts from the most common source segment.
RepresentativeTrajectory representative_trajectory(
  const TransitionCounts & w, const std::set<EdgeId> & frs, const std::set<EdgeId> & fss);

/// Builds W, M, FRS, FSS and RT for one cluster.
ClusterModel build_cluster_model(
  std::size_t cluster_id, std::span<const Trajectory * const> members, double min_t);

/// Rebuilds M, FRS, FSS and RT from stored counts (model loading).
void derive_cluster_artifacts(ClusterModel & c, double min_t);

struct NprDecision
{
  std::size_t cluster_index = 0;  // position in the cluster list
  bool by_probability = false;
  double score = 0.0;  // path probability or trajDTW to the RT
};

/// Highest path probability when any cluster explains the query, otherwise
/// the cluster whose RT is nearest by trajDTW. Ties go to the lowest index.
NprDecision hybrid_npr_assign(
  std::span<const EdgeId> query, std::span<const ClusterModel> clusters, const SegmentDistanceMatrix & d);
NprDecision hybrid_npr_assign(
  const Trajectory & query, std::span<const ClusterModel> clusters, const SegmentDistanceMatrix & d);

}  // namespace tcv

#endif  // TCV_CLUSTER_MODEL_HPP_
