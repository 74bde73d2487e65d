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

#ifndef TCV_BASELINES_HPP_
#define TCV_BASELINES_HPP_

#include "tcv/markov.hpp"
#include "tcv/predictor.hpp"
#include "tcv/road_network.hpp"
#include "tcv/trajectory.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tcv
{

// ---------------------------------------------------------------------------
// Plain first-order chain over every training trajectory.

struct GlobalChainModel
{
  TransitionCounts counts;
  TransitionMatrix probs;
  std::string network_ref;

  bool operator==(const GlobalChainModel &) const = default;
};

GlobalChainModel global_mm_train(const TrajectoryDataset & ds);

class GlobalChainPredictor : public RoutePredictor
{
public:
  explicit GlobalChainPredictor(const GlobalChainModel & model) : model_(model) {}
  std::string method() const override { return "global-mm"; }
  PredictionResult predict(std::span<const EdgeId> partial, std::size_t steps) const override;

private:
  const GlobalChainModel & model_;
};

// ---------------------------------------------------------------------------
// NETSCAN: dense paths grown from high-density segments.

struct NetscanParams
{
  Count density_threshold = 1;
  Count similarity_threshold = 1;
  std::size_t min_path_segments = 6;

  bool operator==(const NetscanParams &) const = default;
};

struct NetscanModel
{
  NetscanParams params;
  std::vector<std::vector<EdgeId>> dense_paths;
  std::map<TrajectoryId, std::size_t> assignment;
  std::vector<TransitionCounts> path_counts;
  std::vector<TransitionMatrix> path_probs;
  TransitionCounts global_counts;
  TransitionMatrix global_probs;
  std::string network_ref;

  bool operator==(const NetscanModel &) const = default;
};

/// Segment density = number of trajectories passing the segment.
std::vector<Count> segment_densities(const TrajectoryDataset & ds, const RoadNetwork & net);

/// Greedy dense-path construction: seed at the densest unused segment at or
/// above the density threshold, extend each free end to the densest unused
/// neighbour whose density stays within the similarity threshold of the end
/// segment, and drop paths shorter than min_path_segments. Segments are
/// consumed on use, so paths never share one.
std::vector<std::vector<EdgeId>> netscan_dense_paths(
  const std::vector<Count> & density, const RoadNetwork & net, const NetscanParams & params);

/// Path sharing the most distinct segments (then the longest contiguous
/// overlap, then the lower id); with no overlap, the nearest path by trajDTW.
std::size_t netscan_assign(
  std::span<const EdgeId> segments, const std::vector<std::vector<EdgeId>> & paths,
  const std::vector<std::size_t> & path_of_edge, const SegmentDistanceMatrix & d);

NetscanModel netscan_train(
  const TrajectoryDataset & ds, const RoadNetwork & net, const SegmentDistanceMatrix & d, const NetscanParams & params);

/// Scans density thresholds (and a few similarity thresholds) for the
/// parameters whose dense-path count is closest to `target_paths`.
NetscanParams netscan_search(
  const TrajectoryDataset & ds, const RoadNetwork & net, std::size_t target_paths, std::size_t min_path_segments = 6);

class NetscanPredictor : public RoutePredictor
{
public:
  NetscanPredictor(const NetscanModel & model, const SegmentDistanceMatrix & d, std::size_t lambda_window);
  std::string method() const override { return "netscan"; }
  PredictionResult predict(std::span<const EdgeId> partial, std::size_t steps) const override;

private:
  const NetscanModel & model_;
  const SegmentDistanceMatrix & d_;
  std::size_t lambda_;
  std::vector<std::size_t> path_of_edge_;
};

// ---------------------------------------------------------------------------
// Mixture of first-order Markov chains fit by EM.

struct MmmParams
{
  std::size_t components = 2;
  std::uint64_t seed = 1;
  std::size_t max_iters = 200;
  double tol = 1e-6;
  double epsilon = 1e-6;  // add-epsilon smoothing (Dirichlet 1 + epsilon)

  bool operator==(const MmmParams &) const = default;
};

struct MmmComponent
{
  double weight = 0.0;
  double mass = 0.0;                     // sum of responsibilities
  std::vector<double> initial_counts;    // expected origin counts, per edge
  std::vector<double> transition_counts; // expected counts, indexed like MmmModel::adjacency
  std::vector<double> outgoing;          // expected transitions leaving each edge

  bool operator==(const MmmComponent &) const = default;
};

struct MmmModel
{
  MmmParams params;
  std::vector<MmmComponent> components;
  // Compressed segment adjacency: successors of e are
  // adjacency[offsets[e] .. offsets[e + 1]), ascending.
  std::vector<std::size_t> offsets;
  std::vector<EdgeId> adjacency;
  std::vector<std::vector<double>> responsibilities;  // per training trajectory
  std::vector<double> objective_trace;                // penalized log-likelihood per iteration
  std::string network_ref;

  std::size_t edge_count() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  double initial_probability(std::size_t c, EdgeId e) const;
  /// Zero when `to` is not adjacent to `from`.
  double transition_probability(std::size_t c, EdgeId from, EdgeId to) const;

  bool operator==(const MmmModel &) const = default;
};

/// EM with a log-domain E-step. The tracked objective is the log-likelihood
/// plus the smoothing prior, which EM never decreases.
MmmModel mmm_train(const TrajectoryDataset & ds, const RoadNetwork & net, const MmmParams & params);

/// Log p(T | component c), optionally without the initial-segment factor.
double mmm_log_likelihood(const MmmModel & m, std::size_t c, std::span<const EdgeId> segments, bool with_initial);

/// Posterior over components for a trajectory.
std::vector<double> mmm_posterior(const MmmModel & m, std::span<const EdgeId> segments, bool with_initial);

/// Most likely successor of `current` under component c (lowest id on ties).
std::optional<EdgeId> mmm_next(const MmmModel & m, std::size_t c, EdgeId current);

struct MmmCvResult
{
  std::size_t components = 0;
  double mean_heldout_log_likelihood = 0.0;
};

/// k-fold cross-validation over candidate component counts.
std::vector<MmmCvResult> mmm_cross_validate(
  const TrajectoryDataset & ds, const RoadNetwork & net, const std::vector<std::size_t> & candidates,
  std::size_t folds, MmmParams base);

class MmmPredictor : public RoutePredictor
{
public:
  MmmPredictor(const MmmModel & model, std::size_t lambda_window) : model_(model), lambda_(lambda_window)
  {
  }
  std::string method() const override { return "mmm"; }
  PredictionResult predict(std::span<const EdgeId> partial, std::size_t steps) const override;

private:
  const MmmModel & model_;
  std::size_t lambda_;
};

}  // namespace tcv

#endif  // TCV_BASELINES_HPP_
