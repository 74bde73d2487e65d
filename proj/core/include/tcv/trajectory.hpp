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

#ifndef TCV_TRAJECTORY_HPP_
#define TCV_TRAJECTORY_HPP_

#include "tcv/common.hpp"
#include "tcv/road_network.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace tcv
{

/// Map-matched trajectory: an ordered, connected sequence of road segments.
struct Trajectory
{
  TrajectoryId id = 0;
  std::vector<EdgeId> segments;

  std::size_t size() const { return segments.size(); }
  bool operator==(const Trajectory &) const = default;
};

struct TrajectoryDataset
{
  std::vector<Trajectory> trajectories;
  std::string network_ref;

  std::size_t size() const { return trajectories.size(); }
};

struct Rejection
{
  std::size_t line_no = 0;
  std::string id;  // raw id text; empty when the line did not parse
  std::string reason;
};

struct IngestResult
{
  TrajectoryDataset dataset;
  std::vector<Rejection> rejections;
};

struct IngestOptions
{
  std::size_t min_len = 5;
  std::size_t max_len = 200;
};

/// Reads JSON Lines {"id": int, "edges": [int, ...]}. Lines that fail parsing,
/// reference unknown edges, break connectivity or violate the length bounds
/// are rejected individually; only an unreadable file throws.
IngestResult ingest(const std::filesystem::path & path, const RoadNetwork & net, IngestOptions opts = {});
IngestResult ingest_lines(std::istream & in, const RoadNetwork & net, IngestOptions opts = {});

void write_rejections_csv(const std::vector<Rejection> & rejections, const std::filesystem::path & path);
void write_trajectories_jsonl(const std::vector<Trajectory> & trajs, const std::filesystem::path & path);

/// Every consecutive pair shares a node and every id is a known edge.
bool is_connected_on(const Trajectory & t, const RoadNetwork & net);

/// True iff `candidate` occurs as a contiguous run inside `t`.
bool is_subtrajectory(const Trajectory & candidate, const Trajectory & t);

struct SourceSegment
{
  EdgeId segment = 0;
  NodeId node = 0;
};

/// R_1 and the endpoint of R_1 that R_2 does not touch. Requires l >= 2.
SourceSegment source_segment(const Trajectory & t, const RoadNetwork & net);

Trajectory reverse(const Trajectory & t);

/// First ceil(l/2) segments as the query, the rest as ground truth.
std::pair<Trajectory, Trajectory> split_query_truth(const Trajectory & t);

/// Seeded shuffle, then the first round-half-up(N * fraction) go to train.
std::pair<TrajectoryDataset, TrajectoryDataset> split_train_test(
  const TrajectoryDataset & ds, double fraction, std::uint64_t seed);

}  // namespace tcv

#endif  // TCV_TRAJECTORY_HPP_
