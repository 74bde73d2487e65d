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

#ifndef TCV_SYNTHGEN_HPP_
#define TCV_SYNTHGEN_HPP_

#include "tcv/road_network.hpp"
#include "tcv/trajectory.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace tcv
{

/// rows x cols lattice; node r*cols+c sits at (r*spacing, c*spacing). Edge ids
/// follow nodes in row-major order, each node contributing its rightward then
/// its downward edge.
RoadNetwork make_grid_network(std::size_t rows, std::size_t cols, double spacing_deg);

/// Node path through straight-line waypoints given as (row, col).
std::vector<NodeId> expand_waypoints(std::size_t cols, const std::vector<std::pair<std::size_t, std::size_t>> & waypoints);

/// Edge sequence along a node path; throws when two nodes are not joined.
std::vector<EdgeId> node_path_edges(const RoadNetwork & net, const std::vector<NodeId> & nodes);

struct PatternSpec
{
  std::vector<NodeId> nodes;
  std::size_t count = 0;
};

struct GeneratorSpec
{
  std::size_t rows = 10;
  std::size_t cols = 10;
  double spacing_deg = 0.01;
  std::vector<PatternSpec> patterns;
  double direction_mix = 0.5;  // share of reversed emissions
  double truncation_prob = 0.0;
  double detour_prob = 0.0;
  std::size_t min_len = 5;
  std::uint64_t seed = 1;

  /// Checks everything that does not need the network.
  void validate() const;
};

GeneratorSpec parse_generator_spec(const std::string & json_text);
GeneratorSpec load_generator_spec(const std::filesystem::path & path);

struct TrajectoryLabel
{
  TrajectoryId id = 0;
  std::size_t pattern = 0;
  bool reversed = false;
};

struct GeneratedData
{
  TrajectoryDataset dataset;
  std::vector<TrajectoryLabel> labels;  // parallel to dataset.trajectories
};

/// Emission e of a pattern is reversed iff floor((e+1)*mix) > floor(e*mix).
bool is_reversed_emission(std::size_t emission, double mix);

GeneratedData generate(const GeneratorSpec & spec, const RoadNetwork & net);

void write_labels_csv(const std::vector<TrajectoryLabel> & labels, const std::filesystem::path & path);

/// network.json, trajectories.jsonl and labels.csv under `dir`.
void write_generated(const RoadNetwork & net, const GeneratedData & data, const std::filesystem::path & dir);

}  // namespace tcv

#endif  // TCV_SYNTHGEN_HPP_
