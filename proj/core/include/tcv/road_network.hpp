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

#ifndef TCV_ROAD_NETWORK_HPP_
#define TCV_ROAD_NETWORK_HPP_

#include "tcv/common.hpp"
#include "tcv/geo.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tcv
{

struct Node
{
  NodeId id = 0;
  LatLon pos;
};

struct Edge
{
  EdgeId id = 0;
  NodeId a = 0;
  NodeId b = 0;
  double length_km = 0.0;
};

/// Undirected road graph. Node and edge ids are dense (0..n-1) and double as
/// indices. Immutable after construction.
class RoadNetwork
{
public:
  /// Validates ids, endpoints and lengths. Edges whose length is missing
  /// (nullopt) get the haversine distance between their endpoints.
  RoadNetwork(std::vector<Node> nodes, std::vector<Edge> edges);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Node> & nodes() const { return nodes_; }
  const std::vector<Edge> & edges() const { return edges_; }
  const Edge & edge(EdgeId e) const;
  const Node & node(NodeId n) const;

  std::span<const EdgeId> incident_edges(NodeId n) const;

  /// Edges sharing a node with `e`, excluding `e`, sorted ascending.
  std::span<const EdgeId> adjacent_segments(EdgeId e) const;
  bool are_adjacent(EdgeId e, EdgeId f) const;
  /// Node shared by two edges, if any (lowest id when they share both).
  std::optional<NodeId> shared_node(EdgeId e, EdgeId f) const;

  LatLon edge_midpoint(EdgeId e) const;
  bool is_connected() const;

  /// Content fingerprint; models and datasets carry it as their network_ref.
  const std::string & fingerprint() const { return fingerprint_; }

private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> incident_;
  std::vector<std::vector<EdgeId>> edge_adjacency_;
  std::vector<LatLon> midpoints_;
  std::string fingerprint_;
};

/// Pass length_km <= 0 (or NaN) to request haversine fill-in.
Edge make_edge(EdgeId id, NodeId a, NodeId b, double length_km = 0.0);

RoadNetwork load_network(const std::filesystem::path & path);
RoadNetwork parse_network_json(const std::string & text);
void save_network(const RoadNetwork & net, const std::filesystem::path & path);

/// Dense |E| x |E| segment distance matrix (km). Row-major.
class SegmentDistanceMatrix
{
public:
  SegmentDistanceMatrix() = default;
  SegmentDistanceMatrix(std::size_t size, std::vector<double> entries);

  std::size_t size() const { return size_; }
  double operator()(EdgeId i, EdgeId j) const { return entries_[std::size_t{i} * size_ + j]; }
  const double * row(EdgeId i) const { return entries_.data() + std::size_t{i} * size_; }
  const std::vector<double> & entries() const { return entries_; }

private:
  std::size_t size_ = 0;
  std::vector<double> entries_;
};

/// d(i, j) = shortest-path distance between the midpoints of segments i and j.
/// Throws DataError naming an unreachable node pair when the graph is
/// disconnected. Deterministic for any thread count.
SegmentDistanceMatrix all_pairs_segment_distances(const RoadNetwork & net);

/// Node-to-node Dijkstra distances from `source` (infinity when unreachable).
std::vector<double> dijkstra(const RoadNetwork & net, NodeId source);

// Binary layout: "TCVD", u32 version, u32 size, size*size little-endian f64.
void save_segment_distances(const SegmentDistanceMatrix & d, const std::filesystem::path & path);
SegmentDistanceMatrix load_segment_distances(const std::filesystem::path & path);

}  // namespace tcv

#endif  // TCV_ROAD_NETWORK_HPP_
