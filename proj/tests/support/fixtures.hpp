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

// Shared fixtures for unit and acceptance tests.
#ifndef TCV_TESTS_SUPPORT_FIXTURES_HPP_
#define TCV_TESTS_SUPPORT_FIXTURES_HPP_

#include "tcv/road_network.hpp"
#include "tcv/trajectory.hpp"

#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace tcv::testing
{

inline std::filesystem::path fixture_path(const std::string & name)
{
  return std::filesystem::path(TCV_FIXTURE_DIR) / name;
}

inline RoadNetwork toy4() { return load_network(fixture_path("toy4.json")); }

// 1.11195 km: one 0.01 degree step along the equator.
inline constexpr double kToyStep = 1.1119492664455872;

inline Trajectory traj(TrajectoryId id, std::vector<EdgeId> segments) { return Trajectory{id, std::move(segments)}; }

inline TrajectoryDataset dataset(std::vector<Trajectory> trajs, const RoadNetwork & net)
{
  return TrajectoryDataset{std::move(trajs), net.fingerprint()};
}

/// Random connected network: a random spanning tree plus extra edges, no
/// parallel edges, nodes scattered in a small box.
inline RoadNetwork random_network(std::mt19937_64 & rng, std::size_t nodes, std::size_t edges)
{
  std::uniform_real_distribution<double> coord(0.0, 0.05);
  std::vector<Node> ns;
  for (std::size_t i = 0; i < nodes; ++i) {
    ns.push_back({static_cast<NodeId>(i), {coord(rng), coord(rng)}});
  }
  std::set<std::pair<NodeId, NodeId>> used;
  std::vector<Edge> es;
  auto add = [&](NodeId a, NodeId b) {
    if (a == b || !used.insert({std::min(a, b), std::max(a, b)}).second) {
      return false;
    }
    es.push_back(make_edge(static_cast<EdgeId>(es.size()), a, b));
    return true;
  };
  for (std::size_t i = 1; i < nodes; ++i) {
    add(static_cast<NodeId>(i), static_cast<NodeId>(rng() % i));
  }
  const std::size_t max_edges = nodes * (nodes - 1) / 2;
  while (es.size() < std::min(edges, max_edges)) {
    add(static_cast<NodeId>(rng() % nodes), static_cast<NodeId>(rng() % nodes));
  }
  return RoadNetwork(std::move(ns), std::move(es));
}

/// Random walk of `len` segments (consecutive segments share a node).
inline std::vector<EdgeId> random_walk(std::mt19937_64 & rng, const RoadNetwork & net, std::size_t len)
{
  std::vector<EdgeId> out{static_cast<EdgeId>(rng() % net.edge_count())};
  while (out.size() < len) {
    const auto adj = net.adjacent_segments(out.back());
    if (adj.empty()) {
      break;
    }
    out.push_back(adj[rng() % adj.size()]);
  }
  return out;
}

}  // namespace tcv::testing

#endif  // TCV_TESTS_SUPPORT_FIXTURES_HPP_
