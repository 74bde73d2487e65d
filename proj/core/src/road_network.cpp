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

#include "tcv/road_network.hpp"

#include "tcv/parallel.hpp"
#include "binary_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <queue>
#include <sstream>

namespace tcv
{

namespace
{
constexpr std::uint32_t kDistanceFileVersion = 1;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

Edge make_edge(EdgeId id, NodeId a, NodeId b, double length_km)
{
  return Edge{id, a, b, length_km};
}

RoadNetwork::RoadNetwork(std::vector<Node> nodes, std::vector<Edge> edges)
: nodes_(std::move(nodes)), edges_(std::move(edges))
{
  if (nodes_.empty()) {
    throw DataError("network has no nodes");
  }
  if (edges_.empty()) {
    throw DataError("network has no segments");
  }
  std::sort(nodes_.begin(), nodes_.end(), [](const Node & x, const Node & y) { return x.id < y.id; });
  std::sort(edges_.begin(), edges_.end(), [](const Edge & x, const Edge & y) { return x.id < y.id; });
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].id != i) {
      throw DataError("node ids must be dense 0..|V|-1; missing or duplicate id near " + std::to_string(i));
    }
    if (!(nodes_[i].pos.lat >= -90.0 && nodes_[i].pos.lat <= 90.0) || !std::isfinite(nodes_[i].pos.lon)) {
      throw DataError("node " + std::to_string(i) + " has invalid coordinates");
    }
  }
  incident_.resize(nodes_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    Edge & e = edges_[i];
    if (e.id != i) {
      throw DataError("edge ids must be dense 0..|E|-1; missing or duplicate id near " + std::to_string(i));
    }
    if (e.a >= nodes_.size() || e.b >= nodes_.size()) {
      throw DataError(
        "edge " + std::to_string(e.id) + " references unknown node " +
        std::to_string(e.a >= nodes_.size() ? e.a : e.b));
    }
    if (e.a == e.b) {
      throw DataError("edge " + std::to_string(e.id) + " is a self-loop");
    }
    if (!(e.length_km > 0.0)) {
      e.length_km = haversine_km(nodes_[e.a].pos, nodes_[e.b].pos);
    }
    if (!(e.length_km > 0.0) || !std::isfinite(e.length_km)) {
      throw DataError("edge " + std::to_string(e.id) + " has non-positive length");
    }
    incident_[e.a].push_back(e.id);
    incident_[e.b].push_back(e.id);
  }

  edge_adjacency_.resize(edges_.size());
  midpoints_.resize(edges_.size());
  for (const Edge & e : edges_) {
    auto & adj = edge_adjacency_[e.id];
    for (NodeId n : {e.a, e.b}) {
      for (EdgeId f : incident_[n]) {
        if (f != e.id) {
          adj.push_back(f);
        }
      }
    }
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    midpoints_[e.id] = geodesic_midpoint(nodes_[e.a].pos, nodes_[e.b].pos);
  }

  Fnv1a h;
  h.update_value(static_cast<std::uint64_t>(nodes_.size()));
  for (const Node & n : nodes_) {
    h.update_value(n.pos.lat);
    h.update_value(n.pos.lon);
  }
  h.update_value(static_cast<std::uint64_t>(edges_.size()));
  for (const Edge & e : edges_) {
    h.update_value(e.a);
    h.update_value(e.b);
    h.update_value(e.length_km);
  }
  fingerprint_ = to_hex(h.digest());
}

const Edge & RoadNetwork::edge(EdgeId e) const
{
  if (e >= edges_.size()) {
    throw DataError("unknown edge id " + std::to_string(e));
  }
  return edges_[e];
}

const Node & RoadNetwork::node(NodeId n) const
{
  if (n >= nodes_.size()) {
    throw DataError("unknown node id " + std::to_string(n));
  }
  return nodes_[n];
}

std::span<const EdgeId> RoadNetwork::incident_edges(NodeId n) const
{
  node(n);
  return incident_[n];
}

std::span<const EdgeId> RoadNetwork::adjacent_segments(EdgeId e) const
{
  edge(e);
  return edge_adjacency_[e];
}

bool RoadNetwork::are_adjacent(EdgeId e, EdgeId f) const
{
  if (e >= edges_.size() || f >= edges_.size() || e == f) {
    return false;
  }
  const auto & adj = edge_adjacency_[e];
  return std::binary_search(adj.begin(), adj.end(), f);
}

std::optional<NodeId> RoadNetwork::shared_node(EdgeId e, EdgeId f) const
{
  const Edge & x = edge(e);
  const Edge & y = edge(f);
  std::optional<NodeId> best;
  for (NodeId n : {x.a, x.b}) {
    if (n == y.a || n == y.b) {
      if (!best || n < *best) {
        best = n;
      }
    }
  }
  return best;
}

LatLon RoadNetwork::edge_midpoint(EdgeId e) const
{
  edge(e);
  return midpoints_[e];
}

bool RoadNetwork::is_connected() const
{
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const NodeId n = stack.back();
    stack.pop_back();
    for (EdgeId e : incident_[n]) {
      const NodeId m = edges_[e].a == n ? edges_[e].b : edges_[e].a;
      if (!seen[m]) {
        seen[m] = 1;
        ++reached;
        stack.push_back(m);
      }
    }
  }
  return reached == nodes_.size();
}

RoadNetwork parse_network_json(const std::string & text)
{
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception & ex) {
    throw DataError(std::string("malformed network file: ") + ex.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges") || !doc["nodes"].is_array() ||
      !doc["edges"].is_array()) {
    throw DataError("malformed network file: expected object with 'nodes' and 'edges' arrays");
  }
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  try {
    for (const auto & n : doc["nodes"]) {
      nodes.push_back(Node{n.at("id").get<NodeId>(), {n.at("lat").get<double>(), n.at("lon").get<double>()}});
    }
    for (const auto & e : doc["edges"]) {
      double len = 0.0;
      if (e.contains("length_km") && !e["length_km"].is_null()) {
        len = e["length_km"].get<double>();
        if (!(len > 0.0)) {
          throw DataError("edge " + e.at("id").dump() + " has non-positive length_km");
        }
      }
      edges.push_back(make_edge(e.at("id").get<EdgeId>(), e.at("a").get<NodeId>(), e.at("b").get<NodeId>(), len));
    }
  } catch (const nlohmann::json::exception & ex) {
    throw DataError(std::string("malformed network file: ") + ex.what());
  }
  RoadNetwork net(std::move(nodes), std::move(edges));
  if (!net.is_connected()) {
    std::cerr << "warning: road network is disconnected; distance precomputation will fail\n";
  }
  return net;
}

RoadNetwork load_network(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot read network file " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_network_json(ss.str());
}

void save_network(const RoadNetwork & net, const std::filesystem::path & path)
{
  nlohmann::json doc;
  doc["nodes"] = nlohmann::json::array();
  for (const Node & n : net.nodes()) {
    doc["nodes"].push_back({{"id", n.id}, {"lat", n.pos.lat}, {"lon", n.pos.lon}});
  }
  doc["edges"] = nlohmann::json::array();
  for (const Edge & e : net.edges()) {
    doc["edges"].push_back({{"id", e.id}, {"a", e.a}, {"b", e.b}, {"length_km", e.length_km}});
  }
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write network file " + path.string());
  }
  out << doc.dump() << '\n';
}

SegmentDistanceMatrix::SegmentDistanceMatrix(std::size_t size, std::vector<double> entries)
: size_(size), entries_(std::move(entries))
{
  if (entries_.size() != size_ * size_) {
    throw DataError("segment distance matrix has wrong number of entries");
  }
}

std::vector<double> dijkstra(const RoadNetwork & net, NodeId source)
{
  std::vector<double> dist(net.node_count(), kInf);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    const auto [d, n] = heap.top();
    heap.pop();
    if (d > dist[n]) {
      continue;
    }
    for (EdgeId e : net.incident_edges(n)) {
      const Edge & edge = net.edges()[e];
      const NodeId m = edge.a == n ? edge.b : edge.a;
      const double nd = d + edge.length_km;
      if (nd < dist[m]) {
        dist[m] = nd;
        heap.emplace(nd, m);
      }
    }
  }
  return dist;
}

SegmentDistanceMatrix all_pairs_segment_distances(const RoadNetwork & net)
{
  const std::size_t nv = net.node_count();
  const std::size_t ne = net.edge_count();
  std::vector<std::vector<double>> node_dist(nv);
  parallel_for(nv, [&](std::size_t s) { node_dist[s] = dijkstra(net, static_cast<NodeId>(s)); });
  for (std::size_t s = 0; s < nv; ++s) {
    for (std::size_t t = 0; t < nv; ++t) {
      if (!std::isfinite(node_dist[s][t])) {
        throw DataError(
          "road network is disconnected: node " + std::to_string(t) + " is unreachable from node " +
          std::to_string(s) + " (separate component)");
      }
    }
  }

  std::vector<double> entries(ne * ne, 0.0);
  const auto & edges = net.edges();
  parallel_for(ne, [&](std::size_t i) {
    const Edge & ei = edges[i];
    double * row = entries.data() + i * ne;
    for (std::size_t j = 0; j < ne; ++j) {
      if (i == j) {
        row[j] = 0.0;
        continue;
      }
      const Edge & ej = edges[j];
      const double sp = std::min(
        std::min(node_dist[ei.a][ej.a], node_dist[ei.a][ej.b]),
        std::min(node_dist[ei.b][ej.a], node_dist[ei.b][ej.b]));
      row[j] = sp + 0.5 * (ei.length_km + ej.length_km);
    }
  });
  // Dijkstra from either side can differ in the last ulp; keep the matrix
  // exactly symmetric.
  for (std::size_t i = 0; i < ne; ++i) {
    for (std::size_t j = i + 1; j < ne; ++j) {
      const double v = std::min(entries[i * ne + j], entries[j * ne + i]);
      entries[i * ne + j] = v;
      entries[j * ne + i] = v;
    }
  }
  return SegmentDistanceMatrix(ne, std::move(entries));
}

void save_segment_distances(const SegmentDistanceMatrix & d, const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write distance matrix " + path.string());
  }
  detail::write_magic(out, "TCVD");
  detail::write_u32(out, kDistanceFileVersion);
  detail::write_u32(out, static_cast<std::uint32_t>(d.size()));
  detail::write_f64_array(out, d.entries());
}

SegmentDistanceMatrix load_segment_distances(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot read distance matrix " + path.string());
  }
  detail::expect_magic(in, "TCVD", path);
  const std::uint32_t version = detail::read_u32(in);
  if (version != kDistanceFileVersion) {
    throw DataError("unsupported distance matrix version " + std::to_string(version));
  }
  const std::size_t n = detail::read_u32(in);
  std::vector<double> entries = detail::read_f64_array(in, n * n);
  return SegmentDistanceMatrix(n, std::move(entries));
}

}  // namespace tcv
