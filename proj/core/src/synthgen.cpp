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

#include "tcv/synthgen.hpp"

#include "tcv/mmrs.hpp"
#include "tcv/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace tcv
{

RoadNetwork make_grid_network(std::size_t rows, std::size_t cols, double spacing_deg)
{
  if (rows < 2 || cols < 2) {
    throw DataError("grid needs at least 2 rows and 2 columns");
  }
  if (!(spacing_deg > 0.0)) {
    throw DataError("grid spacing must be > 0");
  }
  std::vector<Node> nodes;
  nodes.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      nodes.push_back(
        {static_cast<NodeId>(r * cols + c), {static_cast<double>(r) * spacing_deg, static_cast<double>(c) * spacing_deg}});
    }
  }
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const auto u = static_cast<NodeId>(r * cols + c);
      if (c + 1 < cols) {
        edges.push_back(make_edge(static_cast<EdgeId>(edges.size()), u, u + 1));
      }
      if (r + 1 < rows) {
        edges.push_back(make_edge(static_cast<EdgeId>(edges.size()), u, static_cast<NodeId>(u + cols)));
      }
    }
  }
  return RoadNetwork(std::move(nodes), std::move(edges));
}

std::vector<NodeId> expand_waypoints(
  std::size_t cols, const std::vector<std::pair<std::size_t, std::size_t>> & waypoints)
{
  if (waypoints.empty()) {
    throw DataError("pattern needs at least one waypoint");
  }
  auto id = [cols](std::size_t r, std::size_t c) { return static_cast<NodeId>(r * cols + c); };
  std::vector<NodeId> nodes{id(waypoints[0].first, waypoints[0].second)};
  for (std::size_t w = 1; w < waypoints.size(); ++w) {
    auto [r, c] = waypoints[w - 1];
    const auto [tr, tc] = waypoints[w];
    if (r != tr && c != tc) {
      throw DataError("consecutive waypoints must share a row or a column");
    }
    while (r != tr || c != tc) {
      if (r != tr) {
        r = r < tr ? r + 1 : r - 1;
      } else {
        c = c < tc ? c + 1 : c - 1;
      }
      nodes.push_back(id(r, c));
    }
  }
  return nodes;
}

std::vector<EdgeId> node_path_edges(const RoadNetwork & net, const std::vector<NodeId> & nodes)
{
  std::vector<EdgeId> out;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (nodes[i - 1] >= net.node_count() || nodes[i] >= net.node_count()) {
      throw DataError("pattern node outside the network");
    }
    std::optional<EdgeId> found;
    for (EdgeId e : net.incident_edges(nodes[i - 1])) {
      const Edge & edge = net.edge(e);
      if ((edge.a == nodes[i - 1] && edge.b == nodes[i]) || (edge.b == nodes[i - 1] && edge.a == nodes[i])) {
        found = e;
        break;
      }
    }
    if (!found) {
      throw DataError(
        "pattern nodes " + std::to_string(nodes[i - 1]) + " and " + std::to_string(nodes[i]) + " are not adjacent");
    }
    out.push_back(*found);
  }
  return out;
}

void GeneratorSpec::validate() const
{
  if (rows < 2 || cols < 2) {
    throw DataError("grid needs at least 2 rows and 2 columns");
  }
  if (patterns.empty()) {
    throw DataError("generator spec has no patterns");
  }
  auto prob = [](double p, const char * name) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw DataError(std::string(name) + " must lie in [0, 1]");
    }
  };
  prob(direction_mix, "direction_mix");
  prob(truncation_prob, "truncation probability");
  prob(detour_prob, "detour probability");
  if (min_len == 0) {
    throw DataError("min_len must be >= 1");
  }
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    if (patterns[p].count == 0) {
      throw DataError("pattern " + std::to_string(p) + " has count 0");
    }
    if (patterns[p].nodes.size() < min_len + 1) {
      throw DataError(
        "pattern " + std::to_string(p) + " has fewer than min_len=" + std::to_string(min_len) + " segments");
    }
    std::vector<NodeId> sorted = patterns[p].nodes;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw DataError("pattern " + std::to_string(p) + " revisits a node");
    }
  }
}

GeneratorSpec parse_generator_spec(const std::string & json_text)
{
  GeneratorSpec s;
  try {
    const auto doc = nlohmann::json::parse(json_text);
    if (doc.contains("grid")) {
      const auto & g = doc.at("grid");
      s.rows = g.value("rows", s.rows);
      s.cols = g.value("cols", s.cols);
      s.spacing_deg = g.value("spacing_deg", s.spacing_deg);
    }
    s.direction_mix = doc.value("direction_mix", s.direction_mix);
    if (doc.contains("noise")) {
      s.truncation_prob = doc.at("noise").value("truncation", s.truncation_prob);
      s.detour_prob = doc.at("noise").value("detour", s.detour_prob);
    }
    s.min_len = doc.value("min_len", s.min_len);
    s.seed = doc.value("seed", s.seed);
    for (const auto & p : doc.at("patterns")) {
      PatternSpec ps;
      ps.count = p.at("count").get<std::size_t>();
      if (p.contains("nodes")) {
        ps.nodes = p.at("nodes").get<std::vector<NodeId>>();
      } else {
        std::vector<std::pair<std::size_t, std::size_t>> wp;
        for (const auto & w : p.at("waypoints")) {
          wp.emplace_back(w.at(0).get<std::size_t>(), w.at(1).get<std::size_t>());
        }
        for (const auto & [r, c] : wp) {
          if (r >= s.rows || c >= s.cols) {
            throw DataError("waypoint outside the grid");
          }
        }
        ps.nodes = expand_waypoints(s.cols, wp);
      }
      s.patterns.push_back(std::move(ps));
    }
  } catch (const nlohmann::json::exception & ex) {
    throw DataError(std::string("malformed generator spec: ") + ex.what());
  }
  s.validate();
  return s;
}

GeneratorSpec load_generator_spec(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot read generator spec " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_generator_spec(ss.str());
}

bool is_reversed_emission(std::size_t emission, double mix)
{
  const auto e = static_cast<double>(emission);
  return std::floor((e + 1.0) * mix) > std::floor(e * mix);
}

namespace
{

double uniform01(std::mt19937_64 & rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t pick(std::mt19937_64 & rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

// Swaps one lattice corner u-v-w for u-v'-w, v' = u + w - v.
void apply_detour(std::vector<NodeId> & nodes, std::size_t rows, std::size_t cols, std::mt19937_64 & rng)
{
  std::vector<std::pair<std::size_t, NodeId>> options;
  for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
    const auto ur = static_cast<long>(nodes[i - 1] / cols), uc = static_cast<long>(nodes[i - 1] % cols);
    const auto vr = static_cast<long>(nodes[i] / cols), vc = static_cast<long>(nodes[i] % cols);
    const auto wr = static_cast<long>(nodes[i + 1] / cols), wc = static_cast<long>(nodes[i + 1] % cols);
    const long ar = ur + wr - vr;
    const long ac = uc + wc - vc;
    if (ur == wr || uc == wc) {
      continue;  // straight, no corner
    }
    if (ar < 0 || ac < 0 || ar >= static_cast<long>(rows) || ac >= static_cast<long>(cols)) {
      continue;
    }
    const auto alt = static_cast<NodeId>(ar * static_cast<long>(cols) + ac);
    if (std::find(nodes.begin(), nodes.end(), alt) != nodes.end()) {
      continue;
    }
    options.emplace_back(i, alt);
  }
  if (!options.empty()) {
    const auto & [i, alt] = options[pick(rng, options.size())];
    nodes[i] = alt;
  }
}

}  // namespace

GeneratedData generate(const GeneratorSpec & spec, const RoadNetwork & net)
{
  spec.validate();
  if (net.node_count() != spec.rows * spec.cols) {
    throw DataError("network does not match the generator grid");
  }
  const std::size_t P = spec.patterns.size();
  std::vector<std::vector<Trajectory>> per_pattern(P);
  std::vector<std::vector<TrajectoryLabel>> per_labels(P);
  std::vector<std::size_t> first_id(P, 0);
  for (std::size_t p = 1; p < P; ++p) {
    first_id[p] = first_id[p - 1] + spec.patterns[p - 1].count;
  }
  for (const auto & ps : spec.patterns) {
    node_path_edges(net, ps.nodes);  // validates adjacency up front
  }
  parallel_for(P, [&](std::size_t p) {
    const auto & ps = spec.patterns[p];
    const std::uint64_t stream = mix_seed(spec.seed, p);
    for (std::size_t e = 0; e < ps.count; ++e) {
      std::mt19937_64 rng(mix_seed(stream, e));
      std::vector<NodeId> nodes = ps.nodes;
      if (spec.detour_prob > 0.0 && uniform01(rng) < spec.detour_prob) {
        apply_detour(nodes, spec.rows, spec.cols, rng);
      }
      std::vector<EdgeId> edges = node_path_edges(net, nodes);
      if (spec.truncation_prob > 0.0 && uniform01(rng) < spec.truncation_prob && edges.size() > spec.min_len) {
        const std::size_t keep = spec.min_len + pick(rng, edges.size() - spec.min_len);
        if (rng() & 1U) {
          edges.erase(edges.begin(), edges.end() - static_cast<std::ptrdiff_t>(keep));
        } else {
          edges.resize(keep);
        }
      }
      const bool reversed = is_reversed_emission(e, spec.direction_mix);
      if (reversed) {
        std::reverse(edges.begin(), edges.end());
      }
      const auto id = static_cast<TrajectoryId>(first_id[p] + e);
      per_pattern[p].push_back({id, std::move(edges)});
      per_labels[p].push_back({id, p, reversed});
    }
  });
  GeneratedData out;
  out.dataset.network_ref = net.fingerprint();
  for (std::size_t p = 0; p < P; ++p) {
    for (auto & t : per_pattern[p]) {
      out.dataset.trajectories.push_back(std::move(t));
    }
    out.labels.insert(out.labels.end(), per_labels[p].begin(), per_labels[p].end());
  }
  return out;
}

void write_labels_csv(const std::vector<TrajectoryLabel> & labels, const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
  out << "id,pattern,direction\n";
  for (const auto & l : labels) {
    out << l.id << ',' << l.pattern << ',' << (l.reversed ? "rev" : "fwd") << '\n';
  }
}

void write_generated(const RoadNetwork & net, const GeneratedData & data, const std::filesystem::path & dir)
{
  std::filesystem::create_directories(dir);
  save_network(net, dir / "network.json");
  write_trajectories_jsonl(data.dataset.trajectories, dir / "trajectories.jsonl");
  write_labels_csv(data.labels, dir / "labels.csv");
}

}  // namespace tcv
