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

#include "tcv/trajectory.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <unordered_set>

namespace tcv
{

IngestResult ingest_lines(std::istream & in, const RoadNetwork & net, IngestOptions opts)
{
  IngestResult result;
  result.dataset.network_ref = net.fingerprint();
  std::unordered_set<TrajectoryId> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    Trajectory t;
    std::string id_text;
    try {
      const auto doc = nlohmann::json::parse(line);
      id_text = doc.at("id").dump();
      t.id = doc.at("id").get<TrajectoryId>();
      for (const auto & e : doc.at("edges")) {
        const auto v = e.get<std::int64_t>();
        if (v < 0 || static_cast<std::uint64_t>(v) >= net.edge_count()) {
          throw DataError("unknown_edge");
        }
        t.segments.push_back(static_cast<EdgeId>(v));
      }
    } catch (const DataError & ex) {
      result.rejections.push_back({line_no, id_text, ex.what()});
      continue;
    } catch (const nlohmann::json::exception &) {
      result.rejections.push_back({line_no, id_text, "malformed"});
      continue;
    }
    if (t.size() < opts.min_len) {
      result.rejections.push_back({line_no, id_text, "too_short"});
    } else if (t.size() > opts.max_len) {
      result.rejections.push_back({line_no, id_text, "too_long"});
    } else if (!is_connected_on(t, net)) {
      result.rejections.push_back({line_no, id_text, "disconnected"});
    } else if (!seen_ids.insert(t.id).second) {
      result.rejections.push_back({line_no, id_text, "duplicate_id"});
    } else {
      result.dataset.trajectories.push_back(std::move(t));
    }
  }
  return result;
}

IngestResult ingest(const std::filesystem::path & path, const RoadNetwork & net, IngestOptions opts)
{
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot read trajectory file " + path.string());
  }
  return ingest_lines(in, net, opts);
}

void write_rejections_csv(const std::vector<Rejection> & rejections, const std::filesystem::path & path)
{
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
  out << "line_no,id,reason\n";
  for (const auto & r : rejections) {
    out << r.line_no << ',' << r.id << ',' << r.reason << '\n';
  }
}

void write_trajectories_jsonl(const std::vector<Trajectory> & trajs, const std::filesystem::path & path)
{
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
  for (const auto & t : trajs) {
    out << nlohmann::json{{"id", t.id}, {"edges", t.segments}}.dump() << '\n';
  }
}

bool is_connected_on(const Trajectory & t, const RoadNetwork & net)
{
  for (EdgeId e : t.segments) {
    if (e >= net.edge_count()) {
      return false;
    }
  }
  for (std::size_t j = 0; j + 1 < t.size(); ++j) {
    if (!net.are_adjacent(t.segments[j], t.segments[j + 1])) {
      return false;
    }
  }
  return true;
}

bool is_subtrajectory(const Trajectory & candidate, const Trajectory & t)
{
  if (candidate.segments.empty()) {
    return true;
  }
  return std::search(t.segments.begin(), t.segments.end(), candidate.segments.begin(), candidate.segments.end()) !=
         t.segments.end();
}

SourceSegment source_segment(const Trajectory & t, const RoadNetwork & net)
{
  if (t.size() < 2) {
    throw DataError("source segment needs a trajectory with at least two segments");
  }
  const Edge & first = net.edge(t.segments[0]);
  const Edge & second = net.edge(t.segments[1]);
  const bool a_shared = first.a == second.a || first.a == second.b;
  return {first.id, a_shared ? first.b : first.a};
}

Trajectory reverse(const Trajectory & t)
{
  Trajectory r{t.id, t.segments};
  std::reverse(r.segments.begin(), r.segments.end());
  return r;
}

std::pair<Trajectory, Trajectory> split_query_truth(const Trajectory & t)
{
  if (t.size() < 2) {
    throw DataError("cannot split a trajectory shorter than two segments");
  }
  const std::size_t half = (t.size() + 1) / 2;
  Trajectory partial{t.id, {t.segments.begin(), t.segments.begin() + static_cast<std::ptrdiff_t>(half)}};
  Trajectory truth{t.id, {t.segments.begin() + static_cast<std::ptrdiff_t>(half), t.segments.end()}};
  return {std::move(partial), std::move(truth)};
}

std::pair<TrajectoryDataset, TrajectoryDataset> split_train_test(
  const TrajectoryDataset & ds, double fraction, std::uint64_t seed)
{
  if (ds.trajectories.empty()) {
    throw DataError("cannot split an empty dataset");
  }
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw DataError("train fraction must lie in (0, 1)");
  }
  const std::size_t n = ds.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction + 0.5));

  std::vector<std::size_t> train_idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test_idx(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());

  TrajectoryDataset train{{}, ds.network_ref};
  TrajectoryDataset test{{}, ds.network_ref};
  for (std::size_t i : train_idx) {
    train.trajectories.push_back(ds.trajectories[i]);
  }
  for (std::size_t i : test_idx) {
    test.trajectories.push_back(ds.trajectories[i]);
  }
  return {std::move(train), std::move(test)};
}

}  // namespace tcv
