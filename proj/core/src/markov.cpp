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

#include "tcv/markov.hpp"

#include <algorithm>

namespace tcv
{

Count TransitionCounts::pair(EdgeId from, EdgeId to) const
{
  const auto it = pairs.find({from, to});
  return it == pairs.end() ? 0 : it->second;
}

Count TransitionCounts::passes(EdgeId e) const
{
  const auto it = pass.find(e);
  return it == pass.end() ? 0 : it->second;
}

Count TransitionCounts::origins(EdgeId e) const
{
  const auto it = origin.find(e);
  return it == origin.end() ? 0 : it->second;
}

std::vector<std::pair<EdgeId, Count>> TransitionCounts::row(EdgeId from) const
{
  std::vector<std::pair<EdgeId, Count>> out;
  for (auto it = pairs.lower_bound({from, 0}); it != pairs.end() && it->first.first == from; ++it) {
    out.emplace_back(it->first.second, it->second);
  }
  return out;
}

TransitionCounts build_counts(std::span<const Trajectory * const> trajs)
{
  TransitionCounts w;
  std::vector<std::pair<EdgeId, EdgeId>> seen_pairs;
  std::vector<EdgeId> seen_edges;
  for (const Trajectory * t : trajs) {
    const auto & s = t->segments;
    ++w.trajectories;
    if (s.empty()) {
      continue;
    }
    seen_edges.assign(s.begin(), s.end());
    std::sort(seen_edges.begin(), seen_edges.end());
    seen_edges.erase(std::unique(seen_edges.begin(), seen_edges.end()), seen_edges.end());
    for (EdgeId e : seen_edges) {
      ++w.pass[e];
    }
    seen_pairs.clear();
    for (std::size_t j = 0; j + 1 < s.size(); ++j) {
      seen_pairs.emplace_back(s[j], s[j + 1]);
    }
    std::sort(seen_pairs.begin(), seen_pairs.end());
    seen_pairs.erase(std::unique(seen_pairs.begin(), seen_pairs.end()), seen_pairs.end());
    for (const auto & p : seen_pairs) {
      ++w.pairs[p];
    }
    ++w.origin[s.front()];
  }
  return w;
}

TransitionCounts build_counts(std::span<const Trajectory> trajs)
{
  std::vector<const Trajectory *> ptrs;
  ptrs.reserve(trajs.size());
  for (const auto & t : trajs) {
    ptrs.push_back(&t);
  }
  return build_counts(std::span<const Trajectory * const>(ptrs));
}

TransitionMatrix to_probabilities(const TransitionCounts & w)
{
  TransitionMatrix m;
  for (const auto & [edge, passes] : w.pass) {
    if (passes == 0) {
      continue;
    }
    std::vector<Transition> row;
    for (const auto & [to, count] : w.row(edge)) {
      if (count > 0) {
        row.push_back({to, static_cast<double>(count) / static_cast<double>(passes)});
      }
    }
    m.set_row(edge, std::move(row));
  }
  return m;
}

void TransitionMatrix::set_row(EdgeId from, std::vector<Transition> row)
{
  std::sort(row.begin(), row.end(), [](const Transition & a, const Transition & b) { return a.to < b.to; });
  rows_[from] = std::move(row);
}

bool TransitionMatrix::has_row(EdgeId from) const { return rows_.contains(from); }

std::span<const Transition> TransitionMatrix::row(EdgeId from) const
{
  const auto it = rows_.find(from);
  if (it == rows_.end()) {
    return {};
  }
  return it->second;
}

double TransitionMatrix::probability(EdgeId from, EdgeId to) const
{
  for (const Transition & t : row(from)) {
    if (t.to == to) {
      return t.probability;
    }
  }
  return 0.0;
}

double path_probability(const TransitionMatrix & m, std::span<const EdgeId> segments)
{
  if (segments.empty()) {
    return 0.0;
  }
  if (segments.size() == 1) {
    return m.has_row(segments[0]) ? 1.0 : 0.0;
  }
  double p = 1.0;
  for (std::size_t j = 0; j + 1 < segments.size(); ++j) {
    p *= m.probability(segments[j], segments[j + 1]);
    if (p == 0.0) {
      return 0.0;
    }
  }
  return p;
}

double path_probability(const TransitionMatrix & m, const Trajectory & t)
{
  return path_probability(m, std::span<const EdgeId>(t.segments));
}

std::optional<EdgeId> next_location(const TransitionMatrix & m, EdgeId current)
{
  std::optional<EdgeId> best;
  double best_p = 0.0;
  for (const Transition & t : m.row(current)) {
    if (t.probability > best_p) {
      best_p = t.probability;
      best = t.to;
    }
  }
  return best;
}

std::vector<std::array<std::uint64_t, 3>> to_triplets(const TransitionCounts & w)
{
  std::vector<std::array<std::uint64_t, 3>> out;
  out.reserve(w.pairs.size());
  for (const auto & [key, count] : w.pairs) {
    out.push_back({key.first, key.second, count});
  }
  return out;
}

}  // namespace tcv
