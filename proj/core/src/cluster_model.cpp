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

#include "tcv/cluster_model.hpp"

#include "tcv/traj_distance.hpp"

#include <algorithm>
#include <limits>

namespace tcv
{

namespace
{

// Counts are integers and min_t * N is usually not; the slack keeps products
// such as 0.3 * 10 = 3.0000000000000004 from excluding a count of 3.
constexpr double kThresholdSlack = 1e-9;

bool meets(Count count, double min_t, std::size_t n)
{
  return static_cast<double>(count) + kThresholdSlack >= min_t * static_cast<double>(n);
}

void check_min_t(double min_t)
{
  if (!(min_t > 0.0 && min_t <= 1.0)) {
    throw DataError("MinT must lie in (0, 1]");
  }
}

std::vector<const Trajectory *> pointers(std::span<const Trajectory> trajs)
{
  std::vector<const Trajectory *> out;
  for (const auto & t : trajs) {
    out.push_back(&t);
  }
  return out;
}

}  // namespace

std::set<EdgeId> compute_frs(const TransitionCounts & w, double min_t)
{
  check_min_t(min_t);
  if (w.trajectories == 0) {
    throw DataError("cannot compute frequent segments of an empty cluster");
  }
  std::set<EdgeId> frs;
  for (const auto & [edge, count] : w.pass) {
    if (meets(count, min_t, w.trajectories)) {
      frs.insert(edge);
    }
  }
  return frs;
}

std::set<EdgeId> compute_frs(std::span<const Trajectory> members, double min_t)
{
  const auto ptrs = pointers(members);
  return compute_frs(build_counts(std::span<const Trajectory * const>(ptrs)), min_t);
}

std::set<EdgeId> compute_fss(const TransitionCounts & w, const std::set<EdgeId> & frs, double min_t)
{
  check_min_t(min_t);
  std::set<EdgeId> fss;
  for (const auto & [edge, count] : w.origin) {
    if (frs.contains(edge) && meets(count, min_t, w.trajectories)) {
      fss.insert(edge);
    }
  }
  return fss;
}

std::set<EdgeId> compute_fss(std::span<const Trajectory> members, double min_t)
{
  const auto ptrs = pointers(members);
  const auto w = build_counts(std::span<const Trajectory * const>(ptrs));
  return compute_fss(w, compute_frs(w, min_t), min_t);
}

RepresentativeTrajectory representative_trajectory(
  const TransitionCounts & w, const std::set<EdgeId> & frs, const std::set<EdgeId> & fss)
{
  std::vector<EdgeId> starts(fss.begin(), fss.end());
  if (starts.empty()) {
    EdgeId best = 0;
    Count best_count = 0;
    for (const auto & [edge, count] : w.origin) {
      if (count > best_count) {
        best = edge;
        best_count = count;
      }
    }
    if (best_count == 0) {
      return {};
    }
    starts.push_back(best);
  }

  RepresentativeTrajectory best_it;
  bool have_best = false;
  for (EdgeId origin : starts) {
    RepresentativeTrajectory it{{origin}, 0, origin};
    EdgeId current = origin;
    for (;;) {
      std::optional<EdgeId> next;
      Count next_count = 0;
      for (const auto & [to, count] : w.row(current)) {
        if (count > next_count) {
          next = to;
          next_count = count;
        }
      }
      if (!next || !frs.contains(*next) ||
          std::find(it.segments.begin(), it.segments.end(), *next) != it.segments.end()) {
        break;
      }
      it.segments.push_back(*next);
      it.count_score += next_count;
      current = *next;
    }
    const bool wins = !have_best || it.count_score > best_it.count_score ||
                      (it.count_score == best_it.count_score && it.segments.size() > best_it.segments.size());
    if (wins) {
      best_it = std::move(it);
      have_best = true;
    }
  }
  return best_it;
}

void derive_cluster_artifacts(ClusterModel & c, double min_t)
{
  c.probs = to_probabilities(c.counts);
  c.frs = compute_frs(c.counts, min_t);
  c.fss = compute_fss(c.counts, c.frs, min_t);
  c.rt = representative_trajectory(c.counts, c.frs, c.fss);
}

ClusterModel build_cluster_model(std::size_t cluster_id, std::span<const Trajectory * const> members, double min_t)
{
  if (members.empty()) {
    throw DataError("cluster " + std::to_string(cluster_id) + " has no members");
  }
  ClusterModel c;
  c.cluster_id = cluster_id;
  for (const Trajectory * t : members) {
    c.members.push_back(t->id);
  }
  c.counts = build_counts(members);
  derive_cluster_artifacts(c, min_t);
  return c;
}

NprDecision hybrid_npr_assign(
  std::span<const EdgeId> query, std::span<const ClusterModel> clusters, const SegmentDistanceMatrix & d)
{
  if (clusters.empty()) {
    throw DataError("hybrid NPR needs at least one cluster");
  }
  NprDecision best;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const double p = path_probability(clusters[c].probs, query);
    if (p > best.score) {
      best = {c, true, p};
    }
  }
  if (best.by_probability) {
    return best;
  }
  best.score = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto & rt = clusters[c].rt.segments;
    if (rt.empty()) {
      continue;
    }
    const double y = traj_dtw(query, std::span<const EdgeId>(rt), d);
    if (y < best.score) {
      best = {c, false, y};
    }
  }
  return best;
}

NprDecision hybrid_npr_assign(
  const Trajectory & query, std::span<const ClusterModel> clusters, const SegmentDistanceMatrix & d)
{
  return hybrid_npr_assign(std::span<const EdgeId>(query.segments), clusters, d);
}

}  // namespace tcv
