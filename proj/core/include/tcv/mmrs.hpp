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

#ifndef TCV_MMRS_HPP_
#define TCV_MMRS_HPP_

#include "tcv/road_network.hpp"
#include "tcv/trajectory.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace tcv
{

struct MaximinResult
{
  std::vector<std::size_t> picks;        // distinguished objects, in pick order
  std::vector<double> pick_radius;       // min distance of each pick to earlier picks (first is +inf)
  std::vector<double> min_distance;      // final min distance of every object to the picks
  std::vector<std::size_t> group_of;     // index into `picks` of the nearest pick
  std::uint64_t distance_evaluations = 0;
};

/// Streaming maximin selection with non-directional trajDTW. The first pick is
/// `first` when given, else drawn from `seed`; each later pick maximizes the
/// distance to its nearest earlier pick (lowest index wins ties). Performs
/// exactly N * k_prime distance evaluations and never materializes D_N.
/// Grouping is returned alongside: ties go to the earliest pick, and every
/// pick belongs to its own group.
MaximinResult maximin(
  std::span<const Trajectory> trajs, std::size_t k_prime, const SegmentDistanceMatrix & d, std::uint64_t seed,
  std::optional<std::size_t> first = std::nullopt);

/// Nearest-distinguished grouping computed from scratch (N * |distinguished|
/// evaluations). Matches MaximinResult::group_of.
std::vector<std::size_t> group_by_nearest(
  std::span<const Trajectory> trajs, std::span<const std::size_t> distinguished, const SegmentDistanceMatrix & d);

/// Per-group draw counts: largest-remainder apportionment of n over the group
/// sizes (ties to the lowest group), then every group is raised to at least one
/// by taking from the group furthest above its exact share.
std::vector<std::size_t> proportional_quotas(std::span<const std::size_t> group_sizes, std::size_t n);

/// Draws each group's quota uniformly without replacement, always keeping the
/// distinguished member. Returns sorted population indices.
std::vector<std::size_t> proportional_sample(
  std::span<const std::size_t> group_of, std::span<const std::size_t> distinguished, std::size_t n,
  std::uint64_t seed);

struct MMRSSample
{
  std::uint64_t seed = 0;
  std::size_t k_prime = 0;
  std::size_t n = 0;
  std::vector<std::size_t> distinguished;
  std::vector<std::size_t> group_of;
  std::vector<std::size_t> sample;
};

MMRSSample mmrs_sample(
  std::span<const Trajectory> trajs, std::size_t k_prime, std::size_t n, const SegmentDistanceMatrix & d,
  std::uint64_t seed);

/// JSON manifest {seed, k_prime, n, distinguished: [...], sample: [...]}.
void save_sample_manifest(const MMRSSample & s, const std::filesystem::path & path);
MMRSSample load_sample_manifest(const std::filesystem::path & path);

/// splitmix64 finalizer; derives independent seeds for substreams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace tcv

#endif  // TCV_MMRS_HPP_
