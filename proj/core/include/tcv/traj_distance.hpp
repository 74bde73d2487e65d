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

#ifndef TCV_TRAJ_DISTANCE_HPP_
#define TCV_TRAJ_DISTANCE_HPP_

#include "tcv/road_network.hpp"
#include "tcv/trajectory.hpp"

#include <filesystem>
#include <span>
#include <vector>

namespace tcv
{

enum class DistanceMode : std::uint8_t
{
  kDirectional = 0,
  kNonDirectional = 1,
};

/// Dense symmetric trajectory-to-trajectory dissimilarity matrix (km).
class DistanceMatrix
{
public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n, DistanceMode mode = DistanceMode::kDirectional)
  : n_(n), mode_(mode), entries_(n * n, 0.0)
  {
  }
  DistanceMatrix(std::size_t n, std::vector<double> entries, DistanceMode mode = DistanceMode::kDirectional);

  std::size_t size() const { return n_; }
  DistanceMode mode() const { return mode_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  double & operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
  const std::vector<double> & entries() const { return entries_; }

  bool operator==(const DistanceMatrix &) const = default;

private:
  std::size_t n_ = 0;
  DistanceMode mode_ = DistanceMode::kDirectional;
  std::vector<double> entries_;
};

/// Sakoe-Chiba half-width used by traj_dtw: max(1, ceil(min(l1, l2) / 2)).
std::size_t dtw_window(std::size_t l1, std::size_t l2);

/// Whether cell (i, j) (0-based) lies inside the band around the
/// length-normalized diagonal. Symmetric under swapping the two sequences.
bool dtw_cell_in_band(std::size_t i, std::size_t j, std::size_t l1, std::size_t l2);

/// Windowed DTW with local cost D[a[i]][b[j]] and steps (1,0), (0,1), (1,1),
/// anchored at both corners. Among paths of minimal accumulated cost the
/// shortest one is kept; the result is that cost divided by its path length.
double traj_dtw(std::span<const EdgeId> a, std::span<const EdgeId> b, const SegmentDistanceMatrix & d);
double traj_dtw(const Trajectory & a, const Trajectory & b, const SegmentDistanceMatrix & d);

/// min(traj_dtw(a, b), traj_dtw(a, reverse(b))).
double nd_traj_dtw(std::span<const EdgeId> a, std::span<const EdgeId> b, const SegmentDistanceMatrix & d);
double nd_traj_dtw(const Trajectory & a, const Trajectory & b, const SegmentDistanceMatrix & d);

double traj_distance(const Trajectory & a, const Trajectory & b, const SegmentDistanceMatrix & d, DistanceMode mode);

/// Entries (i, j) for i < j are computed in parallel and mirrored.
DistanceMatrix pairwise_matrix(
  std::span<const Trajectory> trajs, const SegmentDistanceMatrix & d, DistanceMode mode);
DistanceMatrix pairwise_matrix(
  std::span<const Trajectory * const> trajs, const SegmentDistanceMatrix & d, DistanceMode mode);

// Binary layout: "TCVN", u32 version, u32 n, u8 mode, n*n little-endian f64.
void save_distance_matrix(const DistanceMatrix & m, const std::filesystem::path & path);
DistanceMatrix load_distance_matrix(const std::filesystem::path & path);

}  // namespace tcv

#endif  // TCV_TRAJ_DISTANCE_HPP_
