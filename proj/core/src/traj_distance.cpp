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

#include "tcv/traj_distance.hpp"

#include "tcv/parallel.hpp"
#include "binary_io.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>

namespace tcv
{

namespace
{

constexpr std::uint32_t kMatrixFileVersion = 1;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Cell
{
  double cost = kInf;
  std::uint32_t len = 0;
};

inline bool better(const Cell & x, const Cell & y)
{
  return x.cost < y.cost || (x.cost == y.cost && x.len < y.len);
}

// Inclusive column range of row i inside the band.
inline std::pair<std::size_t, std::size_t> band_columns(std::size_t i, std::size_t l1, std::size_t l2)
{
  const auto L1 = static_cast<std::int64_t>(l1 - 1);
  const auto L2 = static_cast<std::int64_t>(l2 - 1);
  if (L1 == 0) {
    return {0, l2 - 1};
  }
  const auto slack = static_cast<std::int64_t>(dtw_window(l1, l2)) * std::max(L1, L2);
  const std::int64_t centre = static_cast<std::int64_t>(i) * L2;
  const std::int64_t lo_num = centre - slack;
  const std::int64_t hi_num = centre + slack;
  // ceil / floor division for possibly negative numerators.
  std::int64_t lo = lo_num >= 0 ? (lo_num + L1 - 1) / L1 : -((-lo_num) / L1);
  std::int64_t hi = hi_num >= 0 ? hi_num / L1 : -((-hi_num + L1 - 1) / L1);
  lo = std::max<std::int64_t>(lo, 0);
  hi = std::min<std::int64_t>(hi, L2);
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

void check_ids(std::span<const EdgeId> s, const SegmentDistanceMatrix & d)
{
  for (EdgeId e : s) {
    if (e >= d.size()) {
      throw DataError(
        "edge id " + std::to_string(e) + " outside the segment distance matrix (size " + std::to_string(d.size()) +
        ")");
    }
  }
}

// b is read back to front when `reversed` is set.
double dtw_impl(std::span<const EdgeId> a, std::span<const EdgeId> b, bool reversed, const SegmentDistanceMatrix & d)
{
  const std::size_t l1 = a.size();
  const std::size_t l2 = b.size();
  if (l1 == 0 || l2 == 0) {
    throw DataError("traj_dtw requires non-empty trajectories");
  }
  thread_local std::vector<Cell> grid;
  grid.assign(l1 * l2, Cell{});
  auto at = [&](std::size_t i, std::size_t j) -> Cell & { return grid[i * l2 + j]; };
  auto b_at = [&](std::size_t j) { return reversed ? b[l2 - 1 - j] : b[j]; };

  for (std::size_t i = 0; i < l1; ++i) {
    const double * cost_row = d.row(a[i]);
    const auto [lo, hi] = band_columns(i, l1, l2);
    for (std::size_t j = lo; j <= hi; ++j) {
      const double c = cost_row[b_at(j)];
      if (i == 0 && j == 0) {
        at(0, 0) = {c, 1};
        continue;
      }
      Cell best;
      if (i > 0 && j > 0 && at(i - 1, j - 1).len > 0) {
        best = at(i - 1, j - 1);
      }
      if (i > 0 && at(i - 1, j).len > 0 && better(at(i - 1, j), best)) {
        best = at(i - 1, j);
      }
      if (j > 0 && at(i, j - 1).len > 0 && better(at(i, j - 1), best)) {
        best = at(i, j - 1);
      }
      if (best.len > 0) {
        at(i, j) = {best.cost + c, best.len + 1};
      }
    }
  }
  const Cell & end = at(l1 - 1, l2 - 1);
  // The band always contains a monotone corner-to-corner path (half-width >= 1
  // around a diagonal of slope <= 1 in the shorter axis).
  return end.cost / static_cast<double>(end.len);
}

}  // namespace

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> entries, DistanceMode mode)
: n_(n), mode_(mode), entries_(std::move(entries))
{
  if (entries_.size() != n_ * n_) {
    throw DataError("distance matrix has wrong number of entries");
  }
}

std::size_t dtw_window(std::size_t l1, std::size_t l2)
{
  const std::size_t shorter = std::min(l1, l2);
  return std::max<std::size_t>(1, (shorter + 1) / 2);
}

bool dtw_cell_in_band(std::size_t i, std::size_t j, std::size_t l1, std::size_t l2)
{
  if (i >= l1 || j >= l2) {
    return false;
  }
  const auto L1 = static_cast<std::int64_t>(l1 - 1);
  const auto L2 = static_cast<std::int64_t>(l2 - 1);
  const std::int64_t lhs = static_cast<std::int64_t>(i) * L2 - static_cast<std::int64_t>(j) * L1;
  const std::int64_t slack = static_cast<std::int64_t>(dtw_window(l1, l2)) * std::max(L1, L2);
  return (lhs < 0 ? -lhs : lhs) <= slack;
}

double traj_dtw(std::span<const EdgeId> a, std::span<const EdgeId> b, const SegmentDistanceMatrix & d)
{
  check_ids(a, d);
  check_ids(b, d);
  return dtw_impl(a, b, false, d);
}

double traj_dtw(const Trajectory & a, const Trajectory & b, const SegmentDistanceMatrix & d)
{
  return traj_dtw(std::span<const EdgeId>(a.segments), std::span<const EdgeId>(b.segments), d);
}

double nd_traj_dtw(std::span<const EdgeId> a, std::span<const EdgeId> b, const SegmentDistanceMatrix & d)
{
  check_ids(a, d);
  check_ids(b, d);
  const double forward = dtw_impl(a, b, false, d);
  if (forward == 0.0) {
    return 0.0;
  }
  return std::min(forward, dtw_impl(a, b, true, d));
}

double nd_traj_dtw(const Trajectory & a, const Trajectory & b, const SegmentDistanceMatrix & d)
{
  return nd_traj_dtw(std::span<const EdgeId>(a.segments), std::span<const EdgeId>(b.segments), d);
}

double traj_distance(const Trajectory & a, const Trajectory & b, const SegmentDistanceMatrix & d, DistanceMode mode)
{
  return mode == DistanceMode::kDirectional ? traj_dtw(a, b, d) : nd_traj_dtw(a, b, d);
}

DistanceMatrix pairwise_matrix(
  std::span<const Trajectory * const> trajs, const SegmentDistanceMatrix & d, DistanceMode mode)
{
  if (trajs.empty()) {
    throw DataError("pairwise_matrix needs at least one trajectory");
  }
  const std::size_t n = trajs.size();
  DistanceMatrix m(n, mode);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      m(i, j) = traj_distance(*trajs[i], *trajs[j], d, mode);
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      m(j, i) = m(i, j);
    }
  }
  return m;
}

DistanceMatrix pairwise_matrix(std::span<const Trajectory> trajs, const SegmentDistanceMatrix & d, DistanceMode mode)
{
  std::vector<const Trajectory *> ptrs;
  ptrs.reserve(trajs.size());
  for (const auto & t : trajs) {
    ptrs.push_back(&t);
  }
  return pairwise_matrix(std::span<const Trajectory * const>(ptrs), d, mode);
}

void save_distance_matrix(const DistanceMatrix & m, const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write distance matrix " + path.string());
  }
  detail::write_magic(out, "TCVN");
  detail::write_u32(out, kMatrixFileVersion);
  detail::write_u32(out, static_cast<std::uint32_t>(m.size()));
  const auto mode = static_cast<char>(m.mode());
  out.write(&mode, 1);
  detail::write_f64_array(out, m.entries());
}

DistanceMatrix load_distance_matrix(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot read distance matrix " + path.string());
  }
  detail::expect_magic(in, "TCVN", path);
  const std::uint32_t version = detail::read_u32(in);
  if (version != kMatrixFileVersion) {
    throw DataError("unsupported distance matrix version " + std::to_string(version));
  }
  const std::size_t n = detail::read_u32(in);
  char mode = 0;
  in.read(&mode, 1);
  if (!in || (mode != 0 && mode != 1)) {
    throw DataError("bad distance mode byte in " + path.string());
  }
  auto entries = detail::read_f64_array(in, n * n);
  return DistanceMatrix(n, std::move(entries), static_cast<DistanceMode>(mode));
}

}  // namespace tcv
