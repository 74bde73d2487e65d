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

#include "tcv/mmrs.hpp"

#include "tcv/parallel.hpp"
#include "tcv/traj_distance.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace tcv
{

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream)
{
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

MaximinResult maximin(
  std::span<const Trajectory> trajs, std::size_t k_prime, const SegmentDistanceMatrix & d, std::uint64_t seed,
  std::optional<std::size_t> first)
{
  const std::size_t n = trajs.size();
  if (n == 0) {
    throw DataError("maximin on an empty population");
  }
  if (k_prime == 0 || k_prime > n) {
    throw DataError(
      "k_prime (" + std::to_string(k_prime) + ") must lie in [1, N] with N = " + std::to_string(n));
  }
  std::size_t pick = 0;
  if (first) {
    if (*first >= n) {
      throw DataError("first maximin pick out of range");
    }
    pick = *first;
  } else {
    std::mt19937_64 rng(seed);
    pick = static_cast<std::size_t>(rng() % n);
  }

  MaximinResult r;
  r.min_distance.assign(n, std::numeric_limits<double>::infinity());
  r.group_of.assign(n, 0);
  std::vector<char> picked(n, 0);
  std::vector<double> fresh(n, 0.0);
  r.pick_radius.push_back(std::numeric_limits<double>::infinity());

  for (std::size_t round = 0; round < k_prime; ++round) {
    r.picks.push_back(pick);
    picked[pick] = 1;
    const Trajectory & anchor = trajs[pick];
    parallel_for(n, [&](std::size_t i) { fresh[i] = nd_traj_dtw(trajs[i], anchor, d); });
    r.distance_evaluations += n;
    for (std::size_t i = 0; i < n; ++i) {
      if (fresh[i] < r.min_distance[i]) {
        r.min_distance[i] = fresh[i];
        r.group_of[i] = round;
      }
    }
    r.group_of[pick] = round;
    r.min_distance[pick] = 0.0;
    if (round + 1 == k_prime) {
      break;
    }
    std::size_t next = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!picked[i] && (next == n || r.min_distance[i] > r.min_distance[next])) {
        next = i;
      }
    }
    r.pick_radius.push_back(r.min_distance[next]);
    pick = next;
  }
  return r;
}

std::vector<std::size_t> group_by_nearest(
  std::span<const Trajectory> trajs, std::span<const std::size_t> distinguished, const SegmentDistanceMatrix & d)
{
  if (distinguished.empty()) {
    throw DataError("group_by_nearest needs at least one distinguished object");
  }
  std::vector<std::size_t> group(trajs.size(), 0);
  parallel_for(trajs.size(), [&](std::size_t i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < distinguished.size(); ++g) {
      if (distinguished[g] == i) {
        group[i] = g;
        return;
      }
    }
    for (std::size_t g = 0; g < distinguished.size(); ++g) {
      const double dist = nd_traj_dtw(trajs[i], trajs[distinguished[g]], d);
      if (dist < best) {
        best = dist;
        group[i] = g;
      }
    }
  });
  return group;
}

std::vector<std::size_t> proportional_quotas(std::span<const std::size_t> group_sizes, std::size_t n)
{
  const std::size_t groups = group_sizes.size();
  const std::size_t total = std::accumulate(group_sizes.begin(), group_sizes.end(), std::size_t{0});
  if (n > total) {
    throw DataError("sample size n exceeds the population");
  }
  if (n < groups) {
    throw DataError(
      "sample size n (" + std::to_string(n) + ") is smaller than k_prime (" + std::to_string(groups) +
      "); every distinguished member must be kept");
  }
  std::vector<double> exact(groups);
  std::vector<std::size_t> quota(groups);
  std::size_t assigned = 0;
  for (std::size_t g = 0; g < groups; ++g) {
    // Exact rational remainder via integer arithmetic keeps ties exact.
    exact[g] = static_cast<double>(n) * static_cast<double>(group_sizes[g]) / static_cast<double>(total);
    quota[g] = n * group_sizes[g] / total;
    assigned += quota[g];
  }
  std::vector<std::size_t> order(groups);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return (n * group_sizes[x]) % total > (n * group_sizes[y]) % total;
  });
  for (std::size_t k = 0; assigned < n; ++k) {
    ++quota[order[k]];
    ++assigned;
  }
  for (std::size_t g = 0; g < groups; ++g) {
    if (quota[g] > 0) {
      continue;
    }
    std::size_t donor = groups;
    for (std::size_t h = 0; h < groups; ++h) {
      if (quota[h] > 1 &&
          (donor == groups ||
           static_cast<double>(quota[h]) - exact[h] > static_cast<double>(quota[donor]) - exact[donor])) {
        donor = h;
      }
    }
    --quota[donor];
    quota[g] = 1;
  }
  return quota;
}

std::vector<std::size_t> proportional_sample(
  std::span<const std::size_t> group_of, std::span<const std::size_t> distinguished, std::size_t n,
  std::uint64_t seed)
{
  const std::size_t groups = distinguished.size();
  std::vector<std::vector<std::size_t>> members(groups);
  for (std::size_t i = 0; i < group_of.size(); ++i) {
    if (group_of[i] >= groups) {
      throw DataError("group index out of range");
    }
    members[group_of[i]].push_back(i);
  }
  std::vector<std::size_t> sizes(groups);
  for (std::size_t g = 0; g < groups; ++g) {
    sizes[g] = members[g].size();
  }
  const auto quota = proportional_quotas(sizes, n);

  std::vector<std::size_t> sample;
  sample.reserve(n);
  for (std::size_t g = 0; g < groups; ++g) {
    std::vector<std::size_t> others;
    others.reserve(members[g].size());
    for (std::size_t i : members[g]) {
      if (i != distinguished[g]) {
        others.push_back(i);
      }
    }
    std::mt19937_64 rng(mix_seed(seed, g));
    std::shuffle(others.begin(), others.end(), rng);
    sample.push_back(distinguished[g]);
    for (std::size_t k = 0; k + 1 < quota[g]; ++k) {
      sample.push_back(others[k]);
    }
  }
  std::sort(sample.begin(), sample.end());
  return sample;
}

MMRSSample mmrs_sample(
  std::span<const Trajectory> trajs, std::size_t k_prime, std::size_t n, const SegmentDistanceMatrix & d,
  std::uint64_t seed)
{
  if (n > trajs.size()) {
    throw DataError("sample size n exceeds the number of trajectories");
  }
  if (n < k_prime) {
    throw DataError("sample size n must be at least k_prime");
  }
  auto mm = maximin(trajs, k_prime, d, seed);
  MMRSSample s;
  s.seed = seed;
  s.k_prime = k_prime;
  s.n = n;
  s.sample = proportional_sample(mm.group_of, mm.picks, n, mix_seed(seed, 0xabcdef));
  s.distinguished = std::move(mm.picks);
  s.group_of = std::move(mm.group_of);
  return s;
}

void save_sample_manifest(const MMRSSample & s, const std::filesystem::path & path)
{
  nlohmann::json doc{
    {"seed", s.seed}, {"k_prime", s.k_prime}, {"n", s.n}, {"distinguished", s.distinguished},
    {"sample", s.sample}};
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
  out << doc.dump() << '\n';
}

MMRSSample load_sample_manifest(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot read " + path.string());
  }
  try {
    nlohmann::json doc = nlohmann::json::parse(in);
    MMRSSample s;
    s.seed = doc.at("seed").get<std::uint64_t>();
    s.k_prime = doc.at("k_prime").get<std::size_t>();
    s.n = doc.at("n").get<std::size_t>();
    s.distinguished = doc.at("distinguished").get<std::vector<std::size_t>>();
    s.sample = doc.at("sample").get<std::vector<std::size_t>>();
    return s;
  } catch (const nlohmann::json::exception & ex) {
    throw DataError(std::string("malformed sample manifest: ") + ex.what());
  }
}

}  // namespace tcv
