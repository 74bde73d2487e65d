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

#ifndef TCV_VAT_HPP_
#define TCV_VAT_HPP_

#include "tcv/traj_distance.hpp"

#include <filesystem>
#include <vector>

namespace tcv
{

struct MstEdge
{
  std::size_t from = 0;  // original index of the already-visited endpoint
  std::size_t to = 0;    // original index of the newly attached object
  double magnitude = 0.0;
};

/// VAT reordering produced by Prim's algorithm.
struct VATResult
{
  std::vector<std::size_t> permutation;  // visitation order (original indices)
  DistanceMatrix reordered;              // reordered(i, j) = D(perm[i], perm[j])
  std::vector<MstEdge> mst_edges;        // insertion order
  std::vector<double> cut_magnitudes;    // mst_edges[z].magnitude

  std::size_t size() const { return permutation.size(); }
};

/// Starts from the object in a maximum entry of `d` (lowest index on ties) and
/// repeatedly attaches the unvisited object closest to the visited set (lowest
/// index on ties). Rejects asymmetric or negative input and n < 2.
VATResult vat(const DistanceMatrix & d);

/// Min-max path distance in VAT order: entry (i, j) is the smallest possible
/// largest hop on any path between perm[i] and perm[j].
DistanceMatrix ivat(const VATResult & v);

/// Removes the k-1 largest MST edges (earliest insertion on ties). Labels are
/// aligned to original indices and numbered by first appearance in VAT order.
std::vector<std::size_t> cut_k(const VATResult & v, std::size_t k);

/// Removes every MST edge with magnitude > alpha * mean(all MST magnitudes).
std::vector<std::size_t> cut_alpha(const VATResult & v, double alpha);

std::size_t cluster_count(const std::vector<std::size_t> & labels);

/// 8-bit binary PGM of the matrix, min-max scaled (0 = smallest entry).
void write_pgm(const DistanceMatrix & m, const std::filesystem::path & path);
void write_matrix_csv(const DistanceMatrix & m, const std::filesystem::path & path);

}  // namespace tcv

#endif  // TCV_VAT_HPP_
