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

#ifndef TCV_MARKOV_HPP_
#define TCV_MARKOV_HPP_

#include "tcv/common.hpp"
#include "tcv/trajectory.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace tcv
{

using Count = std::uint64_t;

/// Trajectory-level transition statistics: each trajectory adds at most one to
/// any pair count and to any pass count.
struct TransitionCounts
{
  std::map<std::pair<EdgeId, EdgeId>, Count> pairs;  // #(R_i, R_j)
  std::map<EdgeId, Count> pass;                      // #(R_i)
  std::map<EdgeId, Count> origin;                    // trajectories starting at R_i
  std::size_t trajectories = 0;

  Count pair(EdgeId from, EdgeId to) const;
  Count passes(EdgeId e) const;
  Count origins(EdgeId e) const;

  /// Outgoing (to, count) pairs of `from`, ascending by `to`.
  std::vector<std::pair<EdgeId, Count>> row(EdgeId from) const;

  bool operator==(const TransitionCounts &) const = default;
};

struct Transition
{
  EdgeId to = 0;
  double probability = 0.0;

  bool operator==(const Transition &) const = default;
};

/// Sparse transition probabilities p_ij = #(R_i, R_j) / #(R_i). Every segment
/// seen in training owns a row, possibly empty (termination mass 1). Rows are
/// sub-stochastic and are never renormalized.
class TransitionMatrix
{
public:
  TransitionMatrix() = default;

  double probability(EdgeId from, EdgeId to) const;
  bool has_row(EdgeId from) const;
  std::span<const Transition> row(EdgeId from) const;
  const std::map<EdgeId, std::vector<Transition>> & rows() const { return rows_; }

  void set_row(EdgeId from, std::vector<Transition> row);

  bool operator==(const TransitionMatrix &) const = default;

private:
  std::map<EdgeId, std::vector<Transition>> rows_;
};

TransitionCounts build_counts(std::span<const Trajectory> trajs);
TransitionCounts build_counts(std::span<const Trajectory * const> trajs);

TransitionMatrix to_probabilities(const TransitionCounts & w);

/// Product of M[T_j][T_j+1] over consecutive pairs (0 when any is missing). A
/// single segment scores 1 when the segment was observed, else 0.
double path_probability(const TransitionMatrix & m, std::span<const EdgeId> segments);
double path_probability(const TransitionMatrix & m, const Trajectory & t);

/// argmax_j M[current][j], lowest id on ties; nullopt when the row is absent
/// or empty.
std::optional<EdgeId> next_location(const TransitionMatrix & m, EdgeId current);

/// Triplet list [[i, j, count], ...] in key order.
std::vector<std::array<std::uint64_t, 3>> to_triplets(const TransitionCounts & w);

}  // namespace tcv

#endif  // TCV_MARKOV_HPP_
