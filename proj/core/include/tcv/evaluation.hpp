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

#ifndef TCV_EVALUATION_HPP_
#define TCV_EVALUATION_HPP_

#include "tcv/predictor.hpp"
#include "tcv/road_network.hpp"
#include "tcv/trajectory.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tcv
{

/// Positionwise accuracy. Missing or extra positions count as wrong against
/// max(|pred|, |truth|).
double pa(std::span<const EdgeId> pred, std::span<const EdgeId> truth);

/// Mean midpoint distance in km. Positions the prediction does not reach are
/// measured from its last segment (or from `anchor` when it is empty).
double de(
  std::span<const EdgeId> pred, std::span<const EdgeId> truth, const RoadNetwork & net,
  std::optional<EdgeId> anchor = std::nullopt);

struct ScoredPair
{
  std::vector<EdgeId> pred;
  std::vector<EdgeId> truth;
};

/// Fraction of pairs predicted exactly.
double pr(std::span<const ScoredPair> results);

struct OneStep
{
  double oa = 0.0;
  double ode = 0.0;
};

/// Pooled one-step accuracy and mean one-step distance error.
OneStep one_step_metrics(std::span<const ScoredPair> results, const RoadNetwork & net);

double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b);

struct StepPoint
{
  std::size_t step = 0;
  double avg_pa = 0.0;
  double avg_de = 0.0;
  std::size_t support = 0;
};

struct EvalReport
{
  std::string method;
  double avg_pa = 0.0;
  double avg_de = 0.0;
  double pr = 0.0;  // ratio; written as percent
  double oa = 0.0;
  double ode = 0.0;
  std::vector<StepPoint> per_step;
  std::size_t n_test = 0;
  std::size_t n_truncated = 0;
  std::vector<std::size_t> predicted_length_histogram;  // index = predicted length
};

/// Splits each test trajectory into query and truth halves, predicts
/// min(|truth|, m_max) steps and aggregates. Writes summary.csv,
/// per_step.csv and length_histogram.csv when out_dir is non-empty.
EvalReport run_experiment(
  const RoutePredictor & predictor, const TrajectoryDataset & test, std::size_t m_max, const RoadNetwork & net,
  const std::filesystem::path & out_dir = {});

void write_summary_csv(const std::vector<EvalReport> & reports, const std::filesystem::path & path);
void write_per_step_csv(const EvalReport & report, const std::filesystem::path & path);
void write_length_histogram_csv(const EvalReport & report, const std::filesystem::path & path);

}  // namespace tcv

#endif  // TCV_EVALUATION_HPP_
