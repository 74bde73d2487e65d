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

#ifndef TCV_PREDICTOR_HPP_
#define TCV_PREDICTOR_HPP_

#include "tcv/pipeline.hpp"
#include "tcv/road_network.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tcv
{

struct PredictionRequest
{
  std::vector<EdgeId> partial;
  std::size_t steps = 1;
  std::size_t lambda_window = 3;  // kUnbounded = whole history
};

struct PredictionResult
{
  std::vector<EdgeId> predicted;
  std::vector<std::size_t> cluster_trace;  // cluster / component / path chosen per step
  bool truncated = false;
  std::string reason;

  bool operator==(const PredictionResult &) const = default;
};

/// Common surface of Traj-clusiVAT and the baselines, so that the evaluation
/// harness drives every method through the same loop.
class RoutePredictor
{
public:
  virtual ~RoutePredictor() = default;
  virtual std::string method() const = 0;
  virtual PredictionResult predict(std::span<const EdgeId> partial, std::size_t steps) const = 0;
};

/// Greedy m-step loop shared by all methods: pick a group from the latest
/// lambda segments, take that group's argmax successor of the last segment,
/// fall back to `fallback_next`, stop with truncated = true at a dead end.
struct StepPolicy
{
  std::function<std::size_t(std::span<const EdgeId> window, bool window_is_whole)> select;
  std::function<std::optional<EdgeId>(std::size_t group, EdgeId current)> next;
  std::function<std::optional<EdgeId>(EdgeId current)> fallback_next;
};
PredictionResult sequential_predict(
  std::span<const EdgeId> partial, std::size_t steps, std::size_t lambda_window, const StepPolicy & policy);

/// Traj-clusiVAT route prediction: hybrid NPR on the latest lambda segments,
/// Most likely successor in the chosen cluster, global chain on dead ends.
PredictionResult predict(
  const TrainedModel & model, const SegmentDistanceMatrix & d, const PredictionRequest & req);

class ClusivatPredictor : public RoutePredictor
{
public:
  ClusivatPredictor(const TrainedModel & model, const SegmentDistanceMatrix & d, std::size_t lambda_window)
  : model_(model), d_(d), lambda_(lambda_window)
  {
  }
  std::string method() const override { return "traj-clusivat"; }
  PredictionResult predict(std::span<const EdgeId> partial, std::size_t steps) const override;

private:
  const TrainedModel & model_;
  const SegmentDistanceMatrix & d_;
  std::size_t lambda_;
};

}  // namespace tcv

#endif  // TCV_PREDICTOR_HPP_
