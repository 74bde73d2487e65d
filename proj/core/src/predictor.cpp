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

#include "tcv/predictor.hpp"

#include <algorithm>

namespace tcv
{

PredictionResult sequential_predict(
  std::span<const EdgeId> partial, std::size_t steps, std::size_t lambda_window, const StepPolicy & policy)
{
  if (partial.empty()) {
    throw DataError("prediction needs a non-empty partial trajectory");
  }
  if (steps == 0) {
    throw DataError("prediction needs at least one step");
  }
  if (lambda_window == 0) {
    throw DataError("lambda window must be >= 1");
  }
  std::vector<EdgeId> history(partial.begin(), partial.end());
  history.reserve(partial.size() + steps);
  PredictionResult result;
  for (std::size_t step = 0; step < steps; ++step) {
    const std::size_t w = std::min(lambda_window, history.size());
    const std::span<const EdgeId> window(history.data() + history.size() - w, w);
    const std::size_t group = policy.select(window, w == history.size());
    const EdgeId current = history.back();
    std::optional<EdgeId> next = policy.next(group, current);
    if (!next && policy.fallback_next) {
      next = policy.fallback_next(current);
    }
    if (!next) {
      result.truncated = true;
      result.reason = "dead end";
      break;
    }
    result.cluster_trace.push_back(group);
    result.predicted.push_back(*next);
    history.push_back(*next);
  }
  return result;
}

PredictionResult predict(const TrainedModel & model, const SegmentDistanceMatrix & d, const PredictionRequest & req)
{
  if (model.clusters.empty()) {
    throw DataError("model has no clusters");
  }
  for (EdgeId e : req.partial) {
    if (e >= d.size()) {
      throw DataError("partial trajectory contains unknown edge " + std::to_string(e));
    }
  }
  const std::span<const ClusterModel> clusters(model.clusters);
  StepPolicy policy{
    [&](std::span<const EdgeId> window, bool) { return hybrid_npr_assign(window, clusters, d).cluster_index; },
    [&](std::size_t c, EdgeId current) { return next_location(clusters[c].probs, current); },
    [&](EdgeId current) { return next_location(model.global_probs, current); },
  };
  return sequential_predict(req.partial, req.steps, req.lambda_window, policy);
}

PredictionResult ClusivatPredictor::predict(std::span<const EdgeId> partial, std::size_t steps) const
{
  return tcv::predict(model_, d_, PredictionRequest{{partial.begin(), partial.end()}, steps, lambda_});
}

}  // namespace tcv
