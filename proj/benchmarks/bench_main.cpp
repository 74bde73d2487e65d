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
#include "tcv/synthgen.hpp"
#include "tcv/traj_distance.hpp"

#include <benchmark/benchmark.h>

namespace
{

tcv::GeneratorSpec corpus_spec(std::size_t per_pattern)
{
tcv::GeneratorSpec spec;
  spec.truncation_prob = 0.3;
  spec.detour_prob = 0.2;
  spec.patterns = {
    {tcv::expand_waypoints(10, {{0, 0}, {0, 9}, {9, 9}}), per_pattern},
    {tcv::expand_waypoints(10, {{9, 0}, {5, 0}, {5, 9}}), per_pattern},
    {tcv::expand_waypoints(10, {{2, 2}, {2, 7}, {7, 7}}), per_pattern},
    {tcv::expand_waypoints(10, {{0, 4}, {9, 4}}), per_pattern},
    };
  return spec;
}

struct Corpus
{
  tcv::GeneratorSpec spec;
  tcv::RoadNetwork net;
  tcv::SegmentDistanceMatrix d;
  tcv::GeneratedData data;

  explicit Corpus(std::size_t per_pattern)
  : spec(corpus_spec(per_pattern)),
    net(tcv::make_grid_network(spec.rows, spec.cols, spec.spacing_deg)),
    d(tcv::all_pairs_segment_distances(net)),
    data(tcv::generate(spec, net))
  {
  }
};

const Corpus & corpus()
{
  static const Corpus c(250);
  return c;
}

void BM_SegmentDistances(benchmark::State & state)
{
  const auto net = tcv::make_grid_network(state.range(0), state.range(0), 0.01);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tcv::all_pairs_segment_distances(net));
  }
  state.SetLabel(std::to_string(net.edge_count()) + " segments");
}
BENCHMARK(BM_SegmentDistances)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_TrajDtw(benchmark::State & state)
{
  const auto & c = corpus();
  const auto & ts = c.data.dataset.trajectories;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tcv::nd_traj_dtw(ts[i % ts.size()], ts[(i * 7 + 3) % ts.size()], c.d));
    ++i;
  }
}
BENCHMARK(BM_TrajDtw);

void BM_PairwiseMatrix(benchmark::State & state)
{
  const auto & c = corpus();
  const std::span<const tcv::Trajectory> sample(c.data.dataset.trajectories.data(), state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(tcv::pairwise_matrix(sample, c.d, tcv::DistanceMode::kNonDirectional));
  }
}
BENCHMARK(BM_PairwiseMatrix)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_Train(benchmark::State & state)
{
  const auto & c = corpus();
  tcv::PipelineConfig cfg;
  cfg.k_prime = 50;
  cfg.n = 200;
  cfg.alpha_stage1 = 2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tcv::train(c.data.dataset, c.net, c.d, cfg));
  }
}
BENCHMARK(BM_Train)->Unit(benchmark::kMillisecond);

void BM_Predict(benchmark::State & state)
{
  const auto & c = corpus();
  tcv::PipelineConfig cfg;
  cfg.k_prime = 50;
  cfg.n = 200;
  cfg.alpha_stage1 = 2.0;
  const auto model = tcv::train(c.data.dataset, c.net, c.d, cfg).model;
  const auto & ts = c.data.dataset.trajectories;
  std::size_t i = 0;
  for (auto _ : state) {
    const auto query = tcv::split_query_truth(ts[i++ % ts.size()]).first;
    benchmark::DoNotOptimize(tcv::predict(model, c.d, {query.segments, 5, 3}));
  }
}
BENCHMARK(BM_Predict)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
