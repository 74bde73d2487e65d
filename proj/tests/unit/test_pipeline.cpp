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

#include "support/walkthrough.hpp"
#include "tcv/evaluation.hpp"
#include "tcv/parallel.hpp"
#include "tcv/synthgen.hpp"

#include <gtest/gtest.h>

#include <set>

namespace tcv
{
namespace
{

using testing::traj;

std::set<std::set<TrajectoryId>> partition_of(const TrainedModel & m)
{
  std::set<std::set<TrajectoryId>> out;
  for (const auto & c : m.clusters) {
    out.insert(std::set<TrajectoryId>(c.members.begin(), c.members.end()));
  }
  return out;
}

TEST(Config, Validation)
{
  PipelineConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.stage2_alpha(), cfg.alpha_stage1);
  auto bad = cfg;
  bad.n = 10;
  bad.k_prime = 20;
  EXPECT_THROW(bad.validate(), DataError);
  bad = cfg;
  bad.min_t = 0.0;
  EXPECT_THROW(bad.validate(), DataError);
  bad = cfg;
  bad.alpha_stage2 = -1.0;
  EXPECT_THROW(bad.validate(), DataError);
  bad = cfg;
  bad.lambda_window = 0;
  EXPECT_THROW(bad.validate(), DataError);
  bad = cfg;
  bad.cut_mode = CutMode::kK;
  EXPECT_THROW(bad.validate(), DataError);
  bad.k = 4;
  EXPECT_NO_THROW(bad.validate());
}

TEST(Config, JsonRoundTripAndUnknownKeys)
{
  PipelineConfig cfg;
  cfg.alpha_stage2 = 0.7;
  cfg.lambda_window = kUnbounded;
  cfg.cut_mode = CutMode::kK;
  cfg.k = 3;
  EXPECT_EQ(config_from_json(config_to_json(cfg)), cfg);
  EXPECT_EQ(config_from_json(R"({"alpha": 2.5, "lambda": "inf"})").alpha_stage1, 2.5);
  EXPECT_EQ(config_from_json(R"({"lambda": "inf"})").lambda_window, kUnbounded);
  EXPECT_THROW(config_from_json(R"({"alpah": 1})"), DataError);
  EXPECT_THROW(config_from_json("not json"), DataError);
}

TEST(DirectionalSplit, PairSplitsOnlyWhenReversed)
{
  const auto net = testing::toy4();
  const auto d = all_pairs_segment_distances(net);
  const auto a = traj(1, {0, 1, 2});
  const auto b = traj(2, {2, 1, 0});
  const auto c = traj(3, {0, 1});
  const std::vector<const Trajectory *> opposite{&a, &b};
  const std::vector<const Trajectory *> same{&a, &c};
  EXPECT_EQ(directional_split(opposite, d, 1.0), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(directional_split(same, d, 1.0), (std::vector<std::size_t>{0, 0}));
  const std::vector<const Trajectory *> one{&a};
  EXPECT_EQ(directional_split(one, d, 1.0), (std::vector<std::size_t>{0}));
}

TEST(Pipeline, NineTrajectoryWalkthrough)
{
  const testing::WalkthroughFixture fx;
  const auto r = fx.train();
  EXPECT_EQ(r.model.k_nondirectional, 4u);
  EXPECT_EQ(r.model.K(), 6u);
  const std::set<std::set<TrajectoryId>> expected{{1, 2, 3}, {4}, {5}, {6, 8}, {7}, {9}};
  EXPECT_EQ(partition_of(r.model), expected);
  EXPECT_EQ(r.diagnostics.assigned_by_probability, 3u);
  EXPECT_EQ(r.diagnostics.stage1_ivat.size(), 6u);
  for (std::size_t c = 0; c < r.model.K(); ++c) {
    EXPECT_EQ(r.model.clusters[c].cluster_id, c);
  }
  const auto labels = membership_labels(r.model, fx.ds);
  EXPECT_EQ(labels[0], labels[1]);
  EXPECT_EQ(labels[0], labels[2]);
  EXPECT_NE(labels[0], labels[3]);
  EXPECT_EQ(labels[5], labels[7]);
}

TEST(Pipeline, WalkthroughIsThreadInvariant)
{
  const testing::WalkthroughFixture fx;
  set_thread_count(1);
  const auto a = fx.train();
  set_thread_count(4);
  const auto b = fx.train();
  set_thread_count(0);
  EXPECT_EQ(a.model, b.model);
}

TEST(Pipeline, SingleRouteGivesOneCluster)
{
  const auto net = testing::toy4();
  const auto d = all_pairs_segment_distances(net);
  std::vector<Trajectory> ts;
  for (int i = 0; i < 12; ++i) ts.push_back(traj(i, {0, 1, 2}));
  const auto ds = testing::dataset(ts, net);
  PipelineConfig cfg;
  cfg.k_prime = 3;
  cfg.n = 8;
  cfg.min_len = 2;
  const auto r = train(ds, net, d, cfg);
  EXPECT_EQ(r.model.K(), 1u);
  EXPECT_EQ(r.model.clusters[0].members.size(), 12u);
  EXPECT_EQ(r.model.clusters[0].rt.segments, (std::vector<EdgeId>{0, 1, 2}));
}

TEST(Pipeline, RejectsUndersizedDatasetAndForeignNetwork)
{
  const auto net = testing::toy4();
  const auto d = all_pairs_segment_distances(net);
  const auto ds = testing::dataset({traj(1, {0, 1}), traj(2, {1, 2})}, net);
  PipelineConfig cfg;
  cfg.k_prime = 2;
  cfg.n = 3;
  EXPECT_THROW(train(ds, net, d, cfg), DataError);
  auto foreign = ds;
  foreign.network_ref = "elsewhere";
  cfg.n = 2;
  EXPECT_THROW(train(foreign, net, d, cfg), DataError);
}

TEST(Pipeline, RecoversSyntheticPatterns)
{
  GeneratorSpec spec;
  spec.rows = 10;
  spec.cols = 10;
  spec.direction_mix = 0.0;
  spec.seed = 3;
  spec.patterns = {
    {expand_waypoints(10, {{0, 0}, {0, 9}}), 60},
    {expand_waypoints(10, {{9, 0}, {9, 9}}), 60},
    {expand_waypoints(10, {{1, 0}, {8, 0}}), 60},
    {expand_waypoints(10, {{1, 9}, {8, 9}}), 60},
  };
  const auto net = make_grid_network(spec.rows, spec.cols, spec.spacing_deg);
  const auto d = all_pairs_segment_distances(net);
  const auto gen = generate(spec, net);
  PipelineConfig cfg;
  cfg.k_prime = 20;
  cfg.n = 60;
  cfg.alpha_stage1 = 2.0;
  const auto r = train(gen.dataset, net, d, cfg);
  EXPECT_EQ(r.model.K(), 4u);
  std::vector<std::size_t> truth;
  for (const auto & l : gen.labels) truth.push_back(l.pattern);
  EXPECT_DOUBLE_EQ(adjusted_rand_index(membership_labels(r.model, gen.dataset), truth), 1.0);
}

}  // namespace
}  // namespace tcv
