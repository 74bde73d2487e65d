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

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "tcv/geo.hpp"
#include "tcv/parallel.hpp"
#include "tcv/road_network.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

namespace tcv
{
namespace
{

using testing::kToyStep;

TEST(Haversine, IdenticalPointsAreZero) { EXPECT_EQ(haversine_km({0, 0}, {0, 0}), 0.0); }

TEST(Haversine, HundredthDegreeOnEquator)
{
  EXPECT_NEAR(haversine_km({0, 0}, {0, 0.01}), 1.11195, 1e-4);
  EXPECT_NEAR(haversine_km({0, 0}, {0, 1}), 111.195, 1e-2);
}

TEST(Haversine, IsSymmetric)
{
  const LatLon p{1.3, 103.8};
  const LatLon q{1.35, 103.9};
  EXPECT_DOUBLE_EQ(haversine_km(p, q), haversine_km(q, p));
}

TEST(RoadNetwork, Toy4Loads)
{
  const auto net = testing::toy4();
  EXPECT_EQ(net.node_count(), 4u);
  EXPECT_EQ(net.edge_count(), 3u);
  for (const auto & e : net.edges()) {
    EXPECT_NEAR(e.length_km, 1.11195, 1e-4);
  }
}

TEST(RoadNetwork, DanglingEndpointRejected)
{
  const std::string text =
    R"({"nodes":[{"id":0,"lat":0,"lon":0},{"id":1,"lat":0,"lon":0.01},{"id":2,"lat":0,"lon":0.02},)"
    R"({"id":3,"lat":0,"lon":0.03}],"edges":[{"id":0,"a":0,"b":99}]})";
  EXPECT_THROW(parse_network_json(text), DataError);
}

TEST(RoadNetwork, EmptyEdgeListRejected)
{
  try {
    parse_network_json(R"({"nodes":[{"id":0,"lat":0,"lon":0}],"edges":[]})");
    FAIL() << "expected an error";
  } catch (const DataError & e) {
    EXPECT_NE(std::string(e.what()).find("no segments"), std::string::npos);
  }
}

TEST(RoadNetwork, MalformedJsonRejected) { EXPECT_THROW(parse_network_json("{nodes"), DataError); }

TEST(RoadNetwork, ExplicitLengthIsKept)
{
  const auto net = parse_network_json(
    R"({"nodes":[{"id":0,"lat":0,"lon":0},{"id":1,"lat":0,"lon":0.01}],"edges":[{"id":0,"a":0,"b":1,"length_km":2.5}]})");
  EXPECT_DOUBLE_EQ(net.edge(0).length_km, 2.5);
}

TEST(RoadNetwork, AdjacentSegments)
{
  const auto net = testing::toy4();
  const auto a1 = net.adjacent_segments(1);
  EXPECT_EQ(std::vector<EdgeId>(a1.begin(), a1.end()), (std::vector<EdgeId>{0, 2}));
  const auto a0 = net.adjacent_segments(0);
  EXPECT_EQ(std::vector<EdgeId>(a0.begin(), a0.end()), (std::vector<EdgeId>{1}));
  EXPECT_THROW(net.adjacent_segments(7), DataError);

  const auto single = parse_network_json(
    R"({"nodes":[{"id":0,"lat":0,"lon":0},{"id":1,"lat":0,"lon":0.01}],"edges":[{"id":0,"a":0,"b":1}]})");
  EXPECT_TRUE(single.adjacent_segments(0).empty());
}

TEST(RoadNetwork, SaveLoadRoundTrip)
{
  const auto net = testing::toy4();
  const auto path = std::filesystem::temp_directory_path() / "tcv_toy4_roundtrip.json";
  save_network(net, path);
  const auto back = load_network(path);
  EXPECT_EQ(back.fingerprint(), net.fingerprint());
  std::filesystem::remove(path);
}

TEST(SegmentDistances, Toy4HandValues)
{
  const auto d = all_pairs_segment_distances(testing::toy4());
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d(0, 0), 0.0);
  EXPECT_NEAR(d(0, 1), kToyStep, 1e-9);
  EXPECT_NEAR(d(0, 2), 2 * kToyStep, 1e-9);
  EXPECT_EQ(d(2, 0), d(0, 2));
}

TEST(SegmentDistances, DisconnectedNetworkNamesPair)
{
  const auto net = parse_network_json(
    R"({"nodes":[{"id":0,"lat":0,"lon":0},{"id":1,"lat":0,"lon":0.01},{"id":2,"lat":1,"lon":0},{"id":3,"lat":1,"lon":0.01}],)"
    R"("edges":[{"id":0,"a":0,"b":1},{"id":1,"a":2,"b":3}]})");
  EXPECT_FALSE(net.is_connected());
  try {
    all_pairs_segment_distances(net);
    FAIL() << "expected an error";
  } catch (const DataError & e) {
    EXPECT_NE(std::string(e.what()).find("unreachable"), std::string::npos) << e.what();
  }
}

TEST(SegmentDistances, MatchesMidpointFloydWarshall)
{
  std::mt19937_64 rng(11);
  for (int round = 0; round < 10; ++round) {
    const auto net = testing::random_network(rng, 8 + rng() % 6, 12 + rng() % 12);
    const auto d = all_pairs_segment_distances(net);
    const auto fw = oracle::midpoint_floyd_warshall(net);
    for (EdgeId i = 0; i < net.edge_count(); ++i) {
      for (EdgeId j = 0; j < net.edge_count(); ++j) {
        ASSERT_NEAR(d(i, j), fw[i][j], 1e-9);
      }
    }
  }
}

TEST(SegmentDistances, ThreadCountInvariant)
{
  std::mt19937_64 rng(5);
  const auto net = testing::random_network(rng, 20, 40);
  set_thread_count(1);
  const auto a = all_pairs_segment_distances(net);
  set_thread_count(4);
  const auto b = all_pairs_segment_distances(net);
  set_thread_count(0);
  EXPECT_EQ(a.entries(), b.entries());
}

TEST(SegmentDistances, BinaryRoundTripAndBadMagic)
{
  const auto d = all_pairs_segment_distances(testing::toy4());
  const auto path = std::filesystem::temp_directory_path() / "tcv_toy4.dall";
  save_segment_distances(d, path);
  EXPECT_EQ(load_segment_distances(path).entries(), d.entries());
  {
    std::ofstream out(path, std::ios::binary);
    out << "NOPE0000";
  }
  EXPECT_THROW(load_segment_distances(path), DataError);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace tcv
