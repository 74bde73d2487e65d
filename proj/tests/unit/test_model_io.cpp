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
#include "tcv/model_io.hpp"
#include "tcv/synthgen.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

namespace tcv
{
namespace
{

class ModelFiles : public ::testing::Test
{
protected:
  testing::WalkthroughFixture fx;
  std::filesystem::path dir = std::filesystem::temp_directory_path() / "tcv_model_io";

  void SetUp() override
  {
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
  }
  void TearDown() override { std::filesystem::remove_all(dir); }
};

TEST_F(ModelFiles, WalkthroughModelRoundTrip)
{
  const auto model = fx.train().model;
  EXPECT_EQ(deserialize_model(serialize_model(model)), model);
  save_model(model, dir / "m.json");
  EXPECT_EQ(load_model(dir / "m.json"), model);
  EXPECT_EQ(serialize_model(load_model(dir / "m.json")), serialize_model(model));
}

TEST_F(ModelFiles, BaselineModelsRoundTrip)
{
  const auto global = global_mm_train(fx.ds);
  MmmParams mp;
  mp.components = 2;
  const auto mmm = mmm_train(fx.ds, fx.net, mp);
  const auto netscan = netscan_train(fx.ds, fx.net, fx.d, {1, 1, 3});
  for (const AnyModel & m : {AnyModel(global), AnyModel(mmm), AnyModel(netscan)}) {
    const auto back = deserialize_any_model(serialize_any_model(m));
    EXPECT_EQ(back, m) << method_tag(m);
    EXPECT_EQ(network_ref(back), fx.net.fingerprint());
  }
  EXPECT_EQ(method_tag(AnyModel(mmm)), "mmm");
}

TEST_F(ModelFiles, CorruptionIsDetected)
{
  const auto text = serialize_model(fx.train().model);
  auto tampered = text;
  const auto pos = tampered.find_first_of("0123456789", tampered.find("\"body\""));
  ASSERT_NE(pos, std::string::npos);
  tampered[pos] = tampered[pos] == '7' ? '8' : '7';
  EXPECT_THROW(deserialize_model(tampered), DataError);
  EXPECT_THROW(deserialize_model("TCVM garbage"), DataError);
  EXPECT_THROW(deserialize_model(""), DataError);
  std::ofstream(dir / "bad.json") << "{\"format\": \"something-else\"}\n";
  EXPECT_THROW(load_model(dir / "bad.json"), DataError);
  EXPECT_THROW(load_model(dir / "missing.json"), DataError);
}

TEST_F(ModelFiles, PredictorsFromAnyModel)
{
  const AnyModel model(fx.train().model);
  const auto p = make_predictor(model, fx.d, 3);
  EXPECT_EQ(p->method(), "traj-clusivat");
  const auto & t = fx.ds.trajectories[0];
  const auto [query, truth] = split_query_truth(t);
  EXPECT_EQ(p->predict(query.segments, truth.size()).predicted, truth.segments);
  const AnyModel global(global_mm_train(fx.ds));
  EXPECT_EQ(make_predictor(global, fx.d, 3)->method(), "global-mm");
}

}  // namespace
}  // namespace tcv
