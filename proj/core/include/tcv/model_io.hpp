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

#ifndef TCV_MODEL_IO_HPP_
#define TCV_MODEL_IO_HPP_

#include "tcv/baselines.hpp"
#include "tcv/pipeline.hpp"
#include "tcv/predictor.hpp"

#include <filesystem>
#include <memory>
#include <string>
#include <variant>

namespace tcv
{

// Every model file is a JSON document tagged with its method, followed by a
// line "checksum fnv1a64 <hex>" over the JSON bytes.

using AnyModel = std::variant<TrainedModel, GlobalChainModel, NetscanModel, MmmModel>;

/// "clusivat", "global", "netscan" or "mmm".
std::string method_tag(const AnyModel & m);
const std::string & network_ref(const AnyModel & m);

std::string serialize_any_model(const AnyModel & m);
AnyModel deserialize_any_model(const std::string & bytes);
void save_any_model(const AnyModel & m, const std::filesystem::path & path);
AnyModel load_any_model(const std::filesystem::path & path);

/// Predictor view over a loaded model; the model, matrix and network must
/// outlive it.
std::unique_ptr<RoutePredictor> make_predictor(
  const AnyModel & m, const SegmentDistanceMatrix & d, std::size_t lambda_window);

}  // namespace tcv

#endif  // TCV_MODEL_IO_HPP_
