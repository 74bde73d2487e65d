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

#include "tcv/model_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace tcv
{

using nlohmann::json;

namespace
{

constexpr const char * kFormat = "tcv-model";
constexpr int kVersion = 1;
constexpr const char * kChecksumPrefix = "checksum fnv1a64 ";

json lambda_to_json(std::size_t lambda)
{
  if (lambda == kUnbounded) {
    return "inf";
  }
  return lambda;
}

std::size_t lambda_from_json(const json & v)
{
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") {
      return kUnbounded;
    }
    throw DataError("config: lambda must be a positive integer or \"inf\"");
  }
  return v.get<std::size_t>();
}

json config_json(const PipelineConfig & cfg)
{
  json j;
  j["k_prime"] = cfg.k_prime;
  j["n"] = cfg.n;
  j["alpha"] = cfg.alpha_stage1;
  j["alpha_stage2"] = cfg.alpha_stage2 ? json(*cfg.alpha_stage2) : json(nullptr);
  j["min_t"] = cfg.min_t;
  j["seed"] = cfg.seed;
  j["min_len"] = cfg.min_len;
  j["max_len"] = cfg.max_len;
  j["lambda"] = lambda_to_json(cfg.lambda_window);
  j["cut_mode"] = cfg.cut_mode == CutMode::kAlpha ? "alpha" : "k";
  j["k"] = cfg.k;
  return j;
}

// Keys owned by other consumers of the same flat config file.
bool foreign_key(const std::string & key)
{
  static const std::set<std::string> known{"method", "threads", "steps", "mmax", "test_fraction"};
  return known.count(key) > 0 || key.rfind("mmm_", 0) == 0 || key.rfind("netscan_", 0) == 0;
}

PipelineConfig apply_config(const json & j, PipelineConfig cfg)
{
  if (!j.is_object()) {
    throw DataError("config must be a JSON object");
  }
  for (const auto & [key, v] : j.items()) {
    if (key == "k_prime") {
      cfg.k_prime = v.get<std::size_t>();
    } else if (key == "n") {
      cfg.n = v.get<std::size_t>();
    } else if (key == "alpha" || key == "alpha_stage1") {
      cfg.alpha_stage1 = v.get<double>();
    } else if (key == "alpha_stage2") {
      cfg.alpha_stage2 = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
    } else if (key == "min_t") {
      cfg.min_t = v.get<double>();
    } else if (key == "seed") {
      cfg.seed = v.get<std::uint64_t>();
    } else if (key == "min_len") {
      cfg.min_len = v.get<std::size_t>();
    } else if (key == "max_len") {
      cfg.max_len = v.get<std::size_t>();
    } else if (key == "lambda" || key == "lambda_window") {
      cfg.lambda_window = lambda_from_json(v);
    } else if (key == "cut_mode") {
      const auto mode = v.get<std::string>();
      if (mode != "alpha" && mode != "k") {
        throw DataError("config: cut_mode must be \"alpha\" or \"k\"");
      }
      cfg.cut_mode = mode == "alpha" ? CutMode::kAlpha : CutMode::kK;
    } else if (key == "k") {
      cfg.k = v.get<std::size_t>();
    } else if (!foreign_key(key)) {
      throw DataError("config: unknown key \"" + key + "\"");
    }
  }
  return cfg;
}

json counts_json(const TransitionCounts & w)
{
  json j;
  j["trajectories"] = w.trajectories;
  json triplets = json::array();
  for (const auto & t : to_triplets(w)) {
    triplets.push_back({t[0], t[1], t[2]});
  }
  j["triplets"] = std::move(triplets);
  json pass = json::array();
  for (const auto & [e, c] : w.pass) {
    pass.push_back({e, c});
  }
  j["pass"] = std::move(pass);
  json origin = json::array();
  for (const auto & [e, c] : w.origin) {
    origin.push_back({e, c});
  }
  j["origin"] = std::move(origin);
  return j;
}

TransitionCounts counts_from_json(const json & j)
{
  TransitionCounts w;
  w.trajectories = j.at("trajectories").get<std::size_t>();
  for (const auto & t : j.at("triplets")) {
    w.pairs[{t.at(0).get<EdgeId>(), t.at(1).get<EdgeId>()}] = t.at(2).get<Count>();
  }
  for (const auto & p : j.at("pass")) {
    w.pass[p.at(0).get<EdgeId>()] = p.at(1).get<Count>();
  }
  for (const auto & p : j.at("origin")) {
    w.origin[p.at(0).get<EdgeId>()] = p.at(1).get<Count>();
  }
  return w;
}

json clusivat_json(const TrainedModel & m)
{
  json j;
  j["config"] = config_json(m.config);
  j["k"] = m.k_nondirectional;
  j["K"] = m.K();
  json clusters = json::array();
  for (const auto & c : m.clusters) {
    json cj;
    cj["id"] = c.cluster_id;
    cj["members"] = c.members;
    cj["counts"] = counts_json(c.counts);
    cj["frs"] = c.frs;
    cj["fss"] = c.fss;
    cj["rt"] = c.rt.segments;
    cj["rt_score"] = c.rt.count_score;
    cj["rt_origin"] = c.rt.origin_fss;
    clusters.push_back(std::move(cj));
  }
  j["clusters"] = std::move(clusters);
  j["global_counts"] = counts_json(m.global_counts);
  return j;
}

TrainedModel clusivat_from_json(const json & j)
{
  TrainedModel m;
  m.config = apply_config(j.at("config"), PipelineConfig{});
  m.k_nondirectional = j.at("k").get<std::size_t>();
  for (const auto & cj : j.at("clusters")) {
    ClusterModel c;
    c.cluster_id = cj.at("id").get<std::size_t>();
    c.members = cj.at("members").get<std::vector<TrajectoryId>>();
    c.counts = counts_from_json(cj.at("counts"));
    derive_cluster_artifacts(c, m.config.min_t);
    // Stored artifacts are redundant; a mismatch means the file was edited.
    if (c.frs != cj.at("frs").get<std::set<EdgeId>>() || c.fss != cj.at("fss").get<std::set<EdgeId>>() ||
        c.rt.segments != cj.at("rt").get<std::vector<EdgeId>>() || c.rt.count_score != cj.at("rt_score").get<Count>()) {
      throw DataError("cluster " + std::to_string(c.cluster_id) + " artifacts do not match its counts");
    }
    m.clusters.push_back(std::move(c));
  }
  if (m.clusters.size() != j.at("K").get<std::size_t>()) {
    throw DataError("model cluster count does not match K");
  }
  m.global_counts = counts_from_json(j.at("global_counts"));
  m.global_probs = to_probabilities(m.global_counts);
  return m;
}

json global_json(const GlobalChainModel & m)
{
  json j;
  j["counts"] = counts_json(m.counts);
  return j;
}

GlobalChainModel global_from_json(const json & j)
{
  GlobalChainModel m;
  m.counts = counts_from_json(j.at("counts"));
  m.probs = to_probabilities(m.counts);
  return m;
}

json netscan_json(const NetscanModel & m)
{
  json j;
  j["density_threshold"] = m.params.density_threshold;
  j["similarity_threshold"] = m.params.similarity_threshold;
  j["min_path_segments"] = m.params.min_path_segments;
  j["dense_paths"] = m.dense_paths;
  json assignment = json::array();
  for (const auto & [id, p] : m.assignment) {
    assignment.push_back({id, p});
  }
  j["assignment"] = std::move(assignment);
  json counts = json::array();
  for (const auto & c : m.path_counts) {
    counts.push_back(counts_json(c));
  }
  j["path_counts"] = std::move(counts);
  j["global_counts"] = counts_json(m.global_counts);
  return j;
}

NetscanModel netscan_from_json(const json & j)
{
  NetscanModel m;
  m.params.density_threshold = j.at("density_threshold").get<Count>();
  m.params.similarity_threshold = j.at("similarity_threshold").get<Count>();
  m.params.min_path_segments = j.at("min_path_segments").get<std::size_t>();
  m.dense_paths = j.at("dense_paths").get<std::vector<std::vector<EdgeId>>>();
  for (const auto & a : j.at("assignment")) {
    m.assignment[a.at(0).get<TrajectoryId>()] = a.at(1).get<std::size_t>();
  }
  for (const auto & c : j.at("path_counts")) {
    m.path_counts.push_back(counts_from_json(c));
    m.path_probs.push_back(to_probabilities(m.path_counts.back()));
  }
  if (m.path_counts.size() != m.dense_paths.size()) {
    throw DataError("NETSCAN model has mismatched path tables");
  }
  m.global_counts = counts_from_json(j.at("global_counts"));
  m.global_probs = to_probabilities(m.global_counts);
  return m;
}

json mmm_json(const MmmModel & m)
{
  json j;
  j["components"] = m.params.components;
  j["seed"] = m.params.seed;
  j["max_iters"] = m.params.max_iters;
  j["tol"] = m.params.tol;
  j["epsilon"] = m.params.epsilon;
  j["offsets"] = m.offsets;
  j["adjacency"] = m.adjacency;
  json comps = json::array();
  for (const auto & c : m.components) {
    json cj;
    cj["weight"] = c.weight;
    cj["mass"] = c.mass;
    cj["initial_counts"] = c.initial_counts;
    cj["transition_counts"] = c.transition_counts;
    cj["outgoing"] = c.outgoing;
    comps.push_back(std::move(cj));
  }
  j["mixture"] = std::move(comps);
  j["responsibilities"] = m.responsibilities;
  j["objective_trace"] = m.objective_trace;
  return j;
}

MmmModel mmm_from_json(const json & j)
{
  MmmModel m;
  m.params.components = j.at("components").get<std::size_t>();
  m.params.seed = j.at("seed").get<std::uint64_t>();
  m.params.max_iters = j.at("max_iters").get<std::size_t>();
  m.params.tol = j.at("tol").get<double>();
  m.params.epsilon = j.at("epsilon").get<double>();
  m.offsets = j.at("offsets").get<std::vector<std::size_t>>();
  m.adjacency = j.at("adjacency").get<std::vector<EdgeId>>();
  if (m.offsets.empty() || m.offsets.back() != m.adjacency.size()) {
    throw DataError("MMM adjacency table is inconsistent");
  }
  for (const auto & cj : j.at("mixture")) {
    MmmComponent c;
    c.weight = cj.at("weight").get<double>();
    c.mass = cj.at("mass").get<double>();
    c.initial_counts = cj.at("initial_counts").get<std::vector<double>>();
    c.transition_counts = cj.at("transition_counts").get<std::vector<double>>();
    c.outgoing = cj.at("outgoing").get<std::vector<double>>();
    if (c.initial_counts.size() != m.edge_count() || c.outgoing.size() != m.edge_count() ||
        c.transition_counts.size() != m.adjacency.size()) {
      throw DataError("MMM component tables have the wrong size");
    }
    m.components.push_back(std::move(c));
  }
  if (m.components.size() != m.params.components) {
    throw DataError("MMM component count mismatch");
  }
  m.responsibilities = j.at("responsibilities").get<std::vector<std::vector<double>>>();
  m.objective_trace = j.at("objective_trace").get<std::vector<double>>();
  return m;
}

std::string with_checksum(const json & doc)
{
  const std::string body = doc.dump();
  Fnv1a h;
  h.update(body.data(), body.size());
  return body + "\n" + kChecksumPrefix + to_hex(h.digest()) + "\n";
}

json verified_document(const std::string & bytes)
{
  const auto nl = bytes.find('\n');
  if (nl == std::string::npos) {
    throw DataError("model file has no checksum line");
  }
  const std::string body = bytes.substr(0, nl);
  std::string tail = bytes.substr(nl + 1);
  while (!tail.empty() && (tail.back() == '\n' || tail.back() == '\r')) {
    tail.pop_back();
  }
  if (tail.rfind(kChecksumPrefix, 0) != 0) {
    throw DataError("model file has no checksum line");
  }
  Fnv1a h;
  h.update(body.data(), body.size());
  if (tail.substr(std::char_traits<char>::length(kChecksumPrefix)) != to_hex(h.digest())) {
    throw DataError("model checksum mismatch (file corrupted or edited)");
  }
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception & ex) {
    throw DataError(std::string("model file is not valid JSON: ") + ex.what());
  }
  if (!doc.is_object() || doc.value("format", std::string()) != kFormat) {
    throw DataError("not a tcv model file");
  }
  if (doc.value("version", 0) != kVersion) {
    throw DataError("unsupported model file version " + std::to_string(doc.value("version", 0)));
  }
  return doc;
}

std::string read_file(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot read " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path & path, const std::string & bytes)
{
  std::ofstream out(path, std::ios::binary);
  out << bytes;
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
}

}  // namespace

std::string config_to_json(const PipelineConfig & cfg) { return config_json(cfg).dump(2) + "\n"; }

PipelineConfig config_from_json(const std::string & text, PipelineConfig base)
{
  try {
    return apply_config(json::parse(text), base);
  } catch (const json::exception & ex) {
    throw DataError(std::string("malformed config: ") + ex.what());
  }
}

std::string method_tag(const AnyModel & m)
{
  static const char * names[] = {"clusivat", "global", "netscan", "mmm"};
  return names[m.index()];
}

const std::string & network_ref(const AnyModel & m)
{
  return std::visit([](const auto & v) -> const std::string & { return v.network_ref; }, m);
}

std::string serialize_any_model(const AnyModel & m)
{
  json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["method"] = method_tag(m);
  doc["network_ref"] = network_ref(m);
  std::visit(
    [&](const auto & v) {
      using T = std::decay_t<decltype(v)>;
      if constexpr (std::is_same_v<T, TrainedModel>) {
        doc["body"] = clusivat_json(v);
      } else if constexpr (std::is_same_v<T, GlobalChainModel>) {
        doc["body"] = global_json(v);
      } else if constexpr (std::is_same_v<T, NetscanModel>) {
        doc["body"] = netscan_json(v);
      } else {
        doc["body"] = mmm_json(v);
      }
    },
    m);
  return with_checksum(doc);
}

AnyModel deserialize_any_model(const std::string & bytes)
{
  const json doc = verified_document(bytes);
  try {
    const std::string method = doc.at("method").get<std::string>();
    const std::string ref = doc.at("network_ref").get<std::string>();
    const json & body = doc.at("body");
    AnyModel out;
    if (method == "clusivat") {
      out = clusivat_from_json(body);
    } else if (method == "global") {
      out = global_from_json(body);
    } else if (method == "netscan") {
      out = netscan_from_json(body);
    } else if (method == "mmm") {
      out = mmm_from_json(body);
    } else {
      throw DataError("unknown model method \"" + method + "\"");
    }
    std::visit([&](auto & v) { v.network_ref = ref; }, out);
    return out;
  } catch (const json::exception & ex) {
    throw DataError(std::string("malformed model file: ") + ex.what());
  }
}

void save_any_model(const AnyModel & m, const std::filesystem::path & path) { write_file(path, serialize_any_model(m)); }

AnyModel load_any_model(const std::filesystem::path & path) { return deserialize_any_model(read_file(path)); }

std::string serialize_model(const TrainedModel & m) { return serialize_any_model(AnyModel(m)); }

TrainedModel deserialize_model(const std::string & bytes)
{
  AnyModel any = deserialize_any_model(bytes);
  if (!std::holds_alternative<TrainedModel>(any)) {
    throw DataError("model file holds a " + method_tag(any) + " model, not clusivat");
  }
  return std::get<TrainedModel>(std::move(any));
}

void save_model(const TrainedModel & m, const std::filesystem::path & path) { write_file(path, serialize_model(m)); }

TrainedModel load_model(const std::filesystem::path & path) { return deserialize_model(read_file(path)); }

std::unique_ptr<RoutePredictor> make_predictor(
  const AnyModel & m, const SegmentDistanceMatrix & d, std::size_t lambda_window)
{
  return std::visit(
    [&](const auto & v) -> std::unique_ptr<RoutePredictor> {
      using T = std::decay_t<decltype(v)>;
      if constexpr (std::is_same_v<T, TrainedModel>) {
        return std::make_unique<ClusivatPredictor>(v, d, lambda_window);
      } else if constexpr (std::is_same_v<T, GlobalChainModel>) {
        return std::make_unique<GlobalChainPredictor>(v);
      } else if constexpr (std::is_same_v<T, NetscanModel>) {
        return std::make_unique<NetscanPredictor>(v, d, lambda_window);
      } else {
        return std::make_unique<MmmPredictor>(v, lambda_window);
      }
    },
    m);
}

}  // namespace tcv
