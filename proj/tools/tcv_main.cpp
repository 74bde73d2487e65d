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

#include "tcv/baselines.hpp"
#include "tcv/evaluation.hpp"
#include "tcv/model_io.hpp"
#include "tcv/parallel.hpp"
#include "tcv/pipeline.hpp"
#include "tcv/predictor.hpp"
#include "tcv/synthgen.hpp"
#include "tcv/traj_distance.hpp"
#include "tcv/vat.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

enum ExitCode : int
{
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kInternal = 3,
};

class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

void refuse_existing(const fs::path & path, bool force)
{
  if (!force && fs::exists(path)) {
    throw UsageError(path.string() + " exists; pass --force to overwrite");
  }
}

std::string read_text(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw tcv::DataError("cannot read " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path & path, const std::string & text)
{
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    throw tcv::DataError("cannot write " + path.string());
  }
}

std::size_t parse_lambda(const std::string & text)
{
  if (text == "inf") {
    return tcv::kUnbounded;
  }
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(text, &pos);
    if (pos == text.size() && v > 0) {
      return static_cast<std::size_t>(v);
    }
  } catch (const std::exception &) {
  }
  throw UsageError("--lambda must be a positive integer or \"inf\"");
}

tcv::SegmentDistanceMatrix distances_for(const tcv::RoadNetwork & net, const std::string & dall_path)
{
  if (dall_path.empty()) {
    std::cerr << "warning: no --dall given; computing segment distances for " << net.edge_count() << " segments\n";
    return tcv::all_pairs_segment_distances(net);
  }
  auto d = tcv::load_segment_distances(dall_path);
  if (d.size() != net.edge_count()) {
    throw tcv::DataError(
      "distance matrix covers " + std::to_string(d.size()) + " segments but the network has " +
      std::to_string(net.edge_count()));
  }
  return d;
}

void check_ref(const std::string & ref, const tcv::RoadNetwork & net, const std::string & what)
{
  if (!ref.empty() && ref != net.fingerprint()) {
    throw tcv::DataError(what + " was built for a different network (" + ref + " vs " + net.fingerprint() + ")");
  }
}

tcv::TrajectoryDataset ingest_reporting(
  const fs::path & path, const tcv::RoadNetwork & net, tcv::IngestOptions opts, const fs::path & rejections_csv)
{
  auto res = tcv::ingest(path, net, opts);
  if (!res.rejections.empty()) {
    std::cerr << "warning: rejected " << res.rejections.size() << " trajectories from " << path.string();
    if (!rejections_csv.empty()) {
      tcv::write_rejections_csv(res.rejections, rejections_csv);
      std::cerr << " (see " << rejections_csv.string() << ")";
    }
    std::cerr << "\n";
  }
  if (res.dataset.trajectories.empty()) {
    throw tcv::DataError("no valid trajectories in " + path.string());
  }
  return std::move(res.dataset);
}

struct TrainOptions
{
  std::string network;
  std::string dall;
  std::string trajectories;
  std::string config;
  std::string out;
  std::string method = "clusivat";
  std::string emit_ivat;
  std::string sample;
  bool force = false;
  std::optional<double> alpha;
  std::optional<double> alpha_stage2;
  std::optional<std::size_t> k_prime;
  std::optional<std::size_t> n;
  std::optional<double> min_t;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> lambda;
  std::optional<std::size_t> components;
  std::optional<std::size_t> netscan_target;
  std::optional<std::uint64_t> density;
  std::optional<std::uint64_t> similarity;
};

json config_file(const std::string & path)
{
  if (path.empty()) {
    return json::object();
  }
  try {
    return json::parse(read_text(path));
  } catch (const json::exception & ex) {
    throw tcv::DataError("malformed config " + path + ": " + ex.what());
  }
}

int cmd_precompute(const std::string & network, const std::string & out, bool force)
{
  refuse_existing(out, force);
  const auto net = tcv::load_network(network);
  const auto d = tcv::all_pairs_segment_distances(net);
  if (fs::path(out).has_parent_path()) {
    fs::create_directories(fs::path(out).parent_path());
  }
  tcv::save_segment_distances(d, out);
  std::cout << "wrote " << d.size() << "x" << d.size() << " segment distances to " << out << "\n";
  return kOk;
}

int cmd_train(const TrainOptions & o)
{
  refuse_existing(o.out, o.force);
  const json file = config_file(o.config);
  tcv::PipelineConfig cfg = tcv::config_from_json(file.dump());
  if (o.alpha) cfg.alpha_stage1 = *o.alpha;
  if (o.alpha_stage2) cfg.alpha_stage2 = *o.alpha_stage2;
  if (o.k_prime) cfg.k_prime = *o.k_prime;
  if (o.n) cfg.n = *o.n;
  if (o.min_t) cfg.min_t = *o.min_t;
  if (o.seed) cfg.seed = *o.seed;
  if (o.lambda) cfg.lambda_window = parse_lambda(*o.lambda);

  const auto net = tcv::load_network(o.network);
  const fs::path out(o.out);
  const fs::path out_dir = out.has_parent_path() ? out.parent_path() : fs::path(".");
  fs::create_directories(out_dir);
  auto ds = ingest_reporting(o.trajectories, net, {cfg.min_len, cfg.max_len}, out_dir / "rejections.csv");

  json effective = json::parse(tcv::config_to_json(cfg));
  effective["method"] = o.method;
  tcv::AnyModel model;
  if (o.method == "clusivat") {
    cfg.validate();
    const auto d = distances_for(net, o.dall);
    tcv::TrainResult res = o.sample.empty()
                             ? tcv::train(ds, net, d, cfg)
                             : tcv::train_from_sample(ds, net, d, cfg, tcv::load_sample_manifest(o.sample));
    if (!o.emit_ivat.empty()) {
      const fs::path dir(o.emit_ivat);
      fs::create_directories(dir);
      tcv::write_pgm(res.diagnostics.stage1_vat.reordered, dir / "vat.pgm");
      tcv::write_pgm(res.diagnostics.stage1_ivat, dir / "ivat.pgm");
      tcv::write_matrix_csv(res.diagnostics.stage1_ivat, dir / "ivat.csv");
      tcv::save_sample_manifest(res.diagnostics.sample, dir / "sample.json");
    }
    std::cout << "trained k=" << res.model.k_nondirectional << " K=" << res.model.K() << " clusters from "
              << ds.size() << " trajectories (" << res.diagnostics.assigned_by_probability << " by probability, "
              << res.diagnostics.assigned_by_rt_distance << " by RT distance)\n";
    model = std::move(res.model);
  } else if (o.method == "global") {
    model = tcv::global_mm_train(ds);
    std::cout << "trained global chain on " << ds.size() << " trajectories\n";
  } else if (o.method == "netscan") {
    const auto d = distances_for(net, o.dall);
    tcv::NetscanParams p;
    const std::size_t target = o.netscan_target.value_or(file.value("netscan_target", std::size_t{0}));
    if (target > 0) {
      p = tcv::netscan_search(ds, net, target);
    }
    if (o.density) p.density_threshold = *o.density;
    if (o.similarity) p.similarity_threshold = *o.similarity;
    effective["netscan_density"] = p.density_threshold;
    effective["netscan_similarity"] = p.similarity_threshold;
    auto m = tcv::netscan_train(ds, net, d, p);
    std::cout << "trained NETSCAN with " << m.dense_paths.size() << " dense paths\n";
    model = std::move(m);
  } else if (o.method == "mmm") {
    tcv::MmmParams p;
    p.components = o.components.value_or(file.value("mmm_components", p.components));
    p.seed = cfg.seed;
    p.max_iters = file.value("mmm_max_iters", p.max_iters);
    p.tol = file.value("mmm_tol", p.tol);
    effective["mmm_components"] = p.components;
    auto m = tcv::mmm_train(ds, net, p);
    std::cout << "trained MMM with " << p.components << " components in " << m.objective_trace.size()
              << " iterations\n";
    model = std::move(m);
  } else {
    throw UsageError("unknown --method " + o.method);
  }
  tcv::save_any_model(model, out);
  write_text(fs::path(out.string() + ".config.json"), effective.dump(2) + "\n");
  return kOk;
}

struct Partial
{
  std::string id;
  std::vector<tcv::EdgeId> edges;
};

std::vector<Partial> read_partials(const fs::path & path, const tcv::RoadNetwork & net)
{
  std::ifstream in(path);
  if (!in) {
    throw tcv::DataError("cannot read " + path.string());
  }
  std::vector<Partial> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    try {
      const auto j = json::parse(line);
      Partial p;
      p.id = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
      p.edges = j.at("edges").get<std::vector<tcv::EdgeId>>();
      for (tcv::EdgeId e : p.edges) {
        if (e >= net.edge_count()) {
          throw tcv::DataError(
            path.string() + ":" + std::to_string(line_no) + ": unknown edge " + std::to_string(e));
        }
      }
      if (p.edges.empty()) {
        throw tcv::DataError(path.string() + ":" + std::to_string(line_no) + ": empty partial");
      }
      out.push_back(std::move(p));
    } catch (const json::exception & ex) {
      throw tcv::DataError(path.string() + ":" + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return out;
}

struct LoadedModel
{
  tcv::RoadNetwork net;
  tcv::SegmentDistanceMatrix d;
  tcv::AnyModel model;
};

LoadedModel load_for_prediction(const std::string & model, const std::string & network, const std::string & dall)
{
  tcv::AnyModel m = tcv::load_any_model(model);
  auto net = tcv::load_network(network);
  check_ref(tcv::network_ref(m), net, "model");
  const bool needs_d = std::holds_alternative<tcv::TrainedModel>(m) || std::holds_alternative<tcv::NetscanModel>(m);
  tcv::SegmentDistanceMatrix d = needs_d ? distances_for(net, dall) : tcv::SegmentDistanceMatrix{};
  return {std::move(net), std::move(d), std::move(m)};
}

std::size_t default_lambda(const tcv::AnyModel & m)
{
  if (const auto * t = std::get_if<tcv::TrainedModel>(&m)) {
    return t->config.lambda_window;
  }
  return 3;
}

int cmd_predict(
  const std::string & model, const std::string & partials, std::size_t steps, const std::string & lambda,
  const std::string & network, const std::string & dall, const std::string & out, bool force)
{
  refuse_existing(out, force);
  if (steps == 0) {
    throw UsageError("--steps must be >= 1");
  }
  const LoadedModel lm = load_for_prediction(model, network, dall);
  const std::size_t lam = lambda.empty() ? default_lambda(lm.model) : parse_lambda(lambda);
  const auto predictor = tcv::make_predictor(lm.model, lm.d, lam);
  const auto reqs = read_partials(partials, lm.net);
  std::vector<tcv::PredictionResult> results(reqs.size());
  tcv::parallel_for(reqs.size(), [&](std::size_t i) { results[i] = predictor->predict(reqs[i].edges, steps); });
  std::ostringstream os;
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    json j;
    j["id"] = reqs[i].id;
    j["predicted"] = results[i].predicted;
    j["clusters"] = results[i].cluster_trace;
    j["truncated"] = results[i].truncated;
    os << j.dump() << "\n";
  }
  write_text(out, os.str());
  std::cout << "predicted " << reqs.size() << " partial trajectories\n";
  return kOk;
}

int cmd_evaluate(
  const std::string & model, const std::string & test, std::size_t mmax, const std::string & lambda,
  const std::string & network, const std::string & dall, const std::string & out, bool force)
{
  refuse_existing(fs::path(out) / "summary.csv", force);
  if (mmax == 0) {
    throw UsageError("--mmax must be >= 1");
  }
  const LoadedModel lm = load_for_prediction(model, network, dall);
  const std::size_t lam = lambda.empty() ? default_lambda(lm.model) : parse_lambda(lambda);
  const auto predictor = tcv::make_predictor(lm.model, lm.d, lam);
  fs::create_directories(out);
  const auto ds = ingest_reporting(test, lm.net, {2, std::numeric_limits<std::size_t>::max()}, fs::path(out) / "rejections.csv");
  const auto rep = tcv::run_experiment(*predictor, ds, mmax, lm.net, out);
  json effective;
  effective["model"] = model;
  effective["method"] = tcv::method_tag(lm.model);
  effective["test"] = test;
  effective["mmax"] = mmax;
  effective["lambda"] = lam == tcv::kUnbounded ? json("inf") : json(lam);
  write_text(fs::path(out) / "effective_config.json", effective.dump(2) + "\n");
  std::cout << rep.method << ": avg_pa=" << rep.avg_pa << " avg_de_km=" << rep.avg_de << " pr=" << 100.0 * rep.pr
            << "% oa=" << rep.oa << " ode_km=" << rep.ode << " n=" << rep.n_test << "\n";
  return kOk;
}

int cmd_generate(const std::string & spec_path, const std::string & out, bool force)
{
  refuse_existing(fs::path(out) / "trajectories.jsonl", force);
  const auto spec = tcv::load_generator_spec(spec_path);
  const auto net = tcv::make_grid_network(spec.rows, spec.cols, spec.spacing_deg);
  const auto data = tcv::generate(spec, net);
  tcv::write_generated(net, data, out);
  write_text(fs::path(out) / "effective_config.json", read_text(spec_path));
  std::cout << "generated " << data.dataset.size() << " trajectories on a " << spec.rows << "x" << spec.cols
            << " grid\n";
  return kOk;
}

int cmd_mmm_cv(
  const std::string & network, const std::string & trajectories, const std::vector<std::size_t> & candidates,
  std::size_t folds, std::uint64_t seed, const std::string & out, bool force)
{
  refuse_existing(out, force);
  const auto net = tcv::load_network(network);
  const auto ds = ingest_reporting(trajectories, net, {}, {});
  tcv::MmmParams p;
  p.seed = seed;
  const auto res = tcv::mmm_cross_validate(ds, net, candidates, folds, p);
  std::ostringstream os;
  os << "components,mean_heldout_loglik\n";
  std::size_t best = 0;
  for (std::size_t i = 0; i < res.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", res[i].mean_heldout_log_likelihood);
    os << res[i].components << ',' << buf << '\n';
    if (res[i].mean_heldout_log_likelihood > res[best].mean_heldout_log_likelihood) {
      best = i;
    }
  }
  write_text(out, os.str());
  std::cout << "best components: " << res[best].components << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"tcv: road-network trajectory clustering and route prediction"};
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: TCV_THREADS or all cores)");

  bool force = false;
  auto add_force = [&](CLI::App * sub) { sub->add_flag("--force", force, "Overwrite existing outputs"); };

  std::string network, dall, out, model, lambda, partials, test, spec, trajectories;
  std::size_t steps = 1;
  std::size_t mmax = 10;

  auto * pre = app.add_subcommand("precompute", "All-pairs segment distance matrix");
  pre->add_option("--network", network, "Network JSON")->required();
  pre->add_option("--out", out, "Output matrix file")->required();
  add_force(pre);

  TrainOptions to;
  auto * tr = app.add_subcommand("train", "Train a model");
  tr->add_option("--network", to.network, "Network JSON")->required();
  tr->add_option("--dall", to.dall, "Precomputed segment distance matrix");
  tr->add_option("--trajectories", to.trajectories, "Trajectories JSONL")->required();
  tr->add_option("--config", to.config, "Flat JSON config");
  tr->add_option("--out", to.out, "Output model file")->required();
  tr->add_option("--method", to.method, "clusivat | global | netscan | mmm")
    ->check(CLI::IsMember({"clusivat", "global", "netscan", "mmm"}));
  tr->add_option("--emit-ivat", to.emit_ivat, "Directory for VAT/iVAT images and the sample manifest");
  tr->add_option("--sample", to.sample, "Use this sample manifest instead of drawing one");
  tr->add_option("--alpha", to.alpha, "Stage-1 cut threshold");
  tr->add_option("--alpha2", to.alpha_stage2, "Stage-2 cut threshold");
  tr->add_option("--k-prime", to.k_prime, "Distinguished objects");
  tr->add_option("--n", to.n, "Sample size");
  tr->add_option("--min-t", to.min_t, "Frequency threshold");
  tr->add_option("--seed", to.seed, "Random seed");
  tr->add_option("--lambda", to.lambda, "Default prediction window (integer or inf)");
  tr->add_option("--components", to.components, "MMM components");
  tr->add_option("--netscan-target", to.netscan_target, "Search NETSCAN thresholds for this many dense paths");
  tr->add_option("--density", to.density, "NETSCAN density threshold");
  tr->add_option("--similarity", to.similarity, "NETSCAN similarity threshold");
  tr->add_flag("--force", to.force, "Overwrite existing outputs");

  auto * pr = app.add_subcommand("predict", "Predict continuations of partial trajectories");
  pr->add_option("--model", model, "Model file")->required();
  pr->add_option("--partials", partials, "JSONL of {\"id\", \"edges\"}")->required();
  pr->add_option("--steps", steps, "Steps to predict");
  pr->add_option("--lambda", lambda, "Window of latest locations (integer or inf)");
  pr->add_option("--network", network, "Network JSON")->required();
  pr->add_option("--dall", dall, "Precomputed segment distance matrix");
  pr->add_option("--out", out, "Output JSONL")->required();
  add_force(pr);

  auto * ev = app.add_subcommand("evaluate", "Score a model on held-out trajectories");
  ev->add_option("--model", model, "Model file")->required();
  ev->add_option("--test", test, "Test trajectories JSONL")->required();
  ev->add_option("--mmax", mmax, "Longest prediction horizon");
  ev->add_option("--lambda", lambda, "Window of latest locations (integer or inf)");
  ev->add_option("--network", network, "Network JSON")->required();
  ev->add_option("--dall", dall, "Precomputed segment distance matrix");
  ev->add_option("--out", out, "Output directory")->required();
  add_force(ev);

  auto * gen = app.add_subcommand("generate", "Synthetic grid network and trajectories");
  gen->add_option("--spec", spec, "Generator spec JSON")->required();
  gen->add_option("--out", out, "Output directory")->required();
  add_force(gen);

  std::vector<std::size_t> candidates{1, 2, 4, 8};
  std::size_t folds = 10;
  std::uint64_t seed = 1;
  auto * cv = app.add_subcommand("mmm-cv", "Cross-validate MMM component counts");
  cv->add_option("--network", network, "Network JSON")->required();
  cv->add_option("--trajectories", trajectories, "Trajectories JSONL")->required();
  cv->add_option("--candidates", candidates, "Component counts to try")->delimiter(',');
  cv->add_option("--folds", folds, "Folds");
  cv->add_option("--seed", seed, "Random seed");
  cv->add_option("--out", out, "Output CSV")->required();
  add_force(cv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (threads == 0) {
      if (const char * env = std::getenv("TCV_THREADS")) {
        threads = std::strtoull(env, nullptr, 10);
      }
    }
    tcv::set_thread_count(threads);
    if (*pre) return cmd_precompute(network, out, force);
    if (*tr) return cmd_train(to);
    if (*pr) return cmd_predict(model, partials, steps, lambda, network, dall, out, force);
    if (*ev) return cmd_evaluate(model, test, mmax, lambda, network, dall, out, force);
    if (*gen) return cmd_generate(spec, out, force);
    if (*cv) return cmd_mmm_cv(network, trajectories, candidates, folds, seed, out, force);
  } catch (const UsageError & e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const tcv::DataError & e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception & e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
