// Copyright 2026 The mshgnn Authors
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

#include "mshgnn/model.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mshgnn/error.hpp"

namespace mshgnn {

using nlohmann::json;

Model make_model(const RobotMorphology& morphology, TaskKind task, const SignalLayout& layout,
                 const NetConfig& config) {
  Model m;
  m.morphology = morphology;
  m.task = task;
  m.layout = layout;
  m.graph = build_ms_graph(morphology);
  m.topology = physical_topology(morphology);
  m.reps = make_rep_set(morphology, layout, task);
  m.params = init_params(m.graph, layout, task, config);
  return m;
}

Signal prepare_inputs(const Model& model, const Signal& physical_input) {
  Signal lifted = lift_to_graph(model.graph, physical_input);
  return model.use_encoders ? encode(model.graph, model.reps, lifted) : lifted;
}

Signal finish_outputs(const Model& model, const Signal& graph_output) {
  if (!model.use_encoders) return average_to_physical(model.graph, graph_output);
  return average_to_physical(model.graph, decode(model.graph, model.reps, graph_output));
}

Signal predict(const Model& model, const Signal& physical_input) {
  const Signal x = prepare_inputs(model, physical_input);
  return finish_outputs(model, network_outputs(model.params, model.graph, x, model.precision));
}

EquivarianceReport check_model_equivariance(const Model& model, int n_trials, double tolerance,
                                            std::uint64_t seed) {
  return check_model_equivariance(model, model.morphology, n_trials, tolerance, seed);
}

EquivarianceReport check_model_equivariance(const Model& model, const RobotMorphology& reference,
                                            int n_trials, double tolerance, std::uint64_t seed) {
  const MorphRepSet reps = make_rep_set(reference, model.layout, model.task);
  auto f = [&](const Signal& x) { return predict(model, x); };
  return check_morphological_equivariance(f, reference, reps, n_trials, tolerance, seed);
}

namespace {

json matrix_json(const Eigen::MatrixXd& m) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Eigen::MatrixXd json_matrix(const json& j, const std::string& name) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw Error(ErrorKind::kSchemaMismatch, "block " + name + " has inconsistent size");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = data[static_cast<std::size_t>(i * cols + k)];
  }
  return m;
}

}  // namespace

std::string checkpoint_json(const Model& model, const std::vector<EpochRecord>& history) {
  json j;
  j["format"] = "mshgnn-checkpoint";
  j["version"] = 1;
  j["morphology"] = serialize_morphology(model.morphology);
  j["task"] = to_string(model.task);
  j["layout"] = {{"history", model.layout.history},
                 {"base_channels", model.layout.base_channels},
                 {"joint_channels", model.layout.joint_channels},
                 {"foot_channels", model.layout.foot_channels}};
  j["net"] = {{"hidden", model.params.config.hidden},
              {"layers", model.params.config.layers},
              {"seed", model.params.config.seed}};
  j["precision"] = to_string(model.precision);
  json blocks = json::object();
  model.params.visit([&](const std::string& name, const Eigen::MatrixXd& m) {
    blocks[name] = matrix_json(m);
  });
  j["params"] = std::move(blocks);
  json h = json::array();
  for (const auto& r : history) {
    h.push_back({{"epoch", r.epoch},
                 {"train_loss", r.train_loss},
                 {"val_loss", r.val_loss},
                 {"val_metric", r.val_metric}});
  }
  j["history"] = std::move(h);
  return j.dump(1) + "\n";
}

namespace {

json parse_checkpoint(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kLoadError, std::string("checkpoint is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "mshgnn-checkpoint") {
    throw Error(ErrorKind::kSchemaMismatch, "not an mshgnn checkpoint");
  }
  if (j.value("version", 0) != 1) {
    throw Error(ErrorKind::kSchemaMismatch, "unsupported checkpoint version");
  }
  return j;
}

}  // namespace

Model model_from_checkpoint(std::string_view text) {
  const json j = parse_checkpoint(text);
  try {
    RobotMorphology morph = load_morphology(j.at("morphology").get<std::string>());
    auto task = parse_task_kind(j.at("task").get<std::string>());
    if (!task) throw Error(ErrorKind::kSchemaMismatch, "unknown task in checkpoint");
    SignalLayout layout;
    const auto& jl = j.at("layout");
    layout.history = jl.at("history").get<int>();
    layout.base_channels = jl.at("base_channels").get<int>();
    layout.joint_channels = jl.at("joint_channels").get<int>();
    layout.foot_channels = jl.at("foot_channels").get<int>();
    NetConfig net;
    net.hidden = j.at("net").at("hidden").get<int>();
    net.layers = j.at("net").at("layers").get<int>();
    net.seed = j.at("net").at("seed").get<std::uint64_t>();
    Model model = make_model(morph, *task, layout, net);
    model.precision = j.value("precision", "double") == "single" ? Precision::kSingle : Precision::kDouble;
    const auto& blocks = j.at("params");
    std::size_t expected = 0;
    model.params.visit([&](const std::string& name, Eigen::MatrixXd& m) {
      ++expected;
      if (!blocks.contains(name)) throw Error(ErrorKind::kSchemaMismatch, "missing block " + name);
      Eigen::MatrixXd loaded = json_matrix(blocks.at(name), name);
      if (loaded.rows() != m.rows() || loaded.cols() != m.cols()) {
        throw Error(ErrorKind::kSchemaMismatch, "block " + name + " has the wrong shape");
      }
      m = std::move(loaded);
    });
    if (blocks.size() != expected) {
      throw Error(ErrorKind::kSchemaMismatch, "checkpoint holds unexpected parameter blocks");
    }
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kSchemaMismatch, std::string("checkpoint: ") + e.what());
  }
}

std::vector<EpochRecord> checkpoint_history(std::string_view text) {
  const json j = parse_checkpoint(text);
  std::vector<EpochRecord> out;
  for (const auto& r : j.value("history", json::array())) {
    out.push_back({r.at("epoch").get<int>(), r.at("train_loss").get<double>(),
                   r.at("val_loss").get<double>(), r.at("val_metric").get<double>()});
  }
  return out;
}

void save_checkpoint(const Model& model, const std::string& path,
                     const std::vector<EpochRecord>& history) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kLoadError, "cannot write " + path);
  out << checkpoint_json(model, history);
}

Model load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kLoadError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_checkpoint(ss.str());
}

}  // namespace mshgnn
