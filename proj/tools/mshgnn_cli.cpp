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

// mshgnn: build graphs, check equivariance, generate data, train and evaluate.
//
// Exit codes: 0 success, 1 a check failed, 2 usage, config or data error.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "mshgnn/dataset.hpp"
#include "mshgnn/error.hpp"
#include "mshgnn/graph.hpp"
#include "mshgnn/learn.hpp"
#include "mshgnn/model.hpp"
#include "mshgnn/morphology.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mshgnn;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kLoadError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kLoadError, "cannot write " + path);
  out << text;
}

// Same id `git hash-object` prints: SHA-1 over "blob <size>\0<content>".
std::string git_blob_hash(const std::string& content) {
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr);
  EVP_DigestUpdate(ctx, header.data(), header.size());
  EVP_DigestUpdate(ctx, content.data(), content.size());
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

struct Manifest {
  std::string command;
  std::vector<std::string> argv;
  std::vector<std::string> configs;
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string result = "error";
  std::string summary;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  json to_json() const {
    auto files = [](const std::vector<std::string>& paths) {
      json arr = json::array();
      for (const auto& p : paths) {
        json f = {{"path", p}};
        if (fs::exists(p)) f["sha1"] = git_blob_hash(read_file(p));
        arr.push_back(f);
      }
      return arr;
    };
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {{"command", command}, {"argv", argv},           {"configs", files(configs)},
            {"seed", seed},       {"inputs", files(inputs)}, {"outputs", files(outputs)},
            {"wall_clock_s", secs}, {"result", result},     {"summary", summary}};
  }
};

RobotMorphology load_robot(const std::string& path, Manifest& mf) {
  mf.configs.push_back(path);
  return load_morphology_file(path);
}

TaskKind task_from(const std::string& name) {
  auto t = parse_task_kind(name);
  if (!t) throw Error(ErrorKind::kInvalidArgument, "unknown task '" + name + "'");
  return *t;
}

// ---- build-graph ----

struct GraphArgs {
  std::string config;
  std::string format = "dot";
  std::string out;
};

int run_build_graph(const GraphArgs& a, Manifest& mf) {
  const RobotMorphology m = load_robot(a.config, mf);
  const MorphGraph g = build_ms_graph(m);
  for (const auto& w : g.warnings) std::cerr << "warning: " << w << "\n";
  const std::string text = export_graph(g, a.format == "json" ? GraphFormat::kJson : GraphFormat::kDot);
  if (a.out.empty()) {
    std::cout << text;
  } else {
    write_file(a.out, text);
    mf.outputs.push_back(a.out);
  }
  std::ostringstream s;
  s << m.name << ": " << g.num_nodes() << " nodes, " << g.edges.size() / 2 << " edges, " << m.group.name
    << ", " << g.num_base_nodes() << " base copies, orbits:";
  for (std::size_t q = 0; q < g.orbits.size(); ++q) s << (q ? ", " : " ") << g.orbits[q].name;
  mf.summary = s.str();
  std::cerr << mf.summary << "\n";
  mf.result = "pass";
  return kExitPass;
}

// ---- check-equivariance ----

struct CheckArgs {
  std::string config;
  std::string checkpoint;
  std::string task = "all";
  int trials = 100;
  double tol = 1e-10;
  std::uint64_t seed = 0;
  int hidden = 32;
  int layers = 3;
  int history = 1;
  bool break_symmetry = false;
};

bool report_automorphisms(const MorphGraph& g) {
  bool ok = true;
  for (ElementId e = 0; e < g.group.order(); ++e) {
    const AutomorphismResult r = check_automorphism(g, graph_permutation(g, e));
    std::cout << "automorphism " << g.group.element_name(e) << ": " << (r.ok ? "PASS" : "FAIL");
    if (r.witness) {
      const auto& w = *r.witness;
      if (w.in_adjacency) {
        std::cout << "  witness A[" << w.row << "," << w.col << "] expected " << w.expected << " got " << w.actual;
      } else {
        std::cout << "  witness node type at " << w.row << " expected " << w.expected << " got " << w.actual;
      }
    }
    std::cout << "\n";
    ok = ok && r.ok;
  }
  return ok;
}

int run_check(const CheckArgs& a, Manifest& mf) {
  mf.seed = a.seed;
  std::vector<Model> models;
  RobotMorphology morph;
  if (!a.checkpoint.empty()) {
    mf.inputs.push_back(a.checkpoint);
    models.push_back(load_checkpoint(a.checkpoint));
    morph = models.back().morphology;
  } else {
    if (a.config.empty()) throw Error(ErrorKind::kInvalidArgument, "--config or --checkpoint is required");
    morph = load_robot(a.config, mf);
    std::vector<TaskKind> tasks;
    if (a.task == "all") {
      tasks = {TaskKind::kContact, TaskKind::kGrf1d, TaskKind::kGrf3d, TaskKind::kMomentum};
    } else {
      tasks = {task_from(a.task)};
    }
    for (TaskKind t : tasks) models.push_back(make_model(morph, t, default_layout(t, a.history), {a.hidden, a.layers, a.seed}));
  }
  MorphGraph graph = models.front().graph;
  if (a.break_symmetry) {
    const auto edge = find_symmetry_breaking_edge(graph);
    if (!edge) throw Error(ErrorKind::kInvalidArgument, "the trivial group has no symmetry to break");
    std::cout << "added edge " << edge->first << " -- " << edge->second << " ("
              << graph.nodes[edge->first].label << " / " << graph.nodes[edge->second].label << ")\n";
    graph = with_extra_edge(graph, edge->first, edge->second);
    for (auto& m : models) {
      m.graph = graph;
      m.params = init_params(graph, m.layout, m.task, m.params.config);
    }
  }
  bool ok = report_automorphisms(graph);
  if (a.trials > 0) {
    for (const auto& m : models) {
      const EquivarianceReport r = check_model_equivariance(m, a.trials, a.tol, a.seed);
      for (ElementId e = 0; e < morph.group.order(); ++e) {
        std::cout << "equivariance " << to_string(m.task) << " " << morph.group.element_name(e) << ": "
                  << (r.worst[e] < a.tol ? "PASS" : "FAIL") << "  max |f(gX) - g f(X)| = " << r.worst[e] << "\n";
      }
      ok = ok && r.passed;
    }
  }
  mf.result = ok ? "pass" : "fail";
  mf.summary = std::string(ok ? "all checks passed" : "check failed") + " (" + morph.name + ", " + morph.group.name + ")";
  std::cout << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kExitPass : kExitCheckFailed;
}

// ---- gen-data ----

struct GenArgs {
  std::string config;
  std::string task = "momentum";
  int n = 2000;
  std::uint64_t seed = 0;
  std::string out;
};

int run_gen(const GenArgs& a, Manifest& mf) {
  mf.seed = a.seed;
  if (task_from(a.task) != TaskKind::kMomentum) {
    throw Error(ErrorKind::kInvalidArgument, "only the momentum task has a synthetic generator");
  }
  const RobotMorphology m = load_robot(a.config, mf);
  const Dataset d = generate_synthetic_momentum(m, a.n, a.seed);
  std::ostringstream s;
  write_dataset_csv(s, d, m);
  if (a.out.empty()) {
    std::cout << s.str();
  } else {
    write_file(a.out, s.str());
    mf.outputs.push_back(a.out);
  }
  mf.summary = std::to_string(d.size()) + " samples";
  mf.result = "pass";
  return kExitPass;
}

// ---- train ----

struct TrainArgs {
  std::string config;
  std::string task = "momentum";
  std::string data;
  int synthetic = 0;
  int history = 1;
  int hidden = 128;
  int layers = 8;
  TrainConfig train;
  double val_fraction = 0.15;
  bool ablate = false;
  bool augment = false;
  std::string loss = "prediction";
  std::string out = "model.json";
  std::string history_csv;
};

int run_train(TrainArgs a, Manifest& mf) {
  const std::uint64_t seed = a.train.seed;
  mf.seed = seed;
  const TaskKind task = task_from(a.task);
  const RobotMorphology robot = load_robot(a.config, mf);
  const SignalLayout layout = default_layout(task, a.history);
  Dataset data;
  if (!a.data.empty()) {
    mf.inputs.push_back(a.data);
    data = load_dataset(a.data, robot, task, layout);
  } else if (a.synthetic > 0) {
    if (task != TaskKind::kMomentum || a.history != 1) {
      throw Error(ErrorKind::kInvalidArgument, "--synthetic only produces single-step momentum data");
    }
    data = generate_synthetic_momentum(robot, a.synthetic, seed);
  } else {
    throw Error(ErrorKind::kInvalidArgument, "--data or --synthetic is required");
  }
  // One seed drives everything: data, split, weights and batch order.
  auto [tr, va] = split_dataset(data, 1.0 - a.val_fraction, seed + 1);
  if (a.augment) tr = augment_by_group(tr, robot);
  const RobotMorphology morph = a.ablate ? ablate_symmetry(robot) : robot;
  Model model = make_model(morph, task, layout, {a.hidden, a.layers, seed + 2});
  model.precision = precision_from_env();
  a.train.seed = seed + 3;
  if (a.loss == "per-node") {
    a.train.loss = LossMode::kPerNode;
  } else if (a.loss != "prediction") {
    throw Error(ErrorKind::kInvalidArgument, "--loss must be 'prediction' or 'per-node'");
  }
  std::cerr << "training on " << tr.size() << " samples, validating on " << va.size() << ", "
            << model.params.num_parameters() << " parameters\n";
  const TrainResult r = train(model, tr, va, a.train, [](const EpochRecord& e) {
    std::cerr << "epoch " << e.epoch << " train " << e.train_loss << " val " << e.val_loss << " metric "
              << e.val_metric << "\n";
  });
  save_checkpoint(r.model, a.out, r.history);
  mf.outputs.push_back(a.out);
  const std::string hist = a.history_csv.empty() ? fs::path(a.out).replace_extension(".history.csv").string()
                                                 : a.history_csv;
  std::ostringstream h;
  write_history_csv(h, r.history);
  write_file(hist, h.str());
  mf.outputs.push_back(hist);
  std::ostringstream s;
  s << "best epoch " << r.best_epoch << ", val loss " << r.history[r.best_epoch].val_loss << ", train loss "
    << r.history.front().train_loss << " -> " << r.history.back().train_loss;
  mf.summary = s.str();
  std::cout << mf.summary << "\n";
  mf.result = "pass";
  return kExitPass;
}

// ---- eval ----

struct EvalArgs {
  std::string checkpoint;
  std::string config;
  std::string task;
  std::string data;
  std::string predictions;
  int synthetic = 0;
  std::uint64_t seed = 0;
  std::string metrics_out;
  std::string plot_data;
};

// Reads the named columns of a CSV into a (columns x rows) matrix.
Eigen::MatrixXd read_table(const std::string& path, const std::vector<std::string>& names) {
  std::istringstream in(read_file(path));
  std::string line;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  auto split = [](const std::string& l) {
    std::vector<std::string> cells;
    std::string c;
    std::istringstream s(l);
    while (std::getline(s, c, ',')) {
      while (!c.empty() && (c.back() == '\r' || c.back() == ' ')) c.pop_back();
      cells.push_back(c);
    }
    return cells;
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header.empty()) {
      header = split(line);
      continue;
    }
    std::vector<double> r;
    for (const auto& c : split(line)) r.push_back(std::stod(c));
    rows.push_back(std::move(r));
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(names.size()), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < names.size(); ++k) {
    const auto it = std::find(header.begin(), header.end(), names[k]);
    if (it == header.end()) throw Error(ErrorKind::kSchemaMismatch, path + ": missing column '" + names[k] + "'");
    const auto col = static_cast<std::size_t>(it - header.begin());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (col >= rows[i].size()) throw Error(ErrorKind::kLoadError, path + ": short row " + std::to_string(i + 2));
      out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = rows[i][col];
    }
  }
  return out;
}

std::vector<std::pair<std::string, double>> metric_rows(TaskKind task, const Eigen::MatrixXd& pred,
                                                        const Eigen::MatrixXd& labels,
                                                        const std::vector<std::string>& names) {
  std::vector<std::pair<std::string, double>> rows;
  if (task == TaskKind::kContact) {
    const ContactMetrics c = evaluate_contact(pred, labels);
    for (std::size_t l = 0; l < c.f1.size(); ++l) rows.emplace_back("f1_" + names[l].substr(2), c.f1[l]);
    rows.emplace_back("mean_f1", c.mean_f1);
    rows.emplace_back("state_accuracy", c.state_accuracy);
  } else {
    const RegressionMetrics r = evaluate_regression(pred, labels, task);
    rows.emplace_back("rmse", r.rmse);
    rows.emplace_back("mse", r.mse);
    if (r.cos_linear) rows.emplace_back("cos_linear", *r.cos_linear);
    if (r.cos_angular) rows.emplace_back("cos_angular", *r.cos_angular);
  }
  return rows;
}

int run_eval(const EvalArgs& a, Manifest& mf) {
  mf.seed = a.seed;
  std::optional<Model> model;
  RobotMorphology morph;
  TaskKind task;
  if (!a.checkpoint.empty()) {
    mf.inputs.push_back(a.checkpoint);
    model = load_checkpoint(a.checkpoint);
    model->precision = precision_from_env();
    morph = model->morphology;
    task = model->task;
  } else {
    if (a.config.empty() || a.task.empty() || a.predictions.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "without --checkpoint, --config, --task and --predictions are required");
    }
    morph = load_robot(a.config, mf);
    task = task_from(a.task);
  }
  const auto names = label_columns(morph, task);
  Eigen::MatrixXd pred, labels;
  if (!a.predictions.empty()) {
    if (a.data.empty()) throw Error(ErrorKind::kInvalidArgument, "--predictions needs --data with the labels");
    mf.inputs.push_back(a.predictions);
    mf.inputs.push_back(a.data);
    pred = read_table(a.predictions, names);
    labels = read_table(a.data, names);
  } else {
    Dataset d;
    if (!a.data.empty()) {
      mf.inputs.push_back(a.data);
      d = load_dataset(a.data, morph, task, model->layout);
    } else if (a.synthetic > 0) {
      d = generate_synthetic_momentum(morph, a.synthetic, a.seed);
    } else {
      throw Error(ErrorKind::kInvalidArgument, "--data or --synthetic is required");
    }
    pred = prediction_matrix(*model, d.inputs);
    labels = stack_nodes(d.labels);
  }
  std::ostringstream csv;
  csv << std::setprecision(12) << "metric,value\n";
  for (const auto& [k, v] : metric_rows(task, pred, labels, names)) csv << k << "," << v << "\n";
  std::cout << csv.str();
  if (!a.metrics_out.empty()) {
    write_file(a.metrics_out, csv.str());
    mf.outputs.push_back(a.metrics_out);
  }
  if (!a.plot_data.empty()) {
    if (a.checkpoint.empty()) throw Error(ErrorKind::kInvalidArgument, "--plot-data needs --checkpoint");
    std::ostringstream p;
    p << std::setprecision(12) << "series,epoch,value\n";
    const auto hist = checkpoint_history(read_file(a.checkpoint));
    for (const auto& r : hist) p << "train_loss," << r.epoch << "," << r.train_loss << "\n";
    for (const auto& r : hist) p << "val_loss," << r.epoch << "," << r.val_loss << "\n";
    for (const auto& r : hist) p << "val_metric," << r.epoch << "," << r.val_metric << "\n";
    write_file(a.plot_data, p.str());
    mf.outputs.push_back(a.plot_data);
  }
  mf.summary = std::to_string(labels.cols()) + " samples evaluated";
  mf.result = "pass";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Morphological-symmetry-equivariant heterogeneous GNNs for legged robots"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string manifest_path;
  app.add_option("--manifest", manifest_path, "Run manifest path (default mshgnn-<command>.manifest.json)");

  GraphArgs ga;
  std::vector<CLI::App*> graph_cmds;
  for (const char* name : {"build-graph", "export-graph"}) {
    auto* c = app.add_subcommand(name, "Build the MS-HGNN graph of a robot and export it");
    c->add_option("--config", ga.config, "Robot config file")->required()->check(CLI::ExistingFile);
    c->add_option("--format", ga.format, "dot or json")->check(CLI::IsMember({"dot", "json"}));
    c->add_option("--out", ga.out, "Output file (default stdout)");
    graph_cmds.push_back(c);
  }

  CheckArgs ca;
  auto* check = app.add_subcommand("check-equivariance", "Verify graph automorphisms and model equivariance");
  check->add_option("--config", ca.config, "Robot config file")->check(CLI::ExistingFile);
  check->add_option("--checkpoint", ca.checkpoint, "Check a trained model instead")->check(CLI::ExistingFile);
  check->add_option("--task", ca.task, "contact, grf-1d, grf-3d, momentum or all");
  check->add_option("--trials", ca.trials, "Random input signals per element (0: graph checks only)")
      ->check(CLI::NonNegativeNumber);
  check->add_option("--tol", ca.tol, "Max allowed |f(gX) - g f(X)|");
  check->add_option("--seed", ca.seed, "Seed for weights and inputs");
  check->add_option("--hidden", ca.hidden, "Hidden width of the untrained model");
  check->add_option("--layers", ca.layers, "Message-passing layers of the untrained model");
  check->add_option("--history", ca.history, "History length of the untrained model");
  check->add_flag("--break-symmetry", ca.break_symmetry, "Inject one edge that breaks the symmetry");

  GenArgs gen;
  auto* gd = app.add_subcommand("gen-data", "Generate the synthetic momentum dataset as CSV");
  gd->add_option("--config", gen.config, "Robot config file")->required()->check(CLI::ExistingFile);
  gd->add_option("--task", gen.task, "Task (momentum)");
  gd->add_option("--n", gen.n, "Number of samples")->check(CLI::NonNegativeNumber);
  gd->add_option("--seed", gen.seed, "Seed");
  gd->add_option("--out", gen.out, "Output CSV (default stdout)");

  TrainArgs ta;
  auto* tr = app.add_subcommand("train", "Train a model and write a checkpoint and history CSV");
  tr->add_option("--config", ta.config, "Robot config file")->required()->check(CLI::ExistingFile);
  tr->add_option("--task", ta.task, "contact, grf-1d, grf-3d or momentum");
  tr->add_option("--data", ta.data, "Training CSV")->check(CLI::ExistingFile);
  tr->add_option("--synthetic", ta.synthetic, "Generate this many synthetic momentum samples instead");
  tr->add_option("--history", ta.history, "Timesteps per sample")->check(CLI::PositiveNumber);
  tr->add_option("--hidden", ta.hidden, "Hidden width");
  tr->add_option("--layers", ta.layers, "Message-passing layers");
  tr->add_option("--lr", ta.train.learning_rate, "Adam learning rate");
  tr->add_option("--epochs", ta.train.epochs, "Maximum epochs");
  tr->add_option("--batch", ta.train.batch_size, "Minibatch size");
  tr->add_option("--patience", ta.train.patience, "Early-stop patience (0: off)");
  tr->add_option("--seed", ta.train.seed, "Seed for data, split, weights and batch order");
  tr->add_option("--val-fraction", ta.val_fraction, "Held-out validation fraction")->check(CLI::Range(0.0, 0.99));
  tr->add_option("--loss", ta.loss, "prediction or per-node");
  tr->add_flag("--ablate", ta.ablate, "Force the trivial group (no base copies, no encoders)");
  tr->add_flag("--augment", ta.augment, "Enlarge the training split by every group element");
  tr->add_option("--out", ta.out, "Checkpoint path");
  tr->add_option("--history-csv", ta.history_csv, "History CSV path (default next to the checkpoint)");

  EvalArgs ea;
  auto* ev = app.add_subcommand("eval", "Evaluate a checkpoint or a predictions file");
  ev->add_option("--checkpoint", ea.checkpoint, "Trained model")->check(CLI::ExistingFile);
  ev->add_option("--config", ea.config, "Robot config (with --predictions)")->check(CLI::ExistingFile);
  ev->add_option("--task", ea.task, "Task (with --predictions)");
  ev->add_option("--data", ea.data, "Dataset CSV with labels")->check(CLI::ExistingFile);
  ev->add_option("--predictions", ea.predictions, "CSV with predicted label columns")->check(CLI::ExistingFile);
  ev->add_option("--synthetic", ea.synthetic, "Evaluate on this many synthetic momentum samples");
  ev->add_option("--seed", ea.seed, "Seed for synthetic data");
  ev->add_option("--metrics-out", ea.metrics_out, "Also write the metric CSV here");
  ev->add_option("--plot-data", ea.plot_data, "Write training curves (long CSV) from the checkpoint");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  Manifest mf;
  mf.argv.assign(argv, argv + argc);
  CLI::App* cmd = app.get_subcommands().front();
  mf.command = cmd->get_name();
  int code = kExitUsage;
  try {
    if (cmd == check) {
      code = run_check(ca, mf);
    } else if (cmd == gd) {
      code = run_gen(gen, mf);
    } else if (cmd == tr) {
      code = run_train(ta, mf);
    } else if (cmd == ev) {
      code = run_eval(ea, mf);
    } else {
      code = run_build_graph(ga, mf);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    mf.summary = e.what();
    code = kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    mf.summary = e.what();
    code = kExitUsage;
  }
  if (manifest_path.empty()) manifest_path = "mshgnn-" + mf.command + ".manifest.json";
  try {
    write_file(manifest_path, mf.to_json().dump(2) + "\n");
  } catch (const Error& e) {
    std::cerr << "warning: " << e.what() << "\n";
  }
  return code;
}
