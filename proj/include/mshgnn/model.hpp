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

#pragma once

#include <string>
#include <vector>

#include "mshgnn/graph.hpp"
#include "mshgnn/morphology.hpp"
#include "mshgnn/network.hpp"
#include "mshgnn/signal.hpp"
#include "mshgnn/symmetry.hpp"

namespace mshgnn {

// An MS-HGNN bound to one robot and one task: f = average ∘ l ∘ z ∘ h ∘ lift.
struct Model {
  RobotMorphology morphology;
  TaskKind task = TaskKind::kContact;
  SignalLayout layout;
  MorphGraph graph;
  PhysicalTopology topology;
  MorphRepSet reps;
  ModelParams params;
  Precision precision = Precision::kDouble;
  bool use_encoders = true;  // false replaces h and l with the identity (test harness only)
};

Model make_model(const RobotMorphology& morphology, TaskKind task, const SignalLayout& layout,
                 const NetConfig& config);

// Lift to the graph and apply the input encoder.
Signal prepare_inputs(const Model& model, const Signal& physical_input);
// Decode graph outputs and average the copies of each physical node.
Signal finish_outputs(const Model& model, const Signal& graph_output);
// Physical inputs to physical outputs (logits for contact).
Signal predict(const Model& model, const Signal& physical_input);

EquivarianceReport check_model_equivariance(const Model& model, int n_trials, double tolerance,
                                            std::uint64_t seed);
// Same check, but with the group action of `reference` (e.g. the unablated robot).
EquivarianceReport check_model_equivariance(const Model& model, const RobotMorphology& reference,
                                            int n_trials, double tolerance, std::uint64_t seed);

// One row of the training history.
struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_metric = 0.0;  // avg F1 (contact), RMSE (forces), linear cos-sim (momentum)
  bool operator==(const EpochRecord&) const = default;
};

// Versioned JSON checkpoint: morphology config, task, layout, network
// config and every parameter block keyed by its type name.
std::string checkpoint_json(const Model& model, const std::vector<EpochRecord>& history = {});
Model model_from_checkpoint(std::string_view text);
void save_checkpoint(const Model& model, const std::string& path,
                     const std::vector<EpochRecord>& history = {});
Model load_checkpoint(const std::string& path);
std::vector<EpochRecord> checkpoint_history(std::string_view text);

}  // namespace mshgnn
