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

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mshgnn/dataset.hpp"
#include "mshgnn/model.hpp"
#include "mshgnn/network.hpp"

namespace mshgnn {

// kPrediction scores the decoded, averaged physical output against the raw
// label. kPerNode scores every graph copy separately against the label
// expressed in that copy's frame.
enum class LossMode { kPrediction, kPerNode };

struct TrainConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int epochs = 200;
  int batch_size = 64;
  std::uint64_t seed = 0;
  int patience = 0;  // epochs without validation improvement before stopping; 0 disables
  LossMode loss = LossMode::kPrediction;
};

class Adam {
 public:
  Adam(const ModelParams& like, const TrainConfig& config);
  void step(ModelParams& params, const ModelParams& grads);
  int steps() const { return t_; }

 private:
  double lr_, b1_, b2_, eps_;
  int t_ = 0;
  ModelParams m_, v_;
};

struct LossAndGrad {
  double loss = 0.0;
  ModelParams grad;
};

// BCE-with-logits for contact, MSE otherwise; both averaged over every
// output scalar of the batch.
double loss(const Model& model, const Dataset& batch, LossMode mode = LossMode::kPrediction);
LossAndGrad loss_and_grad(const Model& model, const Dataset& batch,
                          LossMode mode = LossMode::kPrediction);

// avg F1 for contact, RMSE for force regression, linear cos-sim for momentum.
double validation_metric(const Model& model, const Dataset& dataset);

struct TrainResult {
  Model model;  // parameters of the best validation epoch
  std::vector<EpochRecord> history;  // epoch 0 is the untrained model
  int best_epoch = 0;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

// Minibatch Adam. Selects on validation loss, or on training loss when the
// validation set is empty. Throws divergence when a loss turns non-finite.
TrainResult train(const Model& model, const Dataset& train_set, const Dataset& val_set,
                  const TrainConfig& config, const EpochCallback& on_epoch = {});

struct ContactMetrics {
  std::vector<double> f1;  // per leg
  double mean_f1 = 0.0;
  double state_accuracy = 0.0;  // all legs right
};

// probabilities and labels are legs x N. p >= 0.5 counts as contact. A leg
// with no positives in either labels or predictions scores F1 = 1.
ContactMetrics evaluate_contact(const Eigen::MatrixXd& probabilities, const Eigen::MatrixXd& labels);

struct RegressionMetrics {
  double rmse = 0.0;
  double mse = 0.0;
  std::optional<double> cos_linear;   // momentum only
  std::optional<double> cos_angular;  // momentum only
};

// predictions and labels are channels x N; momentum rows are [l; k].
RegressionMetrics evaluate_regression(const Eigen::MatrixXd& predictions,
                                      const Eigen::MatrixXd& labels, TaskKind task);

// Mean over columns of the cosine between matching 3-vectors; zero-norm pairs count as 0.
double mean_cosine(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& logits);

// Physical predictions stacked into channels x N (probabilities for contact).
Eigen::MatrixXd prediction_matrix(const Model& model, const Signal& inputs);

void write_history_csv(std::ostream& out, const std::vector<EpochRecord>& history);

}  // namespace mshgnn
