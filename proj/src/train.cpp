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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include "mshgnn/error.hpp"
#include "mshgnn/learn.hpp"

namespace mshgnn {

Adam::Adam(const ModelParams& like, const TrainConfig& c)
    : lr_(c.learning_rate), b1_(c.beta1), b2_(c.beta2), eps_(c.epsilon),
      m_(like.zeros_like()), v_(like.zeros_like()) {}

void Adam::step(ModelParams& params, const ModelParams& grads) {
  ++t_;
  const double c1 = 1.0 - std::pow(b1_, t_);
  const double c2 = 1.0 - std::pow(b2_, t_);
  std::vector<const Eigen::MatrixXd*> g;
  grads.visit([&](const std::string&, const Eigen::MatrixXd& b) { g.push_back(&b); });
  std::vector<Eigen::MatrixXd*> m, v;
  m_.visit([&](const std::string&, Eigen::MatrixXd& b) { m.push_back(&b); });
  v_.visit([&](const std::string&, Eigen::MatrixXd& b) { v.push_back(&b); });
  std::size_t i = 0;
  params.visit([&](const std::string&, Eigen::MatrixXd& p) {
    *m[i] = b1_ * *m[i] + (1.0 - b1_) * *g[i];
    *v[i] = b2_ * *v[i] + (1.0 - b2_) * g[i]->cwiseAbs2();
    p.array() -= lr_ * (m[i]->array() / c1) / ((v[i]->array() / c2).sqrt() + eps_);
    ++i;
  });
}

namespace {

// Elementwise loss on (prediction, target) pairs; fills the gradient
// with respect to the prediction when `grad` is non-null.
double pointwise(TaskKind task, const Signal& pred, const Signal& target, Signal* grad) {
  double total = 0.0;
  double count = 0.0;
  for (std::size_t v = 0; v < pred.nodes.size(); ++v) count += static_cast<double>(pred.nodes[v].size());
  if (grad) grad->nodes.resize(pred.nodes.size());
  for (std::size_t v = 0; v < pred.nodes.size(); ++v) {
    const auto& z = pred.nodes[v];
    const auto& y = target.nodes[v];
    if (z.rows() != y.rows() || z.cols() != y.cols()) {
      throw Error(ErrorKind::kDimensionMismatch, "prediction and label shapes differ at node " + std::to_string(v));
    }
    if (z.size() == 0) {
      if (grad) grad->nodes[v] = Eigen::MatrixXd::Zero(z.rows(), z.cols());
      continue;
    }
    if (task == TaskKind::kContact) {
      const Eigen::ArrayXXd za = z.array();
      total += (za.max(0.0) - za * y.array() + (-za.abs()).exp().log1p()).sum();
      if (grad) grad->nodes[v] = ((1.0 / (1.0 + (-za).exp())) - y.array()).matrix() / count;
    } else {
      const Eigen::MatrixXd r = z - y;
      total += r.squaredNorm();
      if (grad) grad->nodes[v] = 2.0 * r / count;
    }
  }
  return count > 0 ? total / count : 0.0;
}

template <typename Scalar>
LossAndGrad evaluate(const Model& model, const Dataset& batch, LossMode mode, bool want_grad) {
  const Signal x = prepare_inputs(model, batch.inputs);
  const ForwardTrace<Scalar> tr = forward<Scalar>(model.params, model.graph, x);
  const Signal y = trace_outputs(tr);
  LossAndGrad out;
  Signal dy;
  if (mode == LossMode::kPrediction) {
    const Signal p = finish_outputs(model, y);
    Signal dp;
    out.loss = pointwise(model.task, p, batch.labels, want_grad ? &dp : nullptr);
    if (want_grad) dy = average_to_physical_adjoint(model.graph, dp);
  } else {
    const Signal d = model.use_encoders ? decode(model.graph, model.reps, y) : y;
    out.loss = pointwise(model.task, d, lift_to_graph(model.graph, batch.labels), want_grad ? &dy : nullptr);
  }
  if (want_grad) {
    if (model.use_encoders) dy = decode_adjoint(model.graph, model.reps, dy);
    out.grad = backward<Scalar>(model.params, model.graph, tr, dy);
  }
  return out;
}

LossAndGrad dispatch(const Model& model, const Dataset& batch, LossMode mode, bool want_grad) {
  if (model.precision == Precision::kSingle) return evaluate<float>(model, batch, mode, want_grad);
  return evaluate<double>(model, batch, mode, want_grad);
}

void validate(const TrainConfig& c) {
  if (!(c.learning_rate >= 0.0) || !std::isfinite(c.learning_rate)) {
    throw Error(ErrorKind::kInvalidArgument, "learning rate must be finite and >= 0");
  }
  if (c.epochs < 1) throw Error(ErrorKind::kInvalidArgument, "epochs must be >= 1");
  if (c.batch_size < 1) throw Error(ErrorKind::kInvalidArgument, "batch size must be >= 1");
  if (c.patience < 0) throw Error(ErrorKind::kInvalidArgument, "patience must be >= 0");
}

void check_finite(double value, const std::string& where) {
  if (!std::isfinite(value)) throw Error(ErrorKind::kDivergence, "loss became non-finite " + where);
}

// Non-finite activations surface as numeric-error; during training they
// mean the run diverged.
template <typename F>
auto diverge_on_numeric(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kNumericError) throw;
    throw Error(ErrorKind::kDivergence, where + " (" + e.what() + ")");
  }
}

}  // namespace

double loss(const Model& model, const Dataset& batch, LossMode mode) {
  if (batch.size() == 0) return 0.0;
  return dispatch(model, batch, mode, false).loss;
}

LossAndGrad loss_and_grad(const Model& model, const Dataset& batch, LossMode mode) {
  return dispatch(model, batch, mode, true);
}

Eigen::MatrixXd prediction_matrix(const Model& model, const Signal& inputs) {
  const Eigen::MatrixXd raw = stack_nodes(predict(model, inputs));
  return model.task == TaskKind::kContact ? sigmoid(raw) : raw;
}

double validation_metric(const Model& model, const Dataset& d) {
  if (d.size() == 0) return 0.0;
  const Eigen::MatrixXd pred = prediction_matrix(model, d.inputs);
  const Eigen::MatrixXd labels = stack_nodes(d.labels);
  switch (model.task) {
    case TaskKind::kContact: return evaluate_contact(pred, labels).mean_f1;
    case TaskKind::kGrf1d:
    case TaskKind::kGrf3d: return evaluate_regression(pred, labels, model.task).rmse;
    case TaskKind::kMomentum: return *evaluate_regression(pred, labels, model.task).cos_linear;
  }
  return 0.0;
}

TrainResult train(const Model& initial, const Dataset& train_set, const Dataset& val_set,
                  const TrainConfig& config, const EpochCallback& on_epoch) {
  validate(config);
  if (train_set.size() == 0) throw Error(ErrorKind::kInvalidArgument, "training set is empty");
  if (train_set.task != initial.task || !(train_set.layout == initial.layout)) {
    throw Error(ErrorKind::kSchemaMismatch, "training data does not match the model's task/layout");
  }
  TrainResult result{initial, {}, 0};
  Model model = initial;
  Adam adam(model.params, config);
  std::mt19937_64 rng(config.seed);
  const bool has_val = val_set.size() > 0;

  auto record = [&](int epoch) {
    EpochRecord r;
    r.epoch = epoch;
    const std::string where = "at epoch " + std::to_string(epoch);
    r.train_loss = diverge_on_numeric(where, [&] { return loss(model, train_set, config.loss); });
    check_finite(r.train_loss, where);
    r.val_loss = has_val ? diverge_on_numeric(where, [&] { return loss(model, val_set, config.loss); })
                         : r.train_loss;
    check_finite(r.val_loss, where);
    r.val_metric = validation_metric(model, has_val ? val_set : train_set);
    result.history.push_back(r);
    if (on_epoch) on_epoch(r);
    return r;
  };

  double best = record(0).val_loss;
  int since_best = 0;
  std::vector<int> order(static_cast<std::size_t>(train_set.size()));
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      const std::vector<int> idx(order.begin() + static_cast<long>(start), order.begin() + static_cast<long>(end));
      const std::string where = "at epoch " + std::to_string(epoch) + ", batch starting at " + std::to_string(start);
      const LossAndGrad lg =
          diverge_on_numeric(where, [&] { return loss_and_grad(model, train_set.subset(idx), config.loss); });
      check_finite(lg.loss, where);
      adam.step(model.params, lg.grad);
    }
    const EpochRecord r = record(epoch);
    if (r.val_loss < best) {
      best = r.val_loss;
      result.model.params = model.params;
      result.best_epoch = epoch;
      since_best = 0;
    } else if (config.patience > 0 && ++since_best >= config.patience) {
      break;
    }
  }
  return result;
}

void write_history_csv(std::ostream& out, const std::vector<EpochRecord>& history) {
  out << "epoch,train_loss,val_loss,val_metric\n";
  const auto old = out.precision(12);
  for (const auto& r : history) {
    out << r.epoch << "," << r.train_loss << "," << r.val_loss << "," << r.val_metric << "\n";
  }
  out.precision(old);
}

}  // namespace mshgnn
