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

#include <cmath>

#include "mshgnn/error.hpp"
#include "mshgnn/learn.hpp"

namespace mshgnn {

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& logits) {
  return (1.0 / (1.0 + (-logits.array()).exp())).matrix();
}

ContactMetrics evaluate_contact(const Eigen::MatrixXd& prob, const Eigen::MatrixXd& labels) {
  if (prob.rows() != labels.rows() || prob.cols() != labels.cols()) {
    throw Error(ErrorKind::kDimensionMismatch, "contact predictions and labels differ in shape");
  }
  ContactMetrics out;
  const Eigen::Index legs = prob.rows(), n = prob.cols();
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> pred = prob.array() >= 0.5;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> truth = labels.array() >= 0.5;
  for (Eigen::Index l = 0; l < legs; ++l) {
    int tp = 0, fp = 0, fn = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (pred(l, i) && truth(l, i)) ++tp;
      if (pred(l, i) && !truth(l, i)) ++fp;
      if (!pred(l, i) && truth(l, i)) ++fn;
    }
    const int denom = 2 * tp + fp + fn;
    out.f1.push_back(denom == 0 ? 1.0 : 2.0 * tp / denom);
  }
  for (double f : out.f1) out.mean_f1 += f;
  if (legs > 0) out.mean_f1 /= static_cast<double>(legs);
  int correct = 0;
  for (Eigen::Index i = 0; i < n; ++i) correct += (pred.col(i) == truth.col(i)).all() ? 1 : 0;
  out.state_accuracy = n > 0 ? static_cast<double>(correct) / static_cast<double>(n) : 0.0;
  return out;
}

double mean_cosine(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != 3 || b.rows() != 3 || a.cols() != b.cols()) {
    throw Error(ErrorKind::kDimensionMismatch, "cosine similarity needs matching 3 x N blocks");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    const double na = a.col(i).norm(), nb = b.col(i).norm();
    if (na > 0.0 && nb > 0.0) sum += a.col(i).dot(b.col(i)) / (na * nb);
  }
  return a.cols() > 0 ? sum / static_cast<double>(a.cols()) : 0.0;
}

RegressionMetrics evaluate_regression(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& labels,
                                      TaskKind task) {
  if (pred.rows() != labels.rows() || pred.cols() != labels.cols()) {
    throw Error(ErrorKind::kDimensionMismatch, "regression predictions and labels differ in shape");
  }
  RegressionMetrics out;
  if (pred.size() > 0) out.mse = (pred - labels).squaredNorm() / static_cast<double>(pred.size());
  out.rmse = std::sqrt(out.mse);
  if (task == TaskKind::kMomentum) {
    if (pred.rows() != 6) throw Error(ErrorKind::kDimensionMismatch, "momentum needs 6 rows [l; k]");
    out.cos_linear = mean_cosine(pred.topRows(3), labels.topRows(3));
    out.cos_angular = mean_cosine(pred.bottomRows(3), labels.bottomRows(3));
  }
  return out;
}

}  // namespace mshgnn
