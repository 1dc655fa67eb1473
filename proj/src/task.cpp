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

#include "mshgnn/task.hpp"

namespace mshgnn {

std::string_view to_string(NodeClass c) {
  switch (c) {
    case NodeClass::kBase: return "base";
    case NodeClass::kJoint: return "joint";
    case NodeClass::kFoot: return "foot";
  }
  return "unknown";
}

std::string_view to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::kContact: return "contact";
    case TaskKind::kGrf1d: return "grf-1d";
    case TaskKind::kGrf3d: return "grf-3d";
    case TaskKind::kMomentum: return "momentum";
  }
  return "unknown";
}

std::optional<TaskKind> parse_task_kind(std::string_view name) {
  if (name == "contact" || name == "contact-classify") return TaskKind::kContact;
  if (name == "grf-1d" || name == "grf1d") return TaskKind::kGrf1d;
  if (name == "grf-3d" || name == "grf3d") return TaskKind::kGrf3d;
  if (name == "momentum") return TaskKind::kMomentum;
  return std::nullopt;
}

NodeClass task_output_class(TaskKind kind) {
  return kind == TaskKind::kMomentum ? NodeClass::kBase : NodeClass::kFoot;
}

int task_output_dim(TaskKind kind) {
  switch (kind) {
    case TaskKind::kContact: return 1;
    case TaskKind::kGrf1d: return 1;
    case TaskKind::kGrf3d: return 3;
    case TaskKind::kMomentum: return 6;
  }
  return 0;
}

Eigen::MatrixXd vector_pseudovector_rep(const Eigen::Matrix3d& spatial) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
  m.topLeftCorner<3, 3>() = spatial;
  m.bottomRightCorner<3, 3>() = (spatial.determinant() < 0.0 ? -1.0 : 1.0) * spatial;
  return m;
}

Eigen::MatrixXd default_output_rep(TaskKind kind, const Eigen::Matrix3d& spatial) {
  switch (kind) {
    case TaskKind::kContact:
    case TaskKind::kGrf1d:
      return Eigen::MatrixXd::Identity(1, 1);
    case TaskKind::kGrf3d:
      return spatial;
    case TaskKind::kMomentum:
      return vector_pseudovector_rep(spatial);
  }
  return {};
}

}  // namespace mshgnn
