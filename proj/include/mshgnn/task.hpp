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

#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace mshgnn {

enum class NodeClass : int { kBase = 0, kJoint = 1, kFoot = 2 };
inline constexpr int kNumNodeClasses = 3;

std::string_view to_string(NodeClass c);

enum class TaskKind { kContact, kGrf1d, kGrf3d, kMomentum };

std::string_view to_string(TaskKind kind);
std::optional<TaskKind> parse_task_kind(std::string_view name);

// Where a task's predictions live and how many channels each output node has.
NodeClass task_output_class(TaskKind kind);
int task_output_dim(TaskKind kind);

// Default output-space action derived from the spatial part R_g of an element:
// contact and Z-force are invariant scalars, 3D force is a vector, momentum is
// [linear (vector); angular (pseudovector)].
Eigen::MatrixXd default_output_rep(TaskKind kind, const Eigen::Matrix3d& spatial);

// Channel action for the IMU block [a_b; w_b]: vector and pseudovector.
Eigen::MatrixXd vector_pseudovector_rep(const Eigen::Matrix3d& spatial);

}  // namespace mshgnn
