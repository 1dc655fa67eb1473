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

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mshgnn/graph.hpp"
#include "mshgnn/task.hpp"

namespace mshgnn {

// Channels per node class and history length. Node vectors are time-major:
// [x_{t-T+1}; ...; x_t], each x holding `channels(class)` values.
struct SignalLayout {
  int history = 1;
  int base_channels = 6;   // a_b (3), w_b (3)
  int joint_channels = 2;  // q, dq [, tau]
  int foot_channels = 6;   // p (3), v (3)

  int channels(NodeClass c) const;
  int node_dim(NodeClass c) const { return history * channels(c); }
  bool operator==(const SignalLayout&) const = default;
};

// Input channels fed to each task: contact uses everything but torque,
// force regression adds joint torque and drops the feet, momentum reads the
// joints and feet only.
SignalLayout default_layout(TaskKind task, int history);

// Per-node feature matrices, one column per sample. Used both on the
// physical topology and on a MorphGraph.
struct Signal {
  std::vector<Eigen::MatrixXd> nodes;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  Eigen::Index batch() const;
  Signal columns(std::span<const int> index) const;
  Signal middle_columns(Eigen::Index start, Eigen::Index count) const;
  void append_columns(const Signal& other);
  double max_abs_diff(const Signal& other) const;
  bool all_finite() const;

  static Signal zeros(std::span<const int> dims, Eigen::Index batch);
};

std::vector<int> physical_input_dims(const PhysicalTopology& topo, const SignalLayout& layout);
std::vector<int> physical_output_dims(const PhysicalTopology& topo, TaskKind task);
std::vector<int> graph_input_dims(const MorphGraph& graph, const SignalLayout& layout);
std::vector<int> graph_output_dims(const MorphGraph& graph, TaskKind task);

// Every graph copy reads the features of the physical node it copies; all
// base copies receive the same raw base input.
Signal lift_to_graph(const MorphGraph& graph, const Signal& physical);

// Mean over the graph copies of each physical node, and its adjoint.
Signal average_to_physical(const MorphGraph& graph, const Signal& graph_signal);
Signal average_to_physical_adjoint(const MorphGraph& graph, const Signal& physical_grad);

// Stacks the non-empty node blocks into one (rows x batch) matrix.
Eigen::MatrixXd stack_nodes(const Signal& signal);

}  // namespace mshgnn
