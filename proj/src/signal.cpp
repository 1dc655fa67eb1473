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

#include "mshgnn/signal.hpp"

#include "mshgnn/error.hpp"

namespace mshgnn {

int SignalLayout::channels(NodeClass c) const {
  switch (c) {
    case NodeClass::kBase: return base_channels;
    case NodeClass::kJoint: return joint_channels;
    case NodeClass::kFoot: return foot_channels;
  }
  return 0;
}

SignalLayout default_layout(TaskKind task, int history) {
  if (history < 1) throw Error(ErrorKind::kInvalidArgument, "history must be >= 1");
  SignalLayout l;
  l.history = history;
  switch (task) {
    case TaskKind::kContact:
      break;
    case TaskKind::kGrf1d:
    case TaskKind::kGrf3d:
      l.joint_channels = 3;
      l.foot_channels = 0;
      break;
    case TaskKind::kMomentum:
      l.base_channels = 0;
      break;
  }
  return l;
}

Eigen::Index Signal::batch() const {
  return nodes.empty() ? 0 : nodes.front().cols();
}

Signal Signal::columns(std::span<const int> index) const {
  Signal out;
  out.nodes.reserve(nodes.size());
  for (const auto& m : nodes) {
    Eigen::MatrixXd c(m.rows(), static_cast<Eigen::Index>(index.size()));
    for (std::size_t k = 0; k < index.size(); ++k) c.col(static_cast<Eigen::Index>(k)) = m.col(index[k]);
    out.nodes.push_back(std::move(c));
  }
  return out;
}

Signal Signal::middle_columns(Eigen::Index start, Eigen::Index count) const {
  Signal out;
  for (const auto& m : nodes) out.nodes.push_back(m.middleCols(start, count));
  return out;
}

void Signal::append_columns(const Signal& other) {
  if (nodes.empty()) {
    *this = other;
    return;
  }
  if (other.nodes.size() != nodes.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "cannot append signals with different node counts");
  }
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    if (other.nodes[v].rows() != nodes[v].rows()) {
      throw Error(ErrorKind::kDimensionMismatch, "node " + std::to_string(v) + " dims differ");
    }
    Eigen::MatrixXd joined(nodes[v].rows(), nodes[v].cols() + other.nodes[v].cols());
    joined << nodes[v], other.nodes[v];
    nodes[v] = std::move(joined);
  }
}

double Signal::max_abs_diff(const Signal& other) const {
  if (other.nodes.size() != nodes.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "signals have different node counts");
  }
  double worst = 0.0;
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    if (nodes[v].size() == 0) continue;
    worst = std::max(worst, (nodes[v] - other.nodes[v]).cwiseAbs().maxCoeff());
  }
  return worst;
}

bool Signal::all_finite() const {
  for (const auto& m : nodes) {
    if (!m.allFinite()) return false;
  }
  return true;
}

Signal Signal::zeros(std::span<const int> dims, Eigen::Index batch) {
  Signal s;
  for (int d : dims) s.nodes.push_back(Eigen::MatrixXd::Zero(d, batch));
  return s;
}

std::vector<int> physical_input_dims(const PhysicalTopology& topo, const SignalLayout& layout) {
  std::vector<int> dims;
  for (const auto& n : topo.nodes) dims.push_back(layout.node_dim(n.node_class));
  return dims;
}

std::vector<int> physical_output_dims(const PhysicalTopology& topo, TaskKind task) {
  std::vector<int> dims;
  for (const auto& n : topo.nodes) {
    dims.push_back(n.node_class == task_output_class(task) ? task_output_dim(task) : 0);
  }
  return dims;
}

std::vector<int> graph_input_dims(const MorphGraph& graph, const SignalLayout& layout) {
  std::vector<int> dims;
  for (const auto& n : graph.nodes) dims.push_back(layout.node_dim(n.node_class));
  return dims;
}

std::vector<int> graph_output_dims(const MorphGraph& graph, TaskKind task) {
  std::vector<int> dims;
  for (const auto& n : graph.nodes) {
    dims.push_back(n.node_class == task_output_class(task) ? task_output_dim(task) : 0);
  }
  return dims;
}

Signal lift_to_graph(const MorphGraph& graph, const Signal& physical) {
  if (physical.num_nodes() != graph.num_physical_nodes) {
    throw Error(ErrorKind::kDimensionMismatch,
                "signal has " + std::to_string(physical.num_nodes()) + " nodes, robot has " +
                    std::to_string(graph.num_physical_nodes));
  }
  Signal out;
  out.nodes.reserve(graph.nodes.size());
  for (const auto& n : graph.nodes) out.nodes.push_back(physical.nodes[n.physical]);
  return out;
}

namespace {

std::vector<int> copy_counts(const MorphGraph& graph) {
  std::vector<int> count(static_cast<std::size_t>(graph.num_physical_nodes), 0);
  for (const auto& n : graph.nodes) ++count[n.physical];
  return count;
}

}  // namespace

Signal average_to_physical(const MorphGraph& graph, const Signal& graph_signal) {
  if (graph_signal.num_nodes() != graph.num_nodes()) {
    throw Error(ErrorKind::kDimensionMismatch, "graph signal does not match graph");
  }
  const auto count = copy_counts(graph);
  Signal out;
  out.nodes.resize(count.size());
  std::vector<bool> seen(count.size(), false);
  for (const auto& n : graph.nodes) {
    const auto& x = graph_signal.nodes[n.id];
    if (!seen[n.physical]) {
      out.nodes[n.physical] = x;
      seen[n.physical] = true;
    } else {
      out.nodes[n.physical] += x;
    }
  }
  for (std::size_t v = 0; v < count.size(); ++v) {
    if (count[v] > 1) out.nodes[v] /= static_cast<double>(count[v]);
  }
  return out;
}

Signal average_to_physical_adjoint(const MorphGraph& graph, const Signal& physical_grad) {
  const auto count = copy_counts(graph);
  Signal out;
  for (const auto& n : graph.nodes) {
    out.nodes.push_back(physical_grad.nodes[n.physical] / static_cast<double>(count[n.physical]));
  }
  return out;
}

Eigen::MatrixXd stack_nodes(const Signal& signal) {
  Eigen::Index rows = 0;
  for (const auto& m : signal.nodes) rows += m.rows();
  Eigen::MatrixXd out(rows, signal.batch());
  Eigen::Index r = 0;
  for (const auto& m : signal.nodes) {
    if (m.rows() == 0) continue;
    out.middleRows(r, m.rows()) = m;
    r += m.rows();
  }
  return out;
}

}  // namespace mshgnn
