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

#include "mshgnn/symmetry.hpp"

#include <random>

#include "mshgnn/error.hpp"

namespace mshgnn {

namespace {

// (I_T ⊗ m) x, with m acting on each timestep block of x.
Eigen::MatrixXd per_step(const Eigen::MatrixXd& m, const Eigen::MatrixXd& x) {
  const Eigen::Index c = m.rows();
  if (c == 0 || x.rows() == 0) return x;
  if (x.rows() % c != 0) {
    throw Error(ErrorKind::kDimensionMismatch,
                "node vector of " + std::to_string(x.rows()) + " rows is not a multiple of " +
                    std::to_string(c) + " channels");
  }
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (Eigen::Index t = 0; t < x.rows() / c; ++t) out.middleRows(t * c, c).noalias() = m * x.middleRows(t * c, c);
  return out;
}

Eigen::MatrixXd block_or_empty(bool present, const Eigen::MatrixXd& m) {
  return present ? m : Eigen::MatrixXd(0, 0);
}

// Applies an instance action to one chain: joint nodes are mixed by J,
// the foot node is transformed per timestep.
void apply_chain(const Eigen::MatrixXd& joint, const Eigen::MatrixXd& foot,
                 const std::vector<const Eigen::MatrixXd*>& in, std::vector<Eigen::MatrixXd>& out,
                 bool transpose) {
  const Eigen::Index ndof = joint.rows();
  out.resize(in.size());
  for (Eigen::Index i = 0; i < ndof; ++i) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(in[i]->rows(), in[i]->cols());
    for (Eigen::Index j = 0; j < ndof; ++j) {
      const double w = transpose ? joint(j, i) : joint(i, j);
      if (w != 0.0) acc += w * *in[j];
    }
    out[i] = std::move(acc);
  }
  if (static_cast<Eigen::Index>(in.size()) > ndof) {
    out[ndof] = per_step(transpose ? Eigen::MatrixXd(foot.transpose()) : foot, *in[ndof]);
  }
}

enum class Which { kEncode, kDecode, kDecodeAdjoint };

Signal copy_transform(const MorphGraph& graph, const MorphRepSet& reps, const Signal& x,
                      Which which) {
  if (x.num_nodes() != graph.num_nodes()) {
    throw Error(ErrorKind::kDimensionMismatch, "signal does not match graph node count");
  }
  const SignalRole role = which == Which::kEncode ? SignalRole::kInput : SignalRole::kOutput;
  Signal out;
  out.nodes.resize(x.nodes.size());
  for (int p = 0; p < graph.group.order(); ++p) {
    const ElementId g = which == Which::kEncode ? graph.group.inverse(p) : p;
    const ElementReps& r = reps.action(role, g);
    const bool transpose = which == Which::kDecodeAdjoint;
    const int b = graph.instances[0][p][0];
    out.nodes[b] = per_step(transpose ? Eigen::MatrixXd(r.base.transpose()) : r.base, x.nodes[b]);
    for (std::size_t q = 0; q < graph.orbits.size(); ++q) {
      const auto& chain = graph.instances[1 + q][p];
      std::vector<const Eigen::MatrixXd*> in;
      for (int v : chain) in.push_back(&x.nodes[v]);
      std::vector<Eigen::MatrixXd> res;
      apply_chain(r.joint[graph.orbits[q].branch], r.foot, in, res, transpose);
      for (std::size_t k = 0; k < chain.size(); ++k) out.nodes[chain[k]] = std::move(res[k]);
    }
  }
  return out;
}

}  // namespace

MorphRepSet make_rep_set(const RobotMorphology& m, const SignalLayout& layout, TaskKind task) {
  MorphRepSet reps;
  reps.group = m.group;
  reps.layout = layout;
  reps.task = task;
  const NodeClass out_class = task_output_class(task);
  for (ElementId g = 0; g < m.group.order(); ++g) {
    const Eigen::Matrix3d& r = m.spatial_rep[g];
    ElementReps in;
    if (layout.base_channels == 6) {
      in.base = m.base_channel_rep(g);
    } else if (layout.base_channels != 0) {
      throw Error(ErrorKind::kDimensionMismatch, "base nodes carry 0 or 6 channels");
    }
    if (layout.foot_channels == 6) {
      Eigen::MatrixXd f = Eigen::MatrixXd::Zero(6, 6);
      f.topLeftCorner(3, 3) = r;
      f.bottomRightCorner(3, 3) = r;
      in.foot = f;
    } else if (layout.foot_channels != 0) {
      throw Error(ErrorKind::kDimensionMismatch, "foot nodes carry 0 or 6 channels");
    }
    for (std::size_t b = 0; b < m.branches.size(); ++b) in.joint.push_back(m.joint_rep[b][g]);

    ElementReps out;
    const Eigen::MatrixXd o = m.output_rep(task, g);
    out.base = block_or_empty(out_class == NodeClass::kBase, o);
    out.foot = block_or_empty(out_class == NodeClass::kFoot, o);
    out.joint = in.joint;
    reps.input.push_back(std::move(in));
    reps.output.push_back(std::move(out));
  }
  return reps;
}

Eigen::MatrixXd instance_matrix(const MorphRepSet& reps, SignalRole role, int branch,
                                ElementId g) {
  const ElementReps& r = reps.action(role, g);
  const Eigen::MatrixXd& j = r.joint[branch];
  const int c = role == SignalRole::kInput ? reps.layout.joint_channels : 0;
  std::vector<Eigen::MatrixXd> blocks{kronecker(j, Eigen::MatrixXd::Identity(c, c))};
  if (r.foot.size() > 0) blocks.push_back(r.foot);
  return direct_sum(blocks);
}

Eigen::MatrixXd encoder_matrix(const MorphGraph& graph, const MorphRepSet& reps, int orbit,
                               ElementId p, SignalRole role) {
  return instance_matrix(reps, role, graph.orbits[orbit].branch, graph.group.inverse(p));
}

Eigen::MatrixXd decoder_matrix(const MorphGraph& graph, const MorphRepSet& reps, int orbit,
                               ElementId p, SignalRole role) {
  return instance_matrix(reps, role, graph.orbits[orbit].branch, p);
}

Signal encode(const MorphGraph& graph, const MorphRepSet& reps, const Signal& x) {
  return copy_transform(graph, reps, x, Which::kEncode);
}

Signal decode(const MorphGraph& graph, const MorphRepSet& reps, const Signal& y) {
  return copy_transform(graph, reps, y, Which::kDecode);
}

Signal decode_adjoint(const MorphGraph& graph, const MorphRepSet& reps, const Signal& dy) {
  return copy_transform(graph, reps, dy, Which::kDecodeAdjoint);
}

Signal morphological_action(const MorphGraph& graph, const MorphRepSet& reps, SignalRole role,
                            const Signal& x, ElementId g) {
  if (!graph.group.contains(g)) {
    throw Error(ErrorKind::kInvalidArgument, "element " + std::to_string(g) + " not in group");
  }
  if (x.num_nodes() != graph.num_nodes()) {
    throw Error(ErrorKind::kDimensionMismatch, "signal does not match graph node count");
  }
  const ElementReps& r = reps.action(role, g);
  Signal out;
  out.nodes.resize(x.nodes.size());
  for (int p = 0; p < graph.group.order(); ++p) {
    const int dst = graph.group.compose(g, p);
    out.nodes[graph.instances[0][dst][0]] = per_step(r.base, x.nodes[graph.instances[0][p][0]]);
    for (std::size_t q = 0; q < graph.orbits.size(); ++q) {
      const auto& src_chain = graph.instances[1 + q][p];
      const auto& dst_chain = graph.instances[1 + q][dst];
      std::vector<const Eigen::MatrixXd*> in;
      for (int v : src_chain) in.push_back(&x.nodes[v]);
      std::vector<Eigen::MatrixXd> res;
      apply_chain(r.joint[graph.orbits[q].branch], r.foot, in, res, false);
      for (std::size_t k = 0; k < dst_chain.size(); ++k) out.nodes[dst_chain[k]] = std::move(res[k]);
    }
  }
  return out;
}

Signal euclidean_action(const MorphGraph& graph, const Signal& y, ElementId g) {
  const GraphPermutation perm = graph_permutation(graph, g);
  if (y.num_nodes() != graph.num_nodes()) {
    throw Error(ErrorKind::kDimensionMismatch, "signal does not match graph node count");
  }
  Signal out;
  out.nodes.resize(y.nodes.size());
  for (int v = 0; v < graph.num_nodes(); ++v) out.nodes[perm.node_map[v]] = y.nodes[v];
  return out;
}

Signal physical_action(const RobotMorphology& m, const PhysicalTopology& topo,
                       const MorphRepSet& reps, SignalRole role, const Signal& x, ElementId g) {
  if (!m.group.contains(g)) {
    throw Error(ErrorKind::kInvalidArgument, "element " + std::to_string(g) + " not in group");
  }
  if (x.num_nodes() != topo.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "signal does not match robot node count");
  }
  const ElementReps& r = reps.action(role, g);
  Signal out;
  out.nodes.resize(x.nodes.size());
  out.nodes[0] = per_step(r.base, x.nodes[0]);
  for (std::size_t b = 0; b < m.branches.size(); ++b) {
    for (int j = 0; j < m.branches[b].nrep; ++j) {
      const auto src = topo.chain(static_cast<int>(b), j);
      const auto dst = topo.chain(static_cast<int>(b), m.orbit_action[b][g][j]);
      std::vector<const Eigen::MatrixXd*> in;
      for (int v : src) in.push_back(&x.nodes[v]);
      std::vector<Eigen::MatrixXd> res;
      apply_chain(r.joint[b], r.foot, in, res, false);
      for (std::size_t k = 0; k < dst.size(); ++k) out.nodes[dst[k]] = std::move(res[k]);
    }
  }
  return out;
}

Signal random_signal(std::span<const int> dims, Eigen::Index batch, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Signal s = Signal::zeros(dims, batch);
  for (auto& m : s.nodes) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = u(rng);
    }
  }
  return s;
}

EquivarianceReport check_morphological_equivariance(
    const std::function<Signal(const Signal&)>& f, const RobotMorphology& m,
    const MorphRepSet& reps, int n_trials, double tolerance, std::uint64_t seed) {
  EquivarianceReport report;
  report.tolerance = tolerance;
  report.trials = n_trials;
  report.worst.assign(static_cast<std::size_t>(m.group.order()), 0.0);
  if (n_trials <= 0) return report;
  const PhysicalTopology topo = physical_topology(m);
  const Signal x = random_signal(physical_input_dims(topo, reps.layout), n_trials, seed);
  const Signal fx = f(x);
  for (ElementId g = 0; g < m.group.order(); ++g) {
    const Signal lhs = f(physical_action(m, topo, reps, SignalRole::kInput, x, g));
    const Signal rhs = physical_action(m, topo, reps, SignalRole::kOutput, fx, g);
    report.worst[g] = lhs.max_abs_diff(rhs);
    if (!(report.worst[g] < tolerance)) report.passed = false;
  }
  return report;
}

}  // namespace mshgnn
