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
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mshgnn/graph.hpp"
#include "mshgnn/morphology.hpp"
#include "mshgnn/signal.hpp"

namespace mshgnn {

enum class SignalRole { kInput, kOutput };

// Channel-level action of one element, for a single timestep.
struct ElementReps {
  Eigen::MatrixXd base;                // base_channels x base_channels (or task output)
  Eigen::MatrixXd foot;                // foot_channels x foot_channels (or task output)
  std::vector<Eigen::MatrixXd> joint;  // per branch, ndof x ndof; mixes chain nodes
};

// Fixed representation matrices behind the input encoder h and the output
// decoder l. For a subgraph copy with element label p the encoder applies
// the action of p^-1 and the decoder the action of p.
struct MorphRepSet {
  GroupSpec group;
  SignalLayout layout;
  TaskKind task = TaskKind::kContact;
  std::vector<ElementReps> input;   // [g]
  std::vector<ElementReps> output;  // [g]

  const ElementReps& action(SignalRole role, ElementId g) const {
    return role == SignalRole::kInput ? input[g] : output[g];
  }
};

MorphRepSet make_rep_set(const RobotMorphology& morphology, const SignalLayout& layout,
                         TaskKind task);

// Instance-level matrix on the stacked chain features [joint_1; ...; foot] of one
// timestep: blockdiag(J(g) ⊗ I_c, F(g)).
Eigen::MatrixXd instance_matrix(const MorphRepSet& reps, SignalRole role, int branch,
                                ElementId g);
// Encoder and decoder matrices of subgraph copy (p, q) of `graph`, on the
// input or output channels of that copy.
Eigen::MatrixXd encoder_matrix(const MorphGraph& graph, const MorphRepSet& reps, int orbit,
                               ElementId p, SignalRole role = SignalRole::kInput);
Eigen::MatrixXd decoder_matrix(const MorphGraph& graph, const MorphRepSet& reps, int orbit,
                               ElementId p, SignalRole role = SignalRole::kOutput);

// h: node (p,q) features multiplied by the inverse action of p.
Signal encode(const MorphGraph& graph, const MorphRepSet& reps, const Signal& x);
// l: node (p,q) outputs multiplied by the action of p.
Signal decode(const MorphGraph& graph, const MorphRepSet& reps, const Signal& y);
// Transpose of decode, used to pull gradients back through l.
Signal decode_adjoint(const MorphGraph& graph, const MorphRepSet& reps, const Signal& dy);

// g ⋄ X on a graph signal: copy (p,q) moves to (g∘p, q) and its channels are
// transformed by the action of g.
Signal morphological_action(const MorphGraph& graph, const MorphRepSet& reps, SignalRole role,
                            const Signal& x, ElementId g);
// g ▷ Y: pure node permutation by the graph permutation of g.
Signal euclidean_action(const MorphGraph& graph, const Signal& y, ElementId g);

// g ⋄ X on the physical robot: instance j moves to g(j).
Signal physical_action(const RobotMorphology& morphology, const PhysicalTopology& topo,
                       const MorphRepSet& reps, SignalRole role, const Signal& x, ElementId g);

struct EquivarianceReport {
  std::vector<double> worst;  // per element: max |f(g⋄X) - g⋄f(X)|
  double tolerance = 0.0;
  int trials = 0;
  bool passed = true;
};

// Random-signal test of f(g⋄X) = g⋄f(X) for every g in the morphology's group.
// `f` maps physical inputs to physical outputs; inputs are uniform in [-1, 1].
EquivarianceReport check_morphological_equivariance(
    const std::function<Signal(const Signal&)>& f, const RobotMorphology& morphology,
    const MorphRepSet& reps, int n_trials, double tolerance, std::uint64_t seed);

Signal random_signal(std::span<const int> dims, Eigen::Index batch, std::uint64_t seed);

}  // namespace mshgnn
