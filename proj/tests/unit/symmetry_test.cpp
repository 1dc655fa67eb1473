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

#include <numeric>

#include <gtest/gtest.h>

#include "mshgnn/error.hpp"
#include "mshgnn/graph.hpp"
#include "mshgnn/signal.hpp"
#include "mshgnn/symmetry.hpp"
#include "test_util.hpp"

namespace mshgnn {
namespace {

using testing::fixture;
using testing::preset;

double inner(const Signal& a, const Signal& b) {
  double s = 0.0;
  for (std::size_t v = 0; v < a.nodes.size(); ++v) s += (a.nodes[v].array() * b.nodes[v].array()).sum();
  return s;
}

TEST(Layout, ContactInputIs54PerStep) {
  const RobotMorphology m = preset("mini_cheetah_k4.cfg");
  const auto dims = physical_input_dims(physical_topology(m), default_layout(TaskKind::kContact, 150));
  EXPECT_EQ(std::accumulate(dims.begin(), dims.end(), 0), 54 * 150);
}

TEST(Layout, ForceTaskAddsTorqueAndDropsFeet) {
  const SignalLayout l = default_layout(TaskKind::kGrf3d, 1);
  EXPECT_EQ(l.joint_channels, 3);
  EXPECT_EQ(l.foot_channels, 0);
  EXPECT_EQ(default_layout(TaskKind::kMomentum, 1).base_channels, 0);
}

TEST(Lifting, AverageUndoesLiftAndAdjointMatches) {
  const RobotMorphology m = preset("mini_cheetah_k4.cfg");
  const MorphGraph g = build_ms_graph(m);
  const SignalLayout layout = default_layout(TaskKind::kContact, 2);
  const Signal x = random_signal(physical_input_dims(physical_topology(m), layout), 5, 1);
  EXPECT_LT(average_to_physical(g, lift_to_graph(g, x)).max_abs_diff(x), 1e-15);

  const Signal y = random_signal(graph_input_dims(g, layout), 5, 2);
  EXPECT_NEAR(inner(average_to_physical(g, y), x), inner(y, average_to_physical_adjoint(g, x)), 1e-12);
}

class TranslationLaws : public ::testing::TestWithParam<const char*> {};

TEST_P(TranslationLaws, EncoderCommutesWithAction) {
  const RobotMorphology m = preset(GetParam());
  const MorphGraph graph = build_ms_graph(m);
  for (TaskKind task : {TaskKind::kContact, TaskKind::kGrf3d, TaskKind::kMomentum}) {
    const SignalLayout layout = default_layout(task, 2);
    const MorphRepSet reps = make_rep_set(m, layout, task);
    const Signal x = random_signal(graph_input_dims(graph, layout), 100, 11);
    for (ElementId g = 0; g < m.group.order(); ++g) {
      const Signal lhs = encode(graph, reps, morphological_action(graph, reps, SignalRole::kInput, x, g));
      const Signal rhs = euclidean_action(graph, encode(graph, reps, x), g);
      EXPECT_LT(lhs.max_abs_diff(rhs), 1e-12) << to_string(task) << " g=" << g;
    }
  }
}

TEST_P(TranslationLaws, DecoderCommutesWithAction) {
  const RobotMorphology m = preset(GetParam());
  const MorphGraph graph = build_ms_graph(m);
  for (TaskKind task : {TaskKind::kContact, TaskKind::kGrf1d, TaskKind::kGrf3d, TaskKind::kMomentum}) {
    const MorphRepSet reps = make_rep_set(m, default_layout(task, 1), task);
    const Signal y = random_signal(graph_output_dims(graph, task), 100, 12);
    for (ElementId g = 0; g < m.group.order(); ++g) {
      const Signal lhs = morphological_action(graph, reps, SignalRole::kOutput, decode(graph, reps, y), g);
      const Signal rhs = decode(graph, reps, euclidean_action(graph, y, g));
      EXPECT_LT(lhs.max_abs_diff(rhs), 1e-12) << to_string(task) << " g=" << g;
    }
  }
}

TEST_P(TranslationLaws, PhysicalActionIsHomomorphism) {
  const RobotMorphology m = preset(GetParam());
  const PhysicalTopology topo = physical_topology(m);
  const SignalLayout layout = default_layout(TaskKind::kContact, 1);
  const MorphRepSet reps = make_rep_set(m, layout, TaskKind::kContact);
  const Signal x = random_signal(physical_input_dims(topo, layout), 3, 5);
  for (ElementId a = 0; a < m.group.order(); ++a) {
    for (ElementId b = 0; b < m.group.order(); ++b) {
      const Signal ab = physical_action(
          m, topo, reps, SignalRole::kInput,
          physical_action(m, topo, reps, SignalRole::kInput, x, b), a);
      const Signal direct = physical_action(m, topo, reps, SignalRole::kInput, x, m.group.compose(a, b));
      EXPECT_LT(ab.max_abs_diff(direct), 1e-12) << a << "," << b;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Presets, TranslationLaws,
                         ::testing::Values("mini_cheetah_k4.cfg", "a1_c2.cfg", "solo_k4.cfg"));

TEST(Encoders, CyclicDecoderIsEncoderTranspose) {
  const RobotMorphology m = fixture("c4_quad.cfg");
  const MorphGraph graph = build_ms_graph(m);
  const MorphRepSet reps = make_rep_set(m, default_layout(TaskKind::kContact, 1), TaskKind::kContact);
  const ElementId r1 = m.group.find("r1");
  const Eigen::MatrixXd enc = encoder_matrix(graph, reps, 0, r1, SignalRole::kInput);
  const Eigen::MatrixXd dec = decoder_matrix(graph, reps, 0, r1, SignalRole::kInput);
  EXPECT_LT((dec - enc.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  // A quarter turn is not its own inverse, so the two really differ.
  EXPECT_GT((dec - enc).cwiseAbs().maxCoeff(), 0.5);
}

TEST(Encoders, CyclicTranslationLawsHold) {
  const RobotMorphology m = fixture("c4_quad.cfg");
  const MorphGraph graph = build_ms_graph(m);
  const SignalLayout layout = default_layout(TaskKind::kGrf3d, 1);
  const MorphRepSet reps = make_rep_set(m, layout, TaskKind::kGrf3d);
  const Signal x = random_signal(graph_input_dims(graph, layout), 20, 3);
  const Signal y = random_signal(graph_output_dims(graph, TaskKind::kGrf3d), 20, 4);
  for (ElementId g = 0; g < m.group.order(); ++g) {
    EXPECT_LT(encode(graph, reps, morphological_action(graph, reps, SignalRole::kInput, x, g))
                  .max_abs_diff(euclidean_action(graph, encode(graph, reps, x), g)),
              1e-12);
    EXPECT_LT(morphological_action(graph, reps, SignalRole::kOutput, decode(graph, reps, y), g)
                  .max_abs_diff(decode(graph, reps, euclidean_action(graph, y, g))),
              1e-12);
  }
}

TEST(Encoders, DecodeAdjointIsTranspose) {
  const RobotMorphology m = fixture("c4_quad.cfg");
  const MorphGraph graph = build_ms_graph(m);
  const MorphRepSet reps = make_rep_set(m, default_layout(TaskKind::kGrf3d, 1), TaskKind::kGrf3d);
  const auto dims = graph_output_dims(graph, TaskKind::kGrf3d);
  const Signal y = random_signal(dims, 7, 8);
  const Signal z = random_signal(dims, 7, 9);
  EXPECT_NEAR(inner(decode(graph, reps, y), z), inner(y, decode_adjoint(graph, reps, z)), 1e-12);
}

TEST(Equivariance, CheckerRejectsNonEquivariantMap) {
  const RobotMorphology m = preset("mini_cheetah_k4.cfg");
  const PhysicalTopology topo = physical_topology(m);
  const SignalLayout layout = default_layout(TaskKind::kGrf3d, 1);
  const MorphRepSet reps = make_rep_set(m, layout, TaskKind::kGrf3d);
  // Every foot reports the first joint angle of leg LF: not permuted by g.
  auto f = [&](const Signal& x) {
    Signal y = Signal::zeros(physical_output_dims(topo, TaskKind::kGrf3d), x.batch());
    for (auto& n : y.nodes) {
      if (n.rows() == 3) n.row(0) = x.nodes[topo.index(0, 0, 1)].row(0);
    }
    return y;
  };
  const EquivarianceReport r = check_morphological_equivariance(f, m, reps, 10, 1e-10, 1);
  EXPECT_FALSE(r.passed);
  EXPECT_EQ(r.worst[0], 0.0);
  EXPECT_GT(r.worst[1], 0.1);
}

TEST(Equivariance, RejectsForeignElement) {
  const RobotMorphology m = preset("a1_c2.cfg");
  const PhysicalTopology topo = physical_topology(m);
  const SignalLayout layout = default_layout(TaskKind::kContact, 1);
  const MorphRepSet reps = make_rep_set(m, layout, TaskKind::kContact);
  const Signal x = random_signal(physical_input_dims(topo, layout), 1, 1);
  EXPECT_THROW(physical_action(m, topo, reps, SignalRole::kInput, x, 5), Error);
}

}  // namespace
}  // namespace mshgnn
