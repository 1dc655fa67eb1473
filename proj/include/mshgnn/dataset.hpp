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
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mshgnn/morphology.hpp"
#include "mshgnn/signal.hpp"

namespace mshgnn {

// Samples in columns. Inputs and labels live on the physical topology, so one
// dataset serves every model of the same robot (including ablated ones).
struct Dataset {
  TaskKind task = TaskKind::kContact;
  SignalLayout layout;
  Signal inputs;            // per physical node: layout.node_dim(class) x N
  Signal labels;            // per physical node: task output dim (or 0) x N
  std::vector<double> time; // timestamp of the label row

  int size() const { return static_cast<int>(time.size()); }
  Dataset subset(std::span<const int> index) const;
  void append(const Dataset& other);
};

// CSV column names for one robot, in file order:
//   t, a_x a_y a_z w_x w_y w_z, q_<L>_<k> dq_<L>_<k> [tau_<L>_<k>],
//   p_<L>_x ... v_<L>_z, then labels (c_<L> | f_<L>_z | f_<L>_{x,y,z} | l_x..k_z).
std::vector<std::string> input_columns(const RobotMorphology& morphology, const SignalLayout& layout);
std::vector<std::string> label_columns(const RobotMorphology& morphology, TaskKind task);

// Sliding windows of `layout.history` rows ending at each labelled row. Rows
// separated by more than twice the median period start a new sequence.
Dataset load_dataset_csv(std::string_view text, const RobotMorphology& morphology, TaskKind task,
                         const SignalLayout& layout);
Dataset load_dataset(const std::string& path, const RobotMorphology& morphology, TaskKind task,
                     const SignalLayout& layout);

// Writes one row per sample; only single-step histories can be written back.
void write_dataset_csv(std::ostream& out, const Dataset& dataset,
                       const RobotMorphology& morphology);

// Unit point masses at the feet. Foot positions are the nominal stance plus
// uniform(±0.1) m noise, velocities uniform(±1) m/s; joint angles and rates
// come from the inverse kinematics of a 3-joint leg hanging below each stance
// point. Labels: l = Σ v, k = Σ p × v.
Dataset generate_synthetic_momentum(const RobotMorphology& morphology, int n_samples,
                                    std::uint64_t seed);

// Forward kinematics and joint rates of the synthetic leg, exposed for tests.
struct LegSolution {
  Eigen::Vector3d q;
  Eigen::Vector3d dq;
};
inline constexpr double kThighLength = 0.25;
inline constexpr double kShankLength = 0.25;
inline constexpr double kHipHeight = 0.3;
Eigen::Vector3d leg_forward_kinematics(const Eigen::Vector3d& hip, const Eigen::Vector3d& q);
LegSolution leg_inverse_kinematics(const Eigen::Vector3d& hip, const Eigen::Vector3d& foot,
                                   const Eigen::Vector3d& foot_velocity, double knee_sign);

// Every sample transformed by every g (g-major order); |G| times larger.
Dataset augment_by_group(const Dataset& dataset, const RobotMorphology& morphology);

// Seeded shuffle, then the first round(train_fraction * N) samples train.
std::pair<Dataset, Dataset> split_dataset(const Dataset& dataset, double train_fraction,
                                          std::uint64_t seed);

}  // namespace mshgnn
