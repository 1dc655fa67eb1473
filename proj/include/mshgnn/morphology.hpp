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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mshgnn/group.hpp"
#include "mshgnn/task.hpp"

namespace mshgnn {

// One unique kinematic chain type, replicated `nrep` times on the robot.
struct BranchType {
  std::string id;
  int ndof = 0;
  int nrep = 0;
  std::vector<std::string> instance_labels;
  bool has_end_effector = false;
  std::vector<std::string> joint_names;  // optional, size ndof when present
  std::vector<std::string> orbit_names;  // optional, one per orbit

  bool operator==(const BranchType&) const = default;
};

// The set of instances of one branch type that the group maps onto each other.
struct Orbit {
  int branch = 0;
  int representative = 0;        // instance index whose graph copy gets p = e
  std::vector<int> members;      // sorted instance indices
  std::string name;
};

struct RobotMorphology {
  std::string name;
  std::string frame = "body";
  GroupSpec group;
  std::vector<BranchType> branches;
  // Per branch: action[g][j] = image instance of instance j under g.
  std::vector<OrbitAction> orbit_action;
  // Per branch, per element: ndof x ndof joint-space action on one instance.
  std::vector<std::vector<Eigen::MatrixXd>> joint_rep;
  // Per element: the spatial part R_g (3x3 orthogonal) of the symmetry.
  std::vector<Eigen::Matrix3d> spatial_rep;
  // Optional per-task output representations overriding the defaults.
  std::map<TaskKind, std::vector<Eigen::MatrixXd>> output_rep_overrides;
  // Optional nominal foot positions per branch/instance, used by the
  // synthetic data generator.
  std::vector<std::vector<Eigen::Vector3d>> stance;

  int branch_index(std::string_view id) const;
  int instance_index(int branch, std::string_view label) const;

  // Base feature channel action: blockdiag(R_g, det(R_g) R_g) on [a_b; w_b].
  Eigen::MatrixXd base_channel_rep(ElementId g) const;
  Eigen::MatrixXd output_rep(TaskKind task, ElementId g) const;

  // Orbits in discovery order: branches in order, then instance labels in order.
  std::vector<Orbit> orbits() const;
};

enum class ViolationKind {
  kGroupLaw,
  kInvalidAction,
  kNonHomomorphic,
  kNotOrthogonal,
  kLabelMismatch,
  kStance,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string element;  // element name, empty when not element-specific
  std::string label;    // instance label or branch id, may be empty
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

// Lists every violated action axiom and representation failure.
ValidationReport validate_action(const RobotMorphology& morphology);

// Parses the flat config format (see docs/config_format.md). Validation
// failures are collected and thrown together as one Error.
RobotMorphology load_morphology(std::string_view config_text);
RobotMorphology load_morphology_file(const std::string& path);

// Writes a config that load_morphology maps back to an equal morphology.
std::string serialize_morphology(const RobotMorphology& morphology);

bool equivalent(const RobotMorphology& a, const RobotMorphology& b);

// rho_M(g) = ⊕_i rho_{S_i}(g) ⊗ rho_{M_{S_i}}(g) over the full joint vector,
// ordered branch-major, then instance label, then joint position.
Eigen::MatrixXd joint_space_representation(const RobotMorphology& morphology, ElementId g);
Representation joint_space_representation(const RobotMorphology& morphology);

// Same kinematic tree with the symmetry group forced to C1.
RobotMorphology ablate_symmetry(const RobotMorphology& morphology);

// Directory holding the shipped robot configs, baked in at configure time.
std::string default_config_dir();

}  // namespace mshgnn
