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
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace mshgnn {

// Dense element id; 0 is always the identity.
using ElementId = int;

// A finite group stored as full composition and inverse tables. Groups here
// are tiny (|G| <= 8 for every preset), so no symbolic algebra is needed.
struct GroupSpec {
  std::string name;
  std::vector<std::string> element_names;
  std::vector<ElementId> compose_table;  // row-major, entry [a*n+b] = a∘b
  std::vector<ElementId> inverse_table;
  std::vector<ElementId> generators;

  int order() const { return static_cast<int>(inverse_table.size()); }
  ElementId compose(ElementId a, ElementId b) const {
    return compose_table[static_cast<std::size_t>(a * order() + b)];
  }
  ElementId inverse(ElementId g) const {
    return inverse_table[static_cast<std::size_t>(g)];
  }
  bool contains(ElementId g) const { return g >= 0 && g < order(); }
  // Resolves an element by name ("s", "st") or decimal id ("2"); -1 if absent.
  ElementId find(std::string_view token) const;
  const std::string& element_name(ElementId g) const { return element_names[g]; }

  bool operator==(const GroupSpec&) const = default;
};

// Cyclic group C_n, compose(i,j) = (i+j) mod n, generator {1}.
GroupSpec make_cyclic_group(int n);

// Klein four-group as C2 x C2 with canonical element order [e, s, t, st].
GroupSpec make_klein_four();

// Builds a group from an explicit table; the inverse table is derived.
// Throws Error(kConfigError) listing every violated group axiom.
GroupSpec make_group_from_table(std::string name,
                                std::vector<std::string> element_names,
                                std::vector<ElementId> compose_table,
                                std::vector<ElementId> generators);

// "C1".."C8" or "K4".
GroupSpec preset_group(std::string_view name);

// Exhaustive closure / identity / inverse / associativity / generation check.
// Empty result means the table is a group generated by `generators`.
std::vector<std::string> verify_group_laws(const GroupSpec& group);

enum class RepKind { kPermutation, kOrthogonal, kSignedPermutation };

std::string_view to_string(RepKind kind);

struct Representation {
  int dim = 0;
  RepKind kind = RepKind::kOrthogonal;
  std::vector<Eigen::MatrixXd> mats;  // indexed by element id

  const Eigen::MatrixXd& operator()(ElementId g) const { return mats[g]; }
};

// Checks rho(e) = I, the homomorphism law over all |G|^2 pairs and the
// structural constraint implied by `kind`. Permutation kinds are compared
// exactly; orthogonal kinds within `tol`.
std::vector<std::string> verify_representation(const GroupSpec& group,
                                               const Representation& rep,
                                               double tol = 1e-12);

// action[g][j] is the instance label that label j is sent to by g.
using OrbitAction = std::vector<std::vector<int>>;

// Lists every violated group-action axiom as "(g, label)" diagnostics.
std::vector<std::string> verify_group_action(const GroupSpec& group,
                                             const OrbitAction& action,
                                             int n_instances);

// Permutation representation on instance labels: column j of rho(g) is the
// unit vector e_{g(j)}, so [rho(g) x]_{g(j)} = x_j.
// Throws Error(kInvalidAction) naming the first offending (g, label) pair.
Representation branch_permutation_representation(const GroupSpec& group,
                                                 const OrbitAction& action,
                                                 int n_instances);

Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
Eigen::MatrixXd direct_sum(std::span<const Eigen::MatrixXd> blocks);

// Left-regular permutation representation: [L(g)]_{g∘p, p} = 1.
Eigen::MatrixXd regular_permutation(const GroupSpec& group, ElementId g);

struct CayleyEdge {
  ElementId from;
  ElementId to;
  int generator;  // index into GroupSpec::generators
  bool operator==(const CayleyEdge&) const = default;
};

// Directed edges (g, g∘a, a) for every element g and generator a.
std::vector<CayleyEdge> cayley_edges(const GroupSpec& group);

}  // namespace mshgnn
