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
#include <vector>

#include <Eigen/Dense>

#include "mshgnn/group.hpp"
#include "mshgnn/morphology.hpp"
#include "mshgnn/task.hpp"

namespace mshgnn {

// Physical components of the robot (one base, then every branch instance's
// chain), independent of the symmetry group. Datasets live on this layout.
struct PhysicalTopology {
  struct Node {
    NodeClass node_class;
    int branch;    // -1 for the base
    int instance;  // -1 for the base
    int position;  // 0 base, 1..ndof joints, ndof+1 foot
    std::string label;
  };
  std::vector<Node> nodes;
  std::vector<std::vector<int>> chain_start;  // [branch][instance] -> first node id

  int size() const { return static_cast<int>(nodes.size()); }
  int index(int branch, int instance, int position) const {
    return chain_start[branch][instance] + position - 1;
  }
  // Node ids of one instance's chain, ordered joint_1..joint_ndof[, foot].
  std::vector<int> chain(int branch, int instance) const;
  bool operator==(const PhysicalTopology&) const;
};

PhysicalTopology physical_topology(const RobotMorphology& morphology);

struct GraphNode {
  int id = 0;
  NodeClass node_class = NodeClass::kBase;
  int orbit = -1;      // -1 for base nodes
  ElementId element = 0;
  int position = 0;    // 0 base, 1..ndof joints, ndof+1 foot
  int physical = 0;    // PhysicalTopology node this copy reads its input from
  std::string label;   // instance label, or "base"
  bool operator==(const GraphNode&) const = default;
};

struct GraphEdge {
  int src = 0;
  int dst = 0;
  int type = 0;
  bool operator==(const GraphEdge&) const = default;
};

enum class EdgeKind { kCayley, kBranch, kExtra };
std::string_view to_string(EdgeKind kind);

struct EdgeTypeInfo {
  int id = 0;
  EdgeKind kind = EdgeKind::kCayley;
  int generator = -1;  // Cayley edges
  int orbit = -1;      // branch edges
  int depth = -1;      // branch edges: link between chain positions depth and depth+1
  bool operator==(const EdgeTypeInfo&) const = default;
};

struct GraphOrbit {
  std::string name;
  int branch = 0;
  int representative = 0;
  int chain_length = 0;                   // ndof + (foot ? 1 : 0)
  std::vector<int> physical_instance;     // [p] -> instance copied by subgraph G_{p,q}
  bool operator==(const GraphOrbit&) const = default;
};

// Typed heterogeneous graph after orbit completion and Cayley wiring.
// Node order: |G| base nodes (p = 0..|G|-1), then for every orbit q and every
// element p the chain joint_1..joint_ndof[, foot]. Under this ordering the
// graph-space permutation of g has Kronecker block structure
// diag(L(g), L(g) ⊗ I_{l_1}, ..., L(g) ⊗ I_{l_k}).
struct MorphGraph {
  std::string robot;
  GroupSpec group;
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;  // directed; every (u,v,t) has its (v,u,t)
  std::vector<EdgeTypeInfo> edge_types;
  std::vector<GraphOrbit> orbits;
  // instances[0][p] = {base node p}; instances[1+q][p] = chain of G_{p,q}.
  std::vector<std::vector<std::vector<int>>> instances;
  int num_physical_nodes = 0;
  std::vector<std::string> warnings;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_edge_types() const { return static_cast<int>(edge_types.size()); }
  int num_base_nodes() const { return group.order(); }

  // A_G: 0 for no edge, edge type + 1 otherwise.
  Eigen::MatrixXi typed_adjacency() const;
  // X_type: node class per node.
  Eigen::VectorXi node_type_vector() const;
  // First node whose label and chain position match, or -1.
  int find_node(std::string_view label, int position, ElementId element = -1) const;

  bool operator==(const MorphGraph&) const = default;
};

// Orbit decomposition, subgraph creation and
// (p,q) labelling, orbit completion and Cayley wiring of the base copies.
MorphGraph build_ms_graph(const RobotMorphology& morphology);

struct GraphPermutation {
  ElementId element = 0;
  Eigen::MatrixXi perm;       // rho_b, with perm(node_map[v], v) = 1
  std::vector<int> node_map;  // node v is sent to node_map[v]
};

GraphPermutation graph_permutation(const MorphGraph& graph, ElementId g);

struct AutomorphismWitness {
  bool in_adjacency = true;  // false: the node type vector differs
  int row = 0;
  int col = 0;
  int expected = 0;          // A_G entry
  int actual = 0;            // (rho_b A_G rho_b^T) entry
};

struct AutomorphismResult {
  bool ok = false;
  std::optional<AutomorphismWitness> witness;
};

// Exact integer test of rho_b A_G rho_b^T = A_G and rho_b X_type = X_type.
AutomorphismResult check_automorphism(const MorphGraph& graph, const GraphPermutation& perm);

// Copy of `graph` with one extra undirected edge u--v of a fresh type.
MorphGraph with_extra_edge(const MorphGraph& graph, int u, int v);

// First extra edge (in deterministic order) that breaks some graph
// permutation; used by the symmetry-breaking harness. nullopt for |G| = 1.
std::optional<std::pair<int, int>> find_symmetry_breaking_edge(const MorphGraph& graph);

enum class GraphFormat { kDot, kJson };

std::string export_graph(const MorphGraph& graph, GraphFormat format);
MorphGraph graph_from_json(std::string_view text);

}  // namespace mshgnn
