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

#include "mshgnn/graph.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "mshgnn/error.hpp"

namespace mshgnn {

std::vector<int> PhysicalTopology::chain(int branch, int instance) const {
  std::vector<int> out;
  for (int v = chain_start[branch][instance];
       v < size() && nodes[v].branch == branch && nodes[v].instance == instance; ++v) {
    out.push_back(v);
  }
  return out;
}

bool PhysicalTopology::operator==(const PhysicalTopology& other) const {
  if (nodes.size() != other.nodes.size() || chain_start != other.chain_start) return false;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& a = nodes[i];
    const auto& b = other.nodes[i];
    if (a.node_class != b.node_class || a.branch != b.branch || a.instance != b.instance ||
        a.position != b.position || a.label != b.label) {
      return false;
    }
  }
  return true;
}

PhysicalTopology physical_topology(const RobotMorphology& m) {
  PhysicalTopology topo;
  topo.nodes.push_back({NodeClass::kBase, -1, -1, 0, "base"});
  for (int b = 0; b < static_cast<int>(m.branches.size()); ++b) {
    const auto& br = m.branches[b];
    topo.chain_start.emplace_back();
    for (int j = 0; j < br.nrep; ++j) {
      topo.chain_start[b].push_back(topo.size());
      for (int k = 1; k <= br.ndof; ++k) {
        topo.nodes.push_back({NodeClass::kJoint, b, j, k, br.instance_labels[j]});
      }
      if (br.has_end_effector) {
        topo.nodes.push_back({NodeClass::kFoot, b, j, br.ndof + 1, br.instance_labels[j]});
      }
    }
  }
  return topo;
}

std::string_view to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::kCayley: return "cayley";
    case EdgeKind::kBranch: return "branch";
    case EdgeKind::kExtra: return "extra";
  }
  return "unknown";
}

Eigen::MatrixXi MorphGraph::typed_adjacency() const {
  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(num_nodes(), num_nodes());
  for (const auto& e : edges) a(e.src, e.dst) = e.type + 1;
  return a;
}

Eigen::VectorXi MorphGraph::node_type_vector() const {
  Eigen::VectorXi x(num_nodes());
  for (const auto& n : nodes) x(n.id) = static_cast<int>(n.node_class);
  return x;
}

int MorphGraph::find_node(std::string_view label, int position, ElementId element) const {
  for (const auto& n : nodes) {
    if (n.label == label && n.position == position && (element < 0 || n.element == element)) {
      return n.id;
    }
  }
  return -1;
}

namespace {

// Collects undirected typed links, rejecting a pair that would need two types.
class LinkSet {
 public:
  void add(int u, int v, int type) {
    auto key = std::minmax(u, v);
    auto [it, inserted] = links_.emplace(key, type);
    if (!inserted && it->second != type) {
      throw Error(ErrorKind::kConstructionError,
                  "nodes " + std::to_string(u) + " and " + std::to_string(v) +
                      " would be joined by two edge types (" + std::to_string(it->second) +
                      ", " + std::to_string(type) + ")");
    }
  }

  std::vector<GraphEdge> directed() const {
    std::vector<GraphEdge> out;
    for (const auto& [key, type] : links_) {
      out.push_back({key.first, key.second, type});
      if (key.first != key.second) out.push_back({key.second, key.first, type});
    }
    std::sort(out.begin(), out.end(), [](const GraphEdge& a, const GraphEdge& b) {
      return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
    });
    return out;
  }

 private:
  std::map<std::pair<int, int>, int> links_;
};

}  // namespace

MorphGraph build_ms_graph(const RobotMorphology& m) {
  const GroupSpec& G = m.group;
  const int order = G.order();
  const PhysicalTopology topo = physical_topology(m);

  MorphGraph graph;
  graph.robot = m.name;
  graph.group = G;
  graph.num_physical_nodes = topo.size();

  // One base copy per group element.
  graph.instances.emplace_back();
  for (int p = 0; p < order; ++p) {
    graph.nodes.push_back({p, NodeClass::kBase, -1, p, 0, 0, "base"});
    graph.instances[0].push_back({p});
  }

  // Every orbit becomes |G| labelled subgraphs,
  // G_{p,q} copying physical instance p(r_q) of the orbit representative r_q.
  for (const Orbit& orbit : m.orbits()) {
    const auto& br = m.branches[orbit.branch];
    const int size = static_cast<int>(orbit.members.size());
    if (order % size != 0) {
      throw Error(ErrorKind::kConstructionError,
                  "orbit '" + orbit.name + "' has size " + std::to_string(size) +
                      " which does not divide |G| = " + std::to_string(order));
    }
    if (size != order && size != 1) {
      graph.warnings.push_back("orbit '" + orbit.name + "' has " + std::to_string(size) +
                               " physical instances for |G| = " + std::to_string(order) +
                               "; completed by replicating along left-coset representatives");
    }
    GraphOrbit gorbit;
    gorbit.name = orbit.name;
    gorbit.branch = orbit.branch;
    gorbit.representative = orbit.representative;
    gorbit.chain_length = br.ndof + (br.has_end_effector ? 1 : 0);
    const int q = static_cast<int>(graph.orbits.size());
    graph.instances.emplace_back();
    for (int p = 0; p < order; ++p) {
      const int inst = m.orbit_action[orbit.branch][p][orbit.representative];
      gorbit.physical_instance.push_back(inst);
      std::vector<int> chain;
      for (int pos = 1; pos <= gorbit.chain_length; ++pos) {
        GraphNode node;
        node.id = graph.num_nodes();
        node.node_class = pos <= br.ndof ? NodeClass::kJoint : NodeClass::kFoot;
        node.orbit = q;
        node.element = p;
        node.position = pos;
        node.physical = topo.index(orbit.branch, inst, pos);
        node.label = br.instance_labels[inst];
        chain.push_back(node.id);
        graph.nodes.push_back(std::move(node));
      }
      graph.instances.back().push_back(std::move(chain));
    }
    graph.orbits.push_back(std::move(gorbit));
  }

  // Edge types: one per generator, then one per (orbit, chain depth).
  for (int a = 0; a < static_cast<int>(G.generators.size()); ++a) {
    graph.edge_types.push_back({graph.num_edge_types(), EdgeKind::kCayley, a, -1, -1});
  }
  std::vector<int> branch_type_start;
  for (int q = 0; q < static_cast<int>(graph.orbits.size()); ++q) {
    branch_type_start.push_back(graph.num_edge_types());
    for (int d = 0; d < graph.orbits[q].chain_length; ++d) {
      graph.edge_types.push_back({graph.num_edge_types(), EdgeKind::kBranch, -1, q, d});
    }
  }

  LinkSet links;
  // Cayley graph on the base copies.
  for (const CayleyEdge& e : cayley_edges(G)) links.add(e.from, e.to, e.generator);
  for (int q = 0; q < static_cast<int>(graph.orbits.size()); ++q) {
    for (int p = 0; p < order; ++p) {
      const auto& chain = graph.instances[1 + q][p];
      links.add(p, chain.front(), branch_type_start[q]);
      for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
        links.add(chain[k], chain[k + 1], branch_type_start[q] + static_cast<int>(k) + 1);
      }
    }
  }
  graph.edges = links.directed();
  return graph;
}

GraphPermutation graph_permutation(const MorphGraph& graph, ElementId g) {
  if (!graph.group.contains(g)) {
    throw Error(ErrorKind::kInvalidArgument,
                "element " + std::to_string(g) + " is not in group " + graph.group.name);
  }
  // rho_b = diag(rho_{G_b}(g), rho_{G_1}(g) ⊗ I_{l_1}, ..., rho_{G_k}(g) ⊗ I_{l_k});
  // after completion every orbit carries the left-regular permutation.
  const Eigen::MatrixXd regular = regular_permutation(graph.group, g);
  std::vector<Eigen::MatrixXd> blocks{regular};
  for (const auto& orbit : graph.orbits) {
    blocks.push_back(kronecker(regular, Eigen::MatrixXd::Identity(orbit.chain_length, orbit.chain_length)));
  }
  GraphPermutation out;
  out.element = g;
  out.perm = direct_sum(blocks).cast<int>();
  if (out.perm.rows() != graph.num_nodes()) {
    throw Error(ErrorKind::kDimensionMismatch, "graph permutation does not match node count");
  }
  out.node_map.assign(static_cast<std::size_t>(graph.num_nodes()), -1);
  for (int v = 0; v < graph.num_nodes(); ++v) {
    for (int u = 0; u < graph.num_nodes(); ++u) {
      if (out.perm(u, v) == 1) out.node_map[v] = u;
    }
  }
  return out;
}

AutomorphismResult check_automorphism(const MorphGraph& graph, const GraphPermutation& perm) {
  const Eigen::MatrixXi a = graph.typed_adjacency();
  const Eigen::VectorXi x = graph.node_type_vector();
  AutomorphismResult result;
  if (perm.perm.rows() != a.rows() || perm.perm.cols() != a.cols()) {
    result.witness = AutomorphismWitness{true, -1, -1, 0, 0};
    return result;
  }
  const Eigen::MatrixXi permuted = perm.perm * a * perm.perm.transpose();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (permuted(i, j) != a(i, j)) {
        result.witness = AutomorphismWitness{true, static_cast<int>(i), static_cast<int>(j),
                                             a(i, j), permuted(i, j)};
        return result;
      }
    }
  }
  const Eigen::VectorXi px = perm.perm * x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (px(i) != x(i)) {
      result.witness = AutomorphismWitness{false, static_cast<int>(i), 0, x(i), px(i)};
      return result;
    }
  }
  result.ok = true;
  return result;
}

MorphGraph with_extra_edge(const MorphGraph& graph, int u, int v) {
  if (u < 0 || v < 0 || u >= graph.num_nodes() || v >= graph.num_nodes()) {
    throw Error(ErrorKind::kInvalidArgument, "extra edge endpoint out of range");
  }
  MorphGraph out = graph;
  const int type = out.num_edge_types();
  out.edge_types.push_back({type, EdgeKind::kExtra, -1, -1, -1});
  out.edges.push_back({u, v, type});
  if (u != v) out.edges.push_back({v, u, type});
  std::sort(out.edges.begin(), out.edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
    return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
  });
  return out;
}

std::optional<std::pair<int, int>> find_symmetry_breaking_edge(const MorphGraph& graph) {
  if (graph.group.order() < 2 || graph.orbits.empty()) return std::nullopt;
  const Eigen::MatrixXi a = graph.typed_adjacency();
  const int u = graph.instances[1][0].front();
  std::vector<GraphPermutation> perms;
  for (int g = 1; g < graph.group.order(); ++g) perms.push_back(graph_permutation(graph, g));
  for (int v = 0; v < graph.num_nodes(); ++v) {
    if (v == u || a(u, v) != 0) continue;
    MorphGraph candidate = with_extra_edge(graph, u, v);
    for (const auto& perm : perms) {
      if (!check_automorphism(candidate, perm).ok) return std::make_pair(u, v);
    }
  }
  return std::nullopt;
}

}  // namespace mshgnn
