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

#include "mshgnn/group.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "mshgnn/error.hpp"

namespace mshgnn {
namespace {

std::string join(const std::vector<std::string>& items) {
  std::ostringstream os;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) os << "; ";
    os << items[i];
  }
  return os.str();
}

}  // namespace

ElementId GroupSpec::find(std::string_view token) const {
  for (int g = 0; g < order(); ++g) {
    if (element_names[g] == token) return g;
  }
  int id = -1;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), id);
  if (ec == std::errc() && ptr == token.data() + token.size() && contains(id)) {
    return id;
  }
  return -1;
}

GroupSpec make_cyclic_group(int n) {
  if (n <= 0) {
    throw Error(ErrorKind::kInvalidArgument,
                "cyclic group order must be positive, got " + std::to_string(n));
  }
  GroupSpec group;
  group.name = "C" + std::to_string(n);
  group.element_names.push_back("e");
  for (int i = 1; i < n; ++i) {
    group.element_names.push_back(n == 2 ? std::string("s") : "r" + std::to_string(i));
  }
  group.compose_table.resize(static_cast<std::size_t>(n * n));
  group.inverse_table.resize(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) group.compose_table[a * n + b] = (a + b) % n;
    group.inverse_table[a] = (n - a) % n;
  }
  if (n > 1) group.generators = {1};
  return group;
}

GroupSpec make_klein_four() {
  // Elements encoded as bit pairs: s = 0b01, t = 0b10, st = 0b11; composition is xor.
  GroupSpec group;
  group.name = "K4";
  group.element_names = {"e", "s", "t", "st"};
  group.compose_table.resize(16);
  group.inverse_table = {0, 1, 2, 3};
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) group.compose_table[a * 4 + b] = a ^ b;
  }
  group.generators = {1, 2};
  return group;
}

GroupSpec make_group_from_table(std::string name,
                                std::vector<std::string> element_names,
                                std::vector<ElementId> compose_table,
                                std::vector<ElementId> generators) {
  const int n = static_cast<int>(element_names.size());
  if (n == 0 || compose_table.size() != static_cast<std::size_t>(n * n)) {
    throw Error(ErrorKind::kConfigError,
                "composition table must be " + std::to_string(n) + "x" +
                    std::to_string(n));
  }
  GroupSpec group;
  group.name = std::move(name);
  group.element_names = std::move(element_names);
  group.compose_table = std::move(compose_table);
  group.generators = std::move(generators);
  group.inverse_table.assign(static_cast<std::size_t>(n), -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      int c = group.compose_table[a * n + b];
      if (c == 0 && group.inverse_table[a] < 0) group.inverse_table[a] = b;
    }
  }
  // A missing inverse is reported by verify_group_laws; keep the table well-formed for it.
  for (auto& inv : group.inverse_table) {
    if (inv < 0) inv = 0;
  }
  auto problems = verify_group_laws(group);
  if (!problems.empty()) {
    throw Error(ErrorKind::kConfigError, "group '" + group.name + "': " + join(problems));
  }
  return group;
}

GroupSpec preset_group(std::string_view name) {
  if (name == "K4") return make_klein_four();
  if (name.size() >= 2 && name[0] == 'C') {
    int n = 0;
    auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), n);
    if (ec == std::errc() && ptr == name.data() + name.size() && n >= 1 && n <= 8) {
      return make_cyclic_group(n);
    }
  }
  throw Error(ErrorKind::kConfigError, "unknown group preset '" + std::string(name) + "'");
}

std::vector<std::string> verify_group_laws(const GroupSpec& group) {
  std::vector<std::string> out;
  const int n = group.order();
  if (static_cast<int>(group.element_names.size()) != n ||
      group.compose_table.size() != static_cast<std::size_t>(n * n)) {
    out.push_back("table dimensions inconsistent with element list");
    return out;
  }
  bool closed = true;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      int c = group.compose_table[a * n + b];
      if (c < 0 || c >= n) {
        out.push_back("closure: compose(" + std::to_string(a) + "," + std::to_string(b) +
                      ") = " + std::to_string(c) + " is not an element");
        closed = false;
      }
    }
  }
  if (!closed) return out;
  for (int g = 0; g < n; ++g) {
    if (group.compose(0, g) != g || group.compose(g, 0) != g) {
      out.push_back("identity: element 0 does not act trivially on " + std::to_string(g));
    }
    int inv = group.inverse(g);
    if (!group.contains(inv) || group.compose(g, inv) != 0 || group.compose(inv, g) != 0) {
      out.push_back("inverse: element " + std::to_string(g) + " has no two-sided inverse");
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        if (group.compose(group.compose(a, b), c) != group.compose(a, group.compose(b, c))) {
          out.push_back("associativity fails for (" + std::to_string(a) + "," +
                        std::to_string(b) + "," + std::to_string(c) + ")");
        }
      }
    }
  }
  for (ElementId a : group.generators) {
    if (!group.contains(a)) {
      out.push_back("generator " + std::to_string(a) + " is not an element");
      return out;
    }
    if (a == 0) out.push_back("identity listed as a generator");
  }
  std::vector<bool> reached(static_cast<std::size_t>(n), false);
  std::vector<ElementId> frontier{0};
  reached[0] = true;
  while (!frontier.empty()) {
    ElementId g = frontier.back();
    frontier.pop_back();
    for (ElementId a : group.generators) {
      ElementId h = group.compose(g, a);
      if (!reached[h]) {
        reached[h] = true;
        frontier.push_back(h);
      }
    }
  }
  for (int g = 0; g < n; ++g) {
    if (!reached[g]) {
      out.push_back("generators do not reach element " + std::to_string(g));
    }
  }
  return out;
}

std::string_view to_string(RepKind kind) {
  switch (kind) {
    case RepKind::kPermutation: return "permutation";
    case RepKind::kOrthogonal: return "orthogonal";
    case RepKind::kSignedPermutation: return "signed-permutation";
  }
  return "unknown";
}

std::vector<std::string> verify_representation(const GroupSpec& group,
                                               const Representation& rep,
                                               double tol) {
  std::vector<std::string> out;
  const int n = group.order();
  if (static_cast<int>(rep.mats.size()) != n) {
    out.push_back("representation has " + std::to_string(rep.mats.size()) +
                  " matrices for a group of order " + std::to_string(n));
    return out;
  }
  for (int g = 0; g < n; ++g) {
    if (rep.mats[g].rows() != rep.dim || rep.mats[g].cols() != rep.dim) {
      out.push_back("matrix for element " + group.element_name(g) + " is not " +
                    std::to_string(rep.dim) + "x" + std::to_string(rep.dim));
      return out;
    }
  }
  const bool exact = rep.kind != RepKind::kOrthogonal;
  const double eps = exact ? 0.0 : tol;
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(rep.dim, rep.dim);
  if ((rep.mats[0] - eye).cwiseAbs().maxCoeff() > eps) {
    out.push_back("rho(e) is not the identity");
  }
  for (int g = 0; g < n; ++g) {
    const Eigen::MatrixXd& m = rep.mats[g];
    const std::string who = "element " + group.element_name(g);
    if (rep.kind == RepKind::kPermutation || rep.kind == RepKind::kSignedPermutation) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
          double v = m(i, j);
          bool ok = rep.kind == RepKind::kPermutation ? (v == 0.0 || v == 1.0)
                                                      : (v == 0.0 || v == 1.0 || v == -1.0);
          if (!ok) {
            out.push_back(who + ": entry (" + std::to_string(i) + "," + std::to_string(j) +
                          ") not allowed for " + std::string(to_string(rep.kind)));
          }
        }
      }
      Eigen::VectorXd rows = m.cwiseAbs().rowwise().sum();
      Eigen::VectorXd cols = m.cwiseAbs().colwise().sum().transpose();
      for (Eigen::Index i = 0; i < rows.size(); ++i) {
        if (rows(i) != 1.0 || cols(i) != 1.0) {
          out.push_back(who + ": row/column " + std::to_string(i) + " does not have exactly one nonzero");
          break;
        }
      }
    }
    if ((m * m.transpose() - eye).cwiseAbs().maxCoeff() > (exact ? 0.0 : tol)) {
      out.push_back(who + ": matrix is not orthogonal");
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double err = (rep.mats[group.compose(a, b)] - rep.mats[a] * rep.mats[b]).cwiseAbs().maxCoeff();
      if (err > eps) {
        out.push_back("homomorphism fails for (" + group.element_name(a) + "," +
                      group.element_name(b) + "), error " + std::to_string(err));
      }
    }
  }
  return out;
}

std::vector<std::string> verify_group_action(const GroupSpec& group,
                                             const OrbitAction& action,
                                             int n_instances) {
  std::vector<std::string> out;
  const int n = group.order();
  auto pair = [&](int g, int j) {
    return "(" + group.element_name(g) + ", " + std::to_string(j) + ")";
  };
  if (static_cast<int>(action.size()) != n) {
    out.push_back("action defined for " + std::to_string(action.size()) + " of " +
                  std::to_string(n) + " elements");
    return out;
  }
  for (int g = 0; g < n; ++g) {
    if (static_cast<int>(action[g].size()) != n_instances) {
      out.push_back("action of " + group.element_name(g) + " has " +
                    std::to_string(action[g].size()) + " images for " +
                    std::to_string(n_instances) + " labels");
      return out;
    }
    std::vector<int> hits(static_cast<std::size_t>(n_instances), 0);
    for (int j = 0; j < n_instances; ++j) {
      int img = action[g][j];
      if (img < 0 || img >= n_instances) {
        out.push_back("image out of range at " + pair(g, j));
        return out;
      }
      ++hits[img];
    }
    for (int j = 0; j < n_instances; ++j) {
      if (hits[j] != 1) {
        out.push_back("action of " + group.element_name(g) + " is not a bijection (label " +
                      std::to_string(j) + " hit " + std::to_string(hits[j]) + " times)");
      }
    }
  }
  for (int j = 0; j < n_instances; ++j) {
    if (action[0][j] != j) out.push_back("identity moves label at " + pair(0, j));
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int j = 0; j < n_instances; ++j) {
        if (action[group.compose(a, b)][j] != action[a][action[b][j]]) {
          out.push_back("compatibility fails: " + group.element_name(a) + "∘" +
                        group.element_name(b) + " at " + pair(group.compose(a, b), j));
        }
      }
    }
  }
  return out;
}

Representation branch_permutation_representation(const GroupSpec& group,
                                                 const OrbitAction& action,
                                                 int n_instances) {
  if (n_instances <= 0) {
    throw Error(ErrorKind::kInvalidArgument, "n_instances must be positive");
  }
  auto problems = verify_group_action(group, action, n_instances);
  if (!problems.empty()) throw Error(ErrorKind::kInvalidAction, problems.front());
  Representation rep;
  rep.dim = n_instances;
  rep.kind = RepKind::kPermutation;
  for (int g = 0; g < group.order(); ++g) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_instances, n_instances);
    for (int j = 0; j < n_instances; ++j) m(action[g][j], j) = 1.0;
    rep.mats.push_back(std::move(m));
  }
  return rep;
}

Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Eigen::MatrixXd direct_sum(std::span<const Eigen::MatrixXd> blocks) {
  Eigen::Index rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, cols);
  Eigen::Index r = 0, c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

Eigen::MatrixXd regular_permutation(const GroupSpec& group, ElementId g) {
  const int n = group.order();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int p = 0; p < n; ++p) m(group.compose(g, p), p) = 1.0;
  return m;
}

std::vector<CayleyEdge> cayley_edges(const GroupSpec& group) {
  std::vector<CayleyEdge> edges;
  for (int g = 0; g < group.order(); ++g) {
    for (int a = 0; a < static_cast<int>(group.generators.size()); ++a) {
      edges.push_back({g, group.compose(g, group.generators[a]), a});
    }
  }
  return edges;
}

}  // namespace mshgnn
