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

#include <set>

#include <gtest/gtest.h>

#include "mshgnn/error.hpp"
#include "mshgnn/group.hpp"

namespace mshgnn {
namespace {

TEST(CyclicGroup, ComposesModuloN) {
  GroupSpec c4 = make_cyclic_group(4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) EXPECT_EQ(c4.compose(i, j), (i + j) % 4);
  }
  EXPECT_EQ(c4.compose(3, 2), 1);
  EXPECT_EQ(c4.inverse(3), 1);
  EXPECT_EQ(c4.generators, std::vector<ElementId>{1});
}

TEST(CyclicGroup, SmallOrders) {
  GroupSpec c2 = make_cyclic_group(2);
  EXPECT_EQ(c2.compose(1, 1), 0);
  GroupSpec c1 = make_cyclic_group(1);
  EXPECT_EQ(c1.order(), 1);
  EXPECT_TRUE(c1.generators.empty());
  EXPECT_TRUE(verify_group_laws(c1).empty());
}

TEST(CyclicGroup, RejectsZero) {
  try {
    make_cyclic_group(0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidArgument);
  }
}

TEST(KleinFour, DefiningRelations) {
  GroupSpec k4 = make_klein_four();
  const ElementId s = k4.find("s"), t = k4.find("t"), st = k4.find("st");
  EXPECT_EQ(k4.order(), 4);
  EXPECT_EQ(k4.compose(s, t), st);
  EXPECT_EQ(k4.compose(t, s), st);
  for (ElementId g = 0; g < 4; ++g) EXPECT_EQ(k4.inverse(g), g);
  EXPECT_EQ(k4.generators, (std::vector<ElementId>{s, t}));
}

TEST(GroupLaws, AllPresetsPass) {
  for (const char* name : {"C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "K4"}) {
    EXPECT_TRUE(verify_group_laws(preset_group(name)).empty()) << name;
  }
}

TEST(GroupLaws, BrokenTableIsReported) {
  // Latin square that is not associative.
  std::vector<ElementId> table = {0, 1, 2, 3, 4,  //
                                  1, 0, 3, 4, 2,  //
                                  2, 4, 0, 1, 3,  //
                                  3, 2, 4, 0, 1,  //
                                  4, 3, 1, 2, 0};
  EXPECT_THROW(make_group_from_table("bad", {"e", "a", "b", "c", "d"}, table, {1, 2}), Error);
}

TEST(GroupLaws, NonGeneratingGeneratorsFlagged) {
  GroupSpec k4 = make_klein_four();
  k4.generators = {1};
  auto v = verify_group_laws(k4);
  EXPECT_FALSE(v.empty());
}

TEST(GroupFromTable, MatchesKleinFour) {
  GroupSpec k4 = make_klein_four();
  GroupSpec g = make_group_from_table("K4", k4.element_names, k4.compose_table, k4.generators);
  EXPECT_EQ(g, k4);
}

OrbitAction quadruped_action() {
  // labels LF LH RF RH
  return {{0, 1, 2, 3}, {2, 3, 0, 1}, {1, 0, 3, 2}, {3, 2, 1, 0}};
}

TEST(BranchPermutation, SagittalSwapsLeftRight) {
  GroupSpec k4 = make_klein_four();
  Representation rep = branch_permutation_representation(k4, quadruped_action(), 4);
  EXPECT_EQ(rep.kind, RepKind::kPermutation);
  EXPECT_TRUE(rep(0).isIdentity());
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 4);
  expected(2, 0) = expected(0, 2) = expected(3, 1) = expected(1, 3) = 1;
  EXPECT_EQ(rep(1), expected);
}

TEST(BranchPermutation, ProductOfReflectionsSwapsDiagonals) {
  GroupSpec k4 = make_klein_four();
  Representation rep = branch_permutation_representation(k4, quadruped_action(), 4);
  Eigen::MatrixXd product = rep(1) * rep(2);
  EXPECT_EQ(rep(3), product);
  // LF <-> RH, LH <-> RF
  EXPECT_EQ(rep(3)(3, 0), 1);
  EXPECT_EQ(rep(3)(2, 1), 1);
  EXPECT_TRUE(verify_representation(k4, rep).empty());
}

TEST(BranchPermutation, InvalidActionNamesPair) {
  GroupSpec k4 = make_klein_four();
  OrbitAction bad = quadruped_action();
  bad[1] = {2, 3, 3, 1};  // s sends RF to RH: not a bijection
  try {
    branch_permutation_representation(k4, bad, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidAction);
    EXPECT_NE(std::string(e.what()).find("s"), std::string::npos);
  }
  EXPECT_FALSE(verify_group_action(k4, bad, 4).empty());
}

TEST(Representation, HomomorphismFailureDetected) {
  GroupSpec c2 = make_cyclic_group(2);
  Representation rep{2, RepKind::kOrthogonal, {Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2)}};
  EXPECT_TRUE(verify_representation(c2, rep).empty());
  Eigen::MatrixXd rot(2, 2);
  rot << 0, -1, 1, 0;
  rep.mats[1] = rot;  // rot^2 = -I != rho(e)
  EXPECT_FALSE(verify_representation(c2, rep).empty());
}

TEST(Kronecker, BlockLayout) {
  Eigen::MatrixXd a(2, 2), b = Eigen::MatrixXd::Identity(3, 3);
  a << 0, 1, 1, 0;
  Eigen::MatrixXd k = kronecker(a, b);
  ASSERT_EQ(k.rows(), 6);
  EXPECT_TRUE(k.block(0, 3, 3, 3).isIdentity());
  EXPECT_TRUE(k.block(0, 0, 3, 3).isZero());
  std::vector<Eigen::MatrixXd> blocks{a, b};
  Eigen::MatrixXd d = direct_sum(blocks);
  EXPECT_EQ(d.rows(), 5);
  EXPECT_TRUE(d.block(2, 2, 3, 3).isIdentity());
  EXPECT_TRUE(d.block(0, 2, 2, 3).isZero());
}

TEST(RegularPermutation, LeftComposition) {
  GroupSpec c4 = make_cyclic_group(4);
  Eigen::MatrixXd l = regular_permutation(c4, 1);
  for (int p = 0; p < 4; ++p) EXPECT_EQ(l(c4.compose(1, p), p), 1.0);
  EXPECT_TRUE((regular_permutation(c4, 2) - l * l).isZero());
}

TEST(Cayley, KleinFourEdges) {
  GroupSpec k4 = make_klein_four();
  auto edges = cayley_edges(k4);
  EXPECT_EQ(edges.size(), 8u);
  std::vector<int> out_degree(4, 0);
  for (const auto& e : edges) {
    ++out_degree[e.from];
    EXPECT_EQ(e.to, k4.compose(e.from, k4.generators[e.generator]));
  }
  for (int d : out_degree) EXPECT_EQ(d, 2);
}

TEST(Cayley, SmallGroups) {
  auto c2 = cayley_edges(make_cyclic_group(2));
  ASSERT_EQ(c2.size(), 2u);
  std::set<std::pair<int, int>> pairs;
  for (const auto& e : c2) pairs.insert(std::minmax(e.from, e.to));
  EXPECT_EQ(pairs.size(), 1u);
  EXPECT_TRUE(cayley_edges(make_cyclic_group(1)).empty());
}

TEST(Cayley, VertexTransitive) {
  for (const char* name : {"C3", "C6", "K4"}) {
    GroupSpec g = preset_group(name);
    auto edges = cayley_edges(g);
    for (ElementId h = 0; h < g.order(); ++h) {
      // Left multiplication by h relabels the Cayley graph onto itself.
      for (const auto& e : edges) {
        CayleyEdge moved{g.compose(h, e.from), g.compose(h, e.to), e.generator};
        EXPECT_NE(std::find(edges.begin(), edges.end(), moved), edges.end()) << name;
      }
    }
  }
}

}  // namespace
}  // namespace mshgnn
