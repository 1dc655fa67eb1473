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

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mshgnn/graph.hpp"
#include "mshgnn/signal.hpp"

namespace mshgnn {

struct NetConfig {
  int hidden = 128;
  int layers = 8;
  std::uint64_t seed = 0;
  bool operator==(const NetConfig&) const = default;
};

// All weights are indexed by node class or edge type, never by node id:
//   input projection   h0_v = Win[c] x_v + bin[c]
//   layer l            m_v  = mean_{e=(u,v)} W[l][type(e)] h_u
//                      h_v <- relu(U[l][c] [h_v; m_v] + b[l][c]) (+ h_v for l >= 1)
//   output head        y_v  = Wout[c] h_v + bout[c]
// Biases are stored as one-column matrices so every block is visited alike.
struct ModelParams {
  NetConfig config;
  std::array<int, kNumNodeClasses> input_dim{};
  std::array<int, kNumNodeClasses> output_dim{};
  int num_edge_types = 0;

  std::array<Eigen::MatrixXd, kNumNodeClasses> in_w, in_b;
  std::vector<std::vector<Eigen::MatrixXd>> msg_w;  // [layer][edge type]
  std::vector<std::array<Eigen::MatrixXd, kNumNodeClasses>> upd_w, upd_b;
  std::array<Eigen::MatrixXd, kNumNodeClasses> out_w, out_b;

  // Calls f(name, block) for every parameter block in a fixed order.
  void visit(const std::function<void(const std::string&, Eigen::MatrixXd&)>& f);
  void visit(const std::function<void(const std::string&, const Eigen::MatrixXd&)>& f) const;

  std::size_t num_parameters() const;
  ModelParams zeros_like() const;
  bool same_shape(const ModelParams& other) const;
  bool operator==(const ModelParams& other) const;
};

// Glorot-uniform weights in ±sqrt(6 / (fan_in + fan_out)), zero biases.
ModelParams init_params(const MorphGraph& graph, const SignalLayout& layout, TaskKind task,
                        const NetConfig& config);

template <typename Scalar>
struct ForwardTrace {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  std::vector<Mat> x;               // [node]
  std::vector<std::vector<Mat>> h;  // [layer 0..L][node]
  std::vector<std::vector<Mat>> z;  // [layer 1..L][node], pre-activation
  std::vector<std::vector<Mat>> m;  // [layer 1..L][node], aggregated messages
  std::vector<Mat> y;               // [node]
  bool recorded = false;
};

// z_G on an already encoded graph signal. Throws numeric-error naming the
// first layer that produced a non-finite value.
template <typename Scalar>
ForwardTrace<Scalar> forward(const ModelParams& params, const MorphGraph& graph,
                             const Signal& input);

// Reverse-mode gradients of sum(dy ⊙ y) with respect to every block.
template <typename Scalar>
ModelParams backward(const ModelParams& params, const MorphGraph& graph,
                     const ForwardTrace<Scalar>& trace, const Signal& dy);

template <typename Scalar>
Signal trace_outputs(const ForwardTrace<Scalar>& trace);

enum class Precision { kDouble, kSingle };

// Reads MSHGNN_PRECISION ("single" or "double", default double).
Precision precision_from_env();
std::string_view to_string(Precision p);

// Convenience wrapper dispatching on precision.
Signal network_outputs(const ModelParams& params, const MorphGraph& graph, const Signal& input,
                       Precision precision = Precision::kDouble);

}  // namespace mshgnn
