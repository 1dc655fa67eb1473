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

#include "mshgnn/network.hpp"

#include <cmath>
#include <cstdlib>
#include <random>

#include "mshgnn/error.hpp"

namespace mshgnn {

namespace {

constexpr std::array<const char*, kNumNodeClasses> kClassNames = {"base", "joint", "foot"};

template <typename Visitor, typename P>
void visit_blocks(P& p, Visitor&& f) {
  for (int c = 0; c < kNumNodeClasses; ++c) {
    f(std::string("input.") + kClassNames[c] + ".weight", p.in_w[c]);
    f(std::string("input.") + kClassNames[c] + ".bias", p.in_b[c]);
  }
  for (std::size_t l = 0; l < p.msg_w.size(); ++l) {
    const std::string prefix = "layer" + std::to_string(l) + ".";
    for (std::size_t t = 0; t < p.msg_w[l].size(); ++t) {
      f(prefix + "message.type" + std::to_string(t), p.msg_w[l][t]);
    }
    for (int c = 0; c < kNumNodeClasses; ++c) {
      f(prefix + "update." + kClassNames[c] + ".weight", p.upd_w[l][c]);
      f(prefix + "update." + kClassNames[c] + ".bias", p.upd_b[l][c]);
    }
  }
  for (int c = 0; c < kNumNodeClasses; ++c) {
    f(std::string("output.") + kClassNames[c] + ".weight", p.out_w[c]);
    f(std::string("output.") + kClassNames[c] + ".bias", p.out_b[c]);
  }
}

struct Incoming {
  int src;
  int type;
};

std::vector<std::vector<Incoming>> incoming_edges(const MorphGraph& graph) {
  std::vector<std::vector<Incoming>> in(static_cast<std::size_t>(graph.num_nodes()));
  for (const auto& e : graph.edges) in[e.dst].push_back({e.src, e.type});
  return in;
}

int class_index(const GraphNode& n) { return static_cast<int>(n.node_class); }

template <typename S>
struct TypedParams {
  using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
  std::array<Mat, kNumNodeClasses> in_w, in_b, out_w, out_b;
  std::vector<std::vector<Mat>> msg_w;
  std::vector<std::array<Mat, kNumNodeClasses>> upd_w, upd_b;

  explicit TypedParams(const ModelParams& p) {
    for (int c = 0; c < kNumNodeClasses; ++c) {
      in_w[c] = p.in_w[c].cast<S>();
      in_b[c] = p.in_b[c].cast<S>();
      out_w[c] = p.out_w[c].cast<S>();
      out_b[c] = p.out_b[c].cast<S>();
    }
    msg_w.resize(p.msg_w.size());
    upd_w.resize(p.upd_w.size());
    upd_b.resize(p.upd_b.size());
    for (std::size_t l = 0; l < p.msg_w.size(); ++l) {
      for (const auto& w : p.msg_w[l]) msg_w[l].push_back(w.cast<S>());
      for (int c = 0; c < kNumNodeClasses; ++c) {
        upd_w[l][c] = p.upd_w[l][c].cast<S>();
        upd_b[l][c] = p.upd_b[l][c].cast<S>();
      }
    }
  }
};

void check_compatible(const ModelParams& params, const MorphGraph& graph, const Signal& input) {
  if (params.num_edge_types != graph.num_edge_types()) {
    throw Error(ErrorKind::kInvalidArgument,
                "type-inventory mismatch: parameters cover " + std::to_string(params.num_edge_types) +
                    " edge types, graph has " + std::to_string(graph.num_edge_types()));
  }
  if (input.num_nodes() != graph.num_nodes()) {
    throw Error(ErrorKind::kDimensionMismatch, "input signal does not match graph node count");
  }
  for (const auto& n : graph.nodes) {
    if (input.nodes[n.id].rows() != params.input_dim[class_index(n)]) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "node " + std::to_string(n.id) + " has " + std::to_string(input.nodes[n.id].rows()) +
                      " features, model expects " + std::to_string(params.input_dim[class_index(n)]));
    }
  }
}

}  // namespace

void ModelParams::visit(const std::function<void(const std::string&, Eigen::MatrixXd&)>& f) {
  visit_blocks(*this, f);
}

void ModelParams::visit(
    const std::function<void(const std::string&, const Eigen::MatrixXd&)>& f) const {
  visit_blocks(*this, f);
}

std::size_t ModelParams::num_parameters() const {
  std::size_t n = 0;
  visit([&](const std::string&, const Eigen::MatrixXd& m) { n += static_cast<std::size_t>(m.size()); });
  return n;
}

ModelParams ModelParams::zeros_like() const {
  ModelParams z = *this;
  z.visit([](const std::string&, Eigen::MatrixXd& m) { m.setZero(); });
  return z;
}

bool ModelParams::same_shape(const ModelParams& other) const {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> a, b;
  visit([&](const std::string&, const Eigen::MatrixXd& m) { a.emplace_back(m.rows(), m.cols()); });
  other.visit([&](const std::string&, const Eigen::MatrixXd& m) { b.emplace_back(m.rows(), m.cols()); });
  return a == b;
}

bool ModelParams::operator==(const ModelParams& other) const {
  if (!(config == other.config) || input_dim != other.input_dim ||
      output_dim != other.output_dim || num_edge_types != other.num_edge_types ||
      !same_shape(other)) {
    return false;
  }
  std::vector<const Eigen::MatrixXd*> a, b;
  visit([&](const std::string&, const Eigen::MatrixXd& m) { a.push_back(&m); });
  other.visit([&](const std::string&, const Eigen::MatrixXd& m) { b.push_back(&m); });
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (*a[i] != *b[i]) return false;
  }
  return true;
}

ModelParams init_params(const MorphGraph& graph, const SignalLayout& layout, TaskKind task,
                        const NetConfig& config) {
  if (config.hidden < 1) throw Error(ErrorKind::kInvalidArgument, "hidden size must be >= 1");
  if (config.layers < 1) throw Error(ErrorKind::kInvalidArgument, "layer count must be >= 1");
  const int h = config.hidden;
  ModelParams p;
  p.config = config;
  p.num_edge_types = graph.num_edge_types();
  for (int c = 0; c < kNumNodeClasses; ++c) {
    const auto nc = static_cast<NodeClass>(c);
    p.input_dim[c] = layout.node_dim(nc);
    p.output_dim[c] = nc == task_output_class(task) ? task_output_dim(task) : 0;
  }
  std::mt19937_64 rng(config.seed);
  auto glorot = [&](int rows, int cols) {
    Eigen::MatrixXd m(rows, cols);
    const double a = rows + cols > 0 ? std::sqrt(6.0 / (rows + cols)) : 0.0;
    std::uniform_real_distribution<double> u(-a, a);
    for (int j = 0; j < cols; ++j) {
      for (int i = 0; i < rows; ++i) m(i, j) = u(rng);
    }
    return m;
  };
  for (int c = 0; c < kNumNodeClasses; ++c) {
    p.in_w[c] = glorot(h, p.input_dim[c]);
    p.in_b[c] = Eigen::MatrixXd::Zero(h, 1);
  }
  p.msg_w.resize(static_cast<std::size_t>(config.layers));
  p.upd_w.resize(static_cast<std::size_t>(config.layers));
  p.upd_b.resize(static_cast<std::size_t>(config.layers));
  for (int l = 0; l < config.layers; ++l) {
    for (int t = 0; t < p.num_edge_types; ++t) p.msg_w[l].push_back(glorot(h, h));
    for (int c = 0; c < kNumNodeClasses; ++c) {
      p.upd_w[l][c] = glorot(h, 2 * h);
      p.upd_b[l][c] = Eigen::MatrixXd::Zero(h, 1);
    }
  }
  for (int c = 0; c < kNumNodeClasses; ++c) {
    p.out_w[c] = glorot(p.output_dim[c], h);
    p.out_b[c] = Eigen::MatrixXd::Zero(p.output_dim[c], 1);
  }
  return p;
}

template <typename Scalar>
ForwardTrace<Scalar> forward(const ModelParams& params, const MorphGraph& graph,
                             const Signal& input) {
  using Mat = typename ForwardTrace<Scalar>::Mat;
  check_compatible(params, graph, input);
  const TypedParams<Scalar> w(params);
  const auto in = incoming_edges(graph);
  const int n = graph.num_nodes();
  const int hidden = params.config.hidden;
  const int layers = static_cast<int>(params.msg_w.size());
  const Eigen::Index batch = input.batch();

  ForwardTrace<Scalar> tr;
  tr.x.resize(n);
  tr.h.assign(layers + 1, std::vector<Mat>(n));
  tr.z.assign(layers, std::vector<Mat>(n));
  tr.m.assign(layers, std::vector<Mat>(n));
  tr.y.resize(n);

  for (const auto& node : graph.nodes) {
    const int c = class_index(node);
    tr.x[node.id] = input.nodes[node.id].template cast<Scalar>();
    Mat h0(hidden, batch);
    h0.noalias() = w.in_w[c] * tr.x[node.id];
    h0.colwise() += w.in_b[c].col(0);
    tr.h[0][node.id] = std::move(h0);
  }
  for (int l = 0; l < layers; ++l) {
    const auto& hp = tr.h[l];
    for (const auto& node : graph.nodes) {
      const int v = node.id;
      const int c = class_index(node);
      Mat msg = Mat::Zero(hidden, batch);
      for (const auto& e : in[v]) msg.noalias() += w.msg_w[l][e.type] * hp[e.src];
      if (!in[v].empty()) msg /= static_cast<Scalar>(in[v].size());
      Mat z(hidden, batch);
      z.noalias() = w.upd_w[l][c].leftCols(hidden) * hp[v];
      z.noalias() += w.upd_w[l][c].rightCols(hidden) * msg;
      z.colwise() += w.upd_b[l][c].col(0);
      Mat hn = z.cwiseMax(Scalar(0));
      if (l >= 1) hn += hp[v];
      if (!hn.allFinite()) {
        throw Error(ErrorKind::kNumericError,
                    "non-finite activation in layer " + std::to_string(l) + " at node " + std::to_string(v));
      }
      tr.m[l][v] = std::move(msg);
      tr.z[l][v] = std::move(z);
      tr.h[l + 1][v] = std::move(hn);
    }
  }
  for (const auto& node : graph.nodes) {
    const int c = class_index(node);
    Mat y(params.output_dim[c], batch);
    y.noalias() = w.out_w[c] * tr.h[layers][node.id];
    y.colwise() += w.out_b[c].col(0);
    tr.y[node.id] = std::move(y);
  }
  tr.recorded = true;
  return tr;
}

template <typename Scalar>
ModelParams backward(const ModelParams& params, const MorphGraph& graph,
                     const ForwardTrace<Scalar>& tr, const Signal& dy) {
  using Mat = typename ForwardTrace<Scalar>::Mat;
  if (!tr.recorded) throw Error(ErrorKind::kMissingTrace, "backward called without a forward trace");
  if (dy.num_nodes() != graph.num_nodes()) {
    throw Error(ErrorKind::kDimensionMismatch, "output gradient does not match graph node count");
  }
  const TypedParams<Scalar> w(params);
  TypedParams<Scalar> g(params.zeros_like());
  const auto in = incoming_edges(graph);
  const int n = graph.num_nodes();
  const int hidden = params.config.hidden;
  const int layers = static_cast<int>(params.msg_w.size());

  std::vector<Mat> dh(n);
  for (const auto& node : graph.nodes) {
    const int v = node.id;
    const int c = class_index(node);
    const Mat d = dy.nodes[v].template cast<Scalar>();
    if (d.rows() != params.output_dim[c] || d.cols() != tr.y[v].cols()) {
      throw Error(ErrorKind::kDimensionMismatch, "output gradient shape differs at node " + std::to_string(v));
    }
    g.out_w[c].noalias() += d * tr.h[layers][v].transpose();
    g.out_b[c].col(0) += d.rowwise().sum();
    dh[v].noalias() = w.out_w[c].transpose() * d;
  }
  for (int l = layers - 1; l >= 0; --l) {
    const auto& hp = tr.h[l];
    std::vector<Mat> dprev(n);
    for (int v = 0; v < n; ++v) {
      dprev[v] = l >= 1 ? dh[v] : Mat::Zero(hidden, dh[v].cols());
    }
    for (const auto& node : graph.nodes) {
      const int v = node.id;
      const int c = class_index(node);
      const Mat dz = dh[v].cwiseProduct((tr.z[l][v].array() > Scalar(0)).matrix().template cast<Scalar>());
      g.upd_w[l][c].leftCols(hidden).noalias() += dz * hp[v].transpose();
      g.upd_w[l][c].rightCols(hidden).noalias() += dz * tr.m[l][v].transpose();
      g.upd_b[l][c].col(0) += dz.rowwise().sum();
      dprev[v].noalias() += w.upd_w[l][c].leftCols(hidden).transpose() * dz;
      if (in[v].empty()) continue;
      Mat dm = w.upd_w[l][c].rightCols(hidden).transpose() * dz;
      dm /= static_cast<Scalar>(in[v].size());
      for (const auto& e : in[v]) {
        g.msg_w[l][e.type].noalias() += dm * hp[e.src].transpose();
        dprev[e.src].noalias() += w.msg_w[l][e.type].transpose() * dm;
      }
    }
    dh = std::move(dprev);
  }
  for (const auto& node : graph.nodes) {
    const int c = class_index(node);
    g.in_w[c].noalias() += dh[node.id] * tr.x[node.id].transpose();
    g.in_b[c].col(0) += dh[node.id].rowwise().sum();
  }

  ModelParams out = params.zeros_like();
  for (int c = 0; c < kNumNodeClasses; ++c) {
    out.in_w[c] = g.in_w[c].template cast<double>();
    out.in_b[c] = g.in_b[c].template cast<double>();
    out.out_w[c] = g.out_w[c].template cast<double>();
    out.out_b[c] = g.out_b[c].template cast<double>();
  }
  for (int l = 0; l < layers; ++l) {
    for (std::size_t t = 0; t < g.msg_w[l].size(); ++t) out.msg_w[l][t] = g.msg_w[l][t].template cast<double>();
    for (int c = 0; c < kNumNodeClasses; ++c) {
      out.upd_w[l][c] = g.upd_w[l][c].template cast<double>();
      out.upd_b[l][c] = g.upd_b[l][c].template cast<double>();
    }
  }
  return out;
}

template <typename Scalar>
Signal trace_outputs(const ForwardTrace<Scalar>& trace) {
  Signal s;
  for (const auto& y : trace.y) s.nodes.push_back(y.template cast<double>());
  return s;
}

template ForwardTrace<double> forward<double>(const ModelParams&, const MorphGraph&, const Signal&);
template ForwardTrace<float> forward<float>(const ModelParams&, const MorphGraph&, const Signal&);
template ModelParams backward<double>(const ModelParams&, const MorphGraph&,
                                      const ForwardTrace<double>&, const Signal&);
template ModelParams backward<float>(const ModelParams&, const MorphGraph&,
                                     const ForwardTrace<float>&, const Signal&);
template Signal trace_outputs<double>(const ForwardTrace<double>&);
template Signal trace_outputs<float>(const ForwardTrace<float>&);

Precision precision_from_env() {
  const char* v = std::getenv("MSHGNN_PRECISION");
  if (v == nullptr || std::string_view(v).empty() || std::string_view(v) == "double") {
    return Precision::kDouble;
  }
  if (std::string_view(v) == "single") return Precision::kSingle;
  throw Error(ErrorKind::kConfigError,
              "MSHGNN_PRECISION must be 'single' or 'double', got '" + std::string(v) + "'");
}

std::string_view to_string(Precision p) { return p == Precision::kDouble ? "double" : "single"; }

Signal network_outputs(const ModelParams& params, const MorphGraph& graph, const Signal& input,
                       Precision precision) {
  if (precision == Precision::kSingle) return trace_outputs(forward<float>(params, graph, input));
  return trace_outputs(forward<double>(params, graph, input));
}

}  // namespace mshgnn
