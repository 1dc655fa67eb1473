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

#include "mshgnn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "mshgnn/error.hpp"
#include "mshgnn/graph.hpp"
#include "mshgnn/symmetry.hpp"

namespace mshgnn {

namespace {

constexpr const char* kAxes[] = {"x", "y", "z"};

// Column -> (physical node, channel) for one timestep of the input layout.
struct ColumnSlot {
  std::string name;
  int node;
  int channel;
};

std::vector<ColumnSlot> input_slots(const RobotMorphology& m, const SignalLayout& layout) {
  const PhysicalTopology topo = physical_topology(m);
  std::vector<ColumnSlot> slots;
  if (layout.base_channels == 6) {
    for (int k = 0; k < 3; ++k) slots.push_back({std::string("a_") + kAxes[k], 0, k});
    for (int k = 0; k < 3; ++k) slots.push_back({std::string("w_") + kAxes[k], 0, 3 + k});
  }
  static const char* joint_prefix[] = {"q_", "dq_", "tau_"};
  for (std::size_t b = 0; b < m.branches.size(); ++b) {
    const auto& br = m.branches[b];
    for (int j = 0; j < br.nrep; ++j) {
      for (int pos = 1; pos <= br.ndof; ++pos) {
        const int node = topo.index(static_cast<int>(b), j, pos);
        for (int c = 0; c < layout.joint_channels; ++c) {
          slots.push_back({joint_prefix[c] + br.instance_labels[j] + "_" + std::to_string(pos), node, c});
        }
      }
    }
  }
  if (layout.foot_channels == 6) {
    for (std::size_t b = 0; b < m.branches.size(); ++b) {
      const auto& br = m.branches[b];
      if (!br.has_end_effector) continue;
      for (int j = 0; j < br.nrep; ++j) {
        const int node = topo.index(static_cast<int>(b), j, br.ndof + 1);
        for (int k = 0; k < 3; ++k) slots.push_back({"p_" + br.instance_labels[j] + "_" + kAxes[k], node, k});
        for (int k = 0; k < 3; ++k) slots.push_back({"v_" + br.instance_labels[j] + "_" + kAxes[k], node, 3 + k});
      }
    }
  }
  return slots;
}

std::vector<ColumnSlot> label_slots(const RobotMorphology& m, TaskKind task) {
  const PhysicalTopology topo = physical_topology(m);
  std::vector<ColumnSlot> slots;
  if (task == TaskKind::kMomentum) {
    for (int k = 0; k < 3; ++k) slots.push_back({std::string("l_") + kAxes[k], 0, k});
    for (int k = 0; k < 3; ++k) slots.push_back({std::string("k_") + kAxes[k], 0, 3 + k});
    return slots;
  }
  for (std::size_t b = 0; b < m.branches.size(); ++b) {
    const auto& br = m.branches[b];
    if (!br.has_end_effector) continue;
    for (int j = 0; j < br.nrep; ++j) {
      const int node = topo.index(static_cast<int>(b), j, br.ndof + 1);
      const std::string& lbl = br.instance_labels[j];
      switch (task) {
        case TaskKind::kContact: slots.push_back({"c_" + lbl, node, 0}); break;
        case TaskKind::kGrf1d: slots.push_back({"f_" + lbl + "_z", node, 0}); break;
        case TaskKind::kGrf3d:
          for (int k = 0; k < 3; ++k) slots.push_back({"f_" + lbl + "_" + kAxes[k], node, k});
          break;
        case TaskKind::kMomentum: break;
      }
    }
  }
  return slots;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    auto b = cell.find_first_not_of(" \t\r");
    auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

Dataset empty_dataset(const RobotMorphology& m, TaskKind task, const SignalLayout& layout) {
  const PhysicalTopology topo = physical_topology(m);
  Dataset d;
  d.task = task;
  d.layout = layout;
  d.inputs = Signal::zeros(physical_input_dims(topo, layout), 0);
  d.labels = Signal::zeros(physical_output_dims(topo, task), 0);
  return d;
}

}  // namespace

Dataset Dataset::subset(std::span<const int> index) const {
  Dataset d;
  d.task = task;
  d.layout = layout;
  d.inputs = inputs.columns(index);
  d.labels = labels.columns(index);
  for (int i : index) d.time.push_back(time[i]);
  return d;
}

void Dataset::append(const Dataset& other) {
  if (!(other.layout == layout) || other.task != task) {
    throw Error(ErrorKind::kSchemaMismatch, "cannot append datasets with different schemas");
  }
  inputs.append_columns(other.inputs);
  labels.append_columns(other.labels);
  time.insert(time.end(), other.time.begin(), other.time.end());
}

std::vector<std::string> input_columns(const RobotMorphology& m, const SignalLayout& layout) {
  std::vector<std::string> out;
  for (const auto& s : input_slots(m, layout)) out.push_back(s.name);
  return out;
}

std::vector<std::string> label_columns(const RobotMorphology& m, TaskKind task) {
  std::vector<std::string> out;
  for (const auto& s : label_slots(m, task)) out.push_back(s.name);
  return out;
}

Dataset load_dataset_csv(std::string_view text, const RobotMorphology& m, TaskKind task,
                         const SignalLayout& layout) {
  const auto in_slots = input_slots(m, layout);
  const auto out_slots = label_slots(m, task);
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    if (line[0] == '#') {
      const std::string tag = "# frame:";
      if (line.rfind(tag, 0) == 0) {
        std::string frame = line.substr(tag.size());
        frame.erase(0, frame.find_first_not_of(' '));
        while (!frame.empty() && (frame.back() == ' ' || frame.back() == '\r')) frame.pop_back();
        if (frame != m.frame) {
          throw Error(ErrorKind::kSchemaMismatch,
                      "data is in the '" + frame + "' frame, robot config assumes '" + m.frame + "'");
        }
      }
      continue;
    }
    header = split_csv(line);
    break;
  }
  if (header.empty()) throw Error(ErrorKind::kSchemaMismatch, "missing CSV header");
  std::map<std::string, int> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = static_cast<int>(i);
  auto find_col = [&](const std::string& name) {
    auto it = col.find(name);
    if (it == col.end()) throw Error(ErrorKind::kSchemaMismatch, "missing column '" + name + "'");
    return it->second;
  };
  const int t_col = find_col("t");
  std::vector<int> in_cols, out_cols;
  for (const auto& s : in_slots) in_cols.push_back(find_col(s.name));
  for (const auto& s : out_slots) out_cols.push_back(find_col(s.name));

  std::vector<double> times;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorKind::kLoadError, "line " + std::to_string(line_no) + ": expected " +
                                             std::to_string(header.size()) + " cells, got " +
                                             std::to_string(cells.size()));
    }
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      char* end = nullptr;
      const double v = std::strtod(cells[c].c_str(), &end);
      if (cells[c].empty() || end != cells[c].c_str() + cells[c].size() || !std::isfinite(v)) {
        throw Error(ErrorKind::kLoadError, "line " + std::to_string(line_no) + ", column '" +
                                               header[c] + "': not a finite number ('" + cells[c] + "')");
      }
      row[c] = v;
    }
    if (!times.empty() && !(row[t_col] > times.back())) {
      throw Error(ErrorKind::kLoadError,
                  "line " + std::to_string(line_no) + ": timestamps must be strictly increasing");
    }
    for (std::size_t k = 0; k < out_cols.size(); ++k) {
      const double v = row[out_cols[k]];
      if (task == TaskKind::kContact && v != 0.0 && v != 1.0) {
        throw Error(ErrorKind::kLoadError, "line " + std::to_string(line_no) + ", column '" +
                                               header[out_cols[k]] + "': contact labels must be 0 or 1");
      }
    }
    times.push_back(row[t_col]);
    rows.push_back(std::move(row));
  }

  Dataset d = empty_dataset(m, task, layout);
  const int T = layout.history;
  if (static_cast<int>(rows.size()) < T) return d;

  // Sequence boundaries from timestamp gaps.
  std::vector<int> seq_start(rows.size(), 0);
  if (rows.size() > 1) {
    std::vector<double> dt;
    for (std::size_t i = 1; i < times.size(); ++i) dt.push_back(times[i] - times[i - 1]);
    std::vector<double> sorted = dt;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(sorted.size() / 2), sorted.end());
    const double median = sorted[sorted.size() / 2];
    for (std::size_t i = 1; i < rows.size(); ++i) {
      seq_start[i] = dt[i - 1] > 2.0 * median ? static_cast<int>(i) : seq_start[i - 1];
    }
  }
  std::vector<int> ends;
  for (std::size_t e = 0; e < rows.size(); ++e) {
    if (static_cast<int>(e) - seq_start[e] + 1 >= T) ends.push_back(static_cast<int>(e));
  }
  const auto n = static_cast<Eigen::Index>(ends.size());
  for (auto& x : d.inputs.nodes) x.resize(x.rows(), n);
  for (auto& y : d.labels.nodes) y.resize(y.rows(), n);
  for (Eigen::Index s = 0; s < n; ++s) {
    const int e = ends[static_cast<std::size_t>(s)];
    for (int k = 0; k < T; ++k) {
      const auto& row = rows[static_cast<std::size_t>(e - T + 1 + k)];
      for (std::size_t c = 0; c < in_slots.size(); ++c) {
        const auto& slot = in_slots[c];
        const int ch = d.layout.channels(physical_topology(m).nodes[slot.node].node_class);
        d.inputs.nodes[slot.node](k * ch + slot.channel, s) = row[in_cols[c]];
      }
    }
    for (std::size_t c = 0; c < out_slots.size(); ++c) {
      d.labels.nodes[out_slots[c].node](out_slots[c].channel, s) = rows[e][out_cols[c]];
    }
    d.time.push_back(times[e]);
  }
  return d;
}

Dataset load_dataset(const std::string& path, const RobotMorphology& m, TaskKind task,
                     const SignalLayout& layout) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kLoadError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_dataset_csv(ss.str(), m, task, layout);
}

void write_dataset_csv(std::ostream& out, const Dataset& d, const RobotMorphology& m) {
  if (d.layout.history != 1) {
    throw Error(ErrorKind::kInvalidArgument, "only single-step datasets can be written as CSV");
  }
  const auto in_slots = input_slots(m, d.layout);
  const auto out_slots = label_slots(m, d.task);
  out << "# frame: " << m.frame << "\n";
  out << "t";
  for (const auto& s : in_slots) out << "," << s.name;
  for (const auto& s : out_slots) out << "," << s.name;
  out << "\n";
  out << std::setprecision(17);
  for (int i = 0; i < d.size(); ++i) {
    out << d.time[i];
    for (const auto& s : in_slots) out << "," << d.inputs.nodes[s.node](s.channel, i);
    for (const auto& s : out_slots) out << "," << d.labels.nodes[s.node](s.channel, i);
    out << "\n";
  }
}

Eigen::Vector3d leg_forward_kinematics(const Eigen::Vector3d& hip, const Eigen::Vector3d& q) {
  const Eigen::Vector3d shank = Eigen::AngleAxisd(q(2), Eigen::Vector3d::UnitY()) *
                                Eigen::Vector3d(0, 0, -kShankLength);
  const Eigen::Vector3d leg = Eigen::Vector3d(0, 0, -kThighLength) + shank;
  return hip + Eigen::AngleAxisd(q(0), Eigen::Vector3d::UnitX()) *
                   (Eigen::AngleAxisd(q(1), Eigen::Vector3d::UnitY()) * leg);
}

LegSolution leg_inverse_kinematics(const Eigen::Vector3d& hip, const Eigen::Vector3d& foot,
                                   const Eigen::Vector3d& foot_velocity, double knee_sign) {
  const double l1 = kThighLength, l2 = kShankLength;
  const Eigen::Vector3d d = foot - hip;
  const double r = std::hypot(d.y(), d.z());
  LegSolution s;
  s.q(0) = std::atan2(d.y(), -d.z());
  // Planar problem in the rotated leg plane: a = l1 sin q2 + l2 sin(q2+q3),
  // b = l1 cos q2 + l2 cos(q2+q3).
  const double a = -d.x(), b = r;
  const double c3 = std::clamp((a * a + b * b - l1 * l1 - l2 * l2) / (2 * l1 * l2), -1.0, 1.0);
  s.q(2) = knee_sign * std::acos(c3);
  s.q(1) = std::atan2(a, b) - std::atan2(l2 * std::sin(s.q(2)), l1 + l2 * std::cos(s.q(2)));

  const double c1 = std::cos(s.q(0)), s1 = std::sin(s.q(0));
  const double c2 = std::cos(s.q(1)), s2 = std::sin(s.q(1));
  const double c23 = std::cos(s.q(1) + s.q(2)), s23 = std::sin(s.q(1) + s.q(2));
  const Eigen::Vector3d w(-l1 * s2 - l2 * s23, 0.0, -l1 * c2 - l2 * c23);
  const Eigen::Vector3d dw2(-l1 * c2 - l2 * c23, 0.0, l1 * s2 + l2 * s23);
  const Eigen::Vector3d dw3(-l2 * c23, 0.0, l2 * s23);
  Eigen::Matrix3d rx;
  rx << 1, 0, 0, 0, c1, -s1, 0, s1, c1;
  Eigen::Matrix3d drx;
  drx << 0, 0, 0, 0, -s1, -c1, 0, c1, -s1;
  Eigen::Matrix3d jac;
  jac.col(0) = drx * w;
  jac.col(1) = rx * dw2;
  jac.col(2) = rx * dw3;
  s.dq = jac.partialPivLu().solve(foot_velocity);
  return s;
}

Dataset generate_synthetic_momentum(const RobotMorphology& m, int n_samples, std::uint64_t seed) {
  if (n_samples < 0) throw Error(ErrorKind::kInvalidArgument, "sample count must be >= 0");
  if (m.stance.size() != m.branches.size()) {
    throw Error(ErrorKind::kInvalidArgument, "robot config has no [stance.<branch>] sections");
  }
  for (std::size_t b = 0; b < m.branches.size(); ++b) {
    if (m.branches[b].ndof != 3 || !m.branches[b].has_end_effector || m.stance[b].empty()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "synthetic momentum needs 3-joint branches with feet and stance points");
    }
  }
  const PhysicalTopology topo = physical_topology(m);
  const SignalLayout layout = default_layout(TaskKind::kMomentum, 1);
  Dataset d = empty_dataset(m, TaskKind::kMomentum, layout);
  for (auto& x : d.inputs.nodes) x.resize(x.rows(), n_samples);
  for (auto& y : d.labels.nodes) y.resize(y.rows(), n_samples);

  // Knee bending direction follows the orbit representative through the
  // sign the joint representation puts on the knee.
  std::vector<std::vector<double>> knee(m.branches.size());
  for (std::size_t b = 0; b < m.branches.size(); ++b) knee[b].assign(m.branches[b].nrep, 1.0);
  for (const Orbit& o : m.orbits()) {
    for (ElementId g = 0; g < m.group.order(); ++g) {
      const int j = m.orbit_action[o.branch][g][o.representative];
      knee[o.branch][j] = m.joint_rep[o.branch][g](2, 2) < 0.0 ? -1.0 : 1.0;
    }
    knee[o.branch][o.representative] = 1.0;
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  std::uniform_real_distribution<double> speed(-1.0, 1.0);
  for (int i = 0; i < n_samples; ++i) {
    Eigen::Vector3d l = Eigen::Vector3d::Zero(), k = Eigen::Vector3d::Zero();
    for (std::size_t b = 0; b < m.branches.size(); ++b) {
      for (int j = 0; j < m.branches[b].nrep; ++j) {
        Eigen::Vector3d p = m.stance[b][j];
        for (int a = 0; a < 3; ++a) p(a) += jitter(rng);
        Eigen::Vector3d v;
        for (int a = 0; a < 3; ++a) v(a) = speed(rng);
        const Eigen::Vector3d hip = m.stance[b][j] + Eigen::Vector3d(0, 0, kHipHeight);
        const LegSolution sol = leg_inverse_kinematics(hip, p, v, knee[b][j]);
        for (int pos = 1; pos <= 3; ++pos) {
          auto& x = d.inputs.nodes[topo.index(static_cast<int>(b), j, pos)];
          x(0, i) = sol.q(pos - 1);
          x(1, i) = sol.dq(pos - 1);
        }
        auto& foot = d.inputs.nodes[topo.index(static_cast<int>(b), j, 4)];
        foot.block<3, 1>(0, i) = p;
        foot.block<3, 1>(3, i) = v;
        l += v;
        k += p.cross(v);
      }
    }
    d.labels.nodes[0].block<3, 1>(0, i) = l;
    d.labels.nodes[0].block<3, 1>(3, i) = k;
    d.time.push_back(0.01 * i);
  }
  return d;
}

Dataset augment_by_group(const Dataset& dataset, const RobotMorphology& m) {
  const PhysicalTopology topo = physical_topology(m);
  const MorphRepSet reps = make_rep_set(m, dataset.layout, dataset.task);
  Dataset out;
  out.task = dataset.task;
  out.layout = dataset.layout;
  for (ElementId g = 0; g < m.group.order(); ++g) {
    Dataset part;
    part.task = dataset.task;
    part.layout = dataset.layout;
    part.inputs = physical_action(m, topo, reps, SignalRole::kInput, dataset.inputs, g);
    part.labels = physical_action(m, topo, reps, SignalRole::kOutput, dataset.labels, g);
    part.time = dataset.time;
    if (g == 0) {
      out = std::move(part);
    } else {
      out.append(part);
    }
  }
  return out;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& d, double train_fraction,
                                          std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "train fraction must be in (0, 1]");
  }
  std::vector<int> idx(static_cast<std::size_t>(d.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * d.size()));
  std::vector<int> tr(idx.begin(), idx.begin() + static_cast<long>(n_train));
  std::vector<int> va(idx.begin() + static_cast<long>(n_train), idx.end());
  return {d.subset(tr), d.subset(va)};
}

}  // namespace mshgnn
