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

#include "mshgnn/morphology.hpp"

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include "mshgnn/error.hpp"

#ifndef MSHGNN_CONFIG_DIR
#define MSHGNN_CONFIG_DIR "configs"
#endif

namespace mshgnn {
namespace {

// ---------------------------------------------------------------------------
// Flat config text: "[section]" headers, "key = value" lines, '#' comments.

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

struct Section {
  std::string name;
  int line = 0;
  std::vector<Entry> entries;

  const Entry* find(std::string_view key) const {
    for (const auto& e : entries) {
      if (e.key == key) return &e;
    }
    return nullptr;
  }
};

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream is{std::string(s)};
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

std::vector<std::string> split_on(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw Error(ErrorKind::kParseError, "line " + std::to_string(line) + ": " + msg);
}

std::vector<Section> parse_sections(std::string_view text) {
  std::vector<Section> sections(1);
  std::istringstream is{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') parse_fail(line_no, "unterminated section header");
      std::string name = trim(std::string_view(line).substr(1, line.size() - 2));
      if (name.empty()) parse_fail(line_no, "empty section name");
      for (const auto& s : sections) {
        if (s.name == name) parse_fail(line_no, "duplicate section [" + name + "]");
      }
      sections.push_back({name, line_no, {}});
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) parse_fail(line_no, "expected 'key = value', got '" + line + "'");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) parse_fail(line_no, "empty key");
    if (sections.back().find(key)) parse_fail(line_no, "duplicate key '" + key + "'");
    sections.back().entries.push_back({key, value, line_no});
  }
  return sections;
}

double parse_number(const std::string& token, int line) {
  char* end = nullptr;
  double v = std::strtod(token.c_str(), &end);
  if (token.empty() || end != token.c_str() + token.size() || !std::isfinite(v)) {
    parse_fail(line, "not a finite number: '" + token + "'");
  }
  return v;
}

int parse_int(const std::string& token, int line) {
  double v = parse_number(token, line);
  if (v != std::floor(v)) parse_fail(line, "expected an integer, got '" + token + "'");
  return static_cast<int>(v);
}

bool parse_bool(const std::string& token, int line) {
  if (token == "true" || token == "yes" || token == "1") return true;
  if (token == "false" || token == "no" || token == "0") return false;
  parse_fail(line, "expected a boolean, got '" + token + "'");
}

// Row-major literal: "a b c ; d e f ; g h i".
Eigen::MatrixXd parse_matrix(const Entry& e) {
  auto rows = split_on(e.value, ';');
  std::vector<std::vector<double>> vals;
  for (const auto& r : rows) {
    std::vector<double> row;
    for (const auto& w : split_words(r)) row.push_back(parse_number(w, e.line));
    if (row.empty()) parse_fail(e.line, "empty matrix row");
    if (!vals.empty() && row.size() != vals.front().size()) {
      parse_fail(e.line, "ragged matrix literal");
    }
    vals.push_back(std::move(row));
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(vals.size()),
                    static_cast<Eigen::Index>(vals.front().size()));
  for (std::size_t i = 0; i < vals.size(); ++i) {
    for (std::size_t j = 0; j < vals[i].size(); ++j) m(i, j) = vals[i][j];
  }
  return m;
}

const Entry& require(const Section& s, std::string_view key) {
  const Entry* e = s.find(key);
  if (!e) parse_fail(s.line, "section [" + s.name + "] is missing '" + std::string(key) + "'");
  return *e;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Prefer the shortest representation that round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[40];
    std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
    if (std::strtod(shorter, nullptr) == v) return shorter;
  }
  return buf;
}

std::string format_matrix(const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i) out += " ; ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ' ';
      out += format_number(m(i, j));
    }
  }
  return out;
}

std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ' ';
    out += words[i];
  }
  return out;
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

// Breadth-first words over the generators: parent[h] = (g, a) with h = g∘a.
std::vector<std::pair<ElementId, ElementId>> generator_words(const GroupSpec& group) {
  std::vector<std::pair<ElementId, ElementId>> parent(static_cast<std::size_t>(group.order()),
                                                      {-1, -1});
  std::vector<ElementId> queue{0};
  std::vector<bool> seen(static_cast<std::size_t>(group.order()), false);
  seen[0] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    ElementId g = queue[head];
    for (ElementId a : group.generators) {
      ElementId h = group.compose(g, a);
      if (!seen[h]) {
        seen[h] = true;
        parent[h] = {g, a};
        queue.push_back(h);
      }
    }
  }
  return parent;
}

std::vector<ElementId> bfs_order(const GroupSpec& group) {
  std::vector<ElementId> order{0};
  std::vector<bool> seen(static_cast<std::size_t>(group.order()), false);
  seen[0] = true;
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (ElementId a : group.generators) {
      ElementId h = group.compose(order[head], a);
      if (!seen[h]) {
        seen[h] = true;
        order.push_back(h);
      }
    }
  }
  return order;
}

struct Problems {
  std::vector<std::pair<ErrorKind, std::string>> items;
  void add(ErrorKind k, std::string msg) { items.emplace_back(k, std::move(msg)); }
  void throw_if_any() const {
    if (items.empty()) return;
    std::string msg;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) msg += "\n  ";
      msg += "[" + std::string(to_string(items[i].first)) + "] " + items[i].second;
    }
    throw Error(items.front().first, msg);
  }
};

Eigen::MatrixXd default_joint_rep(const std::string& element, int ndof) {
  // 3-joint leg: hip abduction, hip pitch, knee pitch.
  if (ndof != 3) return {};
  if (element == "s") return Eigen::Vector3d(-1, 1, 1).asDiagonal().toDenseMatrix();
  if (element == "t") return Eigen::Vector3d(1, -1, -1).asDiagonal().toDenseMatrix();
  return {};
}

Eigen::Matrix3d default_spatial_rep(const std::string& element, bool* found) {
  *found = true;
  if (element == "s") return Eigen::Vector3d(1, -1, 1).asDiagonal();
  if (element == "t") return Eigen::Vector3d(-1, 1, 1).asDiagonal();
  *found = false;
  return Eigen::Matrix3d::Identity();
}

bool matches_preset(const GroupSpec& group) {
  try {
    return preset_group(group.name) == group;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

// ---------------------------------------------------------------------------

int RobotMorphology::branch_index(std::string_view id) const {
  for (std::size_t i = 0; i < branches.size(); ++i) {
    if (branches[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

int RobotMorphology::instance_index(int branch, std::string_view label) const {
  const auto& labels = branches[branch].instance_labels;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (labels[j] == label) return static_cast<int>(j);
  }
  return -1;
}

Eigen::MatrixXd RobotMorphology::base_channel_rep(ElementId g) const {
  return vector_pseudovector_rep(spatial_rep[g]);
}

Eigen::MatrixXd RobotMorphology::output_rep(TaskKind task, ElementId g) const {
  if (auto it = output_rep_overrides.find(task); it != output_rep_overrides.end()) {
    return it->second[g];
  }
  return default_output_rep(task, spatial_rep[g]);
}

std::vector<Orbit> RobotMorphology::orbits() const {
  std::vector<Orbit> out;
  for (int b = 0; b < static_cast<int>(branches.size()); ++b) {
    const auto& br = branches[b];
    std::vector<bool> assigned(static_cast<std::size_t>(br.nrep), false);
    std::vector<Orbit> local;
    for (int j = 0; j < br.nrep; ++j) {
      if (assigned[j]) continue;
      Orbit orbit;
      orbit.branch = b;
      orbit.representative = j;
      for (int g = 0; g < group.order(); ++g) {
        int img = orbit_action[b][g][j];
        if (!assigned[img]) {
          assigned[img] = true;
          orbit.members.push_back(img);
        }
      }
      std::sort(orbit.members.begin(), orbit.members.end());
      local.push_back(std::move(orbit));
    }
    for (std::size_t k = 0; k < local.size(); ++k) {
      if (br.orbit_names.size() == local.size()) {
        local[k].name = br.orbit_names[k];
      } else {
        local[k].name = local.size() == 1 ? br.id : br.id + "_" + std::to_string(k);
      }
      out.push_back(std::move(local[k]));
    }
  }
  return out;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kGroupLaw: return "group-law";
    case ViolationKind::kInvalidAction: return "invalid-action";
    case ViolationKind::kNonHomomorphic: return "non-homomorphic";
    case ViolationKind::kNotOrthogonal: return "orthogonality";
    case ViolationKind::kLabelMismatch: return "label-mismatch";
    case ViolationKind::kStance: return "stance";
  }
  return "unknown";
}

std::string ValidationReport::summary() const {
  std::string out;
  for (const auto& v : violations) {
    out += "[" + std::string(to_string(v.kind)) + "]";
    if (!v.element.empty() || !v.label.empty()) {
      out += " (" + v.element + (v.label.empty() ? "" : ", " + v.label) + ")";
    }
    out += " " + v.message + "\n";
  }
  return out;
}

ValidationReport validate_action(const RobotMorphology& m) {
  ValidationReport report;
  auto add = [&](ViolationKind k, std::string element, std::string label, std::string msg) {
    report.violations.push_back({k, std::move(element), std::move(label), std::move(msg)});
  };
  for (const auto& msg : verify_group_laws(m.group)) add(ViolationKind::kGroupLaw, "", "", msg);
  if (!report.ok()) return report;
  const GroupSpec& G = m.group;
  const int n = G.order();

  for (std::size_t b = 0; b < m.branches.size(); ++b) {
    const auto& br = m.branches[b];
    if (static_cast<int>(br.instance_labels.size()) != br.nrep) {
      add(ViolationKind::kLabelMismatch, "", br.id,
          std::to_string(br.instance_labels.size()) + " instance labels but nrep = " +
              std::to_string(br.nrep));
      continue;
    }
    if (br.ndof < 1) add(ViolationKind::kLabelMismatch, "", br.id, "ndof must be >= 1");
    if (b >= m.orbit_action.size() || static_cast<int>(m.orbit_action[b].size()) != n) {
      add(ViolationKind::kInvalidAction, "", br.id, "orbit action missing");
      continue;
    }
    const auto& act = m.orbit_action[b];
    bool permutations_ok = true;
    for (int g = 0; g < n; ++g) {
      if (static_cast<int>(act[g].size()) != br.nrep) {
        add(ViolationKind::kInvalidAction, G.element_name(g), br.id, "wrong number of images");
        permutations_ok = false;
        continue;
      }
      std::vector<int> hits(static_cast<std::size_t>(br.nrep), 0);
      for (int j = 0; j < br.nrep; ++j) {
        int img = act[g][j];
        if (img < 0 || img >= br.nrep) {
          add(ViolationKind::kInvalidAction, G.element_name(g), br.instance_labels[j],
              "image out of range");
          permutations_ok = false;
        } else {
          ++hits[img];
        }
      }
      for (int j = 0; j < br.nrep; ++j) {
        if (hits[j] != 1) {
          add(ViolationKind::kInvalidAction, G.element_name(g), br.instance_labels[j],
              "label is the image of " + std::to_string(hits[j]) + " labels (not a bijection)");
          permutations_ok = false;
        }
      }
    }
    if (permutations_ok) {
      for (int j = 0; j < br.nrep; ++j) {
        if (act[0][j] != j) {
          add(ViolationKind::kInvalidAction, "e", br.instance_labels[j], "identity moves label");
        }
      }
      for (int a = 0; a < n; ++a) {
        for (int c = 0; c < n; ++c) {
          for (int j = 0; j < br.nrep; ++j) {
            int lhs = act[G.compose(a, c)][j];
            int rhs = act[a][act[c][j]];
            if (lhs != rhs) {
              std::string what = G.element_name(a) + "∘" + G.element_name(c);
              std::string msg = "action of " + what + " sends it to " + br.instance_labels[lhs] +
                                " but composing the actions gives " + br.instance_labels[rhs];
              if (a == c && G.compose(a, c) == 0) msg += " (non-involution)";
              add(ViolationKind::kInvalidAction, what, br.instance_labels[j], msg);
            }
          }
        }
      }
    }

    if (b >= m.joint_rep.size() || static_cast<int>(m.joint_rep[b].size()) != n) {
      add(ViolationKind::kNonHomomorphic, "", br.id, "joint representation missing");
      continue;
    }
    bool shapes_ok = true;
    for (int g = 0; g < n; ++g) {
      const auto& mat = m.joint_rep[b][g];
      if (mat.rows() != br.ndof || mat.cols() != br.ndof) {
        add(ViolationKind::kNonHomomorphic, G.element_name(g), br.id,
            "joint representation is not " + std::to_string(br.ndof) + "x" +
                std::to_string(br.ndof));
        shapes_ok = false;
      }
    }
    if (!shapes_ok) continue;
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(br.ndof, br.ndof);
    for (int g = 0; g < n; ++g) {
      const auto& mat = m.joint_rep[b][g];
      if ((mat * mat.transpose() - eye).cwiseAbs().maxCoeff() > 1e-12) {
        add(ViolationKind::kNotOrthogonal, G.element_name(g), br.id,
            "joint representation is not orthogonal (det = " +
                std::to_string(mat.determinant()) + ")");
      }
    }
    for (int a = 0; a < n; ++a) {
      for (int c = 0; c < n; ++c) {
        double err = (m.joint_rep[b][G.compose(a, c)] - m.joint_rep[b][a] * m.joint_rep[b][c])
                         .cwiseAbs()
                         .maxCoeff();
        if (err > 1e-12) {
          add(ViolationKind::kNonHomomorphic, G.element_name(a) + "∘" + G.element_name(c),
              br.id, "joint representation is not a homomorphism");
        }
      }
    }
  }

  if (static_cast<int>(m.spatial_rep.size()) != n) {
    add(ViolationKind::kNonHomomorphic, "", "base", "spatial representation missing");
  } else {
    for (int g = 0; g < n; ++g) {
      const auto& r = m.spatial_rep[g];
      if ((r * r.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-12) {
        add(ViolationKind::kNotOrthogonal, G.element_name(g), "base",
            "spatial part R_g is not orthogonal");
      }
    }
    for (int a = 0; a < n; ++a) {
      for (int c = 0; c < n; ++c) {
        double err = (m.spatial_rep[G.compose(a, c)] - m.spatial_rep[a] * m.spatial_rep[c])
                         .cwiseAbs()
                         .maxCoeff();
        if (err > 1e-12) {
          add(ViolationKind::kNonHomomorphic, G.element_name(a) + "∘" + G.element_name(c),
              "base", "spatial representation is not a homomorphism");
        }
      }
    }
  }

  for (const auto& [task, mats] : m.output_rep_overrides) {
    const std::string who = "output." + std::string(to_string(task));
    if (static_cast<int>(mats.size()) != n) {
      add(ViolationKind::kNonHomomorphic, "", who, "output representation incomplete");
      continue;
    }
    const int dim = task_output_dim(task);
    bool ok = true;
    for (int g = 0; g < n; ++g) {
      if (mats[g].rows() != dim || mats[g].cols() != dim) {
        add(ViolationKind::kNonHomomorphic, G.element_name(g), who,
            "output representation must be " + std::to_string(dim) + "x" + std::to_string(dim));
        ok = false;
      }
    }
    if (!ok) continue;
    for (int g = 0; g < n; ++g) {
      if ((mats[g] * mats[g].transpose() - Eigen::MatrixXd::Identity(dim, dim))
              .cwiseAbs()
              .maxCoeff() > 1e-12) {
        add(ViolationKind::kNotOrthogonal, G.element_name(g), who, "not orthogonal");
      }
    }
    for (int a = 0; a < n; ++a) {
      for (int c = 0; c < n; ++c) {
        if ((mats[G.compose(a, c)] - mats[a] * mats[c]).cwiseAbs().maxCoeff() > 1e-12) {
          add(ViolationKind::kNonHomomorphic, G.element_name(a) + "∘" + G.element_name(c), who,
              "output representation is not a homomorphism");
        }
      }
    }
  }

  if (report.ok() && !m.stance.empty()) {
    for (std::size_t b = 0; b < m.branches.size() && b < m.stance.size(); ++b) {
      if (m.stance[b].empty()) continue;
      for (int g = 0; g < n; ++g) {
        for (int j = 0; j < m.branches[b].nrep; ++j) {
          Eigen::Vector3d mapped = m.spatial_rep[g] * m.stance[b][j];
          int img = m.orbit_action[b][g][j];
          if ((mapped - m.stance[b][img]).cwiseAbs().maxCoeff() > 1e-12) {
            add(ViolationKind::kStance, G.element_name(g), m.branches[b].instance_labels[j],
                "nominal stance is not mapped onto " + m.branches[b].instance_labels[img]);
          }
        }
      }
    }
  }
  return report;
}

RobotMorphology load_morphology(std::string_view config_text) {
  auto sections = parse_sections(config_text);
  Problems problems;
  RobotMorphology m;

  const Section& top = sections.front();
  for (const auto& e : top.entries) {
    if (e.key == "name") {
      m.name = e.value;
    } else if (e.key == "frame") {
      m.frame = e.value;
    } else {
      parse_fail(e.line, "unknown top-level key '" + e.key + "'");
    }
  }
  if (m.name.empty()) parse_fail(1, "missing top-level 'name'");

  const Section* group_sec = nullptr;
  for (const auto& s : sections) {
    if (s.name == "group") group_sec = &s;
  }
  if (!group_sec) parse_fail(1, "missing [group] section");
  if (const Entry* preset = group_sec->find("preset")) {
    if (group_sec->entries.size() != 1) {
      parse_fail(preset->line, "[group] with 'preset' takes no other keys");
    }
    try {
      m.group = preset_group(preset->value);
    } catch (const Error& err) {
      throw Error(ErrorKind::kParseError,
                  "line " + std::to_string(preset->line) + ": " + err.what());
    }
  } else {
    const Entry& names = require(*group_sec, "elements");
    const Entry& table = require(*group_sec, "table");
    const Entry* gname = group_sec->find("name");
    auto element_names = split_words(names.value);
    Eigen::MatrixXd t = parse_matrix(table);
    std::vector<ElementId> flat;
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      for (Eigen::Index j = 0; j < t.cols(); ++j) flat.push_back(static_cast<int>(t(i, j)));
    }
    GroupSpec probe;
    probe.element_names = element_names;
    probe.inverse_table.assign(element_names.size(), 0);
    std::vector<ElementId> gens;
    if (const Entry* ge = group_sec->find("generators")) {
      for (const auto& w : split_words(ge->value)) {
        ElementId id = probe.find(w);
        if (id < 0) parse_fail(ge->line, "unknown generator '" + w + "'");
        gens.push_back(id);
      }
    }
    m.group = make_group_from_table(gname ? gname->value : std::string("custom"),
                                    std::move(element_names), std::move(flat), std::move(gens));
  }
  const GroupSpec& G = m.group;
  const int n = G.order();

  for (const auto& s : sections) {
    if (!starts_with(s.name, "branch.")) continue;
    BranchType br;
    br.id = s.name.substr(7);
    const Entry& ndof = require(s, "ndof");
    const Entry& nrep = require(s, "nrep");
    br.ndof = parse_int(ndof.value, ndof.line);
    br.nrep = parse_int(nrep.value, nrep.line);
    br.instance_labels = split_words(require(s, "labels").value);
    if (const Entry* ee = s.find("end_effector")) br.has_end_effector = parse_bool(ee->value, ee->line);
    if (const Entry* jn = s.find("joints")) br.joint_names = split_words(jn->value);
    if (const Entry* on = s.find("orbit_names")) br.orbit_names = split_words(on->value);
    for (const auto& e : s.entries) {
      static const char* known[] = {"ndof", "nrep", "labels", "end_effector", "joints",
                                    "orbit_names"};
      bool ok = false;
      for (const char* k : known) ok = ok || e.key == k;
      if (!ok) parse_fail(e.line, "unknown key '" + e.key + "' in [" + s.name + "]");
    }
    if (br.nrep < 1) problems.add(ErrorKind::kLabelMismatch, "branch " + br.id + ": nrep must be >= 1");
    if (br.ndof < 1) problems.add(ErrorKind::kConfigError, "branch " + br.id + ": ndof must be >= 1");
    if (static_cast<int>(br.instance_labels.size()) != br.nrep) {
      problems.add(ErrorKind::kLabelMismatch,
                   "branch " + br.id + ": " + std::to_string(br.instance_labels.size()) +
                       " instance labels but nrep = " + std::to_string(br.nrep));
    }
    if (!br.joint_names.empty() && static_cast<int>(br.joint_names.size()) != br.ndof) {
      problems.add(ErrorKind::kLabelMismatch,
                   "branch " + br.id + ": " + std::to_string(br.joint_names.size()) +
                       " joint names but ndof = " + std::to_string(br.ndof));
    }
    m.branches.push_back(std::move(br));
  }
  if (m.branches.empty()) problems.add(ErrorKind::kConfigError, "no [branch.<id>] sections");
  problems.throw_if_any();

  // Explicitly given actions / matrices; missing elements are derived from
  // the generators through the homomorphism property.
  const std::size_t nb = m.branches.size();
  std::vector<std::vector<std::optional<std::vector<int>>>> given_action(
      nb, std::vector<std::optional<std::vector<int>>>(static_cast<std::size_t>(n)));
  std::vector<std::vector<std::optional<Eigen::MatrixXd>>> given_joint(
      nb, std::vector<std::optional<Eigen::MatrixXd>>(static_cast<std::size_t>(n)));
  std::vector<std::optional<Eigen::Matrix3d>> given_spatial(static_cast<std::size_t>(n));
  std::map<TaskKind, std::vector<std::optional<Eigen::MatrixXd>>> given_output;
  m.stance.assign(nb, {});

  for (const auto& s : sections) {
    if (starts_with(s.name, "action.")) {
      ElementId g = G.find(s.name.substr(7));
      if (g < 0) parse_fail(s.line, "unknown element in [" + s.name + "]");
      for (const auto& e : s.entries) {
        int b = m.branch_index(e.key);
        if (b < 0) parse_fail(e.line, "unknown branch '" + e.key + "'");
        auto images = split_words(e.value);
        const auto& br = m.branches[b];
        if (static_cast<int>(images.size()) != br.nrep) {
          problems.add(ErrorKind::kLabelMismatch,
                       "[" + s.name + "] " + e.key + ": " + std::to_string(images.size()) +
                           " images for " + std::to_string(br.nrep) + " labels");
          continue;
        }
        std::vector<int> act;
        bool ok = true;
        for (const auto& lbl : images) {
          int j = m.instance_index(b, lbl);
          if (j < 0) {
            problems.add(ErrorKind::kLabelMismatch,
                         "[" + s.name + "] " + e.key + ": unknown label '" + lbl + "'");
            ok = false;
          }
          act.push_back(j);
        }
        if (ok) given_action[b][g] = std::move(act);
      }
    } else if (starts_with(s.name, "joint_rep.")) {
      std::string rest = s.name.substr(10);
      auto dot = rest.rfind('.');
      if (dot == std::string::npos) parse_fail(s.line, "expected [joint_rep.<branch>.<element>]");
      int b = m.branch_index(rest.substr(0, dot));
      ElementId g = G.find(rest.substr(dot + 1));
      if (b < 0 || g < 0) parse_fail(s.line, "unknown branch or element in [" + s.name + "]");
      given_joint[b][g] = parse_matrix(require(s, "matrix"));
    } else if (starts_with(s.name, "base_rep.")) {
      ElementId g = G.find(s.name.substr(9));
      if (g < 0) parse_fail(s.line, "unknown element in [" + s.name + "]");
      const Entry& e = require(s, "matrix");
      Eigen::MatrixXd r = parse_matrix(e);
      if (r.rows() != 3 || r.cols() != 3) parse_fail(e.line, "base_rep matrix must be 3x3");
      given_spatial[g] = Eigen::Matrix3d(r);
    } else if (starts_with(s.name, "output_rep.")) {
      std::string rest = s.name.substr(11);
      auto dot = rest.rfind('.');
      if (dot == std::string::npos) parse_fail(s.line, "expected [output_rep.<task>.<element>]");
      auto task = parse_task_kind(rest.substr(0, dot));
      ElementId g = G.find(rest.substr(dot + 1));
      if (!task || g < 0) parse_fail(s.line, "unknown task or element in [" + s.name + "]");
      auto& slot = given_output[*task];
      slot.resize(static_cast<std::size_t>(n));
      slot[g] = parse_matrix(require(s, "matrix"));
    } else if (starts_with(s.name, "stance.")) {
      int b = m.branch_index(s.name.substr(7));
      if (b < 0) parse_fail(s.line, "unknown branch in [" + s.name + "]");
      std::vector<Eigen::Vector3d> pts(static_cast<std::size_t>(m.branches[b].nrep),
                                       Eigen::Vector3d::Zero());
      std::vector<bool> seen(pts.size(), false);
      for (const auto& e : s.entries) {
        int j = m.instance_index(b, e.key);
        if (j < 0) {
          problems.add(ErrorKind::kLabelMismatch, "[" + s.name + "] unknown label '" + e.key + "'");
          continue;
        }
        auto w = split_words(e.value);
        if (w.size() != 3) parse_fail(e.line, "stance point needs 3 coordinates");
        pts[j] = {parse_number(w[0], e.line), parse_number(w[1], e.line), parse_number(w[2], e.line)};
        seen[j] = true;
      }
      for (std::size_t j = 0; j < seen.size(); ++j) {
        if (!seen[j]) {
          problems.add(ErrorKind::kLabelMismatch,
                       "[" + s.name + "] missing label '" + m.branches[b].instance_labels[j] + "'");
        }
      }
      m.stance[b] = std::move(pts);
    } else if (s.name != "group" && !starts_with(s.name, "branch.") && !s.name.empty()) {
      parse_fail(s.line, "unknown section [" + s.name + "]");
    }
  }
  problems.throw_if_any();

  const auto words = generator_words(G);
  const auto order = bfs_order(G);
  m.orbit_action.assign(nb, OrbitAction(static_cast<std::size_t>(n)));
  m.joint_rep.assign(nb, std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(n)));
  m.spatial_rep.assign(static_cast<std::size_t>(n), Eigen::Matrix3d::Identity());

  for (std::size_t b = 0; b < nb; ++b) {
    const auto& br = m.branches[b];
    for (ElementId a : G.generators) {
      if (!given_action[b][a]) {
        problems.add(ErrorKind::kConfigError, "missing [action." + G.element_name(a) + "] for branch " + br.id);
      }
      if (!given_joint[b][a]) {
        Eigen::MatrixXd d = default_joint_rep(G.element_name(a), br.ndof);
        if (d.size() == 0) {
          problems.add(ErrorKind::kConfigError, "missing per-branch representation [joint_rep." +
                                                    br.id + "." + G.element_name(a) + "]");
        } else {
          given_joint[b][a] = d;
        }
      }
    }
  }
  for (ElementId a : G.generators) {
    if (!given_spatial[a]) {
      bool found = false;
      Eigen::Matrix3d r = default_spatial_rep(G.element_name(a), &found);
      if (!found) {
        problems.add(ErrorKind::kConfigError, "missing [base_rep." + G.element_name(a) + "]");
      } else {
        given_spatial[a] = r;
      }
    }
  }
  problems.throw_if_any();

  for (ElementId h : order) {
    for (std::size_t b = 0; b < nb; ++b) {
      const int nrep = m.branches[b].nrep;
      if (given_action[b][h]) {
        m.orbit_action[b][h] = *given_action[b][h];
      } else if (h == 0) {
        m.orbit_action[b][h].resize(static_cast<std::size_t>(nrep));
        for (int j = 0; j < nrep; ++j) m.orbit_action[b][h][j] = j;
      } else {
        auto [g, a] = words[h];
        const auto& prev = m.orbit_action[b][g];
        const auto& gen = *given_action[b][a];
        m.orbit_action[b][h].resize(static_cast<std::size_t>(nrep));
        for (int j = 0; j < nrep; ++j) m.orbit_action[b][h][j] = prev[gen[j]];
      }
      if (given_joint[b][h]) {
        m.joint_rep[b][h] = *given_joint[b][h];
      } else if (h == 0) {
        m.joint_rep[b][h] = Eigen::MatrixXd::Identity(m.branches[b].ndof, m.branches[b].ndof);
      } else {
        auto [g, a] = words[h];
        m.joint_rep[b][h] = m.joint_rep[b][g] * *given_joint[b][a];
      }
    }
    if (given_spatial[h]) {
      m.spatial_rep[h] = *given_spatial[h];
    } else if (h != 0) {
      auto [g, a] = words[h];
      m.spatial_rep[h] = m.spatial_rep[g] * *given_spatial[a];
    }
  }
  for (auto& [task, slots] : given_output) {
    std::vector<Eigen::MatrixXd> mats(static_cast<std::size_t>(n));
    const int dim = task_output_dim(task);
    for (ElementId h : order) {
      if (slots[h]) {
        mats[h] = *slots[h];
      } else if (h == 0) {
        mats[h] = Eigen::MatrixXd::Identity(dim, dim);
      } else {
        auto [g, a] = words[h];
        if (!slots[a]) {
          problems.add(ErrorKind::kConfigError, "missing [output_rep." + std::string(to_string(task)) +
                                                    "." + G.element_name(a) + "]");
          break;
        }
        mats[h] = mats[g] * *slots[a];
      }
    }
    m.output_rep_overrides[task] = std::move(mats);
  }
  problems.throw_if_any();

  ValidationReport report = validate_action(m);
  if (!report.ok()) {
    const auto& first = report.violations.front();
    ErrorKind kind = ErrorKind::kConfigError;
    switch (first.kind) {
      case ViolationKind::kInvalidAction: kind = ErrorKind::kInvalidAction; break;
      case ViolationKind::kLabelMismatch: kind = ErrorKind::kLabelMismatch; break;
      case ViolationKind::kNonHomomorphic:
      case ViolationKind::kNotOrthogonal: kind = ErrorKind::kNonHomomorphic; break;
      default: break;
    }
    throw Error(kind, "morphology '" + m.name + "' failed validation:\n" + report.summary());
  }
  auto orbits = m.orbits();
  for (std::size_t b = 0; b < nb; ++b) {
    const auto& br = m.branches[b];
    if (br.orbit_names.empty()) continue;
    std::size_t count = 0;
    for (const auto& o : orbits) count += o.branch == static_cast<int>(b);
    if (br.orbit_names.size() != count) {
      throw Error(ErrorKind::kLabelMismatch,
                  "branch " + br.id + ": " + std::to_string(br.orbit_names.size()) +
                      " orbit names for " + std::to_string(count) + " orbits");
    }
  }
  bool any_stance = false;
  for (const auto& s : m.stance) any_stance = any_stance || !s.empty();
  if (!any_stance) m.stance.clear();
  return m;
}

RobotMorphology load_morphology_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kParseError, "cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_morphology(ss.str());
}

std::string serialize_morphology(const RobotMorphology& m) {
  std::ostringstream os;
  const GroupSpec& G = m.group;
  os << "name = " << m.name << "\n";
  os << "frame = " << m.frame << "\n\n[group]\n";
  if (matches_preset(G)) {
    os << "preset = " << G.name << "\n";
  } else {
    os << "name = " << G.name << "\n";
    os << "elements = " << join_words(G.element_names) << "\n";
    Eigen::MatrixXd t(G.order(), G.order());
    for (int a = 0; a < G.order(); ++a) {
      for (int b = 0; b < G.order(); ++b) t(a, b) = G.compose(a, b);
    }
    os << "table = " << format_matrix(t) << "\n";
    std::vector<std::string> gens;
    for (ElementId a : G.generators) gens.push_back(G.element_name(a));
    if (!gens.empty()) os << "generators = " << join_words(gens) << "\n";
  }
  for (const auto& br : m.branches) {
    os << "\n[branch." << br.id << "]\n";
    os << "ndof = " << br.ndof << "\nnrep = " << br.nrep << "\n";
    os << "labels = " << join_words(br.instance_labels) << "\n";
    os << "end_effector = " << (br.has_end_effector ? "true" : "false") << "\n";
    if (!br.joint_names.empty()) os << "joints = " << join_words(br.joint_names) << "\n";
    if (!br.orbit_names.empty()) os << "orbit_names = " << join_words(br.orbit_names) << "\n";
  }
  for (int g = 1; g < G.order(); ++g) {
    os << "\n[action." << G.element_name(g) << "]\n";
    for (std::size_t b = 0; b < m.branches.size(); ++b) {
      std::vector<std::string> images;
      for (int j : m.orbit_action[b][g]) images.push_back(m.branches[b].instance_labels[j]);
      os << m.branches[b].id << " = " << join_words(images) << "\n";
    }
  }
  for (std::size_t b = 0; b < m.branches.size(); ++b) {
    for (int g = 1; g < G.order(); ++g) {
      os << "\n[joint_rep." << m.branches[b].id << "." << G.element_name(g) << "]\n";
      os << "matrix = " << format_matrix(m.joint_rep[b][g]) << "\n";
    }
  }
  for (int g = 1; g < G.order(); ++g) {
    os << "\n[base_rep." << G.element_name(g) << "]\n";
    os << "matrix = " << format_matrix(m.spatial_rep[g]) << "\n";
  }
  for (const auto& [task, mats] : m.output_rep_overrides) {
    for (int g = 1; g < G.order(); ++g) {
      os << "\n[output_rep." << to_string(task) << "." << G.element_name(g) << "]\n";
      os << "matrix = " << format_matrix(mats[g]) << "\n";
    }
  }
  for (std::size_t b = 0; b < m.stance.size(); ++b) {
    if (m.stance[b].empty()) continue;
    os << "\n[stance." << m.branches[b].id << "]\n";
    for (int j = 0; j < m.branches[b].nrep; ++j) {
      const auto& p = m.stance[b][j];
      os << m.branches[b].instance_labels[j] << " = " << format_number(p.x()) << " "
         << format_number(p.y()) << " " << format_number(p.z()) << "\n";
    }
  }
  return os.str();
}

bool equivalent(const RobotMorphology& a, const RobotMorphology& b) {
  return serialize_morphology(a) == serialize_morphology(b);
}

Eigen::MatrixXd joint_space_representation(const RobotMorphology& m, ElementId g) {
  if (!m.group.contains(g)) {
    throw Error(ErrorKind::kInvalidArgument, "unknown element " + std::to_string(g));
  }
  std::vector<Eigen::MatrixXd> blocks;
  for (std::size_t b = 0; b < m.branches.size(); ++b) {
    if (b >= m.joint_rep.size() || m.joint_rep[b].size() != static_cast<std::size_t>(m.group.order()) ||
        b >= m.orbit_action.size()) {
      throw Error(ErrorKind::kConfigError, "missing per-branch representation for " + m.branches[b].id);
    }
    Representation perm =
        branch_permutation_representation(m.group, m.orbit_action[b], m.branches[b].nrep);
    blocks.push_back(kronecker(perm(g), m.joint_rep[b][g]));
  }
  return direct_sum(blocks);
}

Representation joint_space_representation(const RobotMorphology& m) {
  Representation rep;
  rep.kind = RepKind::kOrthogonal;
  for (int g = 0; g < m.group.order(); ++g) rep.mats.push_back(joint_space_representation(m, g));
  rep.dim = static_cast<int>(rep.mats.front().rows());
  bool signed_perm = true;
  for (const auto& mat : rep.mats) {
    signed_perm = signed_perm && ((mat.array() == 0.0) || (mat.array().abs() == 1.0)).all();
  }
  if (signed_perm) rep.kind = RepKind::kSignedPermutation;
  return rep;
}

RobotMorphology ablate_symmetry(const RobotMorphology& m) {
  RobotMorphology out;
  out.name = m.name;
  out.frame = m.frame;
  out.group = make_cyclic_group(1);
  out.branches = m.branches;
  for (auto& br : out.branches) br.orbit_names.clear();
  for (const auto& br : out.branches) {
    OrbitAction act(1);
    for (int j = 0; j < br.nrep; ++j) act[0].push_back(j);
    out.orbit_action.push_back(std::move(act));
    out.joint_rep.push_back({Eigen::MatrixXd::Identity(br.ndof, br.ndof)});
  }
  out.spatial_rep = {Eigen::Matrix3d::Identity()};
  out.stance = m.stance;
  return out;
}

std::string default_config_dir() { return MSHGNN_CONFIG_DIR; }

}  // namespace mshgnn
