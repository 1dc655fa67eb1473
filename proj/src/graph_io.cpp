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

#include <sstream>

#include "json.hpp"

#include "mshgnn/error.hpp"
#include "mshgnn/graph.hpp"

namespace mshgnn {

namespace {

using nlohmann::json;

constexpr const char* kPalette[] = {"#ffffff", "#a6cee3", "#b2df8a", "#fb9a99",
                                    "#fdbf6f", "#cab2d6", "#ffff99", "#d9d9d9"};

const char* shape_for(NodeClass c) {
  switch (c) {
    case NodeClass::kBase: return "box";
    case NodeClass::kJoint: return "ellipse";
    case NodeClass::kFoot: return "triangle";
  }
  return "ellipse";
}

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string export_dot(const MorphGraph& g) {
  std::ostringstream os;
  os << "graph " << dot_quote(g.robot.empty() ? "morph" : g.robot) << " {\n";
  os << "  label=" << dot_quote(g.robot + " (" + g.group.name + ")") << ";\n";
  os << "  node [style=filled];\n";
  for (const auto& n : g.nodes) {
    std::string name = n.node_class == NodeClass::kBase
                           ? "base"
                           : n.label + "_" + std::string(to_string(n.node_class)) +
                                 std::to_string(n.position);
    name += "@" + g.group.element_name(n.element);
    os << "  n" << n.id << " [label=" << dot_quote(name) << ", shape=" << shape_for(n.node_class)
       << ", fillcolor=" << dot_quote(kPalette[n.element % 8]) << ", class="
       << to_string(n.node_class) << ", p=" << n.element << ", q=" << n.orbit << "];\n";
  }
  for (const auto& e : g.edges) {
    if (e.src > e.dst) continue;
    os << "  n" << e.src << " -- n" << e.dst << " [type=" << e.type << ", label="
       << dot_quote(std::to_string(e.type)) << "];\n";
  }
  os << "}\n";
  return os.str();
}

json group_to_json(const GroupSpec& g) {
  return {{"name", g.name},
          {"elements", g.element_names},
          {"compose", g.compose_table},
          {"generators", g.generators}};
}

std::string export_json(const MorphGraph& g) {
  json j;
  j["format"] = "mshgnn-graph";
  j["version"] = 1;
  j["robot"] = g.robot;
  j["group"] = group_to_json(g.group);
  j["num_physical_nodes"] = g.num_physical_nodes;
  json nodes = json::array();
  for (const auto& n : g.nodes) {
    nodes.push_back({{"id", n.id},
                     {"class", to_string(n.node_class)},
                     {"orbit", n.orbit},
                     {"element", n.element},
                     {"position", n.position},
                     {"physical", n.physical},
                     {"label", n.label}});
  }
  j["nodes"] = std::move(nodes);
  json edges = json::array();
  for (const auto& e : g.edges) edges.push_back({e.src, e.dst, e.type});
  j["edges"] = std::move(edges);
  json types = json::array();
  for (const auto& t : g.edge_types) {
    types.push_back({{"id", t.id},
                     {"kind", to_string(t.kind)},
                     {"generator", t.generator},
                     {"orbit", t.orbit},
                     {"depth", t.depth}});
  }
  j["edge_types"] = std::move(types);
  json orbits = json::array();
  for (const auto& o : g.orbits) {
    orbits.push_back({{"name", o.name},
                      {"branch", o.branch},
                      {"representative", o.representative},
                      {"chain_length", o.chain_length},
                      {"physical_instance", o.physical_instance}});
  }
  j["orbits"] = std::move(orbits);
  j["instances"] = g.instances;
  j["warnings"] = g.warnings;
  return j.dump(2) + "\n";
}

NodeClass parse_class(const std::string& s) {
  if (s == "base") return NodeClass::kBase;
  if (s == "joint") return NodeClass::kJoint;
  if (s == "foot") return NodeClass::kFoot;
  throw Error(ErrorKind::kSchemaMismatch, "unknown node class '" + s + "'");
}

EdgeKind parse_edge_kind(const std::string& s) {
  if (s == "cayley") return EdgeKind::kCayley;
  if (s == "branch") return EdgeKind::kBranch;
  if (s == "extra") return EdgeKind::kExtra;
  throw Error(ErrorKind::kSchemaMismatch, "unknown edge kind '" + s + "'");
}

}  // namespace

std::string export_graph(const MorphGraph& graph, GraphFormat format) {
  return format == GraphFormat::kDot ? export_dot(graph) : export_json(graph);
}

MorphGraph graph_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParseError, std::string("graph json: ") + e.what());
  }
  try {
    if (j.at("format") != "mshgnn-graph") {
      throw Error(ErrorKind::kSchemaMismatch, "not a graph document");
    }
    MorphGraph g;
    g.robot = j.at("robot").get<std::string>();
    const auto& jg = j.at("group");
    g.group = make_group_from_table(jg.at("name").get<std::string>(),
                                    jg.at("elements").get<std::vector<std::string>>(),
                                    jg.at("compose").get<std::vector<ElementId>>(),
                                    jg.at("generators").get<std::vector<ElementId>>());
    g.num_physical_nodes = j.at("num_physical_nodes").get<int>();
    for (const auto& n : j.at("nodes")) {
      GraphNode node;
      node.id = n.at("id").get<int>();
      node.node_class = parse_class(n.at("class").get<std::string>());
      node.orbit = n.at("orbit").get<int>();
      node.element = n.at("element").get<int>();
      node.position = n.at("position").get<int>();
      node.physical = n.at("physical").get<int>();
      node.label = n.at("label").get<std::string>();
      g.nodes.push_back(std::move(node));
    }
    for (const auto& e : j.at("edges")) {
      g.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>()});
    }
    for (const auto& t : j.at("edge_types")) {
      g.edge_types.push_back({t.at("id").get<int>(), parse_edge_kind(t.at("kind").get<std::string>()),
                              t.at("generator").get<int>(), t.at("orbit").get<int>(),
                              t.at("depth").get<int>()});
    }
    for (const auto& o : j.at("orbits")) {
      g.orbits.push_back({o.at("name").get<std::string>(), o.at("branch").get<int>(),
                          o.at("representative").get<int>(), o.at("chain_length").get<int>(),
                          o.at("physical_instance").get<std::vector<int>>()});
    }
    g.instances = j.at("instances").get<std::vector<std::vector<std::vector<int>>>>();
    g.warnings = j.at("warnings").get<std::vector<std::string>>();
    return g;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kSchemaMismatch, std::string("graph json: ") + e.what());
  }
}

}  // namespace mshgnn
