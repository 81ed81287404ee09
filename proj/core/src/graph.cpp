#include "pkgnet/graph.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

#include "pkgnet/errors.hpp"

namespace pkgnet {

bool DependencyGraph::has_node(std::string_view name) const {
  return index_.find(std::string(name)) != index_.end();
}

std::optional<NodeId> DependencyGraph::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeId DependencyGraph::id_of(std::string_view name) const {
  auto id = find(name);
  if (!id) throw LookupError("unknown package '" + std::string(name) + "'");
  return *id;
}

const std::string& DependencyGraph::name_of(NodeId node) const {
  check_node(node);
  return names_[node];
}

void DependencyGraph::check_node(NodeId node) const {
  if (node >= names_.size()) {
    throw LookupError("node id " + std::to_string(node) + " out of range");
  }
}

const std::vector<NodeId>& DependencyGraph::neighbors(NodeId node,
                                                      EdgeKind kind,
                                                      Direction dir) const {
  check_node(node);
  if (kind == EdgeKind::dependency) {
    return dir == Direction::out ? dep_out_[node] : dep_in_[node];
  }
  return dir == Direction::out ? con_out_[node] : con_in_[node];
}

std::size_t DependencyGraph::degree(NodeId node, EdgeKind kind,
                                    Direction dir) const {
  return neighbors(node, kind, dir).size();
}

bool DependencyGraph::has_edge(NodeId from, NodeId to, EdgeKind kind) const {
  check_node(from);
  check_node(to);
  const auto& adj =
      kind == EdgeKind::dependency ? dep_out_[from] : con_out_[from];
  return std::binary_search(adj.begin(), adj.end(), to);
}

std::vector<NodeId> DependencyGraph::dependency_closure(NodeId node) const {
  check_node(node);
  std::vector<bool> seen(names_.size(), false);
  // The start node may be reachable through a cycle but is never part of
  // its own closure; marking it up front keeps it out.
  seen[node] = true;
  std::vector<NodeId> stack;
  std::vector<NodeId> result;
  for (NodeId n : dep_out_[node]) {
    if (!seen[n]) {
      seen[n] = true;
      stack.push_back(n);
    }
  }
  while (!stack.empty()) {
    NodeId current = stack.back();
    stack.pop_back();
    result.push_back(current);
    for (NodeId next : dep_out_[current]) {
      if (!seen[next]) {
        seen[next] = true;
        stack.push_back(next);
      }
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

bool DependencyGraph::is_interacting(NodeId node) const {
  check_node(node);
  return !dep_out_[node].empty() || !dep_in_[node].empty() ||
         !con_out_[node].empty() || !con_in_[node].empty();
}

std::vector<NodeId> DependencyGraph::interacting_nodes() const {
  std::vector<NodeId> result;
  for (NodeId n = 0; n < names_.size(); ++n) {
    if (is_interacting(n)) result.push_back(n);
  }
  return result;
}

std::vector<std::pair<NodeId, NodeId>> DependencyGraph::edges(
    EdgeKind kind) const {
  const auto& out = kind == EdgeKind::dependency ? dep_out_ : con_out_;
  std::vector<std::pair<NodeId, NodeId>> result;
  result.reserve(edge_count(kind));
  for (NodeId from = 0; from < out.size(); ++from) {
    for (NodeId to : out[from]) result.emplace_back(from, to);
  }
  return result;
}

NodeId GraphBuilder::intern(std::string_view name) {
  auto it = graph_.index_.find(std::string(name));
  if (it != graph_.index_.end()) return it->second;
  const auto id = static_cast<NodeId>(graph_.names_.size());
  graph_.names_.emplace_back(name);
  graph_.index_.emplace(graph_.names_.back(), id);
  graph_.dep_out_.emplace_back();
  graph_.dep_in_.emplace_back();
  graph_.con_out_.emplace_back();
  graph_.con_in_.emplace_back();
  return id;
}

std::optional<NodeId> GraphBuilder::find(std::string_view name) const {
  return graph_.find(name);
}

void GraphBuilder::add_edge(NodeId from, NodeId to, EdgeKind kind) {
  if (from >= graph_.names_.size() || to >= graph_.names_.size()) {
    throw LookupError("edge endpoint out of range");
  }
  if (from == to) {
    throw std::invalid_argument("self-loop on '" + graph_.names_[from] + "'");
  }
  if (kind == EdgeKind::dependency) {
    graph_.dep_out_[from].push_back(to);
    graph_.dep_in_[to].push_back(from);
  } else {
    graph_.con_out_[from].push_back(to);
    graph_.con_in_[to].push_back(from);
  }
}

DependencyGraph GraphBuilder::build() {
  auto dedup = [](std::vector<std::vector<NodeId>>& lists) {
    for (auto& adj : lists) {
      std::sort(adj.begin(), adj.end());
      adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
  };
  dedup(graph_.dep_out_);
  dedup(graph_.dep_in_);
  dedup(graph_.con_out_);
  dedup(graph_.con_in_);
  graph_.dep_edges_ = 0;
  graph_.con_edges_ = 0;
  for (const auto& adj : graph_.dep_out_) graph_.dep_edges_ += adj.size();
  for (const auto& adj : graph_.con_out_) graph_.con_edges_ += adj.size();
  return std::move(graph_);
}

UndirectedWeightedGraph UndirectedWeightedGraph::from_edges(
    std::size_t node_count, const std::vector<WeightedEdge>& edges) {
  UndirectedWeightedGraph g;
  g.adjacency_.resize(node_count);
  g.self_loop_.assign(node_count, 0.0);
  g.strength_.assign(node_count, 0.0);

  // Accumulate duplicates through a per-node slot map.
  std::vector<std::unordered_map<NodeId, std::size_t>> slot(node_count);
  for (const auto& e : edges) {
    if (e.u >= node_count || e.v >= node_count) {
      throw LookupError("projection edge endpoint out of range");
    }
    if (e.u == e.v) {
      g.self_loop_[e.u] += e.weight;
      continue;
    }
    auto link = [&](NodeId a, NodeId b) {
      auto [it, inserted] = slot[a].try_emplace(b, g.adjacency_[a].size());
      if (inserted) {
        g.adjacency_[a].emplace_back(b, e.weight);
      } else {
        g.adjacency_[a][it->second].second += e.weight;
      }
    };
    link(e.u, e.v);
    link(e.v, e.u);
  }
  for (NodeId n = 0; n < node_count; ++n) {
    std::sort(g.adjacency_[n].begin(), g.adjacency_[n].end());
    double s = g.self_loop_[n];
    for (const auto& [_, w] : g.adjacency_[n]) s += w;
    g.strength_[n] = s;
    g.total_weight_ += s;
    g.edge_count_ += g.adjacency_[n].size();
  }
  g.edge_count_ /= 2;  // each inter-node edge was counted from both sides
  return g;
}

UndirectedWeightedGraph symmetrized_dependency_view(
    const DependencyGraph& graph, bool collapse_reciprocal) {
  std::vector<UndirectedWeightedGraph::WeightedEdge> edges;
  edges.reserve(graph.dep_edge_count());
  for (const auto& [from, to] : graph.edges(EdgeKind::dependency)) {
    // Every directed edge contributes 1 to its unordered pair, so a
    // reciprocal pair accumulates weight 2. Collapsing keeps only the
    // low-to-high member of a reciprocal pair.
    if (collapse_reciprocal && from > to &&
        graph.has_edge(to, from, EdgeKind::dependency)) {
      continue;
    }
    edges.push_back({std::min(from, to), std::max(from, to), 1.0});
  }
  return UndirectedWeightedGraph::from_edges(graph.node_count(), edges);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

}  // namespace

DependencyGraph read_edge_list(std::string_view text) {
  GraphBuilder builder;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++lineno;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    std::istringstream fields{std::string(line)};
    std::string tag, from, to, extra;
    fields >> tag >> from >> to;
    if (fields.fail() || (fields >> extra)) {
      throw ParseError("expected '<DEP|CON> <from> <to>'", lineno);
    }
    EdgeKind kind;
    if (tag == "DEP") {
      kind = EdgeKind::dependency;
    } else if (tag == "CON") {
      kind = EdgeKind::conflict;
    } else {
      throw ParseError("unknown edge tag '" + tag + "'", lineno);
    }
    if (from == to) {
      throw ParseError("self-loop on '" + from + "'", lineno);
    }
    builder.add_edge(builder.intern(from), builder.intern(to), kind);
  }
  return builder.build();
}

std::string write_edge_list(const DependencyGraph& graph) {
  std::string out;
  out += "# pkgnet edge list: DEP/CON <from> <to>\n";
  for (const auto& [from, to] : graph.edges(EdgeKind::dependency)) {
    out += "DEP ";
    out += graph.name_of(from);
    out += ' ';
    out += graph.name_of(to);
    out += '\n';
  }
  for (const auto& [from, to] : graph.edges(EdgeKind::conflict)) {
    out += "CON ";
    out += graph.name_of(from);
    out += ' ';
    out += graph.name_of(to);
    out += '\n';
  }
  return out;
}

GraphSummary summarize(const DependencyGraph& graph) {
  GraphSummary s;
  s.nodes = graph.node_count();
  s.dep_edges = graph.dep_edge_count();
  s.con_edges = graph.con_edge_count();
  s.interacting = graph.interacting_nodes().size();
  s.non_interacting_fraction =
      s.nodes == 0 ? 0.0
                   : static_cast<double>(s.nodes - s.interacting) /
                         static_cast<double>(s.nodes);
  return s;
}

}  // namespace pkgnet
