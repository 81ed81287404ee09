#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace pkgnet {

using NodeId = std::uint32_t;

enum class EdgeKind { dependency, conflict };
enum class Direction { in, out };

// Directed two-relation graph over interned package names.
//
// A dependency edge (i, j) means "i needs j installed first"; a conflict
// edge (i, j) means "i cannot be installed while j is present". Conflicts
// are not necessarily symmetric. The graph is immutable once built; all
// queries are read-only and safe to call concurrently.
class DependencyGraph {
public:
  std::size_t node_count() const noexcept { return names_.size(); }
  std::size_t edge_count(EdgeKind kind) const noexcept {
    return kind == EdgeKind::dependency ? dep_edges_ : con_edges_;
  }
  std::size_t dep_edge_count() const noexcept { return dep_edges_; }
  std::size_t con_edge_count() const noexcept { return con_edges_; }

  bool has_node(std::string_view name) const;
  std::optional<NodeId> find(std::string_view name) const;
  NodeId id_of(std::string_view name) const;  // throws LookupError
  const std::string& name_of(NodeId node) const;

  // Adjacency lists are sorted and duplicate-free.
  const std::vector<NodeId>& neighbors(NodeId node, EdgeKind kind,
                                       Direction dir) const;
  std::size_t degree(NodeId node, EdgeKind kind, Direction dir) const;
  bool has_edge(NodeId from, NodeId to, EdgeKind kind) const;

  // All nodes reachable from `node` along dependency edges, excluding the
  // node itself. Terminates on cycles. Result is sorted.
  std::vector<NodeId> dependency_closure(NodeId node) const;

  // A node is interacting when it has at least one incident edge of either
  // kind, in either direction.
  bool is_interacting(NodeId node) const;
  std::vector<NodeId> interacting_nodes() const;

  // Edges in sorted (from, to) order.
  std::vector<std::pair<NodeId, NodeId>> edges(EdgeKind kind) const;

private:
  friend class GraphBuilder;

  void check_node(NodeId node) const;

  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<std::vector<NodeId>> dep_out_, dep_in_, con_out_, con_in_;
  std::size_t dep_edges_ = 0;
  std::size_t con_edges_ = 0;
};

// Incremental construction; edges are deduplicated when build() runs.
// Self-loops are rejected with std::invalid_argument, callers that want
// "drop and warn" semantics check before inserting.
class GraphBuilder {
public:
  NodeId intern(std::string_view name);
  std::optional<NodeId> find(std::string_view name) const;
  std::size_t node_count() const noexcept { return graph_.names_.size(); }
  void add_edge(NodeId from, NodeId to, EdgeKind kind);
  DependencyGraph build();

private:
  DependencyGraph graph_;
};

// Undirected weighted projection used by community detection. Inter-node
// edges appear in both adjacency lists; a self-loop is stored once and
// contributes its weight once to the node strength. total_weight() is the
// sum of all strengths (2m in modularity notation).
class UndirectedWeightedGraph {
public:
  struct WeightedEdge {
    NodeId u, v;
    double weight;
  };

  UndirectedWeightedGraph() = default;

  // Duplicate (u, v) entries accumulate; u == v accumulates a self-loop.
  static UndirectedWeightedGraph from_edges(
      std::size_t node_count, const std::vector<WeightedEdge>& edges);

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  double strength(NodeId node) const { return strength_[node]; }
  double self_loop(NodeId node) const { return self_loop_[node]; }
  double total_weight() const noexcept { return total_weight_; }

  const std::vector<std::pair<NodeId, double>>& neighbors(NodeId node) const {
    return adjacency_[node];
  }

private:
  std::vector<std::vector<std::pair<NodeId, double>>> adjacency_;
  std::vector<double> self_loop_;
  std::vector<double> strength_;
  double total_weight_ = 0.0;
  std::size_t edge_count_ = 0;
};

// Projects the dependency relation onto an undirected weighted graph.
// Weight of {i, j} is the number of directed dependency edges between the
// two nodes (1 or 2); with collapse_reciprocal the weight is clamped to 1.
// Conflict edges never enter the projection.
UndirectedWeightedGraph symmetrized_dependency_view(
    const DependencyGraph& graph, bool collapse_reciprocal = false);

// Plain-text interchange format: one edge per line, "DEP <from> <to>" or
// "CON <from> <to>", '#' starts a comment, blank lines ignored. Unknown
// names are created; duplicate lines collapse; self-loops are an error.
DependencyGraph read_edge_list(std::string_view text);
std::string write_edge_list(const DependencyGraph& graph);

struct GraphSummary {
  std::size_t nodes = 0;
  std::size_t dep_edges = 0;
  std::size_t con_edges = 0;
  std::size_t interacting = 0;
  double non_interacting_fraction = 0.0;
};

GraphSummary summarize(const DependencyGraph& graph);

}  // namespace pkgnet
