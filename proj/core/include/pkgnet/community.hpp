#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "pkgnet/graph.hpp"

namespace pkgnet {

// Node -> module assignment over the dependency projection. Nodes without
// any projected edge carry -1 (they take no part in modularity).
struct Partition {
  std::vector<std::int32_t> assignment;
  double q = 0.0;
  // Assignment after each Louvain aggregation pass, in original node space.
  std::vector<std::vector<std::int32_t>> levels;

  std::size_t covered_count() const;
  std::size_t module_count() const;
  std::vector<std::size_t> module_sizes() const;  // indexed by module id
};

// Weighted Newman-Girvan modularity of an assignment. Every node with at
// least one incident edge (or self-loop) must be assigned, otherwise a
// coverage error is thrown. Invariant under module relabeling.
double modularity(const UndirectedWeightedGraph& graph,
                  const std::vector<std::int32_t>& assignment);

// Two-phase greedy modularity optimization: local moves until no gain,
// aggregation into supernodes, repeat until Q stops improving. Node visit
// order is reshuffled every sweep from the seed; the best of `restarts`
// independent runs is returned. Module ids are renumbered densely by first
// occurrence, so the result is deterministic for a given seed.
Partition louvain(const UndirectedWeightedGraph& graph, unsigned restarts,
                  std::uint64_t seed, unsigned jobs = 1);

// Number of modules holding at least `threshold` of the covered nodes.
std::size_t major_module_count(const Partition& partition, double threshold);

// Fraction of edges of the given kind with both endpoints in the same
// module; nullopt when the graph has no edge of that kind. Every endpoint
// must be assigned.
std::optional<double> within_module_fraction(const DependencyGraph& graph,
                                             const Partition& partition,
                                             EdgeKind kind);

// Gives every interacting node the projection left unassigned (conflict-only
// packages) its own fresh singleton module. Needed before computing conflict
// fractions on partitions produced from the dependency projection.
Partition complete_with_singletons(Partition partition,
                                   const DependencyGraph& graph);

}  // namespace pkgnet
