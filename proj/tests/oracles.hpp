// Test-only reference implementations, kept independent of the library code
// paths they check: reachability by edge relaxation, exhaustive-partition
// modularity search, and exact enumeration of the random installation
// process on tiny graphs.

#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "pkgnet/graph.hpp"
#include "pkgnet/install_sim.hpp"

namespace oracle {

// Reachable set from `start` along dependency edges (excluding `start`),
// computed by relaxing the full edge list until a fixpoint.
std::vector<pkgnet::NodeId> brute_reachable(const pkgnet::DependencyGraph& g,
                                            pkgnet::NodeId start);

struct BestPartition {
  double q;
  std::vector<std::int32_t> assignment;  // -1 for nodes without edges
};

// Modularity computed straight from the definition, independent of
// pkgnet::modularity.
double direct_modularity(const pkgnet::UndirectedWeightedGraph& g,
                         const std::vector<std::int32_t>& assignment);

// Exhaustive search over all set partitions of the edge-bearing nodes.
// Feasible up to ~10 such nodes (Bell(10) = 115975).
BestPartition exhaustive_best_partition(
    const pkgnet::UndirectedWeightedGraph& g);

// Exact outcome distribution of the random local installation process:
// probability of ending with a given number of installed packages, averaged
// over all draw orders and coin flips. Mirrors the documented process rules
// with an independent bitmask implementation; usable up to ~6 interacting
// nodes.
std::map<std::size_t, double> enumerate_install_distribution(
    const pkgnet::DependencyGraph& g,
    pkgnet::ConflictRule rule = pkgnet::ConflictRule::directional);

}  // namespace oracle
