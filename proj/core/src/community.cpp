#include "pkgnet/community.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "pkgnet/errors.hpp"
#include "pkgnet/parallel.hpp"
#include "pkgnet/rng.hpp"

namespace pkgnet {

std::size_t Partition::covered_count() const {
  std::size_t n = 0;
  for (auto m : assignment) {
    if (m >= 0) ++n;
  }
  return n;
}

std::size_t Partition::module_count() const { return module_sizes().size(); }

std::vector<std::size_t> Partition::module_sizes() const {
  std::int32_t max_id = -1;
  for (auto m : assignment) max_id = std::max(max_id, m);
  std::vector<std::size_t> sizes(static_cast<std::size_t>(max_id + 1), 0);
  for (auto m : assignment) {
    if (m >= 0) ++sizes[static_cast<std::size_t>(m)];
  }
  return sizes;
}

double modularity(const UndirectedWeightedGraph& graph,
                  const std::vector<std::int32_t>& assignment) {
  const std::size_t n = graph.node_count();
  if (assignment.size() != n) {
    throw std::invalid_argument("assignment size does not match graph");
  }
  const double total = graph.total_weight();
  if (total <= 0.0) throw DataError("modularity of an edgeless graph");

  std::int32_t max_id = -1;
  for (NodeId v = 0; v < n; ++v) {
    const bool has_edges =
        graph.strength(v) > 0.0 || graph.self_loop(v) > 0.0;
    if (has_edges && assignment[v] < 0) {
      throw DataError("node " + std::to_string(v) +
                      " has edges but no module assignment");
    }
    max_id = std::max(max_id, assignment[v]);
  }

  // in[c]: weight inside c, internal edges counted from both endpoints,
  // self-loops once. tot[c]: summed strength.
  std::vector<double> in(static_cast<std::size_t>(max_id + 1), 0.0);
  std::vector<double> tot(static_cast<std::size_t>(max_id + 1), 0.0);
  for (NodeId v = 0; v < n; ++v) {
    const auto c = assignment[v];
    if (c < 0) continue;
    tot[c] += graph.strength(v);
    in[c] += graph.self_loop(v);
    for (const auto& [u, w] : graph.neighbors(v)) {
      if (assignment[u] == c) in[c] += w;
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < in.size(); ++c) {
    const double frac = tot[c] / total;
    q += in[c] / total - frac * frac;
  }
  return q;
}

namespace {

// Mutable coarse graph used between aggregation passes.
struct WorkGraph {
  std::vector<std::vector<std::pair<NodeId, double>>> adjacency;
  std::vector<double> self_loop;
  std::vector<double> strength;
  double total_weight = 0.0;

  std::size_t size() const { return adjacency.size(); }

  static WorkGraph from(const UndirectedWeightedGraph& g) {
    WorkGraph w;
    w.adjacency.resize(g.node_count());
    w.self_loop.resize(g.node_count());
    w.strength.resize(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) {
      w.adjacency[v].assign(g.neighbors(v).begin(), g.neighbors(v).end());
      w.self_loop[v] = g.self_loop(v);
      w.strength[v] = g.strength(v);
    }
    w.total_weight = g.total_weight();
    return w;
  }
};

// One pass of local moves. Returns the community of each node and whether
// any node moved. Ties keep the first candidate encountered, so the result
// is fully determined by the shuffle order.
bool local_moves(const WorkGraph& g, Rng& rng,
                 std::vector<std::int32_t>& community) {
  const std::size_t n = g.size();
  community.resize(n);
  std::vector<double> tot(n);
  for (NodeId v = 0; v < n; ++v) {
    community[v] = static_cast<std::int32_t>(v);
    tot[v] = g.strength[v];
  }

  std::vector<NodeId> order;
  order.reserve(n);
  for (NodeId v = 0; v < n; ++v) {
    if (g.strength[v] > 0.0) order.push_back(v);
  }

  // Scratch accumulator for neighbor-community weights.
  std::vector<double> link_weight(n, 0.0);
  std::vector<std::int32_t> touched;

  bool any_move = false;
  constexpr int kMaxSweeps = 10000;  // float-noise safety bound
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    rng.shuffle(order);
    std::size_t moves = 0;
    for (NodeId v : order) {
      const std::int32_t old_comm = community[v];
      const double k_v = g.strength[v];

      touched.clear();
      for (const auto& [u, w] : g.adjacency[v]) {
        const std::int32_t c = community[u];
        if (link_weight[c] == 0.0) touched.push_back(c);
        link_weight[c] += w;
      }

      tot[old_comm] -= k_v;
      double best_gain = link_weight[old_comm] - tot[old_comm] * k_v /
                                                     g.total_weight;
      std::int32_t best_comm = old_comm;
      for (const auto& [u, w] : g.adjacency[v]) {
        const std::int32_t c = community[u];
        if (c == best_comm) continue;
        const double gain =
            link_weight[c] - tot[c] * k_v / g.total_weight;
        if (gain > best_gain) {
          best_gain = gain;
          best_comm = c;
        }
      }
      tot[best_comm] += k_v;
      community[v] = best_comm;
      if (best_comm != old_comm) ++moves;

      for (const auto c : touched) link_weight[c] = 0.0;
    }
    if (moves == 0) break;
    any_move = true;
  }
  return any_move;
}

// Renumbers community ids densely in order of first appearance by node id.
std::size_t compress(std::vector<std::int32_t>& community) {
  std::unordered_map<std::int32_t, std::int32_t> remap;
  remap.reserve(community.size());
  for (auto& c : community) {
    if (c < 0) continue;
    auto [it, inserted] =
        remap.try_emplace(c, static_cast<std::int32_t>(remap.size()));
    c = it->second;
  }
  return remap.size();
}

WorkGraph aggregate(const WorkGraph& g,
                    const std::vector<std::int32_t>& community,
                    std::size_t n_comms) {
  WorkGraph coarse;
  coarse.adjacency.resize(n_comms);
  coarse.self_loop.assign(n_comms, 0.0);
  coarse.strength.assign(n_comms, 0.0);
  coarse.total_weight = g.total_weight;

  std::vector<std::unordered_map<NodeId, std::size_t>> slot(n_comms);
  for (NodeId v = 0; v < g.size(); ++v) {
    const auto cv = static_cast<NodeId>(community[v]);
    coarse.self_loop[cv] += g.self_loop[v];
    for (const auto& [u, w] : g.adjacency[v]) {
      const auto cu = static_cast<NodeId>(community[u]);
      if (cu == cv) {
        // Each internal edge is visited from both endpoints, which is
        // exactly the doubling the self-loop convention needs.
        coarse.self_loop[cv] += w;
      } else {
        auto [it, inserted] =
            slot[cv].try_emplace(cu, coarse.adjacency[cv].size());
        if (inserted) {
          coarse.adjacency[cv].emplace_back(cu, w);
        } else {
          coarse.adjacency[cv][it->second].second += w;
        }
      }
    }
  }
  for (NodeId c = 0; c < n_comms; ++c) {
    std::sort(coarse.adjacency[c].begin(), coarse.adjacency[c].end());
    double s = coarse.self_loop[c];
    for (const auto& [_, w] : coarse.adjacency[c]) s += w;
    coarse.strength[c] = s;
  }
  return coarse;
}

Partition louvain_once(const UndirectedWeightedGraph& graph,
                       std::uint64_t seed) {
  Rng rng(seed);
  WorkGraph work = WorkGraph::from(graph);

  const std::size_t n = graph.node_count();
  // node -> current supernode
  std::vector<std::int32_t> node_map(n);
  for (NodeId v = 0; v < n; ++v) node_map[v] = static_cast<std::int32_t>(v);

  Partition partition;
  std::vector<std::int32_t> current(n, -1);
  for (;;) {
    std::vector<std::int32_t> community;
    const bool moved = local_moves(work, rng, community);
    const std::size_t n_comms = compress(community);

    for (NodeId v = 0; v < n; ++v) {
      current[v] = community[static_cast<NodeId>(node_map[v])];
    }
    if (!moved && !partition.levels.empty()) break;
    partition.levels.push_back(current);
    if (!moved) break;
    work = aggregate(work, community, n_comms);
    for (NodeId v = 0; v < n; ++v) {
      node_map[v] = community[static_cast<NodeId>(node_map[v])];
    }
  }

  partition.assignment = partition.levels.back();
  for (NodeId v = 0; v < n; ++v) {
    if (graph.strength(v) <= 0.0 && graph.self_loop(v) <= 0.0) {
      partition.assignment[v] = -1;
    }
  }
  compress(partition.assignment);
  partition.q = modularity(graph, partition.assignment);
  return partition;
}

}  // namespace

Partition louvain(const UndirectedWeightedGraph& graph, unsigned restarts,
                  std::uint64_t seed, unsigned jobs) {
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (graph.node_count() == 0 || graph.total_weight() <= 0.0) {
    throw DataError("louvain needs a graph with at least one edge");
  }

  std::vector<Partition> runs(restarts);
  parallel_for(restarts, jobs, [&](std::size_t r) {
    runs[r] = louvain_once(
        graph, derive_seed(seed, seed_stream::louvain_restart, r));
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].q > runs[best].q) best = r;
  }

  // A partition can never beat grouping everything together by less than
  // zero; fall back to the single module if greedy moves went nowhere.
  if (runs[best].q < 0.0) {
    Partition single;
    single.assignment.assign(graph.node_count(), -1);
    for (NodeId v = 0; v < graph.node_count(); ++v) {
      if (graph.strength(v) > 0.0 || graph.self_loop(v) > 0.0) {
        single.assignment[v] = 0;
      }
    }
    single.q = modularity(graph, single.assignment);
    single.levels.push_back(single.assignment);
    return single;
  }
  return std::move(runs[best]);
}

std::size_t major_module_count(const Partition& partition, double threshold) {
  if (threshold <= 0.0 || threshold >= 1.0) {
    throw std::invalid_argument("threshold must lie in (0, 1)");
  }
  const double covered = static_cast<double>(partition.covered_count());
  std::size_t count = 0;
  for (std::size_t size : partition.module_sizes()) {
    if (static_cast<double>(size) >= threshold * covered - 1e-9) ++count;
  }
  return count;
}

std::optional<double> within_module_fraction(const DependencyGraph& graph,
                                             const Partition& partition,
                                             EdgeKind kind) {
  if (partition.assignment.size() != graph.node_count()) {
    throw std::invalid_argument("partition does not match graph");
  }
  std::size_t total = 0;
  std::size_t within = 0;
  for (const auto& [from, to] : graph.edges(kind)) {
    if (partition.assignment[from] < 0 || partition.assignment[to] < 0) {
      throw DataError("edge endpoint '" + graph.name_of(from) + "'/'" +
                      graph.name_of(to) + "' not covered by the partition");
    }
    ++total;
    if (partition.assignment[from] == partition.assignment[to]) ++within;
  }
  if (total == 0) return std::nullopt;
  return static_cast<double>(within) / static_cast<double>(total);
}

Partition complete_with_singletons(Partition partition,
                                   const DependencyGraph& graph) {
  if (partition.assignment.size() != graph.node_count()) {
    throw std::invalid_argument("partition does not match graph");
  }
  std::int32_t next = 0;
  for (auto m : partition.assignment) next = std::max(next, m + 1);
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    if (partition.assignment[v] < 0 && graph.is_interacting(v)) {
      partition.assignment[v] = next++;
    }
  }
  return partition;
}

}  // namespace pkgnet
