#include "pkgnet/null_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "pkgnet/community.hpp"
#include "pkgnet/errors.hpp"
#include "pkgnet/install_sim.hpp"
#include "pkgnet/parallel.hpp"
#include "pkgnet/rng.hpp"

namespace pkgnet {

namespace {

constexpr std::uint64_t pack(NodeId a, NodeId b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

DependencyGraph rewire(const DependencyGraph& graph, unsigned swaps_per_edge,
                       std::uint64_t seed) {
  if (swaps_per_edge < 1) {
    throw std::invalid_argument("swaps_per_edge must be >= 1");
  }
  return rewire_exact(graph,
                      static_cast<std::uint64_t>(swaps_per_edge) *
                          graph.dep_edge_count(),
                      seed);
}

DependencyGraph rewire_exact(const DependencyGraph& graph,
                             std::uint64_t n_swaps, std::uint64_t seed) {
  auto edges = graph.edges(EdgeKind::dependency);
  const std::size_t m = edges.size();
  if (m < 2) {
    throw DataError("cannot rewire a graph with fewer than 2 dependency edges");
  }

  std::unordered_set<std::uint64_t> present;
  present.reserve(m * 2);
  for (const auto& [a, b] : edges) present.insert(pack(a, b));

  Rng rng(seed);
  const std::uint64_t target = n_swaps;
  // Graphs such as complete bipartite ones admit no legal swap; the budget
  // keeps those from spinning forever and simply returns the input edges.
  const std::uint64_t max_attempts = 100 * target + 1000;

  std::uint64_t done = 0;
  for (std::uint64_t attempt = 0; attempt < max_attempts && done < target;
       ++attempt) {
    const std::size_t i = rng.below(m);
    const std::size_t j = rng.below(m);
    if (i == j) continue;
    const auto [a, b] = edges[i];
    const auto [c, d] = edges[j];
    if (a == d || c == b) continue;  // would create a self-loop
    if (present.count(pack(a, d)) || present.count(pack(c, b))) continue;
    present.erase(pack(a, b));
    present.erase(pack(c, d));
    present.insert(pack(a, d));
    present.insert(pack(c, b));
    edges[i] = {a, d};
    edges[j] = {c, b};
    ++done;
  }

  GraphBuilder builder;
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    builder.intern(graph.name_of(v));
  }
  for (const auto& [a, b] : edges) {
    builder.add_edge(a, b, EdgeKind::dependency);
  }
  for (const auto& [a, b] : graph.edges(EdgeKind::conflict)) {
    builder.add_edge(a, b, EdgeKind::conflict);
  }
  return builder.build();
}

EnsembleStats ensemble_with(
    const DependencyGraph& graph, std::size_t n_networks, std::uint64_t seed,
    const EnsembleOptions& options,
    const std::function<double(const DependencyGraph&, std::uint64_t)>&
        statistic) {
  if (n_networks < 2) {
    throw std::invalid_argument("ensemble needs at least 2 null networks");
  }

  EnsembleStats stats;
  stats.observed = statistic(graph, derive_seed(seed, seed_stream::observed));
  stats.n_samples = n_networks;
  stats.samples.assign(n_networks, 0.0);

  parallel_for(n_networks, options.jobs, [&](std::size_t i) {
    try {
      const DependencyGraph null_graph =
          rewire(graph, options.swaps_per_edge,
                 derive_seed(seed, seed_stream::rewire, i));
      stats.samples[i] = statistic(
          null_graph, derive_seed(seed, seed_stream::null_statistic, i));
    } catch (const std::exception& e) {
      throw DataError("null network #" + std::to_string(i) + ": " + e.what());
    }
  });

  double sum = 0.0;
  for (double s : stats.samples) sum += s;
  stats.null_mean = sum / static_cast<double>(n_networks);
  double ss = 0.0;
  for (double s : stats.samples) {
    const double d = s - stats.null_mean;
    ss += d * d;
  }
  stats.null_std = std::sqrt(ss / static_cast<double>(n_networks - 1));
  if (stats.null_std > 0.0) {
    stats.z = (stats.observed - stats.null_mean) / stats.null_std;
  }
  stats.p = empirical_pvalue(stats.observed, stats.samples, Tail::upper);
  return stats;
}

EnsembleStats ensemble(const DependencyGraph& graph, std::size_t n_networks,
                       EnsembleStatistic statistic, std::uint64_t seed,
                       const EnsembleOptions& options) {
  switch (statistic) {
    case EnsembleStatistic::louvain_q:
      return ensemble_with(
          graph, n_networks, seed, options,
          [&options](const DependencyGraph& g, std::uint64_t s) {
            return louvain(symmetrized_dependency_view(g),
                           options.louvain_restarts, s)
                .q;
          });
    case EnsembleStatistic::mean_installed_fraction:
      return ensemble_with(
          graph, n_networks, seed, options,
          [&options](const DependencyGraph& g, std::uint64_t s) {
            ReplicateOptions ropts;
            return run_replicates(g, options.install_replicates, s, ropts)
                .mean;
          });
  }
  throw std::invalid_argument("unknown ensemble statistic");
}

double empirical_pvalue(double observed, const std::vector<double>& samples,
                        Tail tail) {
  if (samples.empty()) throw DataError("empirical p-value of an empty sample");
  std::size_t count = 0;
  for (double s : samples) {
    if (tail == Tail::upper ? s >= observed : s <= observed) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(samples.size());
}

}  // namespace pkgnet
