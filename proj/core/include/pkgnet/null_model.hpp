#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "pkgnet/graph.hpp"

namespace pkgnet {

// Observed statistic against a rewired ensemble. z is absent when the null
// standard deviation vanishes; p is the upper-tail empirical p-value
// (fraction of null samples >= observed).
struct EnsembleStats {
  double observed = 0.0;
  double null_mean = 0.0;
  double null_std = 0.0;
  std::optional<double> z;
  double p = 1.0;
  std::size_t n_samples = 0;
  std::vector<double> samples;
};

// Degree-preserving randomization of the dependency relation: repeated
// directed double-edge swaps (a->b, c->d) => (a->d, c->b), rejecting swaps
// that would create self-loops or duplicate edges, until swaps_per_edge
// successful swaps per dependency edge (or the attempt budget runs out, for
// graphs with no legal swap). Every node keeps its dependency in- and
// out-degree; conflict edges are returned untouched.
DependencyGraph rewire(const DependencyGraph& graph, unsigned swaps_per_edge,
                       std::uint64_t seed);

// Same randomization with an absolute successful-swap budget.
DependencyGraph rewire_exact(const DependencyGraph& graph,
                             std::uint64_t n_swaps, std::uint64_t seed);

enum class EnsembleStatistic { louvain_q, mean_installed_fraction };

struct EnsembleOptions {
  unsigned swaps_per_edge = 10;
  unsigned louvain_restarts = 10;       // for louvain_q
  std::size_t install_replicates = 1000;  // for mean_installed_fraction
  unsigned jobs = 1;
};

// Evaluates the statistic on the observed graph and on n_networks
// independently rewired copies. Member seeds derive from the master seed by
// index, so the result does not depend on the job count.
EnsembleStats ensemble(const DependencyGraph& graph, std::size_t n_networks,
                       EnsembleStatistic statistic, std::uint64_t seed,
                       const EnsembleOptions& options = {});

// Same machinery with a caller-supplied statistic(graph, seed).
EnsembleStats ensemble_with(
    const DependencyGraph& graph, std::size_t n_networks, std::uint64_t seed,
    const EnsembleOptions& options,
    const std::function<double(const DependencyGraph&, std::uint64_t)>&
        statistic);

enum class Tail { upper, lower };

// Fraction of samples >= observed (upper) or <= observed (lower).
double empirical_pvalue(double observed, const std::vector<double>& samples,
                        Tail tail);

}  // namespace pkgnet
