#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pkgnet/community.hpp"
#include "pkgnet/degree_stats.hpp"
#include "pkgnet/evolution.hpp"
#include "pkgnet/graph.hpp"
#include "pkgnet/install_sim.hpp"
#include "pkgnet/null_model.hpp"

namespace pkgnet {

// Provenance stamped into every stochastic artifact: the master seed and a
// digest of the configuration that produced it.
struct Provenance {
  std::uint64_t seed = 0;
  std::string config_digest;
};

// FNV-1a over a canonical configuration string, as a 16-digit hex digest.
std::string config_digest(const std::string& canonical_config);

std::string csv_provenance_line(const Provenance& provenance);

std::string to_json(const GraphSummary& summary);

// Raw cumulative points with their multiplicative bin index (columns
// k, p, bin).
std::string distribution_csv(const std::vector<CumulativePoint>& points,
                             double bin_base);
std::string binned_distribution_csv(const std::vector<CumulativePoint>& binned);

std::string to_json(const FitResult& fit);
std::string fits_json(const BestFit& fits, const GraphSummary& summary,
                      EdgeKind kind, Direction direction, double bin_base,
                      bool binned);

std::string partition_csv(const DependencyGraph& graph,
                          const Partition& partition);
std::string module_summary_json(const DependencyGraph& graph,
                                const Partition& partition);

std::string to_json(const EnsembleStats& stats, const Provenance& provenance);
std::string samples_csv(const EnsembleStats& stats,
                        const Provenance& provenance);

std::string to_json(const ReplicateStats& stats, const Provenance& provenance);
std::string replicates_csv(const ReplicateStats& stats,
                           const Provenance& provenance);

std::string to_json(const EvolutionReport& report,
                    const Provenance& provenance);
std::string release_metrics_csv(const EvolutionReport& report,
                                const Provenance& provenance);
std::string transitions_csv(const EvolutionReport& report,
                            const Provenance& provenance);
std::string trends_csv(const EvolutionReport& report,
                       const Provenance& provenance);

}  // namespace pkgnet
