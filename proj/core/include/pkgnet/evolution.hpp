#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pkgnet/degree_stats.hpp"
#include "pkgnet/graph.hpp"
#include "pkgnet/install_sim.hpp"

namespace pkgnet {

struct Release {
  std::string label;
  int ordinal = 0;  // strictly increasing across a series
  DependencyGraph graph;
  // name -> version, when known (Packages input); empty for edge lists.
  std::map<std::string, std::string> versions;
};

struct ReleaseDiff {
  std::vector<std::string> deprecated;  // in prev, gone in next
  std::vector<std::string> kept;        // in both
  std::vector<std::string> added;       // new in next
  // Among kept: how many changed version (0 when versions are unknown).
  std::size_t version_changed = 0;
};

ReleaseDiff release_diff(const DependencyGraph& prev,
                         const DependencyGraph& next);
ReleaseDiff release_diff(const Release& prev, const Release& next);

// Least-squares trend fit: linear regresses y on x, exponential regresses
// ln y on x (y must stay positive).
FitResult regress(const std::vector<std::pair<double, double>>& series,
                  FitModel model);

struct EvolutionConfig {
  double module_threshold = 0.05;
  std::size_t modularity_randomizations = 1000;
  std::size_t install_networks = 100;
  std::size_t install_replicates = 1000;
  unsigned louvain_restarts = 10;
  unsigned swaps_per_edge = 10;
  ConflictRule conflict_rule = ConflictRule::directional;
  // Rerun growth regressions with the newest release (or newest transition
  // point) removed, mirroring the stationarity check.
  bool drop_last_sensitivity = true;
  // The ensembles dominate the runtime; both can be switched off for quick
  // structural reports.
  bool modularity_significance = true;
  bool installation_experiment = true;
  unsigned jobs = 1;
};

// One metric value; `note` marks why a value is missing (error or n/a).
struct MetricCell {
  std::string metric;
  std::optional<double> value;
  std::string note;
};

struct ReleaseRow {
  std::string label;
  int ordinal = 0;
  std::vector<MetricCell> metrics;

  const MetricCell* find(const std::string& metric) const;
};

struct TransitionRow {
  std::string from, to;
  std::size_t deprecated = 0, kept = 0, added = 0, version_changed = 0;
};

struct TrendTest {
  std::string series;
  FitModel model = FitModel::linear;
  std::optional<FitResult> fit;
  std::string note;  // skip or failure explanation when fit is absent
};

struct EvolutionReport {
  std::vector<ReleaseRow> releases;
  std::vector<TransitionRow> transitions;
  std::vector<TrendTest> trends;
};

// Per-release structure, significance and installation metrics plus the
// cross-release trend regressions. Failed metrics leave marked cells
// instead of aborting the report. Deterministic in (releases, config, seed).
EvolutionReport evolution_report(const std::vector<Release>& releases,
                                 const EvolutionConfig& config,
                                 std::uint64_t seed);

}  // namespace pkgnet
