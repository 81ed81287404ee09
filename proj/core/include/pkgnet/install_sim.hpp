#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pkgnet/graph.hpp"
#include "pkgnet/null_model.hpp"
#include "pkgnet/rng.hpp"

namespace pkgnet {

// Whether a conflict edge blocks only in its declared direction
// (candidate -> installed) or in both directions.
enum class ConflictRule { directional, symmetric };

// Mutable state of one installation run. Only interacting packages take
// part; installed, discarded and remaining partition that set.
class InstallState {
public:
  enum class Status : std::uint8_t { excluded, remaining, installed, discarded };

  static InstallState over_interacting(const DependencyGraph& graph);
  // Seeded variant: the given packages start out installed, the rest of the
  // interacting set remains to be drawn.
  static InstallState with_installed(const DependencyGraph& graph,
                                     const std::vector<NodeId>& preinstalled);

  Status status(NodeId node) const { return status_[node]; }
  bool is_installed(NodeId node) const {
    return status_[node] == Status::installed;
  }
  bool is_discarded(NodeId node) const {
    return status_[node] == Status::discarded;
  }
  bool is_remaining(NodeId node) const {
    return status_[node] == Status::remaining;
  }

  std::size_t installed_count() const { return installed_count_; }
  std::size_t discarded_count() const { return discarded_count_; }
  std::size_t remaining_count() const { return remaining_.size(); }
  const std::vector<NodeId>& remaining_pool() const { return remaining_; }

  std::vector<NodeId> installed_nodes() const;  // sorted
  std::vector<NodeId> discarded_nodes() const;  // sorted

  void mark_installed(NodeId node);
  void mark_discarded(NodeId node);

private:
  std::vector<Status> status_;
  std::vector<NodeId> remaining_;
  std::vector<std::int32_t> position_;  // node -> slot in remaining_, -1
  std::size_t installed_count_ = 0;
  std::size_t discarded_count_ = 0;

  void remove_from_pool(NodeId node);
};

enum class DiscardReason {
  none,
  conflict_with_installed,   // the candidate itself conflicts
  dependency_discarded,      // a closure member was already discarded
  dependency_conflict,       // a closure member conflicts with an installed one
  dependency_lost_coin_flip  // a surviving member needs a flipped-away one
};

struct InstallDecision {
  bool install = false;
  DiscardReason reason = DiscardReason::none;
  // Candidate plus closure, minus coin-flip losers; only filled on install.
  std::vector<NodeId> install_set;
  // Reciprocal-conflict losers; discarded permanently either way.
  std::vector<NodeId> coin_flip_discards;
};

// Decides the fate of one candidate: discard if it conflicts with an
// installed package, or if anything in its dependency closure was discarded
// or conflicts with an installed package. Reciprocally conflicting pairs
// inside the closure are broken by a uniform coin flip; the loser is
// discarded and the dependency check reruns against the updated discard set.
// Otherwise the candidate installs atomically with its whole closure.
InstallDecision evaluate_candidate(const DependencyGraph& graph,
                                   const InstallState& state, NodeId pkg,
                                   Rng& rng,
                                   ConflictRule rule = ConflictRule::directional);

void apply_decision(InstallState& state, NodeId pkg,
                    const InstallDecision& decision);

struct InstallOutcome {
  std::vector<NodeId> installed;  // sorted
  std::vector<NodeId> discarded;  // sorted
  double fraction = 0.0;          // installed / (installed + discarded)
};

// One full run: draw uniformly from the remaining pool, decide, repeat until
// nothing remains. Starts from the empty computer.
InstallOutcome run_replicate(const DependencyGraph& graph, std::uint64_t seed,
                             ConflictRule rule = ConflictRule::directional);

// Same process from a prepared state (e.g. with packages already installed).
InstallOutcome run_from_state(const DependencyGraph& graph, InstallState state,
                              std::uint64_t seed,
                              ConflictRule rule = ConflictRule::directional);

struct ReplicateOptions {
  ConflictRule rule = ConflictRule::directional;
  unsigned jobs = 1;
  std::size_t histogram_bins = 20;
};

struct ReplicateStats {
  std::size_t replicates = 0;
  double mean = 0.0;
  double std_dev = 0.0;  // sample standard deviation
  double min = 0.0;
  double max = 0.0;
  std::vector<std::size_t> histogram;  // equal-width bins over [0, 1]
  std::vector<double> fractions;       // per-replicate values, in order
};

ReplicateStats run_replicates(const DependencyGraph& graph, std::size_t n,
                              std::uint64_t seed,
                              const ReplicateOptions& options = {});

struct EffectOptions {
  unsigned swaps_per_edge = 10;
  ConflictRule rule = ConflictRule::directional;
  unsigned jobs = 1;
};

// The modularity-effect experiment: mean installed fraction on the real
// graph versus n_networks rewired graphs (conflicts untouched), each
// averaged over n_replicates runs.
EnsembleStats modularity_effect(const DependencyGraph& graph,
                                std::size_t n_networks,
                                std::size_t n_replicates, std::uint64_t seed,
                                const EffectOptions& options = {});

}  // namespace pkgnet
