#include "pkgnet/install_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "pkgnet/errors.hpp"
#include "pkgnet/parallel.hpp"

namespace pkgnet {

InstallState InstallState::over_interacting(const DependencyGraph& graph) {
  InstallState state;
  state.status_.assign(graph.node_count(), Status::excluded);
  state.position_.assign(graph.node_count(), -1);
  for (NodeId v : graph.interacting_nodes()) {
    state.status_[v] = Status::remaining;
    state.position_[v] = static_cast<std::int32_t>(state.remaining_.size());
    state.remaining_.push_back(v);
  }
  return state;
}

InstallState InstallState::with_installed(
    const DependencyGraph& graph, const std::vector<NodeId>& preinstalled) {
  InstallState state = over_interacting(graph);
  for (NodeId v : preinstalled) {
    if (v >= graph.node_count() || state.status_[v] != Status::remaining) {
      throw std::invalid_argument(
          "preinstalled package must be an interacting node");
    }
    state.mark_installed(v);
  }
  return state;
}

std::vector<NodeId> InstallState::installed_nodes() const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < status_.size(); ++v) {
    if (status_[v] == Status::installed) out.push_back(v);
  }
  return out;
}

std::vector<NodeId> InstallState::discarded_nodes() const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < status_.size(); ++v) {
    if (status_[v] == Status::discarded) out.push_back(v);
  }
  return out;
}

void InstallState::remove_from_pool(NodeId node) {
  const auto pos = position_[node];
  const NodeId last = remaining_.back();
  remaining_[pos] = last;
  position_[last] = pos;
  remaining_.pop_back();
  position_[node] = -1;
}

void InstallState::mark_installed(NodeId node) {
  if (status_[node] != Status::remaining) {
    throw DataError("package is not in the remaining pool");
  }
  remove_from_pool(node);
  status_[node] = Status::installed;
  ++installed_count_;
}

void InstallState::mark_discarded(NodeId node) {
  if (status_[node] != Status::remaining) {
    throw DataError("package is not in the remaining pool");
  }
  remove_from_pool(node);
  status_[node] = Status::discarded;
  ++discarded_count_;
}

namespace {

bool conflicts_with_installed(const DependencyGraph& graph,
                              const InstallState& state, NodeId node,
                              ConflictRule rule) {
  for (NodeId other :
       graph.neighbors(node, EdgeKind::conflict, Direction::out)) {
    if (state.is_installed(other)) return true;
  }
  if (rule == ConflictRule::symmetric) {
    for (NodeId other :
         graph.neighbors(node, EdgeKind::conflict, Direction::in)) {
      if (state.is_installed(other)) return true;
    }
  }
  return false;
}

}  // namespace

InstallDecision evaluate_candidate(const DependencyGraph& graph,
                                   const InstallState& state, NodeId pkg,
                                   Rng& rng, ConflictRule rule) {
  if (pkg >= graph.node_count() || !state.is_remaining(pkg)) {
    throw DataError("candidate '" +
                    (pkg < graph.node_count() ? graph.name_of(pkg)
                                              : std::to_string(pkg)) +
                    "' is not in the remaining pool");
  }

  InstallDecision decision;

  if (conflicts_with_installed(graph, state, pkg, rule)) {
    decision.reason = DiscardReason::conflict_with_installed;
    return decision;
  }

  const std::vector<NodeId> closure = graph.dependency_closure(pkg);
  for (NodeId member : closure) {
    if (state.is_discarded(member)) {
      decision.reason = DiscardReason::dependency_discarded;
      return decision;
    }
    if (conflicts_with_installed(graph, state, member, rule)) {
      decision.reason = DiscardReason::dependency_conflict;
      return decision;
    }
  }

  // Reciprocally conflicting pairs inside the closure: keep one of each
  // pair at random, discard the other. Pairs already broken by an earlier
  // flip are skipped. Processing order is the sorted pair order.
  std::unordered_set<NodeId> losers;
  std::vector<NodeId> survivors;
  for (NodeId member : closure) {
    for (NodeId other :
         graph.neighbors(member, EdgeKind::conflict, Direction::out)) {
      if (other <= member) continue;
      if (!std::binary_search(closure.begin(), closure.end(), other)) continue;
      if (!graph.has_edge(other, member, EdgeKind::conflict)) continue;
      if (losers.count(member) || losers.count(other)) continue;
      const bool first_loses = rng.coin();
      losers.insert(first_loses ? member : other);
      survivors.push_back(first_loses ? other : member);
    }
  }

  decision.coin_flip_discards.assign(losers.begin(), losers.end());
  std::sort(decision.coin_flip_discards.begin(),
            decision.coin_flip_discards.end());

  if (!losers.empty()) {
    // Re-check the dependency condition against the updated discard set:
    // a surviving pair member that itself needs a flipped-away package
    // (directly or through further dependencies) pulls the candidate down.
    for (NodeId survivor : survivors) {
      if (losers.count(survivor)) continue;  // lost a later pair
      for (NodeId dep : graph.dependency_closure(survivor)) {
        if (losers.count(dep) || state.is_discarded(dep)) {
          decision.reason = DiscardReason::dependency_lost_coin_flip;
          return decision;
        }
      }
    }
  }

  decision.install = true;
  decision.install_set.reserve(closure.size() + 1);
  decision.install_set.push_back(pkg);
  for (NodeId member : closure) {
    if (!losers.count(member)) decision.install_set.push_back(member);
  }
  std::sort(decision.install_set.begin(), decision.install_set.end());
  return decision;
}

void apply_decision(InstallState& state, NodeId pkg,
                    const InstallDecision& decision) {
  for (NodeId loser : decision.coin_flip_discards) {
    if (state.is_remaining(loser)) state.mark_discarded(loser);
  }
  if (decision.install) {
    for (NodeId member : decision.install_set) {
      if (state.is_remaining(member)) state.mark_installed(member);
    }
  } else {
    state.mark_discarded(pkg);
  }
}

InstallOutcome run_from_state(const DependencyGraph& graph, InstallState state,
                              std::uint64_t seed, ConflictRule rule) {
  Rng rng(seed);
  while (state.remaining_count() > 0) {
    const NodeId pkg =
        state.remaining_pool()[rng.below(state.remaining_count())];
    const InstallDecision decision =
        evaluate_candidate(graph, state, pkg, rng, rule);
    apply_decision(state, pkg, decision);
  }
  InstallOutcome outcome;
  outcome.installed = state.installed_nodes();
  outcome.discarded = state.discarded_nodes();
  const std::size_t total = outcome.installed.size() + outcome.discarded.size();
  outcome.fraction = total == 0
                         ? 0.0
                         : static_cast<double>(outcome.installed.size()) /
                               static_cast<double>(total);
  return outcome;
}

InstallOutcome run_replicate(const DependencyGraph& graph, std::uint64_t seed,
                             ConflictRule rule) {
  InstallState state = InstallState::over_interacting(graph);
  if (state.remaining_count() == 0) {
    throw DataError("no interacting packages to install");
  }
  return run_from_state(graph, std::move(state), seed, rule);
}

ReplicateStats run_replicates(const DependencyGraph& graph, std::size_t n,
                              std::uint64_t seed,
                              const ReplicateOptions& options) {
  if (n < 1) throw std::invalid_argument("need at least one replicate");
  if (graph.interacting_nodes().empty()) {
    throw DataError("no interacting packages to install");
  }

  ReplicateStats stats;
  stats.replicates = n;
  stats.fractions.assign(n, 0.0);
  parallel_for(n, options.jobs, [&](std::size_t i) {
    stats.fractions[i] =
        run_replicate(graph, derive_seed(seed, seed_stream::replicate, i),
                      options.rule)
            .fraction;
  });

  double sum = 0.0;
  stats.min = stats.fractions.front();
  stats.max = stats.fractions.front();
  for (double f : stats.fractions) {
    sum += f;
    stats.min = std::min(stats.min, f);
    stats.max = std::max(stats.max, f);
  }
  stats.mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double f : stats.fractions) {
    const double d = f - stats.mean;
    ss += d * d;
  }
  stats.std_dev = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;

  stats.histogram.assign(options.histogram_bins, 0);
  if (options.histogram_bins > 0) {
    for (double f : stats.fractions) {
      auto bin = static_cast<std::size_t>(
          f * static_cast<double>(options.histogram_bins));
      if (bin >= options.histogram_bins) bin = options.histogram_bins - 1;
      ++stats.histogram[bin];
    }
  }
  return stats;
}

EnsembleStats modularity_effect(const DependencyGraph& graph,
                                std::size_t n_networks,
                                std::size_t n_replicates, std::uint64_t seed,
                                const EffectOptions& options) {
  EnsembleOptions eopts;
  eopts.swaps_per_edge = options.swaps_per_edge;
  eopts.install_replicates = n_replicates;
  eopts.jobs = options.jobs;
  return ensemble_with(
      graph, n_networks, seed, eopts,
      [n_replicates, &options](const DependencyGraph& g, std::uint64_t s) {
        ReplicateOptions ropts;
        ropts.rule = options.rule;
        return run_replicates(g, n_replicates, s, ropts).mean;
      });
}

}  // namespace pkgnet
