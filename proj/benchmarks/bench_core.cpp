// Microbenchmarks for the hot paths: parsing, graph building, closure
// queries, Louvain, rewiring and installation replicates.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "pkgnet/community.hpp"
#include "pkgnet/control_parser.hpp"
#include "pkgnet/graph.hpp"
#include "pkgnet/install_sim.hpp"
#include "pkgnet/null_model.hpp"
#include "pkgnet/rng.hpp"

namespace {

// Synthetic Packages index with a preferential-attachment flavor: later
// packages depend on a few earlier ones, sporadic conflicts.
std::string synthetic_index(std::size_t n) {
  pkgnet::Rng rng(7);
  std::string text;
  for (std::size_t i = 0; i < n; ++i) {
    text += "Package: pkg" + std::to_string(i) + "\n";
    text += "Version: 1." + std::to_string(i % 10) + "\n";
    if (i > 0) {
      text += "Depends: pkg" + std::to_string(rng.below(i));
      const std::size_t extra = rng.below(3);
      for (std::size_t d = 0; d < extra; ++d) {
        text += ", pkg" + std::to_string(rng.below(i)) + " (>= 1.0)";
      }
      text += "\n";
    }
    if (i > 2 && rng.below(10) == 0) {
      text += "Conflicts: pkg" + std::to_string(rng.below(i)) + "\n";
    }
    text += "\n";
  }
  return text;
}

pkgnet::DependencyGraph synthetic_graph(std::size_t n) {
  const auto parsed = pkgnet::parse_packages_index(synthetic_index(n));
  return pkgnet::build_graph(parsed.records).graph;
}

void BM_ParsePackagesIndex(benchmark::State& state) {
  const std::string text = synthetic_index(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pkgnet::parse_packages_index(text));
  }
  state.SetBytesProcessed(state.iterations() * text.size());
}
BENCHMARK(BM_ParsePackagesIndex)->Arg(1000)->Arg(10000);

void BM_BuildGraph(benchmark::State& state) {
  const auto parsed = pkgnet::parse_packages_index(
      synthetic_index(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pkgnet::build_graph(parsed.records));
  }
}
BENCHMARK(BM_BuildGraph)->Arg(1000)->Arg(10000);

void BM_DependencyClosure(benchmark::State& state) {
  const auto graph = synthetic_graph(state.range(0));
  pkgnet::NodeId node = 0;
  for (auto _ : state) {
    node = (node + 1) % graph.node_count();
    benchmark::DoNotOptimize(graph.dependency_closure(node));
  }
}
BENCHMARK(BM_DependencyClosure)->Arg(1000)->Arg(10000);

void BM_Louvain(benchmark::State& state) {
  const auto graph = synthetic_graph(state.range(0));
  const auto view = pkgnet::symmetrized_dependency_view(graph);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pkgnet::louvain(view, 1, 42));
  }
}
BENCHMARK(BM_Louvain)->Arg(1000)->Arg(10000);

void BM_Rewire(benchmark::State& state) {
  const auto graph = synthetic_graph(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pkgnet::rewire(graph, 10, ++seed));
  }
  state.SetItemsProcessed(state.iterations() * 10 * graph.dep_edge_count());
}
BENCHMARK(BM_Rewire)->Arg(1000)->Arg(10000);

void BM_InstallReplicate(benchmark::State& state) {
  const auto graph = synthetic_graph(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pkgnet::run_replicate(graph, ++seed));
  }
}
BENCHMARK(BM_InstallReplicate)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
