// Acceptance suite: one line per criterion, [PASS]/[FAIL]/[SKIP], nonzero
// exit when anything fails. The pkgnet binary path arrives as argv[1] (used
// by the determinism criterion).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "corpus.hpp"
#include "oracles.hpp"
#include "pkgnet/community.hpp"
#include "pkgnet/control_parser.hpp"
#include "pkgnet/degree_stats.hpp"
#include "pkgnet/graph.hpp"
#include "pkgnet/install_sim.hpp"
#include "pkgnet/null_model.hpp"
#include "pkgnet/rng.hpp"

namespace fs = std::filesystem;
using namespace pkgnet;
using Clock = std::chrono::steady_clock;

namespace {

struct Skip {
  std::string reason;
};

struct Failure {
  std::string reason;
};

void require(bool condition, const std::string& message) {
  if (!condition) throw Failure{message};
}

std::string cli_binary;

unsigned hardware_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 2 : hw;
}

// ---------------------------------------------------------------------------
// 1. Installation process vs exhaustive enumeration on the crafted corpus.

void criterion_install_oracle() {
  const auto graphs = corpus::small_graph_corpus();
  require(graphs.size() == 25, "corpus must hold 25 graphs");
  const std::size_t replicates = 2000;

  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const auto g = read_edge_list(graphs[gi]);
    require(g.interacting_nodes().size() <= 6,
            "corpus graph " + std::to_string(gi) + " exceeds 6 nodes");
    const auto expected = oracle::enumerate_install_distribution(g);

    std::map<std::size_t, std::size_t> observed;
    for (std::size_t rep = 0; rep < replicates; ++rep) {
      const auto seed = derive_seed(9001, gi, rep);
      ++observed[run_replicate(g, seed).installed.size()];
    }
    for (const auto& [count, hits] : observed) {
      require(expected.count(count) == 1,
              "graph " + std::to_string(gi) + ": outcome " +
                  std::to_string(count) + " not in the oracle support");
    }
    for (const auto& [count, p] : expected) {
      const auto hits = observed.count(count) ? observed.at(count) : 0;
      const double phat =
          static_cast<double>(hits) / static_cast<double>(replicates);
      const double se =
          std::sqrt(p * (1.0 - p) / static_cast<double>(replicates));
      require(std::abs(phat - p) <= 3.0 * se + 1e-12,
              "graph " + std::to_string(gi) + ": outcome " +
                  std::to_string(count) + " off by " +
                  std::to_string(std::abs(phat - p)) + " (3se=" +
                  std::to_string(3.0 * se) + ")");
    }
  }
}

// ---------------------------------------------------------------------------
// 2. Louvain vs exhaustive partition search on every small graph.

void criterion_louvain_oracle() {
  std::vector<std::string> graphs = corpus::small_graph_corpus();
  // Extra small structured graphs (all at most 10 interacting nodes).
  graphs.push_back("DEP a b\nDEP b c\nDEP c d\nDEP d e\nDEP e f\nDEP f g\n");
  graphs.push_back(
      "DEP s1 h\nDEP s2 h\nDEP s3 h\nDEP s4 h\nDEP s5 h\nDEP s6 h\n");
  graphs.push_back(
      "DEP a1 a2\nDEP a2 a3\nDEP a3 a1\nDEP b1 b2\nDEP b2 b3\nDEP b3 b1\n"
      "DEP a1 b1\n");

  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const auto g = read_edge_list(graphs[gi]);
    const auto view = symmetrized_dependency_view(g);
    if (view.total_weight() <= 0.0) continue;  // no dependencies to cluster
    std::size_t active = 0;
    for (NodeId v = 0; v < view.node_count(); ++v) {
      if (view.strength(v) > 0.0) ++active;
    }
    require(active <= 10, "graph too large for exhaustive search");
    const auto partition = louvain(view, 10, 4242 + gi);
    const auto best = oracle::exhaustive_best_partition(view);
    require(std::abs(partition.q - best.q) <= 1e-9,
            "graph " + std::to_string(gi) + ": louvain q " +
                std::to_string(partition.q) + " vs optimum " +
                std::to_string(best.q));
  }

  // Disconnected equal cliques must land exactly on 0.5.
  for (int size : {3, 4, 5}) {
    std::string text;
    for (int c = 0; c < 2; ++c) {
      for (int i = 0; i < size; ++i) {
        for (int j = i + 1; j < size; ++j) {
          text += "DEP c" + std::to_string(c) + "n" + std::to_string(i) +
                  " c" + std::to_string(c) + "n" + std::to_string(j) + "\n";
        }
      }
    }
    const auto g = read_edge_list(text);
    const auto partition = louvain(symmetrized_dependency_view(g), 10, 7);
    require(partition.q == 0.5,
            "two cliques of " + std::to_string(size) + ": q = " +
                std::to_string(partition.q) + " != 0.5");
    require(partition.module_count() == 2, "expected exactly two modules");
  }
}

// ---------------------------------------------------------------------------
// 3. Rewiring invariants and the null-vs-null sanity z.

DependencyGraph random_graph(std::size_t nodes, std::size_t deps,
                             std::size_t cons, std::uint64_t seed) {
  Rng rng(seed);
  GraphBuilder builder;
  for (std::size_t i = 0; i < nodes; ++i) {
    builder.intern("n" + std::to_string(i));
  }
  auto add = [&](std::size_t count, EdgeKind kind) {
    for (std::size_t e = 0; e < count; ++e) {
      const auto a = static_cast<NodeId>(rng.below(nodes));
      const auto b = static_cast<NodeId>(rng.below(nodes));
      if (a != b) builder.add_edge(a, b, kind);
    }
  };
  add(deps, EdgeKind::dependency);
  add(cons, EdgeKind::conflict);
  return builder.build();
}

void criterion_null_model() {
  // 50 base graphs x 200 rewired instances = 10,000 randomizations.
  std::size_t instances = 0;
  for (std::uint64_t base_seed = 1; base_seed <= 50; ++base_seed) {
    const auto g = random_graph(25, 60, 15, base_seed);
    std::vector<std::pair<std::size_t, std::size_t>> degrees;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      degrees.emplace_back(g.degree(v, EdgeKind::dependency, Direction::in),
                           g.degree(v, EdgeKind::dependency, Direction::out));
    }
    const auto conflicts = g.edges(EdgeKind::conflict);
    for (std::uint64_t r = 0; r < 200; ++r) {
      const auto rewired = rewire(g, 2, derive_seed(31337, base_seed, r));
      ++instances;
      require(rewired.node_count() == g.node_count(), "node set changed");
      require(rewired.dep_edge_count() == g.dep_edge_count(),
              "dependency count changed");
      for (NodeId v = 0; v < g.node_count(); ++v) {
        require(
            rewired.degree(v, EdgeKind::dependency, Direction::in) ==
                    degrees[v].first &&
                rewired.degree(v, EdgeKind::dependency, Direction::out) ==
                    degrees[v].second,
            "degree of node " + std::to_string(v) + " changed");
      }
      require(rewired.edges(EdgeKind::conflict) == conflicts,
              "conflict edges changed");
    }
  }
  require(instances == 10000, "expected 10,000 rewired instances");

  // Null vs null: the observed graph is itself one rewired draw, so the
  // ensemble z should hover near zero (seeded run, |z| < 0.5).
  const auto base = random_graph(120, 360, 0, 99);
  const auto observed = rewire(base, 10, 555);
  EnsembleOptions opts;
  opts.louvain_restarts = 3;
  opts.jobs = hardware_jobs();
  const auto stats =
      ensemble(observed, 200, EnsembleStatistic::louvain_q, 2718, opts);
  require(stats.z.has_value(), "null-vs-null z undefined");
  require(std::abs(*stats.z) < 0.5,
          "null-vs-null |z| = " + std::to_string(std::abs(*stats.z)));
  require(stats.p > 0.1 && stats.p < 0.9,
          "null-vs-null p = " + std::to_string(stats.p));
}

// ---------------------------------------------------------------------------
// 4. Regression fit recovery and the F identity.

void criterion_fit_recovery() {
  std::vector<CumulativePoint> exp_data, pow_data, lin_data;
  for (int i = 1; i <= 9; ++i) {
    const double k = i;
    exp_data.push_back({k, 2.5 * std::exp(-0.37 * k)});
    pow_data.push_back({k, 3.0 * std::pow(k, -1.8)});
    lin_data.push_back({k, 1.0 + 3.0 * k});
  }
  const auto exp_fit = fit_model(exp_data, FitModel::exponential);
  require(std::abs(exp_fit.r_squared - 1.0) <= 1e-9, "exponential r^2");
  require(std::abs(exp_fit.slope + 0.37) <= 1e-6, "exponential rate");
  require(std::abs(std::exp(exp_fit.intercept) - 2.5) <= 1e-6,
          "exponential amplitude");

  const auto pow_fit = fit_model(pow_data, FitModel::power_law);
  require(std::abs(pow_fit.r_squared - 1.0) <= 1e-9, "power-law r^2");
  require(std::abs(pow_fit.slope + 1.8) <= 1e-6, "power-law exponent");
  require(std::abs(std::exp(pow_fit.intercept) - 3.0) <= 1e-6,
          "power-law amplitude");

  const auto lin_fit = fit_model(lin_data, FitModel::linear);
  require(std::abs(lin_fit.r_squared - 1.0) <= 1e-9, "linear r^2");
  require(std::abs(lin_fit.slope - 3.0) <= 1e-6, "linear slope");
  require(std::abs(lin_fit.intercept - 1.0) <= 1e-6, "linear intercept");

  Rng rng(8899);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<CumulativePoint> points;
    const std::size_t n = 4 + rng.below(12);
    for (std::size_t i = 1; i <= n; ++i) {
      points.push_back({static_cast<double>(i), 0.05 + rng.unit()});
    }
    const auto fit = fit_model(points, FitModel::linear);
    const double reference = fit.r_squared *
                             static_cast<double>(n - 2) /
                             (1.0 - fit.r_squared);
    require(std::abs(fit.f_stat - reference) <=
                1e-9 * std::max(1.0, reference),
            "F identity violated");
    require(fit.df_denominator == n - 2, "denominator df");
  }
}

// ---------------------------------------------------------------------------
// 5. The schematic 10-package scenario.

void criterion_fig1() {
  const auto g = read_edge_list(corpus::fig1_network());
  const std::vector<NodeId> preinstalled{g.id_of("p1"), g.id_of("p2"),
                                         g.id_of("p3"), g.id_of("p4")};
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto state = InstallState::with_installed(g, preinstalled);
    const auto outcome = run_from_state(g, std::move(state), seed);
    require(outcome.fraction == 0.5,
            "fraction " + std::to_string(outcome.fraction) + " != 0.5");
    require(outcome.installed.size() == 5 && outcome.discarded.size() == 5,
            "expected a 5/5 split");
  }
}

// ---------------------------------------------------------------------------
// 6. Desk-scale reproduction, conditional on a historical Packages index.

void criterion_desk_scale() {
  const char* path = std::getenv("PKGNET_DEBIAN_1_1_PACKAGES");
  if (path == nullptr || std::string(path).empty()) {
    throw Skip{"set PKGNET_DEBIAN_1_1_PACKAGES to a Debian 1.1 Packages "
               "index to enable"};
  }
  std::ifstream in(path, std::ios::binary);
  require(in.good(), std::string("cannot open ") + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();

  const auto parsed = parse_packages_index(buffer.str());
  require(parsed.records.size() == 448,
          "package count " + std::to_string(parsed.records.size()) +
              " != 448");

  const auto built = build_graph(parsed.records);
  const double deps = static_cast<double>(built.graph.dep_edge_count());
  const double cons = static_cast<double>(built.graph.con_edge_count());
  require(std::abs(deps - 539.0) <= 53.9,
          "dependency count " + std::to_string(deps) +
              " outside 539 +/- 10%");
  require(std::abs(cons - 28.0) <= 2.8,
          "conflict count " + std::to_string(cons) + " outside 28 +/- 10%");

  // The policy sweep must bracket the reported counts.
  std::size_t dep_min = SIZE_MAX, dep_max = 0, con_min = SIZE_MAX, con_max = 0;
  for (auto alternatives : {AlternativesPolicy::first_listed,
                            AlternativesPolicy::all_alternatives}) {
    for (auto virtuals : {VirtualsPolicy::first_provider,
                          VirtualsPolicy::all_providers,
                          VirtualsPolicy::drop}) {
      for (bool pre : {true, false}) {
        for (auto direction : {ConflictDirection::as_declared,
                               ConflictDirection::symmetrized}) {
          ResolutionPolicy policy{alternatives, virtuals, pre, direction};
          const auto swept = build_graph(parsed.records, policy);
          dep_min = std::min(dep_min, swept.graph.dep_edge_count());
          dep_max = std::max(dep_max, swept.graph.dep_edge_count());
          con_min = std::min(con_min, swept.graph.con_edge_count());
          con_max = std::max(con_max, swept.graph.con_edge_count());
        }
      }
    }
  }
  require(dep_min <= 539 && 539 <= dep_max,
          "policy sweep [" + std::to_string(dep_min) + ", " +
              std::to_string(dep_max) + "] does not bracket 539");
  require(con_min <= 28 && 28 <= con_max,
          "policy sweep [" + std::to_string(con_min) + ", " +
              std::to_string(con_max) + "] does not bracket 28");

  const auto in_points = cumulative_degree_distribution(
      built.graph, EdgeKind::dependency, Direction::in);
  const auto in_best = best_fit(multiplicative_bin(in_points, 2.0));
  require(in_best.winner == FitModel::power_law,
          "incoming dependencies should fit a power law best");
  const auto out_points = cumulative_degree_distribution(
      built.graph, EdgeKind::dependency, Direction::out);
  const auto out_best = best_fit(multiplicative_bin(out_points, 2.0));
  require(out_best.winner == FitModel::exponential,
          "outgoing dependencies should fit an exponential best");

  const auto partition =
      louvain(symmetrized_dependency_view(built.graph), 10, 1996);
  require(partition.q >= 0.45 && partition.q <= 0.60,
          "modularity q " + std::to_string(partition.q) +
              " outside [0.45, 0.60]");

  EnsembleOptions opts;
  opts.jobs = hardware_jobs();
  const auto stats =
      ensemble(built.graph, 1000, EnsembleStatistic::louvain_q, 1996, opts);
  require(stats.p < 0.001,
          "modularity significance p = " + std::to_string(stats.p));
}

// ---------------------------------------------------------------------------
// 7. Direction check: contained conflicts boost installability.

void criterion_modularity_effect() {
  const auto g = read_edge_list(corpus::two_module_conflict_graph());
  EffectOptions opts;
  opts.jobs = hardware_jobs();
  const auto stats = modularity_effect(g, 100, 1000, 1234, opts);
  require(stats.z.has_value(), "effect z undefined");
  require(*stats.z > 0.0, "effect z = " + std::to_string(*stats.z));
  require(stats.p < 0.05, "effect p = " + std::to_string(stats.p));
}

// ---------------------------------------------------------------------------
// 8. CLI determinism across job counts.

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("pkgnet_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

int run_command(const std::string& command) {
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "missing artifact " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void criterion_cli_determinism() {
  if (cli_binary.empty()) throw Skip{"pkgnet binary path not supplied"};
  TempDir dir;
  {
    std::ofstream out(dir.file("g.edges"), std::ios::binary);
    out << corpus::two_module_conflict_graph();
  }
  auto run_pair = [&](const std::string& args, const std::string& out_a,
                      const std::string& out_b) {
    require(run_command(cli_binary + " " + args + " --jobs 1 " + out_a +
                        " >/dev/null 2>&1") == 0,
            "jobs=1 run failed: " + args);
    require(run_command(cli_binary + " " + args + " --jobs 4 " + out_b +
                        " >/dev/null 2>&1") == 0,
            "jobs=4 run failed: " + args);
  };

  run_pair("simulate --graph " + dir.file("g.edges") +
               " --replicates 500 --seed 42",
           "--out " + dir.file("sim1.json") + " --per-replicate " +
               dir.file("sim1.csv"),
           "--out " + dir.file("sim2.json") + " --per-replicate " +
               dir.file("sim2.csv"));
  require(slurp(dir.file("sim1.json")) == slurp(dir.file("sim2.json")),
          "simulate JSON differs across job counts");
  require(slurp(dir.file("sim1.csv")) == slurp(dir.file("sim2.csv")),
          "simulate CSV differs across job counts");

  run_pair("nullmodel --graph " + dir.file("g.edges") +
               " --statistic louvain_q --networks 40 --restarts 4 --seed 9",
           "--out " + dir.file("nm1.json") + " --samples-csv " +
               dir.file("nm1.csv"),
           "--out " + dir.file("nm2.json") + " --samples-csv " +
               dir.file("nm2.csv"));
  require(slurp(dir.file("nm1.json")) == slurp(dir.file("nm2.json")),
          "nullmodel JSON differs across job counts");
  require(slurp(dir.file("nm1.csv")) == slurp(dir.file("nm2.csv")),
          "nullmodel samples differ across job counts");

  run_pair("community --graph " + dir.file("g.edges") +
               " --restarts 8 --seed 5",
           "--out-partition " + dir.file("p1.csv") + " --out-summary " +
               dir.file("s1.json"),
           "--out-partition " + dir.file("p2.csv") + " --out-summary " +
               dir.file("s2.json"));
  require(slurp(dir.file("p1.csv")) == slurp(dir.file("p2.csv")),
          "partition differs across job counts");
  require(slurp(dir.file("s1.json")) == slurp(dir.file("s2.json")),
          "community summary differs across job counts");
}

struct Criterion {
  int id;
  std::string name;
  std::function<void()> fn;
  double budget_seconds;  // 0 = no stated budget
};

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) cli_binary = argv[1];

  const std::vector<Criterion> criteria{
      {1, "installation process matches exhaustive enumeration",
       criterion_install_oracle, 60.0},
      {2, "louvain matches exhaustive partition search",
       criterion_louvain_oracle, 0.0},
      {3, "rewiring preserves degrees/conflicts; null-vs-null z is small",
       criterion_null_model, 0.0},
      {4, "regression recovery and F identity", criterion_fit_recovery, 0.0},
      {5, "schematic network installs exactly half", criterion_fig1, 0.0},
      {6, "desk-scale reproduction on a historical index",
       criterion_desk_scale, 600.0},
      {7, "contained conflicts raise installability vs the null",
       criterion_modularity_effect, 0.0},
      {8, "stochastic CLI outputs are byte-identical across job counts",
       criterion_cli_determinism, 0.0},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto start = Clock::now();
    std::string verdict, detail;
    try {
      criterion.fn();
      const double elapsed =
          std::chrono::duration<double>(Clock::now() - start).count();
      if (criterion.budget_seconds > 0.0 &&
          elapsed > criterion.budget_seconds) {
        verdict = "FAIL";
        detail = "exceeded the " +
                 std::to_string(static_cast<int>(criterion.budget_seconds)) +
                 "s budget";
        ++failures;
      } else {
        verdict = "PASS";
      }
      char timing[32];
      std::snprintf(timing, sizeof(timing), " (%.1fs)", elapsed);
      detail += timing;
    } catch (const Skip& skip) {
      verdict = "SKIP";
      detail = skip.reason;
    } catch (const Failure& failure) {
      verdict = "FAIL";
      detail = failure.reason;
      ++failures;
    } catch (const std::exception& e) {
      verdict = "FAIL";
      detail = std::string("unexpected error: ") + e.what();
      ++failures;
    }
    std::cout << "[" << verdict << "] criterion " << criterion.id << ": "
              << criterion.name;
    if (!detail.empty()) std::cout << ": " << detail;
    std::cout << "\n";
  }
  std::cout << (failures == 0 ? "acceptance: all criteria passed"
                              : "acceptance: " + std::to_string(failures) +
                                    " criterion(s) failed")
            << "\n";
  return failures == 0 ? 0 : 1;
}
