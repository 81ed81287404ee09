#include "pkgnet/graph.hpp"

#include <algorithm>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "pkgnet/errors.hpp"
#include "pkgnet/rng.hpp"

using namespace pkgnet;

namespace {

// Random directed graph without self-loops, for property checks.
DependencyGraph random_graph(std::size_t nodes, std::size_t dep_edges,
                             std::size_t con_edges, std::uint64_t seed) {
  Rng rng(seed);
  GraphBuilder builder;
  for (std::size_t i = 0; i < nodes; ++i) {
    builder.intern("n" + std::to_string(i));
  }
  auto add_some = [&](std::size_t count, EdgeKind kind) {
    for (std::size_t i = 0; i < count; ++i) {
      const auto a = static_cast<NodeId>(rng.below(nodes));
      const auto b = static_cast<NodeId>(rng.below(nodes));
      if (a == b) continue;
      builder.add_edge(a, b, kind);
    }
  };
  add_some(dep_edges, EdgeKind::dependency);
  add_some(con_edges, EdgeKind::conflict);
  return builder.build();
}

}  // namespace

TEST_CASE("degree queries on a chain") {
  const auto g = read_edge_list("DEP a b\nDEP b c\n");
  const auto b = g.id_of("b");
  CHECK(g.degree(b, EdgeKind::dependency, Direction::in) == 1);
  CHECK(g.degree(b, EdgeKind::dependency, Direction::out) == 1);
  CHECK(g.degree(b, EdgeKind::conflict, Direction::in) == 0);
}

TEST_CASE("degree of a hub needed by k spokes") {
  std::string text;
  for (int i = 0; i < 5; ++i) {
    text += "DEP s" + std::to_string(i) + " hub\n";
  }
  const auto g = read_edge_list(text);
  CHECK(g.degree(g.id_of("hub"), EdgeKind::dependency, Direction::in) == 5);
  CHECK(g.degree(g.id_of("hub"), EdgeKind::dependency, Direction::out) == 0);
}

TEST_CASE("isolated node has zero degree everywhere") {
  GraphBuilder builder;
  builder.intern("alone");
  const auto g = builder.build();
  const auto n = g.id_of("alone");
  for (auto kind : {EdgeKind::dependency, EdgeKind::conflict}) {
    for (auto dir : {Direction::in, Direction::out}) {
      CHECK(g.degree(n, kind, dir) == 0);
    }
  }
  CHECK_FALSE(g.is_interacting(n));
}

TEST_CASE("unknown node lookups throw") {
  const auto g = read_edge_list("DEP a b\n");
  CHECK_THROWS_AS(g.id_of("zzz"), LookupError);
  CHECK_THROWS_AS(g.degree(99, EdgeKind::dependency, Direction::in),
                  LookupError);
  CHECK_THROWS_AS(g.dependency_closure(99), LookupError);
}

TEST_CASE("dependency closure basics") {
  SUBCASE("chain") {
    const auto g = read_edge_list("DEP a b\nDEP b c\n");
    const auto closure = g.dependency_closure(g.id_of("a"));
    CHECK(closure == std::vector<NodeId>{g.id_of("b"), g.id_of("c")});
  }
  SUBCASE("cycle terminates and excludes the root") {
    const auto g = read_edge_list("DEP a b\nDEP b a\n");
    const auto closure = g.dependency_closure(g.id_of("a"));
    CHECK(closure == std::vector<NodeId>{g.id_of("b")});
  }
  SUBCASE("diamond matches the relaxation oracle") {
    const auto g = read_edge_list("DEP a b\nDEP a c\nDEP b d\nDEP c d\n");
    const auto a = g.id_of("a");
    const auto closure = g.dependency_closure(a);
    CHECK(closure == oracle::brute_reachable(g, a));
    CHECK(closure.size() == 3);
  }
}

TEST_CASE("closure equals the relaxation oracle on random graphs") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto g = random_graph(12, 24, 0, seed);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      CHECK(g.dependency_closure(v) == oracle::brute_reachable(g, v));
    }
  }
}

TEST_CASE("closure is monotone under edge insertion") {
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = random_graph(10, 15, 0, 1000 + trial);
    // Rebuild with one extra dependency edge.
    GraphBuilder builder;
    for (NodeId v = 0; v < g.node_count(); ++v) builder.intern(g.name_of(v));
    for (const auto& [a, b] : g.edges(EdgeKind::dependency)) {
      builder.add_edge(a, b, EdgeKind::dependency);
    }
    NodeId x = 0, y = 0;
    do {
      x = static_cast<NodeId>(rng.below(g.node_count()));
      y = static_cast<NodeId>(rng.below(g.node_count()));
    } while (x == y);
    builder.add_edge(x, y, EdgeKind::dependency);
    const auto bigger = builder.build();

    for (NodeId v = 0; v < g.node_count(); ++v) {
      const auto before = g.dependency_closure(v);
      const auto after = bigger.dependency_closure(v);
      CHECK(std::includes(after.begin(), after.end(), before.begin(),
                          before.end()));
    }
  }
}

TEST_CASE("degree sums equal the edge count") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = random_graph(15, 40, 10, 100 + seed);
    std::size_t in_sum = 0, out_sum = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      in_sum += g.degree(v, EdgeKind::dependency, Direction::in);
      out_sum += g.degree(v, EdgeKind::dependency, Direction::out);
    }
    CHECK(in_sum == g.dep_edge_count());
    CHECK(out_sum == g.dep_edge_count());
  }
}

TEST_CASE("symmetrized dependency view") {
  SUBCASE("single edge has weight 1") {
    const auto g = read_edge_list("DEP a b\n");
    const auto view = symmetrized_dependency_view(g);
    REQUIRE(view.neighbors(g.id_of("a")).size() == 1);
    CHECK(view.neighbors(g.id_of("a"))[0].second == 1.0);
    CHECK(view.total_weight() == 2.0);
  }
  SUBCASE("reciprocal pair has weight 2, or 1 when collapsed") {
    const auto g = read_edge_list("DEP a b\nDEP b a\n");
    const auto view = symmetrized_dependency_view(g);
    CHECK(view.neighbors(g.id_of("a"))[0].second == 2.0);
    const auto collapsed = symmetrized_dependency_view(g, true);
    CHECK(collapsed.neighbors(g.id_of("a"))[0].second == 1.0);
  }
  SUBCASE("conflicts are excluded") {
    const auto g = read_edge_list("DEP a b\nCON a c\n");
    const auto view = symmetrized_dependency_view(g);
    CHECK(view.neighbors(g.id_of("a")).size() == 1);
    CHECK(view.neighbors(g.id_of("c")).empty());
    CHECK(view.strength(g.id_of("c")) == 0.0);
  }
  SUBCASE("total weight equals the dependency edge count") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto g = random_graph(12, 30, 8, 200 + seed);
      const auto view = symmetrized_dependency_view(g);
      CHECK(view.total_weight() / 2.0 ==
            doctest::Approx(static_cast<double>(g.dep_edge_count())));
    }
  }
}

TEST_CASE("edge list parsing") {
  SUBCASE("basic dep and con lines") {
    const auto g = read_edge_list("DEP a b\nCON a c\n");
    CHECK(g.node_count() == 3);
    CHECK(g.dep_edge_count() == 1);
    CHECK(g.con_edge_count() == 1);
  }
  SUBCASE("duplicate lines collapse") {
    const auto g = read_edge_list("DEP a b\nDEP a b\n");
    CHECK(g.dep_edge_count() == 1);
  }
  SUBCASE("self-loops are rejected with the line number") {
    try {
      read_edge_list("DEP a b\nDEP a a\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("malformed lines are rejected") {
    CHECK_THROWS_AS(read_edge_list("DEP a\n"), ParseError);
    CHECK_THROWS_AS(read_edge_list("FOO a b\n"), ParseError);
    CHECK_THROWS_AS(read_edge_list("DEP a b c\n"), ParseError);
  }
  SUBCASE("comments and blank lines are ignored") {
    const auto g = read_edge_list("# header\n\nDEP a b # trailing\n");
    CHECK(g.dep_edge_count() == 1);
  }
  SUBCASE("round-trips through the writer") {
    const auto g = random_graph(10, 20, 5, 42);
    const auto again = read_edge_list(write_edge_list(g));
    // Node ids are assigned in encounter order, so compare by name.
    auto name_pairs = [](const DependencyGraph& graph, EdgeKind kind) {
      std::set<std::pair<std::string, std::string>> pairs;
      for (const auto& [a, b] : graph.edges(kind)) {
        pairs.emplace(graph.name_of(a), graph.name_of(b));
      }
      return pairs;
    };
    CHECK(name_pairs(again, EdgeKind::dependency) ==
          name_pairs(g, EdgeKind::dependency));
    CHECK(name_pairs(again, EdgeKind::conflict) ==
          name_pairs(g, EdgeKind::conflict));
  }
}

TEST_CASE("graph summary") {
  const auto g = read_edge_list("DEP a b\nCON c d\n");
  GraphBuilder builder;
  for (NodeId v = 0; v < g.node_count(); ++v) builder.intern(g.name_of(v));
  for (const auto& [a, b] : g.edges(EdgeKind::dependency)) {
    builder.add_edge(a, b, EdgeKind::dependency);
  }
  for (const auto& [a, b] : g.edges(EdgeKind::conflict)) {
    builder.add_edge(a, b, EdgeKind::conflict);
  }
  builder.intern("idle");
  const auto with_idle = builder.build();
  const auto summary = summarize(with_idle);
  CHECK(summary.nodes == 5);
  CHECK(summary.dep_edges == 1);
  CHECK(summary.con_edges == 1);
  CHECK(summary.interacting == 4);
  CHECK(summary.non_interacting_fraction == doctest::Approx(0.2));
}
