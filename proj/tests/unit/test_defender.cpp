#include "doctest.h"

#include <limits>
#include <set>
#include <sstream>

#include "dynaa/defender.hpp"
#include "dynaa/errors.hpp"

using namespace dynaa;

namespace {

VertexId r(std::uint64_t v) { return real_id(v); }
VertexId p(std::uint64_t v) { return pseudonym_id(v); }

Graph ring(std::uint64_t from, std::uint64_t n) {
  Graph g;
  for (std::uint64_t i = 0; i < n; ++i) g.add_edge(r(from + i), r(from + (i + 1) % n));
  return g;
}

// n vertices, `edges` edges: a ring plus chords (i, i+k).
Graph pseudo_graph(std::uint64_t n, std::size_t edges) {
  Graph g;
  for (std::uint64_t k = 1; g.num_edges() < edges; ++k) {
    for (std::uint64_t i = 0; i < n && g.num_edges() < edges; ++i) {
      g.add_edge(p(i), p((i + k) % n));
    }
  }
  return g;
}

}  // namespace

TEST_CASE("pseudonyms are stable") {
  PseudonymLedger ledger(1);
  const Graph g = ring(0, 6);
  auto [a, phi_a] = pseudonymize(g, ledger);
  auto [b, phi_b] = pseudonymize(g, ledger);
  CHECK(a == b);
  CHECK(phi_a.forward() == phi_b.forward());
  CHECK(apply_isomorphism(g, phi_a) == a);
  for (const auto& [v, _] : a.adjacency()) CHECK(v.space == IdSpace::kPseudonym);
}

TEST_CASE("shared and disjoint releases") {
  PseudonymLedger ledger(2);
  Graph g1 = ring(0, 5);
  Graph g2 = ring(0, 5);
  g2.add_edge(r(4), r(9));
  auto [s1, phi1] = pseudonymize(g1, ledger);
  auto [s2, phi2] = pseudonymize(g2, ledger);
  for (std::uint64_t v = 0; v < 5; ++v) CHECK(phi1.at(r(v)) == phi2.at(r(v)));
  // Fresh vertices never reuse a value.
  CHECK(phi2.at(r(9)).value == 6);

  PseudonymLedger other(3);
  auto [x, phix] = pseudonymize(ring(100, 4), other);
  auto [y, phiy] = pseudonymize(ring(200, 4), other);
  for (const auto& [_, u] : phix.forward()) CHECK_FALSE(phiy.has_image(u));
  // Only the restriction to the release is returned.
  CHECK(phiy.size() == 4);
}

TEST_CASE("pseudonym order depends on the seed only") {
  const Graph g = ring(0, 30);
  PseudonymLedger a(5), b(5), c(6);
  CHECK(pseudonymize(g, a).second.forward() == pseudonymize(g, b).second.forward());
  CHECK(pseudonymize(g, a).second.forward() != pseudonymize(g, c).second.forward());
}

TEST_CASE("pseudonym stability over a random dynamic graph") {
  Rng rng(9);
  PseudonymLedger ledger(4);
  std::map<VertexId, VertexId> seen;
  Graph g;
  for (int release = 0; release < 20; ++release) {
    for (int k = 0; k < 15; ++k) {
      const auto a = rng.below(60), b = rng.below(60);
      if (a != b) g.add_edge(r(a), r(b));
    }
    if (rng.coin()) g.remove_vertex(r(rng.below(60)));
    auto [ps, phi] = pseudonymize(g, ledger);
    CHECK(apply_isomorphism(g, phi) == ps);
    for (const auto& [v, u] : phi.forward()) {
      auto [it, fresh] = seen.emplace(v, u);
      CHECK(it->second == u);
    }
  }
}

TEST_CASE("fresh flip count") {
  CHECK(fresh_flip_count(0.005, 1000) == 5);
  CHECK(fresh_flip_count(0.25, 10) == 3);
  CHECK(fresh_flip_count(0.2, 12) == 2);
  CHECK(fresh_flip_count(0.0, 1000) == 0);
}

TEST_CASE("zero noise is the identity") {
  NoiseLedger ledger;
  Rng rng(1);
  const Graph g = pseudo_graph(50, 120);
  CHECK(add_cumulative_noise(g, ledger, 0.0, 1, rng) == g);
  CHECK(ledger.flips().empty());
}

TEST_CASE("noise ratio range") {
  NoiseLedger ledger;
  Rng rng(1);
  const Graph g = pseudo_graph(10, 20);
  CHECK_THROWS_AS(add_cumulative_noise(g, ledger, 1.0, 1, rng), ConfigError);
  CHECK_THROWS_AS(add_cumulative_noise(g, ledger, -0.1, 1, rng), ConfigError);
  CHECK_THROWS_AS(add_cumulative_noise(g, ledger,
                                       std::numeric_limits<double>::quiet_NaN(), 1, rng),
                  ConfigError);
}

TEST_CASE("exactly round(omega |E|) distinct fresh flips") {
  NoiseLedger ledger;
  Rng rng(3);
  const Graph g = pseudo_graph(200, 1000);
  const Graph out = add_cumulative_noise(g, ledger, 0.005, 1, rng);
  REQUIRE(ledger.flips().size() == 5);
  std::set<Edge> pairs;
  for (const EdgeFlip& f : ledger.flips()) {
    pairs.insert(f.pair);
    CHECK(f.pair.first != f.pair.second);
    CHECK(f.release == 1);
    CHECK(out.has_edge(f.pair.first, f.pair.second) == (f.kind == FlipKind::kAdd));
    CHECK(g.has_edge(f.pair.first, f.pair.second) == (f.kind == FlipKind::kRemove));
  }
  CHECK(pairs.size() == 5);
}

TEST_CASE("noise accumulates against the replayed graph") {
  NoiseLedger ledger;
  Rng rng(4);
  Graph g = pseudo_graph(100, 400);
  for (ReleaseIndex i = 1; i <= 6; ++i) {
    const Graph replayed = [&] {
      NoiseLedger copy = ledger;
      return replay_noise(g, copy);
    }();
    const std::size_t before = ledger.flips().size();
    add_cumulative_noise(g, ledger, 0.02, i, rng);
    CHECK(ledger.flips().size() - before == fresh_flip_count(0.02, replayed.num_edges()));
    g.add_edge(p(i), p(100 + i));
  }
}

TEST_CASE("flips touching a vanished vertex are forgotten") {
  NoiseLedger ledger;
  ledger.record({Edge(p(1), p(2)), FlipKind::kAdd, 1});
  ledger.record({Edge(p(2), p(3)), FlipKind::kRemove, 1});
  ledger.record({Edge(p(1), p(4)), FlipKind::kAdd, 1});
  Graph g;
  g.add_edge(p(1), p(2));
  g.add_edge(p(2), p(3));
  g.add_vertex(p(5));
  // p(4) is gone.
  const Graph out = replay_noise(g, ledger);
  CHECK(ledger.flips().size() == 2);
  CHECK_FALSE(out.has_edge(p(2), p(3)));
  CHECK_FALSE(out.has_vertex(p(4)));
}

TEST_CASE("stale remove flips are kept as no-ops") {
  NoiseLedger ledger;
  ledger.record({Edge(p(1), p(2)), FlipKind::kRemove, 1});
  Graph g;
  g.add_vertex(p(1));
  g.add_vertex(p(2));
  const Graph out = replay_noise(g, ledger);
  CHECK(ledger.flips().size() == 1);
  CHECK(out == g);
  // An organic edge appearing later is still forced absent.
  g.add_edge(p(1), p(2));
  CHECK_FALSE(replay_noise(g, ledger).has_edge(p(1), p(2)));
}

TEST_CASE("replay is idempotent") {
  NoiseLedger ledger;
  Rng rng(6);
  Graph g = pseudo_graph(60, 200);
  for (ReleaseIndex i = 1; i <= 4; ++i) add_cumulative_noise(g, ledger, 0.05, i, rng);
  const auto flips = ledger.flips();
  const Graph once = replay_noise(g, ledger);
  const Graph twice = replay_noise(once, ledger);
  CHECK(once == twice);
  CHECK(ledger.flips() == flips);
}

TEST_CASE("ledger text form") {
  NoiseLedger ledger;
  ledger.record({Edge(p(7), p(3)), FlipKind::kAdd, 2});
  ledger.record({Edge(p(1), p(9)), FlipKind::kRemove, 4});
  std::ostringstream out;
  ledger.write(out);
  CHECK(out.str() == "ADD 3 7 @2\nDEL 1 9 @4\n");
}
