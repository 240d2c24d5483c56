#include "dynaa/defender.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "dynaa/errors.hpp"

namespace dynaa {

void PseudonymLedger::assign(const Graph& g) {
  std::vector<VertexId> fresh;
  for (const auto& [v, _] : g.adjacency()) {
    if (!map_.contains(v)) fresh.push_back(v);
  }
  rng_.shuffle(std::span<VertexId>(fresh));
  for (VertexId v : fresh) map_.insert(v, pseudonym_id(next_++));
}

std::pair<Graph, IsomorphismMap> pseudonymize(const Graph& g_plus,
                                              PseudonymLedger& ledger) {
  ledger.assign(g_plus);
  IsomorphismMap phi;
  for (const auto& [v, _] : g_plus.adjacency()) phi.insert(v, ledger.at(v));
  return {apply_isomorphism(g_plus, phi), std::move(phi)};
}

std::size_t NoiseLedger::purge(const Graph& g) {
  const auto before = flips_.size();
  std::erase_if(flips_, [&](const EdgeFlip& f) {
    return !g.has_vertex(f.pair.first) || !g.has_vertex(f.pair.second);
  });
  return before - flips_.size();
}

void NoiseLedger::write(std::ostream& out) const {
  for (const EdgeFlip& f : flips_) {
    out << (f.kind == FlipKind::kAdd ? "ADD " : "DEL ") << f.pair.first.value
        << ' ' << f.pair.second.value << " @" << f.release << '\n';
  }
}

Graph replay_noise(const Graph& g_pseudo, NoiseLedger& ledger) {
  ledger.purge(g_pseudo);
  Graph g = g_pseudo;
  for (const EdgeFlip& f : ledger.flips()) {
    if (f.kind == FlipKind::kAdd) {
      g.add_edge(f.pair.first, f.pair.second);
    } else {
      g.remove_edge(f.pair.first, f.pair.second);
    }
  }
  return g;
}

std::size_t fresh_flip_count(double omega, std::size_t edges) {
  return static_cast<std::size_t>(
      std::floor(omega * static_cast<double>(edges) + 0.5));
}

Graph add_cumulative_noise(const Graph& g_pseudo, NoiseLedger& ledger,
                           double omega, ReleaseIndex release, Rng& rng) {
  if (!(omega >= 0.0 && omega < 1.0)) {
    throw ConfigError("noise ratio must lie in [0, 1)");
  }
  Graph g = replay_noise(g_pseudo, ledger);
  const std::vector<VertexId> vs = g.vertices();
  const std::size_t n = vs.size();
  const std::size_t pairs = n < 2 ? 0 : n * (n - 1) / 2;
  const std::size_t count = std::min(fresh_flip_count(omega, g.num_edges()),
                                     pairs);
  std::set<Edge> flipped;
  while (flipped.size() < count) {
    const VertexId a = vs[rng.below(n)];
    const VertexId b = vs[rng.below(n)];
    if (a == b) continue;
    const Edge e(a, b);
    if (!flipped.insert(e).second) continue;
    if (g.has_edge(a, b)) {
      g.remove_edge(a, b);
      ledger.record({e, FlipKind::kRemove, release});
    } else {
      g.add_edge(a, b);
      ledger.record({e, FlipKind::kAdd, release});
    }
  }
  return g;
}

}  // namespace dynaa
