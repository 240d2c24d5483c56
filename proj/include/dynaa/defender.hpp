#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "dynaa/consistency.hpp"
#include "dynaa/graph.hpp"
#include "dynaa/random.hpp"

namespace dynaa {

// Persistent real -> pseudonym assignment. Vertices new to a release get
// fresh pseudonyms in a seeded random order, so pseudonym values carry no
// information about real ids beyond the release they first appeared in.
class PseudonymLedger {
 public:
  explicit PseudonymLedger(std::uint64_t seed = 0) : rng_(seed) {}

  bool contains(VertexId real) const { return map_.contains(real); }
  VertexId at(VertexId real) const { return map_.at(real); }
  const IsomorphismMap& map() const { return map_; }

  // Assigns pseudonyms to the vertices of `g` that have none yet.
  void assign(const Graph& g);

 private:
  IsomorphismMap map_;
  Rng rng_;
  std::uint64_t next_ = 1;
};

// Relabels `g_plus` through the ledger, extending it first. The returned map
// is the ledger restricted to the vertices of `g_plus`.
std::pair<Graph, IsomorphismMap> pseudonymize(const Graph& g_plus,
                                              PseudonymLedger& ledger);

enum class FlipKind : std::uint8_t { kAdd, kRemove };

struct EdgeFlip {
  Edge pair;
  FlipKind kind;
  ReleaseIndex release;

  friend bool operator==(const EdgeFlip&, const EdgeFlip&) = default;
};

class NoiseLedger {
 public:
  const std::vector<EdgeFlip>& flips() const { return flips_; }
  void record(const EdgeFlip& f) { flips_.push_back(f); }
  // Forgets flips touching a vertex absent from `g`. Returns how many went.
  std::size_t purge(const Graph& g);

  // One line per flip: "ADD u v @i" or "DEL u v @i".
  void write(std::ostream& out) const;

 private:
  std::vector<EdgeFlip> flips_;
};

// Purges the ledger against `g_pseudo` and replays the rest in order: an add
// forces the pair present, a remove forces it absent. Idempotent.
Graph replay_noise(const Graph& g_pseudo, NoiseLedger& ledger);

// round-half-up(omega * edges).
std::size_t fresh_flip_count(double omega, std::size_t edges);

// Replays past noise, then flips fresh_flip_count(omega, |E|) distinct
// uniformly chosen vertex pairs of the replayed graph and records them.
// Throws ConfigError unless 0 <= omega < 1.
Graph add_cumulative_noise(const Graph& g_pseudo, NoiseLedger& ledger,
                           double omega, ReleaseIndex release, Rng& rng);

}  // namespace dynaa
