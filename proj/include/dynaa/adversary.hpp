#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "dynaa/consistency.hpp"
#include "dynaa/graph.hpp"
#include "dynaa/random.hpp"
#include "dynaa/reident_result.hpp"

namespace dynaa {

struct AttackSchedule {
  // Releases during which the initial sybils are inserted, in order.
  std::vector<ReleaseIndex> creation_span{1, 2};
  ReleaseIndex first_attack = 2;
  std::size_t min_new_victims = 1;
  std::size_t max_new_victims = 5;
  // Replacements per interval are uniform on {0, ..., max(1, |S| / divisor)}.
  std::size_t replacement_divisor = 4;

  void validate() const;
};

// Edges the adversary added or removed in one phase. Every edge has at least
// one sybil endpoint.
struct GraphDelta {
  std::vector<VertexId> added_sybils;
  std::vector<VertexId> removed_sybils;
  std::vector<Edge> added_edges;
  std::vector<Edge> removed_edges;

  bool empty() const {
    return added_sybils.empty() && removed_sybils.empty() &&
           added_edges.empty() && removed_edges.empty();
  }
};

// What the adversary knows at one release; matching and refinement of that
// release work from this frozen copy.
struct AttackKnowledge {
  ReleaseIndex release = 0;
  std::vector<VertexId> sybils;  // sybil order
  // Sybil-sybil and sybil-victim edges: the subgraph weakly induced by the
  // sybils in the owner's graph.
  Graph sybil_subgraph;
  std::map<VertexId, VertexSet> fingerprints;

  VertexSet sybil_set() const { return {sybils.begin(), sybils.end()}; }
};

struct AdversaryState {
  explicit AdversaryState(std::uint64_t first_sybil_value = 1ULL << 40)
      : next_sybil_value(first_sybil_value) {}

  std::vector<VertexId> sybils;  // sybil order
  VertexSet victims;
  // The adversary's own edges. Fingerprints are read off it.
  Graph own_edges;
  std::map<VertexId, ReleaseIndex> sybil_inserted;
  std::map<VertexId, ReleaseIndex> first_targeted;
  std::map<ReleaseIndex, ReidentResult> reident_history;
  std::uint64_t next_sybil_value;

  // S ∩ N(y); empty for non-victims.
  VertexSet fingerprint(VertexId victim) const;
  std::map<VertexId, VertexSet> fingerprints() const;
  AttackKnowledge knowledge(ReleaseIndex release) const;

  // Drops victims missing from `legit` together with their edges.
  void drop_vanished_victims(const Graph& legit);

  // Throws std::logic_error naming the first broken invariant: sybil cap,
  // distinct non-empty fingerprints, or the sybil path.
  void check_invariants(std::size_t attacked_graph_size) const;
};

// floor(log2(n)), 0 for n < 2.
std::size_t sybil_cap(std::size_t vertex_count);

// Appends `count` sybils (path-extended, other inter-sybil pairs with
// probability 1/2), links existing victims to each new sybil with probability
// 1/2, then fingerprints `initial_victims`. `current` is the legitimate
// graph. Throws CapacityError when the victims cannot all get distinct
// non-empty fingerprints, and DomainError if `count` would exceed the sybil
// cap.
GraphDelta create_sybil_subgraph(AdversaryState& state, const Graph& current,
                                 std::size_t count,
                                 std::span<const VertexId> initial_victims,
                                 ReleaseIndex release, Rng& rng);

// Replaces a random handful of sybils (bridging the path, inheriting victim
// edges) and grows the sybil set up to the cap given by the previous
// release's size.
GraphDelta update_sybil_subgraph(AdversaryState& state,
                                 std::size_t last_release_size,
                                 ReleaseIndex release,
                                 const AttackSchedule& schedule, Rng& rng);

// Replaces the sybil at `position`; exposed for tests.
GraphDelta replace_sybil(AdversaryState& state, std::size_t position,
                         ReleaseIndex release, Rng& rng);

// Victims whose mapping distribution in the last re-identification attempt
// has maximal entropy (natural log). Throws PreconditionError when there is
// no attempt on record.
VertexSet select_uncertain_victims(const AdversaryState& state);

// Entropy of each victim's mapping distribution in `result`.
std::map<VertexId, double> victim_entropies(const ReidentResult& result,
                                            const VertexSet& victims);

// Flips one victim-sybil pair per target, keeping fingerprints non-empty and
// distinct. Targets without a legal flip are left unchanged.
GraphDelta perturb_fingerprints(AdversaryState& state,
                                const VertexSet& targets, Rng& rng);

// Draws r uniformly in [min_new, max_new], clamps it by the fingerprint
// capacity and the untargeted pool, and fingerprints that many fresh victims
// picked uniformly from `legit`.
GraphDelta target_new_victims(AdversaryState& state, const Graph& legit,
                              std::size_t min_new, std::size_t max_new,
                              ReleaseIndex release, Rng& rng);

}  // namespace dynaa
