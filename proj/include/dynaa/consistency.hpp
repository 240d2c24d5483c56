#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>

#include "dynaa/graph.hpp"

namespace dynaa {

// 1-based release (snapshot) index.
using ReleaseIndex = std::size_t;

// What the adversary can legitimately know about timing: the first release
// of every published pseudonym (alpha*), the insertion release of her own
// sybils (alpha+ restricted to sybils), and when each victim was first
// targeted (beta+). Victims' alpha+ is deliberately absent.
class TemporalIndex {
 public:
  // Records alpha* for pseudonyms seen for the first time. Existing entries
  // never change.
  void register_release(ReleaseIndex release, const Graph& published);
  void record_sybil(VertexId sybil, ReleaseIndex inserted);
  // Keeps the earliest release if called again for the same victim.
  void record_targeted(VertexId victim, ReleaseIndex release);

  // Each throws DomainError for an unknown id.
  ReleaseIndex alpha_star(VertexId pseudonym) const;
  ReleaseIndex sybil_alpha_plus(VertexId sybil) const;
  ReleaseIndex beta_plus(VertexId victim) const;

  std::optional<ReleaseIndex> find_alpha_star(VertexId pseudonym) const;
  ReleaseIndex latest_release() const { return latest_; }
  const std::map<VertexId, ReleaseIndex>& alpha_star_table() const {
    return alpha_star_;
  }

 private:
  std::map<VertexId, ReleaseIndex> alpha_star_;
  std::map<VertexId, ReleaseIndex> sybil_alpha_plus_;
  std::map<VertexId, ReleaseIndex> beta_plus_;
  ReleaseIndex latest_ = 0;
};

// alpha+ for every real vertex. Only the evaluation harness holds one.
class OmniscientIndex {
 public:
  void register_release(ReleaseIndex release, const Graph& owner_graph);
  ReleaseIndex alpha_plus(VertexId v) const;

 private:
  std::map<VertexId, ReleaseIndex> alpha_plus_;
};

// Positional mapping s_k -> x_k: true iff alpha*(x_k) == alpha+(s_k) for
// every k. Throws DomainError on length mismatch or unknown ids.
bool first_use_as_sybil_consistent(std::span<const VertexId> candidates,
                                   std::span<const VertexId> sybils,
                                   const TemporalIndex& index);

// alpha*(pseudonym) <= beta+(victim).
bool first_time_targeted_consistent(VertexId pseudonym, VertexId victim,
                                    const TemporalIndex& index);

// |candidate \ next_release| == |sybils_before \ sybils_after|.
bool sybil_removal_count_consistent(const VertexSet& candidate,
                                    const VertexSet& sybils_before,
                                    const VertexSet& sybils_after,
                                    const VertexSet& next_release);

}  // namespace dynaa
