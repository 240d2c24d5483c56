#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "dynaa/consistency.hpp"
#include "dynaa/graph.hpp"

namespace dynaa {

// Pseudonyms aligned with the sybil order: members[k] plays sybil k.
struct CandidateSybilSet {
  std::vector<VertexId> members;

  VertexSet as_set() const { return {members.begin(), members.end()}; }
  friend auto operator<=>(const CandidateSybilSet&,
                          const CandidateSybilSet&) = default;
};

// Victim (real id) -> pseudonym.
using VictimMapping = std::map<VertexId, VertexId>;

struct ReidentResult {
  ReleaseIndex release = 0;
  std::vector<CandidateSybilSet> candidates;
  // mappings[c] is the set of equally best mappings for candidates[c].
  std::vector<std::vector<VictimMapping>> mappings;
  // Set when retrieval stopped at its frontier budget; candidates is then
  // empty and the attempt counts as failed.
  bool truncated = false;
  // Candidates whose argmax set was too large to keep (their list is empty).
  std::size_t overflowed = 0;
  // Filled in by the evaluation side, which alone knows the truth.
  double success_probability = 0.0;
};

}  // namespace dynaa
