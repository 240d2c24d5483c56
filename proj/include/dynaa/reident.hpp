#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dynaa/adversary.hpp"
#include "dynaa/consistency.hpp"
#include "dynaa/graph.hpp"
#include "dynaa/random.hpp"
#include "dynaa/reident_result.hpp"

namespace dynaa {

// theta_i = min(cap, base + scale * max(0, i - 2)^exponent).
struct ThetaSchedule {
  double base = 1.0;
  double scale = 1.0;
  double exponent = 0.7;
  double cap = 1500.0;

  double at(ReleaseIndex release) const;
  void validate() const;
};

// "base,scale,exponent,cap". Throws ConfigError.
ThetaSchedule parse_theta_schedule(std::string_view text);

// Either a fixed value or ceil(|S| / 2).
struct EtaSpec {
  bool half_sybils = false;
  std::size_t fixed = 1;

  std::size_t at(std::size_t num_sybils) const;
};

// "half" or a non-negative integer. Throws ConfigError.
EtaSpec parse_eta(std::string_view text);

struct RetrievalOptions {
  // Off: the first-use-as-sybil prune is skipped (ablation only).
  bool temporal = true;
  // Search nodes visited before giving up and reporting truncation.
  std::size_t node_budget = 1'000'000;
};

struct RetrievalOutcome {
  std::vector<CandidateSybilSet> candidates;
  bool truncated = false;
  std::size_t nodes_visited = 0;
};

struct MatchOptions {
  std::size_t eta = 1;
  // Off: the first-time-targeted gate is skipped.
  bool temporal = true;
  // Larger argmax sets are dropped and reported as overflow; such a
  // candidate would contribute at most 1/max_mappings.
  std::size_t max_mappings = 4096;
};

// |D| (position pairs whose adjacency differs between the two prefixes) plus
// the sum of |external degree| differences, where external degree counts
// neighbours outside the prefix. Throws DomainError on length mismatch or an
// empty prefix.
std::size_t structural_dissimilarity(std::span<const VertexId> x_prefix,
                                     const Graph& g_star,
                                     std::span<const VertexId> s_prefix,
                                     const Graph& g_plus);

// Every ordered |S|-tuple of distinct pseudonyms such that each prefix
// passes first-use-as-sybil consistency and has dissimilarity <= theta.
// Sorted lexicographically by pseudonym. On truncation the list is empty.
RetrievalOutcome retrieve_sybil_candidates(const Graph& g_star,
                                           const AttackKnowledge& knowledge,
                                           const TemporalIndex& index,
                                           double theta,
                                           const RetrievalOptions& options = {});

// sim_c counts positions k with x_k in fu_star and s_k in fj. The result is
// sim_c when u may be y_j (first-time-targeted) and sim_c >= eta, else 0.
std::size_t fingerprint_similarity(const VertexSet& fu_star,
                                   const VertexSet& fj,
                                   const CandidateSybilSet& x,
                                   std::span<const VertexId> sybils,
                                   VertexId u, VertexId yj,
                                   const TemporalIndex& index,
                                   const MatchOptions& options);

// All injective victim -> pseudonym assignments in which every victim has
// positive similarity and the total similarity is maximal. Images range over
// N(X) \ X. Empty when no complete assignment exists, or when the set
// exceeds options.max_mappings; `overflow` tells the two apart.
std::vector<VictimMapping> match_fingerprints(const Graph& g_star,
                                              const CandidateSybilSet& x,
                                              const AttackKnowledge& knowledge,
                                              const TemporalIndex& index,
                                              const MatchOptions& options,
                                              bool* overflow = nullptr);

// Retrieval followed by matching of every candidate.
ReidentResult reidentify(const Graph& g_star, const AttackKnowledge& knowledge,
                         const TemporalIndex& index, double theta,
                         const RetrievalOptions& retrieval,
                         const MatchOptions& matching);

// Uniform index into `candidates`; nullopt when empty (the attack fails).
std::optional<std::size_t> select_candidate(
    std::span<const CandidateSybilSet> candidates, Rng& rng);

// Drops candidates that break sybil-removal-count consistency against the
// later release `v_next` and rematches the survivors.
ReidentResult refine(const ReidentResult& result, const VertexSet& s_prev,
                     const VertexSet& s_next, const VertexSet& v_next,
                     const Graph& g_star_prev,
                     const AttackKnowledge& knowledge_prev,
                     const TemporalIndex& index, const MatchOptions& options);

// Mean over candidates of 1/|Y_X| when Y_X holds the true mapping (truth
// restricted to `victims`), 0 otherwise. 0 for an empty candidate list.
double success_probability(const ReidentResult& result,
                           const IsomorphismMap& truth,
                           const VertexSet& victims);

}  // namespace dynaa
