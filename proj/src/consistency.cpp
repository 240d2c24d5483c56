#include "dynaa/consistency.hpp"

#include <algorithm>
#include <sstream>

#include "dynaa/errors.hpp"

namespace dynaa {
namespace {

ReleaseIndex lookup(const std::map<VertexId, ReleaseIndex>& table, VertexId v,
                    const char* what) {
  auto it = table.find(v);
  if (it == table.end()) {
    std::ostringstream os;
    os << "no " << what << " entry for " << v;
    throw DomainError(os.str());
  }
  return it->second;
}

}  // namespace

void TemporalIndex::register_release(ReleaseIndex release,
                                     const Graph& published) {
  for (const auto& [v, _] : published.adjacency()) {
    alpha_star_.try_emplace(v, release);
  }
  latest_ = std::max(latest_, release);
}

void TemporalIndex::record_sybil(VertexId sybil, ReleaseIndex inserted) {
  sybil_alpha_plus_.try_emplace(sybil, inserted);
}

void TemporalIndex::record_targeted(VertexId victim, ReleaseIndex release) {
  auto [it, fresh] = beta_plus_.try_emplace(victim, release);
  if (!fresh) it->second = std::min(it->second, release);
}

ReleaseIndex TemporalIndex::alpha_star(VertexId pseudonym) const {
  return lookup(alpha_star_, pseudonym, "alpha*");
}

ReleaseIndex TemporalIndex::sybil_alpha_plus(VertexId sybil) const {
  return lookup(sybil_alpha_plus_, sybil, "sybil alpha+");
}

ReleaseIndex TemporalIndex::beta_plus(VertexId victim) const {
  return lookup(beta_plus_, victim, "beta+");
}

std::optional<ReleaseIndex> TemporalIndex::find_alpha_star(
    VertexId pseudonym) const {
  auto it = alpha_star_.find(pseudonym);
  if (it == alpha_star_.end()) return std::nullopt;
  return it->second;
}

void OmniscientIndex::register_release(ReleaseIndex release,
                                       const Graph& owner_graph) {
  for (const auto& [v, _] : owner_graph.adjacency()) {
    alpha_plus_.try_emplace(v, release);
  }
}

ReleaseIndex OmniscientIndex::alpha_plus(VertexId v) const {
  return lookup(alpha_plus_, v, "alpha+");
}

bool first_use_as_sybil_consistent(std::span<const VertexId> candidates,
                                   std::span<const VertexId> sybils,
                                   const TemporalIndex& index) {
  if (candidates.size() != sybils.size()) {
    throw DomainError("candidate and sybil lists differ in length");
  }
  for (std::size_t k = 0; k < sybils.size(); ++k) {
    if (index.alpha_star(candidates[k]) != index.sybil_alpha_plus(sybils[k])) {
      return false;
    }
  }
  return true;
}

bool first_time_targeted_consistent(VertexId pseudonym, VertexId victim,
                                    const TemporalIndex& index) {
  return index.alpha_star(pseudonym) <= index.beta_plus(victim);
}

bool sybil_removal_count_consistent(const VertexSet& candidate,
                                    const VertexSet& sybils_before,
                                    const VertexSet& sybils_after,
                                    const VertexSet& next_release) {
  const auto vanished = std::count_if(
      candidate.begin(), candidate.end(),
      [&](VertexId x) { return next_release.count(x) == 0; });
  const auto removed = std::count_if(
      sybils_before.begin(), sybils_before.end(),
      [&](VertexId s) { return sybils_after.count(s) == 0; });
  return vanished == removed;
}

}  // namespace dynaa
