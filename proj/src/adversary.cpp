#include "dynaa/adversary.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "dynaa/errors.hpp"

namespace dynaa {
namespace {

constexpr int kFingerprintAttempts = 64;

std::size_t fingerprint_capacity(std::size_t num_sybils) {
  if (num_sybils >= 63) return SIZE_MAX;
  return (std::size_t{1} << num_sybils) - 1;
}

void link(AdversaryState& state, GraphDelta& delta, VertexId a, VertexId b) {
  if (state.own_edges.add_edge(a, b)) delta.added_edges.emplace_back(a, b);
}

void unlink(AdversaryState& state, GraphDelta& delta, VertexId a, VertexId b) {
  if (state.own_edges.remove_edge(a, b)) delta.removed_edges.emplace_back(a, b);
}

VertexId new_sybil(AdversaryState& state, ReleaseIndex release,
                   GraphDelta& delta) {
  const VertexId s = real_id(state.next_sybil_value++);
  state.own_edges.add_vertex(s);
  state.sybil_inserted.emplace(s, release);
  delta.added_sybils.push_back(s);
  return s;
}

// Appends sybils to the order, extends the path and draws the remaining
// inter-sybil pairs and the victim links involving them.
void append_sybils(AdversaryState& state, std::size_t count,
                   ReleaseIndex release, Rng& rng, GraphDelta& delta) {
  const std::size_t old = state.sybils.size();
  for (std::size_t i = 0; i < count; ++i) {
    const VertexId s = new_sybil(state, release, delta);
    if (!state.sybils.empty()) link(state, delta, state.sybils.back(), s);
    state.sybils.push_back(s);
  }
  for (std::size_t k = old; k < state.sybils.size(); ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      const VertexId a = state.sybils[j];
      const VertexId b = state.sybils[k];
      if (state.own_edges.has_edge(a, b)) continue;
      if (rng.coin()) link(state, delta, a, b);
    }
  }
  for (VertexId y : state.victims) {
    for (std::size_t k = old; k < state.sybils.size(); ++k) {
      if (rng.coin()) link(state, delta, y, state.sybils[k]);
    }
  }
}

// Draws a fingerprint (each sybil with probability 1/2) that is non-empty
// and unused. Returns an empty set after kFingerprintAttempts failures.
VertexSet draw_fingerprint(const AdversaryState& state,
                           const std::set<VertexSet>& used, Rng& rng) {
  for (int attempt = 0; attempt < kFingerprintAttempts; ++attempt) {
    VertexSet fp;
    for (VertexId s : state.sybils) {
      if (rng.coin()) fp.insert(s);
    }
    if (!fp.empty() && used.count(fp) == 0) return fp;
  }
  return {};
}

std::set<VertexSet> used_fingerprints(const AdversaryState& state) {
  std::set<VertexSet> used;
  for (VertexId y : state.victims) used.insert(state.fingerprint(y));
  return used;
}

void enroll_victim(AdversaryState& state, VertexId y, const VertexSet& fp,
                   ReleaseIndex release, GraphDelta& delta) {
  state.victims.insert(y);
  state.first_targeted.try_emplace(y, release);
  for (VertexId s : fp) link(state, delta, y, s);
}

}  // namespace

void AttackSchedule::validate() const {
  if (creation_span.empty()) throw ConfigError("creation span is empty");
  for (std::size_t i = 1; i < creation_span.size(); ++i) {
    if (creation_span[i] <= creation_span[i - 1]) {
      throw ConfigError("creation span must be increasing");
    }
  }
  if (creation_span.front() < 1) throw ConfigError("releases are 1-based");
  if (first_attack < creation_span.back()) {
    throw ConfigError("first attack precedes the end of sybil creation");
  }
  if (min_new_victims > max_new_victims) {
    throw ConfigError("victim bounds are inverted");
  }
  if (replacement_divisor == 0) {
    throw ConfigError("replacement divisor must be positive");
  }
}

std::size_t sybil_cap(std::size_t vertex_count) {
  if (vertex_count < 2) return 0;
  return static_cast<std::size_t>(std::bit_width(vertex_count) - 1);
}

VertexSet AdversaryState::fingerprint(VertexId victim) const {
  if (victims.count(victim) == 0 || !own_edges.has_vertex(victim)) return {};
  return own_edges.neighbors(victim);
}

std::map<VertexId, VertexSet> AdversaryState::fingerprints() const {
  std::map<VertexId, VertexSet> out;
  for (VertexId y : victims) out.emplace(y, fingerprint(y));
  return out;
}

AttackKnowledge AdversaryState::knowledge(ReleaseIndex release) const {
  return {release, sybils, own_edges, fingerprints()};
}

void AdversaryState::drop_vanished_victims(const Graph& legit) {
  for (auto it = victims.begin(); it != victims.end();) {
    if (!legit.has_vertex(*it)) {
      own_edges.remove_vertex(*it);
      it = victims.erase(it);
    } else {
      ++it;
    }
  }
}

void AdversaryState::check_invariants(std::size_t attacked_graph_size) const {
  if (sybils.size() > sybil_cap(attacked_graph_size)) {
    throw std::logic_error("sybil count " + std::to_string(sybils.size()) +
                           " exceeds cap");
  }
  std::set<VertexSet> seen;
  for (VertexId y : victims) {
    VertexSet fp = fingerprint(y);
    if (fp.empty()) throw std::logic_error("empty fingerprint");
    if (!seen.insert(std::move(fp)).second) {
      throw std::logic_error("duplicate fingerprint");
    }
  }
  for (std::size_t k = 1; k < sybils.size(); ++k) {
    if (!own_edges.has_edge(sybils[k - 1], sybils[k])) {
      throw std::logic_error("sybil path broken at position " +
                             std::to_string(k));
    }
  }
}

GraphDelta create_sybil_subgraph(AdversaryState& state, const Graph& current,
                                 std::size_t count,
                                 std::span<const VertexId> initial_victims,
                                 ReleaseIndex release, Rng& rng) {
  const std::size_t owner_size =
      current.num_vertices() + state.sybils.size() + count;
  if (state.sybils.size() + count > sybil_cap(owner_size)) {
    throw DomainError("requested sybils exceed floor(log2 |V|)");
  }
  const std::size_t wanted = state.victims.size() + initial_victims.size();
  if (wanted > fingerprint_capacity(state.sybils.size() + count)) {
    throw CapacityError(std::to_string(wanted) +
                        " victims need more sybils than " +
                        std::to_string(state.sybils.size() + count));
  }
  GraphDelta delta;
  append_sybils(state, count, release, rng, delta);
  auto used = used_fingerprints(state);
  for (VertexId y : initial_victims) {
    if (state.victims.count(y) != 0) continue;
    if (!current.has_vertex(y)) throw DomainError("victim not in graph");
    VertexSet fp = draw_fingerprint(state, used, rng);
    if (fp.empty()) {
      throw CapacityError("could not draw a distinct fingerprint");
    }
    used.insert(fp);
    enroll_victim(state, y, fp, release, delta);
  }
  return delta;
}

GraphDelta replace_sybil(AdversaryState& state, std::size_t position,
                         ReleaseIndex release, Rng& rng) {
  if (position >= state.sybils.size()) {
    throw DomainError("sybil position out of range");
  }
  GraphDelta delta;
  const VertexId old = state.sybils[position];
  std::vector<VertexId> inherited;
  for (VertexId w : state.own_edges.neighbors(old)) {
    if (state.victims.count(w) != 0) inherited.push_back(w);
  }
  for (VertexId w : VertexSet(state.own_edges.neighbors(old))) {
    delta.removed_edges.emplace_back(old, w);
  }
  state.own_edges.remove_vertex(old);
  delta.removed_sybils.push_back(old);

  const VertexId s = new_sybil(state, release, delta);
  state.sybils[position] = s;
  if (position > 0) link(state, delta, state.sybils[position - 1], s);
  if (position + 1 < state.sybils.size()) {
    link(state, delta, s, state.sybils[position + 1]);
  }
  for (std::size_t k = 0; k < state.sybils.size(); ++k) {
    if (k == position || state.own_edges.has_edge(s, state.sybils[k])) continue;
    if (rng.coin()) link(state, delta, s, state.sybils[k]);
  }
  for (VertexId y : inherited) link(state, delta, s, y);
  return delta;
}

GraphDelta update_sybil_subgraph(AdversaryState& state,
                                 std::size_t last_release_size,
                                 ReleaseIndex release,
                                 const AttackSchedule& schedule, Rng& rng) {
  GraphDelta delta;
  auto merge = [&delta](GraphDelta&& d) {
    auto append = [](auto& to, auto& from) {
      to.insert(to.end(), from.begin(), from.end());
    };
    append(delta.added_sybils, d.added_sybils);
    append(delta.removed_sybils, d.removed_sybils);
    append(delta.added_edges, d.added_edges);
    append(delta.removed_edges, d.removed_edges);
  };

  const std::size_t n = state.sybils.size();
  if (n > 0) {
    const std::size_t most =
        std::min(n, std::max<std::size_t>(1, n / schedule.replacement_divisor));
    const auto replacements = static_cast<std::size_t>(rng.below(most + 1));
    std::vector<std::size_t> positions(n);
    for (std::size_t i = 0; i < n; ++i) positions[i] = i;
    for (std::size_t i = 0; i < replacements; ++i) {
      std::swap(positions[i], positions[i + rng.below(n - i)]);
    }
    std::sort(positions.begin(), positions.begin() + replacements);
    for (std::size_t i = 0; i < replacements; ++i) {
      merge(replace_sybil(state, positions[i], release, rng));
    }
  }

  const std::size_t cap = sybil_cap(last_release_size);
  if (cap > state.sybils.size()) {
    append_sybils(state, cap - state.sybils.size(), release, rng, delta);
  }
  return delta;
}

std::map<VertexId, double> victim_entropies(const ReidentResult& result,
                                            const VertexSet& victims) {
  std::map<VertexId, std::map<VertexId, double>> mass;
  const double per_candidate =
      result.candidates.empty() ? 0.0 : 1.0 / result.candidates.size();
  for (const auto& options : result.mappings) {
    if (options.empty()) continue;
    const double weight = per_candidate / static_cast<double>(options.size());
    for (const VictimMapping& phi : options) {
      for (const auto& [y, v] : phi) mass[y][v] += weight;
    }
  }
  std::map<VertexId, double> out;
  for (VertexId y : victims) {
    double h = 0.0;
    if (auto it = mass.find(y); it != mass.end()) {
      for (const auto& [_, p] : it->second) {
        if (p > 0) h -= p * std::log(p);
      }
    }
    out.emplace(y, h);
  }
  return out;
}

VertexSet select_uncertain_victims(const AdversaryState& state) {
  if (state.reident_history.empty()) {
    throw PreconditionError("no re-identification attempt on record");
  }
  const ReidentResult& last = state.reident_history.rbegin()->second;
  const auto entropy = victim_entropies(last, state.victims);
  double best = 0.0;
  for (const auto& [_, h] : entropy) best = std::max(best, h);
  VertexSet out;
  for (const auto& [y, h] : entropy) {
    if (h >= best - 1e-12 * std::max(1.0, best)) out.insert(y);
  }
  return out;
}

GraphDelta perturb_fingerprints(AdversaryState& state,
                                const VertexSet& targets, Rng& rng) {
  GraphDelta delta;
  auto used = used_fingerprints(state);
  for (VertexId y : targets) {
    if (state.victims.count(y) == 0) {
      throw DomainError("perturbation target is not a victim");
    }
    const VertexSet current = state.fingerprint(y);
    std::vector<VertexId> order = state.sybils;
    rng.shuffle(std::span<VertexId>(order));
    for (VertexId s : order) {
      VertexSet next = current;
      if (!next.erase(s)) next.insert(s);
      if (next.empty() || used.count(next) != 0) continue;
      used.erase(current);
      used.insert(next);
      if (current.count(s) != 0) {
        unlink(state, delta, y, s);
      } else {
        link(state, delta, y, s);
      }
      break;
    }
  }
  return delta;
}

GraphDelta target_new_victims(AdversaryState& state, const Graph& legit,
                              std::size_t min_new, std::size_t max_new,
                              ReleaseIndex release, Rng& rng) {
  GraphDelta delta;
  if (min_new > max_new) throw ConfigError("victim bounds are inverted");
  auto r = static_cast<std::size_t>(rng.between(
      static_cast<std::int64_t>(min_new), static_cast<std::int64_t>(max_new)));
  const std::size_t capacity = fingerprint_capacity(state.sybils.size());
  const std::size_t have = state.victims.size();
  r = std::min(r, capacity > have ? capacity - have : 0);
  r = std::min(r, legit.num_vertices() > have ? legit.num_vertices() - have : 0);

  std::vector<VertexId> pool;
  for (const auto& [v, _] : legit.adjacency()) {
    if (state.first_targeted.count(v) == 0 && state.sybil_inserted.count(v) == 0) {
      pool.push_back(v);
    }
  }
  r = std::min(r, pool.size());
  auto used = used_fingerprints(state);
  for (std::size_t i = 0; i < r; ++i) {
    std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
    VertexSet fp = draw_fingerprint(state, used, rng);
    if (fp.empty()) break;
    used.insert(fp);
    enroll_victim(state, pool[i], fp, release, delta);
  }
  return delta;
}

}  // namespace dynaa
