#pragma once

// Exhaustive reference implementations. They share no code with the search
// in src/reident.cpp beyond the graph and index types.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "dynaa/adversary.hpp"
#include "dynaa/consistency.hpp"
#include "dynaa/defender.hpp"
#include "dynaa/graph.hpp"
#include "dynaa/random.hpp"
#include "dynaa/reident_result.hpp"

namespace dynaa::oracle {

// Edge-presence disagreements between the two prefixes plus external degree
// differences, computed from explicit neighbour sets.
inline std::size_t delta(const std::vector<VertexId>& x, const Graph& g_star,
                         const std::vector<VertexId>& s, const Graph& g_plus) {
  const VertexSet xs(x.begin(), x.end()), ss(s.begin(), s.end());
  std::size_t d = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      const bool in_star = g_star.neighbors(x[j]).count(x[k]) != 0;
      const bool in_plus = g_plus.neighbors(s[j]).count(s[k]) != 0;
      if (in_star != in_plus) ++d;
    }
  }
  for (std::size_t k = 0; k < x.size(); ++k) {
    long ext_star = 0, ext_plus = 0;
    for (VertexId w : g_star.neighbors(x[k])) ext_star += xs.count(w) == 0;
    for (VertexId w : g_plus.neighbors(s[k])) ext_plus += ss.count(w) == 0;
    d += static_cast<std::size_t>(std::labs(ext_star - ext_plus));
  }
  return d;
}

// All ordered |S|-tuples of distinct released vertices whose every prefix
// matches the sybil arrival releases and stays within the threshold.
inline std::vector<CandidateSybilSet> retrieve(const Graph& g_star,
                                               const AttackKnowledge& k,
                                               const TemporalIndex& idx,
                                               double theta, bool temporal) {
  const std::vector<VertexId> all = g_star.vertices();
  const std::size_t n = k.sybils.size();
  std::vector<CandidateSybilSet> out;
  if (n == 0) return out;
  std::vector<std::size_t> pick(n, 0);
  // Odometer over all n-tuples of indices.
  while (true) {
    std::set<std::size_t> distinct(pick.begin(), pick.end());
    if (distinct.size() == n) {
      std::vector<VertexId> x;
      for (std::size_t i : pick) x.push_back(all[i]);
      bool ok = true;
      for (std::size_t len = 1; len <= n && ok; ++len) {
        const std::vector<VertexId> xp(x.begin(), x.begin() + len);
        const std::vector<VertexId> sp(k.sybils.begin(), k.sybils.begin() + len);
        if (temporal &&
            idx.alpha_star(xp.back()) != idx.sybil_alpha_plus(sp.back())) {
          ok = false;
        }
        if (ok && static_cast<double>(delta(xp, g_star, sp, k.sybil_subgraph)) > theta) {
          ok = false;
        }
      }
      if (ok) out.push_back({x});
    }
    std::size_t pos = 0;
    while (pos < n && ++pick[pos] == all.size()) pick[pos++] = 0;
    if (pos == n) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::size_t similarity(const Graph& g_star, const CandidateSybilSet& x,
                              const AttackKnowledge& k, const TemporalIndex& idx,
                              VertexId u, VertexId y, std::size_t eta,
                              bool temporal) {
  if (temporal && idx.alpha_star(u) > idx.beta_plus(y)) return 0;
  const VertexSet& fj = k.fingerprints.at(y);
  std::size_t sim = 0;
  for (std::size_t i = 0; i < x.members.size(); ++i) {
    if (g_star.has_edge(u, x.members[i]) && fj.count(k.sybils[i]) != 0) ++sim;
  }
  return sim >= eta ? sim : 0;
}

// Every injective victim -> N(X) \ X assignment with positive similarity for
// each victim; the maximal-total ones are returned.
inline std::vector<VictimMapping> match(const Graph& g_star,
                                        const CandidateSybilSet& x,
                                        const AttackKnowledge& k,
                                        const TemporalIndex& idx,
                                        std::size_t eta, bool temporal) {
  const VertexSet xs = x.as_set();
  VertexSet pool_set;
  for (VertexId v : x.members) {
    for (VertexId w : g_star.neighbors(v)) {
      if (xs.count(w) == 0) pool_set.insert(w);
    }
  }
  const std::vector<VertexId> pool(pool_set.begin(), pool_set.end());
  std::vector<VertexId> victims;
  for (const auto& [y, _] : k.fingerprints) victims.push_back(y);

  std::vector<VictimMapping> best;
  std::size_t best_total = 0;
  VictimMapping current;
  std::set<VertexId> used;
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i,
                                                         std::size_t total) {
    if (i == victims.size()) {
      if (total > best_total || best.empty()) {
        if (total > best_total) best.clear();
        best_total = total;
      }
      if (total == best_total) best.push_back(current);
      return;
    }
    for (VertexId u : pool) {
      if (used.count(u) != 0) continue;
      const std::size_t s = similarity(g_star, x, k, idx, u, victims[i], eta, temporal);
      if (s == 0) continue;
      used.insert(u);
      current[victims[i]] = u;
      go(i + 1, total + s);
      current.erase(victims[i]);
      used.erase(u);
    }
  };
  if (!victims.empty()) go(0, 0);
  std::sort(best.begin(), best.end());
  return best;
}

// A small attack instance built with the real adversary and defender steps.
struct Instance {
  Graph g_plus;
  Graph g_star;
  AttackKnowledge knowledge;
  TemporalIndex index;
  IsomorphismMap phi;
  double theta = 0;
  std::size_t eta = 1;
  bool temporal = true;
};

// At most `max_vertices` released vertices and `max_sybils` sybils. With
// `noise`, a few random pairs of the release are flipped.
inline Instance random_instance(Rng& rng, std::size_t max_vertices,
                                std::size_t max_sybils, bool noise) {
  Instance in;
  const std::size_t sybils = 1 + rng.below(max_sybils);
  const std::size_t legit_n = std::max<std::size_t>(
      2, max_vertices - sybils - rng.below(3));
  Graph legit;
  for (std::size_t v = 0; v < legit_n; ++v) legit.add_vertex(real_id(v));
  const double q = 0.15 + 0.35 * rng.unit();
  for (std::size_t a = 0; a < legit_n; ++a) {
    for (std::size_t b = a + 1; b < legit_n; ++b) {
      if (rng.bernoulli(q)) legit.add_edge(real_id(a), real_id(b));
    }
  }

  AdversaryState st(1000);
  // Sybils arrive over releases 1 and 2, victims are targeted up to 3.
  const std::size_t early = 1 + rng.below(sybils);
  const std::size_t cap = (std::size_t{1} << early) - 1;
  const std::size_t nv = 1 + rng.below(std::min(std::max<std::size_t>(1, cap - 1), legit_n));
  std::vector<VertexId> order = legit.vertices();
  rng.shuffle(std::span<VertexId>(order));
  const std::vector<VertexId> victims(order.begin(), order.begin() + nv);
  create_sybil_subgraph(st, legit, early, victims, 1, rng);
  if (early < sybils) create_sybil_subgraph(st, legit, sybils - early, {}, 2, rng);

  in.g_plus = legit;
  for (const auto& [v, _] : st.own_edges.adjacency()) in.g_plus.add_vertex(v);
  for (const Edge& e : st.own_edges.edges()) in.g_plus.add_edge(e.first, e.second);

  PseudonymLedger ledger(rng.next());
  auto [g_pseudo, phi] = pseudonymize(in.g_plus, ledger);
  in.phi = phi;
  in.g_star = g_pseudo;
  if (noise) {
    const std::vector<VertexId> vs = in.g_star.vertices();
    const std::size_t flips = rng.below(4);
    for (std::size_t f = 0; f < flips; ++f) {
      const VertexId a = vs[rng.below(vs.size())], b = vs[rng.below(vs.size())];
      if (a == b) continue;
      if (!in.g_star.remove_edge(a, b)) in.g_star.add_edge(a, b);
    }
  }

  // alpha*: sybils at their insertion release, everyone else in 1..3.
  std::map<VertexId, ReleaseIndex> first;
  for (const auto& [real, pseudo] : phi.forward()) {
    auto it = st.sybil_inserted.find(real);
    first[pseudo] = it != st.sybil_inserted.end() ? it->second : 1 + rng.below(3);
  }
  for (ReleaseIndex t = 1; t <= 3; ++t) {
    Graph g;
    for (const auto& [pseudo, f] : first) {
      if (f <= t) g.add_vertex(pseudo);
    }
    in.index.register_release(t, g);
  }
  // A victim is targeted no earlier than it was first published.
  for (VertexId y : victims) {
    const ReleaseIndex a = first.at(phi.at(y));
    st.first_targeted[y] = a + rng.below(4 - a);
  }
  for (const auto& [s, t] : st.sybil_inserted) in.index.record_sybil(s, t);
  for (const auto& [y, t] : st.first_targeted) in.index.record_targeted(y, t);

  in.knowledge = st.knowledge(3);
  const double thetas[] = {0, 1, 2, 3, 5, 8, 1e6};
  in.theta = thetas[rng.below(7)];
  in.eta = 1 + rng.below(2);
  in.temporal = rng.below(4) != 0;
  return in;
}

}  // namespace dynaa::oracle
