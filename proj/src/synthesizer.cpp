#include "dynaa/synthesizer.hpp"

#include <cmath>
#include <string>
#include <unordered_set>

#include "dynaa/errors.hpp"

namespace dynaa {
namespace {

// `endpoints` lists every vertex once per unit of degree. Repeated draws with
// rejection of already-chosen vertices give the sequential
// without-replacement distribution.
std::vector<VertexId> draw_distinct(const std::vector<VertexId>& endpoints,
                                    const std::vector<VertexId>& all_vertices,
                                    const Graph& g, std::size_t count,
                                    Rng& rng) {
  std::vector<VertexId> chosen;
  std::unordered_set<VertexId> taken;
  std::size_t remaining_mass = endpoints.size();
  while (chosen.size() < count) {
    VertexId pick;
    if (remaining_mass > 0) {
      pick = endpoints[rng.below(endpoints.size())];
      if (taken.count(pick) != 0) continue;
      remaining_mass -= g.degree(pick);
    } else {
      std::vector<VertexId> pool;
      for (VertexId v : all_vertices) {
        if (taken.count(v) == 0) pool.push_back(v);
      }
      pick = pool[rng.below(pool.size())];
    }
    taken.insert(pick);
    chosen.push_back(pick);
  }
  return chosen;
}

}  // namespace

void SynthesizerConfig::validate() const {
  if (n0 < 1) throw ConfigError("n0 must be positive");
  if (me < 1) throw ConfigError("Me must be positive");
  if (me > n0) throw ConfigError("Me must not exceed n0");
  if (nv < n0) throw ConfigError("nv must be at least n0");
  if (!(r_delta > 0.0) || !std::isfinite(r_delta)) {
    throw ConfigError("r_delta must be positive");
  }
  if (num_snapshots < 2) throw ConfigError("need at least two snapshots");
}

VertexSet sample_attachment_targets(const Graph& current, std::size_t me,
                                    Rng& rng) {
  if (me > current.num_vertices()) {
    throw DomainError("cannot draw " + std::to_string(me) +
                      " targets from " +
                      std::to_string(current.num_vertices()) + " vertices");
  }
  std::vector<VertexId> all = current.vertices();
  if (me == all.size()) return VertexSet(all.begin(), all.end());
  std::vector<VertexId> endpoints;
  endpoints.reserve(2 * current.num_edges());
  for (const auto& [v, nbrs] : current.adjacency()) {
    endpoints.insert(endpoints.end(), nbrs.size(), v);
  }
  auto picks = draw_distinct(endpoints, all, current, me, rng);
  return VertexSet(picks.begin(), picks.end());
}

DynamicGraph generate(const SynthesizerConfig& config) {
  config.validate();
  Rng rng(config.seed);
  DynamicGraph out;
  Graph g;
  std::vector<VertexId> all;
  std::vector<VertexId> endpoints;
  std::uint64_t next_id = 0;

  for (std::size_t i = 0; i < config.n0; ++i) {
    const VertexId v = real_id(next_id++);
    g.add_vertex(v);
    for (VertexId w : all) {
      g.add_edge(v, w);
      endpoints.push_back(v);
      endpoints.push_back(w);
    }
    all.push_back(v);
  }

  std::size_t edges_at_last = 0;
  auto take_snapshot = [&] {
    const std::size_t index = out.snapshots.size() + 1;
    for (std::size_t k = out.first_snapshot.size(); k < all.size(); ++k) {
      out.first_snapshot.emplace(all[k], index);
    }
    out.snapshots.push_back({g, static_cast<std::int64_t>(index)});
    edges_at_last = g.num_edges();
  };

  auto grow_one = [&] {
    const VertexId v = real_id(next_id++);
    auto targets = draw_distinct(endpoints, all, g, config.me, rng);
    g.add_vertex(v);
    for (VertexId w : targets) {
      g.add_edge(v, w);
      endpoints.push_back(w);
      endpoints.push_back(v);
    }
    all.push_back(v);
  };

  while (all.size() < config.nv) grow_one();
  take_snapshot();

  while (out.snapshots.size() < config.num_snapshots) {
    grow_one();
    const double added = static_cast<double>(g.num_edges() - edges_at_last);
    if (added >= config.r_delta * static_cast<double>(edges_at_last)) {
      take_snapshot();
    }
  }
  return out;
}

}  // namespace dynaa
