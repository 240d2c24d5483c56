#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "dynaa/graph.hpp"
#include "dynaa/random.hpp"

namespace dynaa {

// One published instant of a dynamic graph. `timestamp` is the cut time for
// ingested datasets and the 1-based snapshot index for synthetic ones.
struct Snapshot {
  Graph graph;
  std::int64_t timestamp = 0;
};

// Snapshot indices are 1-based throughout: snapshot(1) is the first release.
struct DynamicGraph {
  std::vector<Snapshot> snapshots;
  // Vertex -> index of the first snapshot containing it.
  std::map<VertexId, std::size_t> first_snapshot;

  std::size_t size() const { return snapshots.size(); }
  const Graph& snapshot(std::size_t index) const {
    return snapshots.at(index - 1).graph;
  }
};

// Barabási–Albert growth seeded with the complete graph on n0 vertices.
struct SynthesizerConfig {
  std::size_t n0 = 30;
  std::size_t me = 5;
  std::size_t nv = 200;
  double r_delta = 0.05;
  std::size_t num_snapshots = 10;
  std::uint64_t seed = 1;

  // Throws ConfigError.
  void validate() const;
};

// Snapshot 1 is taken when the graph reaches nv vertices; snapshot i > 1 is
// the first state where the edges added since snapshot i-1 reach
// r_delta * |E(i-1)|.
DynamicGraph generate(const SynthesizerConfig& config);

// Draws `me` distinct vertices, each draw degree-proportional among the
// vertices not yet chosen (uniform if none of those has positive degree).
// Throws DomainError if me exceeds the vertex count.
VertexSet sample_attachment_targets(const Graph& current, std::size_t me,
                                    Rng& rng);

}  // namespace dynaa
