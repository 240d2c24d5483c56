#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <vector>

namespace dynaa {

// Real identities belong to users (legitimate or sybil); pseudonyms are what
// the data owner publishes. The tag keeps the two spaces from being mixed.
enum class IdSpace : std::uint8_t { kReal = 0, kPseudonym = 1 };

struct VertexId {
  IdSpace space = IdSpace::kReal;
  std::uint64_t value = 0;

  friend constexpr auto operator<=>(const VertexId&, const VertexId&) = default;
};

constexpr VertexId real_id(std::uint64_t v) { return {IdSpace::kReal, v}; }
constexpr VertexId pseudonym_id(std::uint64_t v) {
  return {IdSpace::kPseudonym, v};
}

std::ostream& operator<<(std::ostream& os, const VertexId& v);

using VertexSet = std::set<VertexId>;

// Canonical undirected edge: first < second.
struct Edge {
  VertexId first;
  VertexId second;

  Edge(VertexId a, VertexId b);

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Simple undirected graph with sorted adjacency. Mutation is meant for
// builder phases; a finished snapshot is treated as an immutable value.
class Graph {
 public:
  using Adjacency = std::map<VertexId, VertexSet>;

  Graph() = default;

  // Inserts an isolated vertex; no-op if present.
  void add_vertex(VertexId v);
  // Inserts both endpoints as needed. Returns false when the edge existed.
  // Throws DomainError on a self-loop.
  bool add_edge(VertexId a, VertexId b);
  bool remove_edge(VertexId a, VertexId b);
  // Removes the vertex and all incident edges; no-op if absent.
  void remove_vertex(VertexId v);

  bool has_vertex(VertexId v) const { return adjacency_.count(v) != 0; }
  bool has_edge(VertexId a, VertexId b) const;
  // Throws DomainError for an unknown vertex.
  const VertexSet& neighbors(VertexId v) const;
  std::size_t degree(VertexId v) const { return neighbors(v).size(); }

  std::size_t num_vertices() const { return adjacency_.size(); }
  std::size_t num_edges() const { return num_edges_; }
  bool empty() const { return adjacency_.empty(); }

  std::vector<VertexId> vertices() const;
  VertexSet vertex_set() const;
  std::vector<Edge> edges() const;
  const Adjacency& adjacency() const { return adjacency_; }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.adjacency_ == b.adjacency_;
  }

 private:
  Adjacency adjacency_;
  std::size_t num_edges_ = 0;
};

// Bijection from real identities to pseudonyms.
class IsomorphismMap {
 public:
  // Throws DomainError when the pair breaks injectivity, when `from` already
  // maps elsewhere, or when the id spaces are not real -> pseudonym.
  void insert(VertexId from, VertexId to);

  bool contains(VertexId from) const { return forward_.count(from) != 0; }
  // Throws DomainError when unmapped.
  VertexId at(VertexId from) const;
  // Inverse lookup; throws DomainError when `to` is not an image.
  VertexId preimage(VertexId to) const;
  bool has_image(VertexId to) const { return backward_.count(to) != 0; }

  std::size_t size() const { return forward_.size(); }
  const std::map<VertexId, VertexId>& forward() const { return forward_; }

 private:
  std::map<VertexId, VertexId> forward_;
  std::map<VertexId, VertexId> backward_;
};

// (s, E ∩ s×s). Throws DomainError if s is not a subset of g's vertices.
Graph induced_subgraph(const Graph& g, const VertexSet& s);

// (s ∪ N(s), E ∩ s×(s ∪ N(s))): keeps only edges touching s.
Graph weakly_induced_subgraph(const Graph& g, const VertexSet& s);

// Edge-preserving relabeling. Throws DomainError on a missing mapping.
Graph apply_isomorphism(const Graph& g, const IsomorphismMap& m);

std::vector<std::size_t> sorted_degree_sequence(const Graph& g);

}  // namespace dynaa

template <>
struct std::hash<dynaa::VertexId> {
  std::size_t operator()(const dynaa::VertexId& v) const noexcept {
    return std::hash<std::uint64_t>{}(v.value * 2 +
                                      static_cast<std::uint64_t>(v.space));
  }
};
