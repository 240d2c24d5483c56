#include "dynaa/graph.hpp"

#include <algorithm>
#include <string>

#include "dynaa/errors.hpp"

namespace dynaa {

std::ostream& operator<<(std::ostream& os, const VertexId& v) {
  return os << (v.space == IdSpace::kReal ? 'r' : 'p') << v.value;
}

namespace {

std::string describe(VertexId v) {
  return std::string(v.space == IdSpace::kReal ? "r" : "p") +
         std::to_string(v.value);
}

}  // namespace

Edge::Edge(VertexId a, VertexId b)
    : first(std::min(a, b)), second(std::max(a, b)) {}

void Graph::add_vertex(VertexId v) { adjacency_.try_emplace(v); }

bool Graph::add_edge(VertexId a, VertexId b) {
  if (a == b) throw DomainError("self-loop on vertex " + describe(a));
  auto& na = adjacency_[a];
  auto& nb = adjacency_[b];
  if (!na.insert(b).second) return false;
  nb.insert(a);
  ++num_edges_;
  return true;
}

bool Graph::remove_edge(VertexId a, VertexId b) {
  auto ia = adjacency_.find(a);
  auto ib = adjacency_.find(b);
  if (ia == adjacency_.end() || ib == adjacency_.end()) return false;
  if (ia->second.erase(b) == 0) return false;
  ib->second.erase(a);
  --num_edges_;
  return true;
}

void Graph::remove_vertex(VertexId v) {
  auto it = adjacency_.find(v);
  if (it == adjacency_.end()) return;
  for (VertexId w : it->second) adjacency_[w].erase(v);
  num_edges_ -= it->second.size();
  adjacency_.erase(it);
}

bool Graph::has_edge(VertexId a, VertexId b) const {
  auto it = adjacency_.find(a);
  return it != adjacency_.end() && it->second.count(b) != 0;
}

const VertexSet& Graph::neighbors(VertexId v) const {
  auto it = adjacency_.find(v);
  if (it == adjacency_.end()) {
    throw DomainError("unknown vertex " + describe(v));
  }
  return it->second;
}

std::vector<VertexId> Graph::vertices() const {
  std::vector<VertexId> out;
  out.reserve(adjacency_.size());
  for (const auto& [v, _] : adjacency_) out.push_back(v);
  return out;
}

VertexSet Graph::vertex_set() const {
  VertexSet out;
  for (const auto& [v, _] : adjacency_) out.insert(out.end(), v);
  return out;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges_);
  for (const auto& [v, nbrs] : adjacency_) {
    for (auto it = nbrs.upper_bound(v); it != nbrs.end(); ++it) {
      out.emplace_back(v, *it);
    }
  }
  return out;
}

void IsomorphismMap::insert(VertexId from, VertexId to) {
  if (from.space != IdSpace::kReal || to.space != IdSpace::kPseudonym) {
    throw DomainError("isomorphism must map real ids to pseudonyms");
  }
  auto f = forward_.find(from);
  if (f != forward_.end()) {
    if (f->second == to) return;
    throw DomainError("vertex " + describe(from) + " already mapped");
  }
  if (backward_.count(to) != 0) {
    throw DomainError("pseudonym " + describe(to) + " already used");
  }
  forward_.emplace(from, to);
  backward_.emplace(to, from);
}

VertexId IsomorphismMap::at(VertexId from) const {
  auto it = forward_.find(from);
  if (it == forward_.end()) {
    throw DomainError("no mapping for vertex " + describe(from));
  }
  return it->second;
}

VertexId IsomorphismMap::preimage(VertexId to) const {
  auto it = backward_.find(to);
  if (it == backward_.end()) {
    throw DomainError("pseudonym " + describe(to) + " has no preimage");
  }
  return it->second;
}

Graph induced_subgraph(const Graph& g, const VertexSet& s) {
  Graph out;
  for (VertexId v : s) {
    const VertexSet& nbrs = g.neighbors(v);
    out.add_vertex(v);
    for (VertexId w : nbrs) {
      if (v < w && s.count(w) != 0) out.add_edge(v, w);
    }
  }
  return out;
}

Graph weakly_induced_subgraph(const Graph& g, const VertexSet& s) {
  Graph out;
  for (VertexId v : s) {
    const VertexSet& nbrs = g.neighbors(v);
    out.add_vertex(v);
    for (VertexId w : nbrs) out.add_edge(v, w);
  }
  return out;
}

Graph apply_isomorphism(const Graph& g, const IsomorphismMap& m) {
  Graph out;
  for (const auto& [v, nbrs] : g.adjacency()) {
    const VertexId pv = m.at(v);
    out.add_vertex(pv);
    for (auto it = nbrs.upper_bound(v); it != nbrs.end(); ++it) {
      out.add_edge(pv, m.at(*it));
    }
  }
  return out;
}

std::vector<std::size_t> sorted_degree_sequence(const Graph& g) {
  std::vector<std::size_t> out;
  out.reserve(g.num_vertices());
  for (const auto& [_, nbrs] : g.adjacency()) out.push_back(nbrs.size());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace dynaa
