#pragma once

#include <optional>
#include <span>

#include "dynaa/graph.hpp"

namespace dynaa {

// Each metric is nullopt where it is undefined.
struct UtilityReport {
  std::optional<double> edge_edit_pct;
  std::optional<double> lcc_variation;
  std::optional<double> degree_kl;
};

// |phi(E+) xor E*| / |E+|, as a fraction. nullopt when g_plus has no edges.
// Vertices of g_plus without an image are ignored.
std::optional<double> edge_edit_percentage(const Graph& g_plus,
                                           const Graph& g_star,
                                           const IsomorphismMap& phi);

// Local clustering coefficient; 0 below degree 2.
double local_clustering(const Graph& g, VertexId v);
// Mean LCC over all vertices; 0 for an empty graph.
double average_clustering(const Graph& g);

// |avgLcc(g_plus) - avgLcc(g_star)| / avgLcc(g_plus); nullopt when the
// denominator is 0.
std::optional<double> avg_lcc_variation(const Graph& g_plus,
                                        const Graph& g_star);

// sum p ln(p / q) over bins with p > 0. nullopt if the lengths differ or some
// bin has p > 0 and q == 0.
std::optional<double> kl_divergence(std::span<const double> p,
                                    std::span<const double> q);

// KL(P_original || Q_released) of the degree pmfs over the union of observed
// degrees, each bin smoothed by 1 / (2 max(|V+|, |V*|)) then renormalized.
// nullopt if either graph is empty.
std::optional<double> degree_kl_divergence(const Graph& g_plus,
                                           const Graph& g_star);

UtilityReport utility_report(const Graph& g_plus, const Graph& g_star,
                             const IsomorphismMap& phi);

}  // namespace dynaa
