#include "dynaa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

namespace dynaa {

std::optional<double> edge_edit_percentage(const Graph& g_plus,
                                           const Graph& g_star,
                                           const IsomorphismMap& phi) {
  if (g_plus.num_edges() == 0) return std::nullopt;
  std::set<Edge> mapped;
  for (const Edge& e : g_plus.edges()) {
    if (phi.contains(e.first) && phi.contains(e.second)) {
      mapped.emplace(phi.at(e.first), phi.at(e.second));
    }
  }
  std::size_t diff = 0;
  for (const Edge& e : g_star.edges()) {
    if (mapped.erase(e) == 0) ++diff;
  }
  diff += mapped.size();
  return static_cast<double>(diff) / static_cast<double>(g_plus.num_edges());
}

double local_clustering(const Graph& g, VertexId v) {
  const auto& nb = g.neighbors(v);
  const std::size_t d = nb.size();
  if (d < 2) return 0.0;
  std::size_t links = 0;
  for (auto i = nb.begin(); i != nb.end(); ++i) {
    const auto& ni = g.neighbors(*i);
    for (auto j = std::next(i); j != nb.end(); ++j) {
      if (ni.count(*j) != 0) ++links;
    }
  }
  return 2.0 * static_cast<double>(links) / static_cast<double>(d * (d - 1));
}

double average_clustering(const Graph& g) {
  if (g.empty()) return 0.0;
  // Summed in value order so that relabeled copies agree to the last bit.
  std::vector<double> lcc;
  lcc.reserve(g.num_vertices());
  for (const auto& [v, _] : g.adjacency()) lcc.push_back(local_clustering(g, v));
  std::sort(lcc.begin(), lcc.end());
  double sum = 0.0;
  for (double c : lcc) sum += c;
  return sum / static_cast<double>(g.num_vertices());
}

std::optional<double> avg_lcc_variation(const Graph& g_plus,
                                        const Graph& g_star) {
  const double base = average_clustering(g_plus);
  if (base == 0.0) return std::nullopt;
  return std::abs(base - average_clustering(g_star)) / base;
}

std::optional<double> kl_divergence(std::span<const double> p,
                                    std::span<const double> q) {
  if (p.size() != q.size()) return std::nullopt;
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return std::nullopt;
    sum += p[i] * std::log(p[i] / q[i]);
  }
  return sum;
}

std::optional<double> degree_kl_divergence(const Graph& g_plus,
                                           const Graph& g_star) {
  if (g_plus.empty() || g_star.empty()) return std::nullopt;
  std::map<std::size_t, std::pair<double, double>> bins;
  for (const auto& [_, nb] : g_plus.adjacency()) bins[nb.size()].first += 1;
  for (const auto& [_, nb] : g_star.adjacency()) bins[nb.size()].second += 1;
  const double lambda =
      1.0 / (2.0 * static_cast<double>(
                       std::max(g_plus.num_vertices(), g_star.num_vertices())));
  const auto np = static_cast<double>(g_plus.num_vertices());
  const auto nq = static_cast<double>(g_star.num_vertices());
  std::vector<double> p, q;
  double zp = 0, zq = 0;
  for (const auto& [_, c] : bins) {
    p.push_back(c.first / np + lambda);
    q.push_back(c.second / nq + lambda);
    zp += p.back();
    zq += q.back();
  }
  for (auto& x : p) x /= zp;
  for (auto& x : q) x /= zq;
  auto kl = kl_divergence(p, q);
  if (kl) *kl = std::max(0.0, *kl);
  return kl;
}

UtilityReport utility_report(const Graph& g_plus, const Graph& g_star,
                             const IsomorphismMap& phi) {
  return {edge_edit_percentage(g_plus, g_star, phi),
          avg_lcc_variation(g_plus, g_star),
          degree_kl_divergence(g_plus, g_star)};
}

}  // namespace dynaa
