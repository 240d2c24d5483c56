#include "dynaa/reident.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>

#include "dynaa/errors.hpp"

namespace dynaa {
namespace {

using Index = std::uint32_t;

double parse_double(std::string_view s, const char* what) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ConfigError(std::string("bad ") + what + ": '" + std::string(s) +
                      "'");
  }
  return v;
}

std::size_t abs_diff(std::size_t a, std::size_t b) {
  return a > b ? a - b : b - a;
}

// Index-based copy of the released graph for the search loops.
struct DenseView {
  std::vector<VertexId> ids;
  std::unordered_map<VertexId, Index> index;
  std::vector<std::vector<Index>> adj;
  std::vector<ReleaseIndex> alpha;

  DenseView(const Graph& g, const TemporalIndex& idx, bool temporal) {
    ids.reserve(g.num_vertices());
    for (const auto& [v, _] : g.adjacency()) {
      index.emplace(v, static_cast<Index>(ids.size()));
      ids.push_back(v);
    }
    adj.resize(ids.size());
    alpha.assign(ids.size(), 0);
    for (Index i = 0; i < ids.size(); ++i) {
      const auto& nb = g.neighbors(ids[i]);
      adj[i].reserve(nb.size());
      for (VertexId w : nb) adj[i].push_back(index.at(w));
      if (temporal) alpha[i] = idx.alpha_star(ids[i]);
    }
  }

  std::size_t degree(Index i) const { return adj[i].size(); }

  bool adjacent(Index a, Index b) const {
    const auto& la = adj[a].size() <= adj[b].size() ? adj[a] : adj[b];
    const Index other = adj[a].size() <= adj[b].size() ? b : a;
    return std::binary_search(la.begin(), la.end(), other);
  }
};

class Retrieval {
 public:
  Retrieval(const Graph& g_star, const AttackKnowledge& k,
            const TemporalIndex& idx, double theta,
            const RetrievalOptions& opt)
      : view_(g_star, idx, opt.temporal),
        theta_(theta),
        budget_(opt.node_budget),
        n_(k.sybils.size()) {
    adj_s_.assign(n_ * n_, 0);
    alpha_s_.assign(n_, 0);
    std::vector<std::size_t> deg_s(n_);
    for (std::size_t a = 0; a < n_; ++a) {
      deg_s[a] = k.sybil_subgraph.degree(k.sybils[a]);
      if (opt.temporal) alpha_s_[a] = idx.sybil_alpha_plus(k.sybils[a]);
      for (std::size_t b = 0; b < n_; ++b) {
        if (a != b && k.sybil_subgraph.has_edge(k.sybils[a], k.sybils[b])) {
          adj_s_[a * n_ + b] = 1;
        }
      }
    }
    // ext_s_[len][k]: external degree of sybil k within a prefix of length
    // len (k < len).
    ext_s_.assign((n_ + 1) * n_, 0);
    for (std::size_t len = 1; len <= n_; ++len) {
      for (std::size_t k = 0; k < len; ++k) {
        std::size_t inside = 0;
        for (std::size_t j = 0; j < len; ++j) inside += adj_s_[j * n_ + k];
        ext_s_[len * n_ + k] = static_cast<std::int64_t>(deg_s[k] - inside);
      }
    }
    for (Index i = 0; i < view_.ids.size(); ++i) {
      buckets_[{view_.alpha[i], view_.degree(i)}].push_back(i);
    }
    pick_.assign(n_, 0);
    in_x_.assign((n_ + 1) * n_, 0);
    dissim_d_.assign(n_ + 1, 0);
  }

  RetrievalOutcome run() {
    RetrievalOutcome out;
    if (n_ == 0 || theta_ < 0) return out;
    extend(0, out);
    out.nodes_visited = visited_;
    if (stopped_) {
      out.truncated = true;
      out.candidates.clear();
    }
    return out;
  }

 private:
  struct Child {
    Index v;
    std::size_t d;  // |D| of the extended prefix
  };

  bool sybil_adj(std::size_t a, std::size_t b) const {
    return adj_s_[a * n_ + b] != 0;
  }
  std::int64_t ext_s(std::size_t len, std::size_t k) const {
    return ext_s_[len * n_ + k];
  }
  std::size_t& in_x(std::size_t len, std::size_t k) {
    return in_x_[len * n_ + k];
  }

  // Extends the prefix of length `len`.
  void extend(std::size_t len, RetrievalOutcome& out) {
    if (stopped_) return;
    const std::size_t next = len + 1;
    const ReleaseIndex want_alpha = alpha_s_[len];
    std::vector<Child> children;

    // Vertices adjacent to some prefix member.
    std::vector<Index> touching;
    for (std::size_t k = 0; k < len; ++k) {
      const auto& nb = view_.adj[pick_[k]];
      touching.insert(touching.end(), nb.begin(), nb.end());
    }
    std::sort(touching.begin(), touching.end());
    touching.erase(std::unique(touching.begin(), touching.end()),
                   touching.end());
    auto in_prefix = [&](Index v) {
      for (std::size_t k = 0; k < len; ++k) {
        if (pick_[k] == v) return true;
      }
      return false;
    };

    std::vector<char> a(len);
    for (Index v : touching) {
      if (view_.alpha[v] != want_alpha || in_prefix(v)) continue;
      std::size_t d = dissim_d_[len];
      std::size_t inside = 0;
      for (std::size_t k = 0; k < len; ++k) {
        a[k] = view_.adjacent(pick_[k], v) ? 1 : 0;
        inside += a[k];
        if ((a[k] != 0) != sybil_adj(k, len)) ++d;
      }
      std::size_t total = d;
      for (std::size_t k = 0; k < len; ++k) {
        const auto ext_x = static_cast<std::int64_t>(
            view_.degree(pick_[k]) - in_x(len, k) - a[k]);
        total += static_cast<std::size_t>(std::llabs(ext_s(next, k) - ext_x));
      }
      const auto ext_v = static_cast<std::int64_t>(view_.degree(v) - inside);
      total += static_cast<std::size_t>(std::llabs(ext_s(next, len) - ext_v));
      if (static_cast<double>(total) <= theta_) children.push_back({v, d});
    }

    // Vertices adjacent to no prefix member: the dissimilarity depends on
    // the candidate only through its degree.
    std::size_t base = dissim_d_[len];
    for (std::size_t k = 0; k < len; ++k) {
      if (sybil_adj(k, len)) ++base;
    }
    const std::size_t d_far = base;
    for (std::size_t k = 0; k < len; ++k) {
      const auto ext_x =
          static_cast<std::int64_t>(view_.degree(pick_[k]) - in_x(len, k));
      base += static_cast<std::size_t>(std::llabs(ext_s(next, k) - ext_x));
    }
    if (static_cast<double>(base) <= theta_) {
      const auto slack =
          static_cast<std::int64_t>(std::floor(theta_ - static_cast<double>(base)));
      const std::int64_t t = ext_s(next, len);
      const std::int64_t lo = std::max<std::int64_t>(0, t - slack);
      const std::int64_t hi = t + slack;
      auto it = buckets_.lower_bound({want_alpha, static_cast<std::size_t>(lo)});
      for (; it != buckets_.end() && it->first.first == want_alpha &&
             static_cast<std::int64_t>(it->first.second) <= hi;
           ++it) {
        for (Index v : it->second) {
          if (std::binary_search(touching.begin(), touching.end(), v) ||
              in_prefix(v)) {
            continue;
          }
          children.push_back({v, d_far});
        }
      }
    }

    std::sort(children.begin(), children.end(),
              [](const Child& x, const Child& y) { return x.v < y.v; });
    for (const Child& c : children) {
      if (++visited_ > budget_) {
        stopped_ = true;
        return;
      }
      pick_[len] = c.v;
      if (next == n_) {
        CandidateSybilSet x;
        x.members.reserve(n_);
        for (std::size_t k = 0; k < n_; ++k) {
          x.members.push_back(view_.ids[pick_[k]]);
        }
        out.candidates.push_back(std::move(x));
        continue;
      }
      std::size_t inside = 0;
      for (std::size_t k = 0; k < len; ++k) {
        const std::size_t hit = view_.adjacent(pick_[k], c.v) ? 1 : 0;
        in_x(next, k) = in_x(len, k) + hit;
        inside += hit;
      }
      in_x(next, len) = inside;
      dissim_d_[next] = c.d;
      extend(next, out);
      if (stopped_) return;
    }
  }

  DenseView view_;
  double theta_;
  std::size_t budget_;
  std::size_t n_;
  std::vector<char> adj_s_;
  std::vector<ReleaseIndex> alpha_s_;
  std::vector<std::int64_t> ext_s_;
  std::map<std::pair<ReleaseIndex, std::size_t>, std::vector<Index>> buckets_;
  std::vector<Index> pick_;
  std::vector<std::size_t> in_x_;
  std::vector<std::size_t> dissim_d_;
  std::size_t visited_ = 0;
  bool stopped_ = false;
};

// Victim-saturating assignments of maximum total similarity. The optimum and
// a dual certificate come from the Hungarian method; every optimal
// assignment uses only dual-tight pairs and covers every pool vertex with a
// negative dual, so the argmax set is enumerated on that subgraph, descending
// only into branches that can still be completed.
class Matcher {
 public:
  Matcher(const Graph& g_star, const CandidateSybilSet& x,
          const AttackKnowledge& k, const TemporalIndex& idx,
          const MatchOptions& opt)
      : limit_(opt.max_mappings) {
    const std::size_t n = x.members.size();
    if (n != k.sybils.size()) {
      throw DomainError("candidate length differs from the sybil count");
    }
    if (n >= 64) throw DomainError("too many sybils for matching");
    std::map<VertexId, std::uint64_t> masks;
    const VertexSet members = x.as_set();
    for (std::size_t p = 0; p < n; ++p) {
      for (VertexId w : g_star.neighbors(x.members[p])) {
        if (members.count(w) == 0) masks[w] |= std::uint64_t{1} << p;
      }
    }
    std::vector<std::uint64_t> pool_masks;
    for (const auto& [u, m] : masks) {
      pool_.push_back(u);
      pool_masks.push_back(m);
    }
    std::map<VertexId, std::size_t> position;
    for (std::size_t p = 0; p < n; ++p) position.emplace(k.sybils[p], p);

    struct Victim {
      VertexId y;
      std::uint64_t mask;
      std::size_t size;
    };
    std::vector<Victim> order;
    for (const auto& [y, fp] : k.fingerprints) {
      std::uint64_t m = 0;
      for (VertexId s : fp) {
        if (auto it = position.find(s); it != position.end()) {
          m |= std::uint64_t{1} << it->second;
        }
      }
      order.push_back({y, m, fp.size()});
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const Victim& a, const Victim& b) {
                       return a.size > b.size;
                     });

    rows_ = order.size();
    cols_ = pool_.size();
    weight_.assign(rows_ * cols_, 0);
    for (std::size_t j = 0; j < rows_; ++j) {
      victims_.push_back(order[j].y);
      const ReleaseIndex beta =
          opt.temporal ? idx.beta_plus(order[j].y) : ReleaseIndex{0};
      for (std::size_t u = 0; u < cols_; ++u) {
        const auto sim = static_cast<std::size_t>(
            std::popcount(pool_masks[u] & order[j].mask));
        if (sim == 0 || sim < opt.eta) continue;
        if (opt.temporal && idx.alpha_star(pool_[u]) > beta) continue;
        weight_[j * cols_ + u] = static_cast<int>(sim);
        max_weight_ = std::max(max_weight_, static_cast<int>(sim));
      }
    }
  }

  std::vector<VictimMapping> run() {
    if (rows_ == 0 || rows_ > cols_) return {};
    for (std::size_t j = 0; j < rows_; ++j) {
      bool any = false;
      for (std::size_t u = 0; u < cols_ && !any; ++u) any = w(j, u) > 0;
      if (!any) return {};
    }
    if (!solve()) return {};

    used_.assign(cols_, 0);
    chosen_.assign(rows_, 0);
    enumerate(0);
    if (overflow_) return {};

    std::vector<VictimMapping> out;
    out.reserve(found_.size());
    for (const auto& pick : found_) {
      VictimMapping phi;
      for (std::size_t j = 0; j < rows_; ++j) {
        phi.emplace(victims_[j], pool_[pick[j]]);
      }
      out.push_back(std::move(phi));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  bool overflowed() const { return overflow_; }

 private:
  int w(std::size_t j, std::size_t u) const { return weight_[j * cols_ + u]; }

  // Min-cost rows -> columns assignment on cost max_weight - sim, with a
  // prohibitive cost on forbidden pairs. Fills the tight subgraph. False if
  // no assignment avoids forbidden pairs.
  bool solve() {
    using Cost = std::int64_t;
    const Cost forbidden =
        static_cast<Cost>(max_weight_) * static_cast<Cost>(rows_) + 1;
    auto cost = [&](std::size_t j, std::size_t u) -> Cost {
      const int s = w(j, u);
      return s > 0 ? max_weight_ - s : forbidden;
    };
    const Cost inf = std::numeric_limits<Cost>::max() / 4;
    // 1-based, column 0 is the virtual root.
    std::vector<Cost> ru(rows_ + 1, 0), cv(cols_ + 1, 0);
    std::vector<std::size_t> owner(cols_ + 1, 0), way(cols_ + 1, 0);
    for (std::size_t i = 1; i <= rows_; ++i) {
      owner[0] = i;
      std::size_t j0 = 0;
      std::vector<Cost> minv(cols_ + 1, inf);
      std::vector<char> seen(cols_ + 1, 0);
      do {
        seen[j0] = 1;
        const std::size_t i0 = owner[j0];
        Cost delta = inf;
        std::size_t j1 = 0;
        for (std::size_t j = 1; j <= cols_; ++j) {
          if (seen[j]) continue;
          const Cost cur = cost(i0 - 1, j - 1) - ru[i0] - cv[j];
          if (cur < minv[j]) {
            minv[j] = cur;
            way[j] = j0;
          }
          if (minv[j] < delta) {
            delta = minv[j];
            j1 = j;
          }
        }
        for (std::size_t j = 0; j <= cols_; ++j) {
          if (seen[j]) {
            ru[owner[j]] += delta;
            cv[j] -= delta;
          } else {
            minv[j] -= delta;
          }
        }
        j0 = j1;
      } while (owner[j0] != 0);
      do {
        const std::size_t j1 = way[j0];
        owner[j0] = owner[j1];
        j0 = j1;
      } while (j0 != 0);
    }
    for (std::size_t j = 1; j <= cols_; ++j) {
      if (owner[j] != 0 && w(owner[j] - 1, j - 1) == 0) return false;
    }
    tight_.assign(rows_, {});
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t u = 0; u < cols_; ++u) {
        if (w(i, u) > 0 && cost(i, u) == ru[i + 1] + cv[u + 1]) {
          tight_[i].push_back(static_cast<Index>(u));
        }
      }
    }
    must_.assign(cols_, 0);
    for (std::size_t u = 0; u < cols_; ++u) must_[u] = cv[u + 1] < 0;
    return true;
  }

  // Kuhn augmenting path from row i over tight pairs into unused columns.
  bool augment_row(std::size_t i, std::vector<int>& col_to,
                   std::vector<char>& visit) {
    for (Index u : tight_[i]) {
      if (used_[u] || visit[u]) continue;
      visit[u] = 1;
      if (col_to[u] < 0 ||
          augment_row(static_cast<std::size_t>(col_to[u]), col_to, visit)) {
        col_to[u] = static_cast<int>(i);
        return true;
      }
    }
    return false;
  }

  bool augment_col(Index u, std::size_t first_row, std::vector<int>& row_to,
                   std::vector<char>& visit) {
    for (std::size_t i = first_row; i < rows_; ++i) {
      if (visit[i] || !std::binary_search(tight_[i].begin(), tight_[i].end(),
                                          u)) {
        continue;
      }
      visit[i] = 1;
      if (row_to[i] < 0 ||
          augment_col(static_cast<Index>(row_to[i]), first_row, row_to,
                      visit)) {
        row_to[i] = static_cast<int>(u);
        return true;
      }
    }
    return false;
  }

  // Rows first_row.. can all be placed, and every unused forced column can
  // be covered. Together these give one assignment doing both.
  bool completable(std::size_t first_row) {
    std::vector<int> col_to(cols_, -1);
    for (std::size_t i = first_row; i < rows_; ++i) {
      std::vector<char> visit(cols_, 0);
      if (!augment_row(i, col_to, visit)) return false;
    }
    std::vector<int> row_to(rows_, -1);
    for (std::size_t u = 0; u < cols_; ++u) {
      if (!must_[u] || used_[u]) continue;
      std::vector<char> visit(rows_, 0);
      if (!augment_col(static_cast<Index>(u), first_row, row_to, visit)) {
        return false;
      }
    }
    return true;
  }

  void enumerate(std::size_t j) {
    if (j == rows_) {
      if (found_.size() == limit_) {
        overflow_ = true;
        found_.clear();
        return;
      }
      found_.push_back(chosen_);
      return;
    }
    for (Index u : tight_[j]) {
      if (overflow_) return;
      if (used_[u]) continue;
      used_[u] = 1;
      chosen_[j] = u;
      if (completable(j + 1)) enumerate(j + 1);
      used_[u] = 0;
    }
  }

  std::vector<VertexId> pool_;
  std::vector<VertexId> victims_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<int> weight_;
  int max_weight_ = 0;
  std::vector<std::vector<Index>> tight_;
  std::vector<char> must_;
  std::vector<char> used_;
  std::vector<Index> chosen_;
  std::vector<std::vector<Index>> found_;
  std::size_t limit_;
  bool overflow_ = false;
};

}  // namespace

double ThetaSchedule::at(ReleaseIndex release) const {
  const double steps = release > 2 ? static_cast<double>(release - 2) : 0.0;
  return std::min(cap, base + scale * std::pow(steps, exponent));
}

void ThetaSchedule::validate() const {
  if (!(base >= 0 && scale >= 0 && exponent >= 0 && cap >= 0)) {
    throw ConfigError("theta schedule terms must be non-negative");
  }
}

ThetaSchedule parse_theta_schedule(std::string_view text) {
  double v[4];
  for (int i = 0; i < 4; ++i) {
    const auto comma = text.find(',');
    if ((comma == std::string_view::npos) != (i == 3)) {
      throw ConfigError("theta schedule needs base,scale,exponent,cap");
    }
    v[i] = parse_double(text.substr(0, comma), "theta term");
    if (i < 3) text.remove_prefix(comma + 1);
  }
  ThetaSchedule s{v[0], v[1], v[2], v[3]};
  s.validate();
  return s;
}

std::size_t EtaSpec::at(std::size_t num_sybils) const {
  return half_sybils ? (num_sybils + 1) / 2 : fixed;
}

EtaSpec parse_eta(std::string_view text) {
  if (text == "half") return {true, 0};
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) {
    throw ConfigError("eta must be 'half' or an integer");
  }
  return {false, v};
}

std::size_t structural_dissimilarity(std::span<const VertexId> x_prefix,
                                     const Graph& g_star,
                                     std::span<const VertexId> s_prefix,
                                     const Graph& g_plus) {
  if (x_prefix.size() != s_prefix.size()) {
    throw DomainError("prefix lengths differ");
  }
  if (x_prefix.empty()) throw DomainError("empty prefix");
  const std::size_t len = x_prefix.size();
  std::size_t d = 0;
  for (std::size_t j = 0; j < len; ++j) {
    for (std::size_t k = j + 1; k < len; ++k) {
      if (g_star.has_edge(x_prefix[j], x_prefix[k]) !=
          g_plus.has_edge(s_prefix[j], s_prefix[k])) {
        ++d;
      }
    }
  }
  auto external = [len](const Graph& g, std::span<const VertexId> p,
                        std::size_t k) {
    std::size_t in = 0;
    for (std::size_t j = 0; j < len; ++j) {
      if (j != k && g.has_edge(p[j], p[k])) ++in;
    }
    return g.degree(p[k]) - in;
  };
  for (std::size_t k = 0; k < len; ++k) {
    d += abs_diff(external(g_plus, s_prefix, k), external(g_star, x_prefix, k));
  }
  return d;
}

RetrievalOutcome retrieve_sybil_candidates(const Graph& g_star,
                                           const AttackKnowledge& knowledge,
                                           const TemporalIndex& index,
                                           double theta,
                                           const RetrievalOptions& options) {
  if (knowledge.sybils.size() > g_star.num_vertices()) return {};
  return Retrieval(g_star, knowledge, index, theta, options).run();
}

std::size_t fingerprint_similarity(const VertexSet& fu_star,
                                   const VertexSet& fj,
                                   const CandidateSybilSet& x,
                                   std::span<const VertexId> sybils,
                                   VertexId u, VertexId yj,
                                   const TemporalIndex& index,
                                   const MatchOptions& options) {
  if (x.members.size() != sybils.size()) {
    throw DomainError("candidate length differs from the sybil count");
  }
  if (options.temporal &&
      !first_time_targeted_consistent(u, yj, index)) {
    return 0;
  }
  std::size_t sim = 0;
  for (std::size_t k = 0; k < sybils.size(); ++k) {
    if (fu_star.count(x.members[k]) != 0 && fj.count(sybils[k]) != 0) ++sim;
  }
  return sim >= options.eta ? sim : 0;
}

std::vector<VictimMapping> match_fingerprints(const Graph& g_star,
                                              const CandidateSybilSet& x,
                                              const AttackKnowledge& knowledge,
                                              const TemporalIndex& index,
                                              const MatchOptions& options,
                                              bool* overflow) {
  if (overflow) *overflow = false;
  if (x.members.empty()) return {};
  Matcher m(g_star, x, knowledge, index, options);
  auto out = m.run();
  if (overflow) *overflow = m.overflowed();
  return out;
}

ReidentResult reidentify(const Graph& g_star, const AttackKnowledge& knowledge,
                         const TemporalIndex& index, double theta,
                         const RetrievalOptions& retrieval,
                         const MatchOptions& matching) {
  ReidentResult r;
  r.release = knowledge.release;
  auto found =
      retrieve_sybil_candidates(g_star, knowledge, index, theta, retrieval);
  r.truncated = found.truncated;
  r.candidates = std::move(found.candidates);
  r.mappings.reserve(r.candidates.size());
  for (const auto& x : r.candidates) {
    bool over = false;
    r.mappings.push_back(
        match_fingerprints(g_star, x, knowledge, index, matching, &over));
    if (over) ++r.overflowed;
  }
  return r;
}

std::optional<std::size_t> select_candidate(
    std::span<const CandidateSybilSet> candidates, Rng& rng) {
  if (candidates.empty()) return std::nullopt;
  return static_cast<std::size_t>(rng.below(candidates.size()));
}

ReidentResult refine(const ReidentResult& result, const VertexSet& s_prev,
                     const VertexSet& s_next, const VertexSet& v_next,
                     const Graph& g_star_prev,
                     const AttackKnowledge& knowledge_prev,
                     const TemporalIndex& index, const MatchOptions& options) {
  ReidentResult out;
  out.release = result.release;
  out.truncated = result.truncated;
  for (const auto& x : result.candidates) {
    if (!sybil_removal_count_consistent(x.as_set(), s_prev, s_next, v_next)) {
      continue;
    }
    out.candidates.push_back(x);
    bool over = false;
    out.mappings.push_back(match_fingerprints(g_star_prev, x, knowledge_prev,
                                              index, options, &over));
    if (over) ++out.overflowed;
  }
  return out;
}

double success_probability(const ReidentResult& result,
                           const IsomorphismMap& truth,
                           const VertexSet& victims) {
  if (result.candidates.empty()) return 0.0;
  VictimMapping expected;
  for (VertexId y : victims) expected.emplace(y, truth.at(y));
  double sum = 0.0;
  for (std::size_t c = 0; c < result.candidates.size(); ++c) {
    const auto& ys = c < result.mappings.size() ? result.mappings[c]
                                                : std::vector<VictimMapping>{};
    if (std::find(ys.begin(), ys.end(), expected) != ys.end()) {
      sum += 1.0 / static_cast<double>(ys.size());
    }
  }
  return sum / static_cast<double>(result.candidates.size());
}

}  // namespace dynaa
