#include "dynaa/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <tuple>

#include "dynaa/errors.hpp"

namespace dynaa {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::int64_t parse_int(std::string_view tok, std::size_t line,
                       const char* what) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, std::string("bad ") + what + " '" +
                               std::string(tok) + "'");
  }
  return value;
}

double parse_double(std::string_view tok, std::size_t line) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "bad weight '" + std::string(tok) + "'");
  }
  return value;
}

void canonicalize(TemporalEdgeList& tel) {
  auto& r = tel.records;
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end(),
                      [](const TemporalEdge& a, const TemporalEdge& b) {
                        return a.u == b.u && a.v == b.v &&
                               a.t_created == b.t_created;
                      }),
          r.end());
}

struct PairEvent {
  std::int64_t u, v, t;
  bool removal;

  auto key() const { return std::tuple(u, v, t, removal); }
};

// Turns add/remove events into lifetimes, one open record per pair at a time.
void resolve_events(std::vector<PairEvent>& events, TemporalEdgeList& tel) {
  std::sort(events.begin(), events.end(),
            [](const PairEvent& a, const PairEvent& b) {
              return a.key() < b.key();
            });
  std::size_t i = 0;
  while (i < events.size()) {
    std::size_t j = i;
    std::optional<TemporalEdge> open;
    while (j < events.size() && events[j].u == events[i].u &&
           events[j].v == events[i].v) {
      const PairEvent& e = events[j];
      if (!e.removal) {
        if (!open) open = TemporalEdge{e.u, e.v, e.t, std::nullopt};
      } else if (open && e.t > open->t_created) {
        open->t_removed = e.t;
        tel.records.push_back(*open);
        open.reset();
      } else {
        ++tel.unmatched_removals;
      }
      ++j;
    }
    if (open) tel.records.push_back(*open);
    i = j;
  }
}

}  // namespace

std::size_t TemporalEdgeList::num_vertices() const {
  std::set<std::int64_t> ids;
  for (const auto& e : records) {
    ids.insert(e.u);
    ids.insert(e.v);
  }
  for (const auto& [id, _] : vertex_records) ids.insert(id);
  return ids.size();
}

std::size_t TemporalEdgeList::num_distinct_edges() const {
  std::set<std::pair<std::int64_t, std::int64_t>> pairs;
  for (const auto& e : records) pairs.emplace(e.u, e.v);
  return pairs.size();
}

EdgeListFormat parse_format(std::string_view name) {
  if (name == "plain") return EdgeListFormat::kPlain;
  if (name == "konect") return EdgeListFormat::kKonect;
  throw ConfigError("unknown edge-list format '" + std::string(name) + "'");
}

TemporalEdgeList load_temporal_edges(std::istream& in, EdgeListFormat format) {
  TemporalEdgeList tel;
  std::vector<PairEvent> events;
  const char comment = format == EdgeListFormat::kPlain ? '#' : '%';
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (auto pos = line.find(comment); pos != std::string_view::npos) {
      line = line.substr(0, pos);
    }
    auto tok = split_ws(line);
    if (tok.empty()) continue;

    if (format == EdgeListFormat::kPlain) {
      if (tok[0] == "vertex") {
        if (tok.size() != 3) throw ParseError(line_no, "expected 'vertex id t'");
        const auto id = parse_int(tok[1], line_no, "vertex id");
        const auto t = parse_int(tok[2], line_no, "timestamp");
        auto [it, fresh] = tel.vertex_records.emplace(id, t);
        if (!fresh) it->second = std::min(it->second, t);
        continue;
      }
      if (tok.size() < 3 || tok.size() > 4) {
        throw ParseError(line_no, "expected 'u v t_created [t_removed]'");
      }
      auto u = parse_int(tok[0], line_no, "vertex id");
      auto v = parse_int(tok[1], line_no, "vertex id");
      const auto t = parse_int(tok[2], line_no, "timestamp");
      std::optional<std::int64_t> removed;
      if (tok.size() == 4) {
        removed = parse_int(tok[3], line_no, "timestamp");
        if (*removed <= t) {
          throw ParseError(line_no, "t_removed must follow t_created");
        }
      }
      if (u == v) {
        ++tel.rejected_self_loops;
        continue;
      }
      if (u > v) std::swap(u, v);
      tel.records.push_back({u, v, t, removed});
    } else {
      if (tok.size() < 2 || tok.size() > 4) {
        throw ParseError(line_no, "expected 'u v [weight [timestamp]]'");
      }
      auto u = parse_int(tok[0], line_no, "vertex id");
      auto v = parse_int(tok[1], line_no, "vertex id");
      const double weight = tok.size() >= 3 ? parse_double(tok[2], line_no) : 1;
      const std::int64_t t =
          tok.size() == 4 ? parse_int(tok[3], line_no, "timestamp") : 0;
      if (u == v) {
        ++tel.rejected_self_loops;
        continue;
      }
      if (u > v) std::swap(u, v);
      events.push_back({u, v, t, weight < 0});
    }
  }
  if (format == EdgeListFormat::kKonect) resolve_events(events, tel);
  canonicalize(tel);
  return tel;
}

TemporalEdgeList load_temporal_edges(const std::filesystem::path& path,
                                     EdgeListFormat format) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset " + path.string());
  return load_temporal_edges(in, format);
}

void write_temporal_edges(std::ostream& out, const TemporalEdgeList& tel) {
  for (const auto& [id, t] : tel.vertex_records) {
    out << "vertex " << id << ' ' << t << '\n';
  }
  for (const auto& e : tel.records) {
    out << e.u << ' ' << e.v << ' ' << e.t_created;
    if (e.t_removed) out << ' ' << *e.t_removed;
    out << '\n';
  }
}

DynamicGraph take_snapshots(const TemporalEdgeList& tel,
                            std::span<const std::int64_t> timestamps,
                            const SnapshotOptions& options) {
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    if (timestamps[i] <= timestamps[i - 1]) {
      throw ConfigError("snapshot timestamps must be strictly increasing");
    }
  }
  auto to_id = [](std::int64_t ext) {
    return real_id(static_cast<std::uint64_t>(ext));
  };
  for (const auto& e : tel.records) {
    if (e.u < 0 || e.v < 0) throw ConfigError("negative vertex id in dataset");
  }

  DynamicGraph out;
  for (const std::int64_t cut : timestamps) {
    Graph g;
    if (options.include_isolated) {
      for (const auto& [id, seen] : tel.vertex_records) {
        if (seen <= cut) g.add_vertex(to_id(id));
      }
    }
    for (const auto& e : tel.records) {
      if (e.t_created <= cut && (!e.t_removed || *e.t_removed > cut)) {
        g.add_edge(to_id(e.u), to_id(e.v));
      }
    }
    const std::size_t index = out.snapshots.size() + 1;
    for (const auto& [v, _] : g.adjacency()) {
      out.first_snapshot.try_emplace(v, index);
    }
    out.snapshots.push_back({std::move(g), cut});
  }
  return out;
}

CutInterval parse_cut_interval(std::string_view text) {
  std::size_t digits = 0;
  while (digits < text.size() && text[digits] >= '0' && text[digits] <= '9') {
    ++digits;
  }
  if (digits == 0) throw ConfigError("bad cut interval '" + std::string(text) + "'");
  std::int64_t n = 0;
  std::from_chars(text.data(), text.data() + digits, n);
  const std::string_view unit = text.substr(digits);
  CutInterval out;
  if (unit.empty() || unit == "s") {
    out.amount = n;
  } else if (unit == "h") {
    out.amount = n * 3600;
  } else if (unit == "d") {
    out.amount = n * 86400;
  } else if (unit == "w") {
    out.amount = n * 7 * 86400;
  } else if (unit == "mo") {
    out.amount = n;
    out.calendar_months = true;
  } else if (unit == "y") {
    out.amount = n * 12;
    out.calendar_months = true;
  } else {
    throw ConfigError("unknown cut interval unit '" + std::string(unit) + "'");
  }
  if (out.amount <= 0) throw ConfigError("cut interval must be positive");
  return out;
}

std::vector<std::int64_t> regular_cuts(const TemporalEdgeList& tel,
                                       const CutInterval& step) {
  if (step.amount <= 0) throw ConfigError("cut interval must be positive");
  std::optional<std::int64_t> lo, hi;
  auto see = [&](std::int64_t t) {
    lo = lo ? std::min(*lo, t) : t;
    hi = hi ? std::max(*hi, t) : t;
  };
  for (const auto& e : tel.records) {
    see(e.t_created);
    if (e.t_removed) see(*e.t_removed);
  }
  for (const auto& [_, t] : tel.vertex_records) see(t);
  if (!lo) return {};

  std::vector<std::int64_t> cuts;
  for (std::int64_t k = 1;; ++k) {
    std::int64_t cut;
    if (step.calendar_months) {
      using namespace std::chrono;
      const sys_seconds start{seconds{*lo}};
      const auto day = floor<days>(start);
      const auto time_of_day = start - day;
      const year_month_day ymd{day};
      const auto shifted = ymd + months{step.amount * k};
      // Clamp e.g. Aug 31 + 6 months to the last day of February.
      const year_month_day_last last{shifted.year() / shifted.month() / std::chrono::last};
      const year_month_day fixed =
          shifted.ok() ? shifted : year_month_day{last};
      cut = (sys_days{fixed} + time_of_day).time_since_epoch().count();
    } else {
      cut = *lo + step.amount * k;
    }
    cuts.push_back(cut);
    if (cut >= *hi) break;
  }
  return cuts;
}

std::vector<std::int64_t> parse_cut_list(std::string_view text) {
  std::vector<std::int64_t> out;
  std::size_t i = 0;
  while (i <= text.size()) {
    std::size_t j = text.find(',', i);
    if (j == std::string_view::npos) j = text.size();
    const std::string_view tok = text.substr(i, j - i);
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw ConfigError("bad cut timestamp '" + std::string(tok) + "'");
    }
    out.push_back(value);
    i = j + 1;
  }
  return out;
}

TemporalEdgeList to_temporal_edges(const DynamicGraph& dg) {
  TemporalEdgeList tel;
  for (const auto& [v, index] : dg.first_snapshot) {
    tel.vertex_records.emplace(static_cast<std::int64_t>(v.value),
                               static_cast<std::int64_t>(index));
  }
  // Pair -> creation index of its currently open lifetime.
  std::map<Edge, std::int64_t> open;
  for (std::size_t i = 1; i <= dg.size(); ++i) {
    const Graph& g = dg.snapshot(i);
    const auto t = static_cast<std::int64_t>(i);
    for (auto it = open.begin(); it != open.end();) {
      if (!g.has_edge(it->first.first, it->first.second)) {
        tel.records.push_back({static_cast<std::int64_t>(it->first.first.value),
                               static_cast<std::int64_t>(it->first.second.value),
                               it->second, t});
        it = open.erase(it);
      } else {
        ++it;
      }
    }
    for (const Edge& e : g.edges()) open.try_emplace(e, t);
  }
  for (const auto& [e, t] : open) {
    tel.records.push_back({static_cast<std::int64_t>(e.first.value),
                           static_cast<std::int64_t>(e.second.value), t,
                           std::nullopt});
  }
  canonicalize(tel);
  return tel;
}

}  // namespace dynaa
