#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dynaa/synthesizer.hpp"

namespace dynaa {

// One edge lifetime. Endpoints are normalized so that u < v.
struct TemporalEdge {
  std::int64_t u = 0;
  std::int64_t v = 0;
  std::int64_t t_created = 0;
  std::optional<std::int64_t> t_removed;

  friend auto operator<=>(const TemporalEdge&, const TemporalEdge&) = default;
};

struct TemporalEdgeList {
  // Sorted by (u, v, t_created); one record per (u, v, t_created).
  std::vector<TemporalEdge> records;
  // Explicit vertex records: external id -> first-seen timestamp.
  std::map<std::int64_t, std::int64_t> vertex_records;
  std::size_t rejected_self_loops = 0;
  std::size_t unmatched_removals = 0;

  // Vertices named by an edge or a vertex record.
  std::size_t num_vertices() const;
  // Distinct endpoint pairs.
  std::size_t num_distinct_edges() const;
};

// plain:  "u v t_created [t_removed]" or "vertex id t_first_seen", '#' comments.
// konect: "u v [weight [timestamp]]", '%' comments; a negative weight marks
//         the removal of the pair at that timestamp.
enum class EdgeListFormat { kPlain, kKonect };

EdgeListFormat parse_format(std::string_view name);

// Throws ParseError (with the 1-based line number) on malformed input.
TemporalEdgeList load_temporal_edges(std::istream& in, EdgeListFormat format);
TemporalEdgeList load_temporal_edges(const std::filesystem::path& path,
                                     EdgeListFormat format);

// Canonical plain-format serialization: vertex records then edge records.
void write_temporal_edges(std::ostream& out, const TemporalEdgeList& tel);

struct SnapshotOptions {
  // Vertices known only from a vertex record appear once first seen.
  bool include_isolated = true;
};

// Snapshot i holds every edge alive at timestamps[i-1] and its endpoints.
// Vertex ids are real_id(external id). Throws ConfigError unless the
// timestamps are strictly increasing.
DynamicGraph take_snapshots(const TemporalEdgeList& tel,
                            std::span<const std::int64_t> timestamps,
                            const SnapshotOptions& options = {});

// Cut spacing: a fixed number of time units or a count of calendar months
// (timestamps then read as Unix seconds).
struct CutInterval {
  std::int64_t amount = 0;
  bool calendar_months = false;
};

// "3600", "90s", "12h", "30d", "2w", "6mo", "1y". Throws ConfigError.
CutInterval parse_cut_interval(std::string_view text);

// Cuts start + k*step for k = 1, 2, ... up to the first cut at or past the
// latest timestamp in the data.
std::vector<std::int64_t> regular_cuts(const TemporalEdgeList& tel,
                                       const CutInterval& step);

// "t1,t2,..." Throws ConfigError.
std::vector<std::int64_t> parse_cut_list(std::string_view text);

// Temporal edge list whose snapshots at 1..N reproduce `dg`: timestamps are
// snapshot indices, and every vertex gets an explicit record.
TemporalEdgeList to_temporal_edges(const DynamicGraph& dg);

}  // namespace dynaa
