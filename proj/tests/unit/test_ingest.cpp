#include "doctest.h"

#include <sstream>

#include "dynaa/errors.hpp"
#include "dynaa/ingest.hpp"
#include "dynaa/synthesizer.hpp"

using namespace dynaa;

namespace {

TemporalEdgeList parse(const std::string& text,
                       EdgeListFormat f = EdgeListFormat::kPlain) {
  std::istringstream in(text);
  return load_temporal_edges(in, f);
}

const std::filesystem::path fixtures = DYNAA_FIXTURES;

bool edges_subset(const Graph& small, const Graph& big) {
  for (const Edge& e : small.edges()) {
    if (!big.has_edge(e.first, e.second)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("empty input") {
  auto tel = parse("");
  CHECK(tel.records.empty());
  CHECK(tel.num_vertices() == 0);
}

TEST_CASE("one record") {
  auto tel = parse("1 2 100\n");
  REQUIRE(tel.records.size() == 1);
  CHECK(tel.num_vertices() == 2);
  CHECK(tel.records[0].t_created == 100);
  CHECK_FALSE(tel.records[0].t_removed);
}

TEST_CASE("normalization, duplicates and self-loops") {
  auto tel = parse("5 3 10\n3 5 10\n4 4 12\n3 5 20\n");
  REQUIRE(tel.records.size() == 2);
  CHECK(tel.records[0].u == 3);
  CHECK(tel.records[0].v == 5);
  CHECK(tel.rejected_self_loops == 1);
  CHECK(tel.num_distinct_edges() == 1);
}

TEST_CASE("malformed lines report their number") {
  try {
    parse("1 2 3\n# fine\n1 x 3\n");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse("1 2\n"), ParseError);
  CHECK_THROWS_AS(parse("1 2 10 5\n"), ParseError);
  CHECK_THROWS_AS(parse("vertex 1\n"), ParseError);
  CHECK_THROWS_AS(parse("1 2 1 2 3\n", EdgeListFormat::kKonect), ParseError);
}

TEST_CASE("plain fixture") {
  auto tel = load_temporal_edges(fixtures / "tiny.plain", EdgeListFormat::kPlain);
  CHECK(tel.records.size() == 4);
  CHECK(tel.num_vertices() == 5);
  CHECK(tel.vertex_records.at(9) == 50);
  const std::int64_t cuts[] = {120, 220, 400};
  DynamicGraph dg = take_snapshots(tel, cuts);
  REQUIRE(dg.size() == 3);
  CHECK(dg.snapshot(1).num_edges() == 1);
  CHECK(dg.snapshot(1).has_vertex(real_id(9)));
  CHECK(dg.snapshot(2).num_edges() == 3);
  // 2-3 removed at 250.
  CHECK(dg.snapshot(3).num_edges() == 3);
  CHECK_FALSE(dg.snapshot(3).has_edge(real_id(2), real_id(3)));
  CHECK(dg.first_snapshot.at(real_id(4)) == 3);

  SnapshotOptions no_isolated;
  no_isolated.include_isolated = false;
  CHECK_FALSE(take_snapshots(tel, cuts, no_isolated).snapshot(1).has_vertex(real_id(9)));
}

TEST_CASE("konect fixture with a removal") {
  auto tel = load_temporal_edges(fixtures / "tiny.konect", EdgeListFormat::kKonect);
  CHECK(tel.rejected_self_loops == 1);
  REQUIRE(tel.records.size() == 4);
  CHECK(tel.num_vertices() == 4);
  const TemporalEdge gone{2, 3, 150, 250};
  CHECK(std::find(tel.records.begin(), tel.records.end(), gone) != tel.records.end());
  const std::int64_t cut[] = {400};
  CHECK(take_snapshots(tel, cut).snapshot(1).num_edges() == 3);
}

TEST_CASE("unmatched konect removals are counted") {
  auto tel = parse("1 2 -1 10\n", EdgeListFormat::kKonect);
  CHECK(tel.records.empty());
  CHECK(tel.unmatched_removals == 1);
}

TEST_CASE("snapshot edge cases") {
  auto tel = parse("1 2 100\n2 3 200\n");
  const std::int64_t before[] = {50};
  CHECK(take_snapshots(tel, before).snapshot(1).empty());
  const std::int64_t after[] = {1000};
  CHECK(take_snapshots(tel, after).snapshot(1).num_edges() == 2);
  const std::int64_t bad[] = {200, 200};
  CHECK_THROWS_AS(take_snapshots(tel, bad), ConfigError);
}

TEST_CASE("incremental data gives monotone snapshots") {
  auto tel = parse("1 2 1\n2 3 5\n3 4 9\n1 4 9\n5 6 13\nvertex 7 2\n");
  const auto cuts = regular_cuts(tel, CutInterval{2, false});
  CHECK(cuts.front() == 3);
  CHECK(cuts.back() >= 13);
  DynamicGraph dg = take_snapshots(tel, cuts);
  for (std::size_t i = 2; i <= dg.size(); ++i) {
    for (VertexId v : dg.snapshot(i - 1).vertices()) CHECK(dg.snapshot(i).has_vertex(v));
    CHECK(edges_subset(dg.snapshot(i - 1), dg.snapshot(i)));
  }
  CHECK(dg.snapshot(dg.size()).num_edges() == 5);
}

TEST_CASE("cut intervals") {
  CHECK(parse_cut_interval("90").amount == 90);
  CHECK(parse_cut_interval("2h").amount == 7200);
  CHECK(parse_cut_interval("1w").amount == 604800);
  auto six = parse_cut_interval("6mo");
  CHECK(six.calendar_months);
  CHECK(six.amount == 6);
  CHECK(parse_cut_interval("1y").amount == 12);
  CHECK_THROWS_AS(parse_cut_interval("mo"), ConfigError);
  CHECK_THROWS_AS(parse_cut_interval("3q"), ConfigError);
  CHECK_THROWS_AS(parse_cut_interval("0d"), ConfigError);
  CHECK(parse_cut_list("1,5,9") == std::vector<std::int64_t>{1, 5, 9});
  CHECK_THROWS_AS(parse_cut_list("1,,2"), ConfigError);
}

TEST_CASE("calendar cuts clamp to month ends") {
  // 2004-08-31 00:00:00 UTC and 2005-03-01.
  auto tel = parse("1 2 1093910400\n2 3 1109635200\n");
  const auto cuts = regular_cuts(tel, parse_cut_interval("6mo"));
  REQUIRE(cuts.size() == 2);
  CHECK(cuts[0] == 1109548800);  // 2005-02-28
  CHECK(cuts[1] == 1125446400);  // 2005-08-31
}

TEST_CASE("round trip through the plain format") {
  auto tel = load_temporal_edges(fixtures / "tiny.plain", EdgeListFormat::kPlain);
  std::ostringstream once;
  write_temporal_edges(once, tel);
  std::istringstream in(once.str());
  auto again = load_temporal_edges(in, EdgeListFormat::kPlain);
  CHECK(again.records == tel.records);
  CHECK(again.vertex_records == tel.vertex_records);
  std::ostringstream twice;
  write_temporal_edges(twice, again);
  CHECK(twice.str() == once.str());
}

TEST_CASE("synthetic export reproduces the snapshots") {
  SynthesizerConfig c;
  c.n0 = 6;
  c.me = 2;
  c.nv = 20;
  c.num_snapshots = 4;
  DynamicGraph dg = generate(c);
  auto tel = to_temporal_edges(dg);
  const std::int64_t cuts[] = {1, 2, 3, 4};
  DynamicGraph back = take_snapshots(tel, cuts);
  for (std::size_t i = 1; i <= 4; ++i) CHECK(back.snapshot(i) == dg.snapshot(i));
}
