#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dynaa/adversary.hpp"
#include "dynaa/ingest.hpp"
#include "dynaa/metrics.hpp"
#include "dynaa/reident.hpp"
#include "dynaa/synthesizer.hpp"

namespace dynaa {

struct DatasetSource {
  std::filesystem::path path;
  EdgeListFormat format = EdgeListFormat::kPlain;
  // Exactly one of the two is used; explicit cuts win.
  std::vector<std::int64_t> cuts;
  std::optional<CutInterval> cut_every;
  SnapshotOptions snapshot_options;
};

struct ExperimentConfig {
  SynthesizerConfig synth;  // its seed is replaced per trial
  std::optional<DatasetSource> dataset;
  double noise_ratio = 0.005;
  ThetaSchedule theta;
  EtaSpec eta;
  AttackSchedule schedule;
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  bool temporal = true;
  std::size_t refine_depth = 1;
  std::size_t node_budget = 1'000'000;
  std::size_t threads = 0;  // 0: hardware concurrency
  std::filesystem::path out_dir = "out";

  // Throws ConfigError.
  void validate() const;
  // Sets one key from its text form. Throws ConfigError on unknown keys or
  // bad values.
  void set(std::string_view key, std::string_view value);
  // key=value lines in a fixed order. Runtime-only keys (threads, out) are
  // left out unless asked for, so they cannot perturb results.csv.
  std::string resolved(bool include_runtime = false) const;
};

// key=value lines, '#' comments, blank lines ignored. Throws ParseError or
// ConfigError.
ExperimentConfig parse_config(std::istream& in,
                              ExperimentConfig base = ExperimentConfig{});
ExperimentConfig parse_config_file(const std::filesystem::path& path,
                                   ExperimentConfig base = ExperimentConfig{});

struct SnapshotRow {
  std::size_t trial = 0;
  std::size_t snapshot = 0;
  std::size_t n_vertices = 0;  // released graph
  std::size_t n_edges = 0;
  std::size_t n_sybils = 0;
  std::size_t n_victims = 0;
  std::size_t n_candidates = 0;
  std::size_t n_mappings_selected = 0;
  double success_prob = 0.0;
  double success_prob_refined = 0.0;
  UtilityReport utility;
  bool truncated = false;
  double retrieval_seconds = 0.0;
  double matching_seconds = 0.0;
  double refine_seconds = 0.0;  // spent later refining this snapshot
};

struct TrialOutcome {
  std::size_t trial = 0;
  bool failed = false;
  std::string error;
  std::vector<SnapshotRow> rows;
};

struct SnapshotSummary {
  std::size_t snapshot = 0;
  std::size_t samples = 0;
  // Mean and sample variance, in column order of kSummaryMetrics.
  std::vector<double> mean;
  std::vector<double> variance;
};

struct RunReport {
  std::string config_text;  // resolved(false)
  std::uint64_t master_seed = 0;
  std::vector<TrialOutcome> trials;
  std::vector<SnapshotSummary> summary;
};

// Metric names of SnapshotSummary::mean / variance.
inline constexpr std::string_view kSummaryMetrics[] = {
    "success_prob", "success_prob_refined", "n_candidates",
    "edge_edit_pct", "lcc_var",             "degree_kl",
    "attack_seconds"};

// The dynamic graph a trial plays on: synthesized from `trial_seed`, or the
// preloaded dataset.
DynamicGraph trial_graph(const ExperimentConfig& config,
                         std::uint64_t trial_seed,
                         const DynamicGraph* dataset);

// Loads and cuts the configured dataset.
DynamicGraph load_dataset(const DatasetSource& source);

// One full game. Errors are caught and reported in the outcome.
TrialOutcome run_trial(const ExperimentConfig& config, std::size_t trial,
                       const DynamicGraph* dataset = nullptr);

// All trials on a worker pool, then the per-snapshot summary. The report
// does not depend on the number of workers.
RunReport run_experiment(const ExperimentConfig& config);

// Concatenates reports of one configuration (seeds may differ) and
// recomputes the summary. Throws ConfigError on mixed configurations.
RunReport aggregate(std::span<const RunReport> reports);

std::vector<SnapshotSummary> summarize(std::span<const TrialOutcome> trials);

// Deterministic: no timing columns.
void write_results_csv(std::ostream& out, const RunReport& report);
void write_timings_csv(std::ostream& out, const RunReport& report);
void write_summary_csv(std::ostream& out, const RunReport& report);
// results.csv, timings.csv, summary.csv and config.resolved.txt.
void write_outputs(const std::filesystem::path& dir, const RunReport& report,
                   const ExperimentConfig& config);

// Shortest round-trip text of a double.
std::string format_double(double v);

}  // namespace dynaa
