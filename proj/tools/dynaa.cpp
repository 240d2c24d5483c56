// Command-line front end: run experiments, export synthetic graphs, inspect
// temporal datasets.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dynaa/errors.hpp"
#include "dynaa/harness.hpp"
#include "dynaa/ingest.hpp"
#include "dynaa/synthesizer.hpp"

namespace {

struct DatasetFlags {
  std::string path;
  std::string format = "plain";
  std::string cuts;
  std::string cut_every;
  bool include_isolated = true;
};

void add_dataset_flags(CLI::App* app, DatasetFlags& f, bool required) {
  auto* d = app->add_option("--dataset", f.path, "temporal edge list");
  if (required) d->required();
  app->add_option("--format", f.format, "plain or konect")
      ->check(CLI::IsMember({"plain", "konect"}));
  app->add_option("--cuts", f.cuts, "comma-separated cut timestamps");
  app->add_option("--cut-every", f.cut_every,
                  "cut spacing, e.g. 86400, 30d, 6mo, 1y");
  app->add_option("--include-isolated", f.include_isolated,
                  "keep vertices that have no edge yet (default true)");
}

void apply_dataset(dynaa::ExperimentConfig& cfg, const DatasetFlags& f) {
  if (f.path.empty()) return;
  cfg.set("dataset", f.path);
  cfg.set("format", f.format);
  if (!f.cuts.empty()) cfg.set("cuts", f.cuts);
  if (!f.cut_every.empty()) cfg.set("cut_every", f.cut_every);
  cfg.set("include_isolated", f.include_isolated ? "true" : "false");
}

int run(const std::string& config_path, const std::vector<std::string>& sets,
        const DatasetFlags& data, CLI::App* sub, std::size_t trials,
        std::uint64_t seed, double noise, bool no_temporal,
        const std::string& out, std::size_t refine_depth,
        std::size_t threads) {
  dynaa::ExperimentConfig cfg;
  if (!config_path.empty()) cfg = dynaa::parse_config_file(config_path);
  for (const std::string& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw dynaa::ConfigError("--set expects key=value, got '" + kv + "'");
    }
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  apply_dataset(cfg, data);
  if (sub->count("--trials")) cfg.trials = trials;
  if (sub->count("--seed")) cfg.seed = seed;
  if (sub->count("--noise-ratio")) cfg.noise_ratio = noise;
  if (no_temporal) cfg.temporal = false;
  if (sub->count("--out")) cfg.out_dir = out;
  if (sub->count("--refine-depth")) cfg.refine_depth = refine_depth;
  if (sub->count("--threads")) cfg.threads = threads;

  const dynaa::RunReport report = dynaa::run_experiment(cfg);
  dynaa::write_outputs(cfg.out_dir, report, cfg);
  std::size_t failed = 0;
  for (const auto& t : report.trials) {
    if (t.failed) {
      ++failed;
      std::cerr << "trial " << t.trial << " failed: " << t.error << '\n';
    }
  }
  for (const auto& s : report.summary) {
    std::cout << "snapshot " << s.snapshot << ": mean success "
              << dynaa::format_double(s.mean[1]) << " over " << s.samples
              << " trials\n";
  }
  std::cout << "wrote " << cfg.out_dir.string() << '\n';
  return failed == report.trials.size() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dynamic active re-identification attack simulator"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "play the publication game");
  std::string config_path, out = "out";
  std::vector<std::string> sets;
  std::size_t trials = 1, refine_depth = 1, threads = 0;
  std::uint64_t seed = 1;
  double noise = 0.005;
  bool no_temporal = false;
  DatasetFlags run_data;
  run_cmd->add_option("--config", config_path, "key=value config file")
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--set", sets, "override one config key (key=value)");
  run_cmd->add_option("--trials", trials)->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", seed);
  run_cmd->add_option("--noise-ratio", noise)->check(CLI::Range(0.0, 0.999999));
  run_cmd->add_flag("--no-temporal", no_temporal,
                    "disable the temporal consistency prunes");
  run_cmd->add_option("--out", out, "output directory");
  run_cmd->add_option("--refine-depth", refine_depth,
                      "how many later releases refine each attempt");
  run_cmd->add_option("--threads", threads, "0 = all cores");
  add_dataset_flags(run_cmd, run_data, false);

  auto* synth_cmd =
      app.add_subcommand("synth-export", "write a synthetic dynamic graph");
  dynaa::SynthesizerConfig sc;
  std::string synth_out;
  synth_cmd->add_option("--n0", sc.n0);
  synth_cmd->add_option("--me", sc.me);
  synth_cmd->add_option("--nv", sc.nv);
  synth_cmd->add_option("--r-delta", sc.r_delta);
  synth_cmd->add_option("--snapshots", sc.num_snapshots);
  synth_cmd->add_option("--seed", sc.seed);
  synth_cmd->add_option("--out", synth_out, "output file (default stdout)");

  auto* ingest_cmd =
      app.add_subcommand("ingest", "load a temporal dataset and cut it");
  DatasetFlags ingest_data;
  std::string export_path;
  add_dataset_flags(ingest_cmd, ingest_data, true);
  ingest_cmd->add_option("--export", export_path,
                         "write the canonical plain form here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      return run(config_path, sets, run_data, run_cmd, trials, seed, noise,
                 no_temporal, out, refine_depth, threads);
    }
    if (*synth_cmd) {
      const auto tel = dynaa::to_temporal_edges(dynaa::generate(sc));
      if (synth_out.empty()) {
        dynaa::write_temporal_edges(std::cout, tel);
      } else {
        std::ofstream f(synth_out, std::ios::binary);
        if (!f) throw dynaa::ConfigError("cannot write " + synth_out);
        dynaa::write_temporal_edges(f, tel);
      }
      return 0;
    }
    if (*ingest_cmd) {
      const auto fmt = dynaa::parse_format(ingest_data.format);
      const auto tel = dynaa::load_temporal_edges(ingest_data.path, fmt);
      std::cout << "vertices " << tel.num_vertices() << "\nedges "
                << tel.num_distinct_edges() << "\nrecords "
                << tel.records.size() << "\nrejected_self_loops "
                << tel.rejected_self_loops << '\n';
      if (!export_path.empty()) {
        std::ofstream f(export_path, std::ios::binary);
        if (!f) throw dynaa::ConfigError("cannot write " + export_path);
        dynaa::write_temporal_edges(f, tel);
      }
      std::vector<std::int64_t> cuts;
      if (!ingest_data.cuts.empty()) {
        cuts = dynaa::parse_cut_list(ingest_data.cuts);
      } else if (!ingest_data.cut_every.empty()) {
        cuts = dynaa::regular_cuts(
            tel, dynaa::parse_cut_interval(ingest_data.cut_every));
      }
      if (!cuts.empty()) {
        dynaa::SnapshotOptions opt;
        opt.include_isolated = ingest_data.include_isolated;
        const auto dg = dynaa::take_snapshots(tel, cuts, opt);
        std::cout << "snapshot,timestamp,vertices,edges\n";
        for (std::size_t i = 1; i <= dg.size(); ++i) {
          std::cout << i << ',' << dg.snapshots[i - 1].timestamp << ','
                    << dg.snapshot(i).num_vertices() << ','
                    << dg.snapshot(i).num_edges() << '\n';
        }
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
