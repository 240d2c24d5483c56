#include "dynaa/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <deque>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "dynaa/consistency.hpp"
#include "dynaa/defender.hpp"
#include "dynaa/errors.hpp"

namespace dynaa {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T v{};
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) {
    throw ConfigError("bad value for " + std::string(key) + ": '" +
                      std::string(text) + "'");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") {
    return true;
  }
  if (text == "false" || text == "0" || text == "no" || text == "off") {
    return false;
  }
  throw ConfigError("bad boolean for " + std::string(key) + ": '" +
                    std::string(text) + "'");
}

std::string join(std::span<const std::int64_t> xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(xs[i]);
  }
  return s;
}

std::string join(std::span<const ReleaseIndex> xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(xs[i]);
  }
  return s;
}

std::string format_name(EdgeListFormat f) {
  return f == EdgeListFormat::kKonect ? "konect" : "plain";
}

std::string format_opt(const std::optional<double>& v) {
  return v ? format_double(*v) : "NA";
}

// Legitimate graph plus the adversary's vertices and edges.
Graph owner_graph(const Graph& legit, const AdversaryState& state) {
  Graph g = legit;
  for (const auto& [v, nb] : state.own_edges.adjacency()) {
    g.add_vertex(v);
    for (VertexId w : nb) {
      if (v < w) g.add_edge(v, w);
    }
  }
  return g;
}

struct Attempt {
  ReleaseIndex release;
  std::size_t row;
  ReidentResult result;
  AttackKnowledge knowledge;
  Graph g_star;
  VertexSet sybils;
  VertexSet victims;
  IsomorphismMap truth;
};

std::vector<SnapshotRow> play(const ExperimentConfig& cfg, std::size_t trial,
                              const DynamicGraph* dataset) {
  const std::uint64_t trial_seed = derive_seed(cfg.seed, trial);
  const DynamicGraph dg = trial_graph(cfg, trial_seed, dataset);
  if (dg.size() == 0) throw DomainError("dynamic graph has no snapshots");

  Rng adv_rng(derive_seed(trial_seed, "adversary"));
  const std::uint64_t defender_seed = derive_seed(trial_seed, "defender");
  Rng def_rng(defender_seed);
  Rng att_rng(derive_seed(trial_seed, "attack"));

  std::uint64_t first_sybil = 0;
  for (const auto& [v, _] : dg.first_snapshot) {
    first_sybil = std::max(first_sybil, v.value + 1);
  }
  AdversaryState state(std::max<std::uint64_t>(first_sybil, 1ULL << 40));
  TemporalIndex index;
  OmniscientIndex omniscient;
  PseudonymLedger pseudonyms(derive_seed(defender_seed, "pseudonyms"));
  NoiseLedger noise;

  const AttackSchedule& sched = cfg.schedule;
  const std::size_t initial_sybils = sybil_cap(dg.snapshot(1).num_vertices());
  const RetrievalOptions retrieval{cfg.temporal, cfg.node_budget};

  std::vector<SnapshotRow> rows;
  std::deque<Attempt> attempts;
  std::size_t last_release_size = 0;

  for (ReleaseIndex i = 1; i <= dg.size(); ++i) {
    const Graph& legit = dg.snapshot(i);

    // Adversary phase.
    state.drop_vanished_victims(legit);
    const auto& span = sched.creation_span;
    const auto at = std::find(span.begin(), span.end(), i);
    if (at != span.end()) {
      const auto k = static_cast<std::size_t>(at - span.begin());
      const std::size_t share = initial_sybils / span.size() +
                                (k < initial_sybils % span.size() ? 1 : 0);
      create_sybil_subgraph(state, legit, share, {}, i, adv_rng);
    } else if (i > span.back()) {
      update_sybil_subgraph(state, last_release_size, i, sched, adv_rng);
      if (!state.reident_history.empty()) {
        perturb_fingerprints(state, select_uncertain_victims(state), adv_rng);
      }
    }
    if (i >= span.front()) {
      target_new_victims(state, legit, sched.min_new_victims,
                         sched.max_new_victims, i, adv_rng);
    }
    for (const auto& [s, r] : state.sybil_inserted) index.record_sybil(s, r);
    for (const auto& [y, r] : state.first_targeted) index.record_targeted(y, r);

    const Graph g_plus = owner_graph(legit, state);
    state.check_invariants(g_plus.num_vertices());
    omniscient.register_release(i, g_plus);

    // Defender phase.
    auto [g_pseudo, phi] = pseudonymize(g_plus, pseudonyms);
    Graph g_star =
        add_cumulative_noise(g_pseudo, noise, cfg.noise_ratio, i, def_rng);
    index.register_release(i, g_star);
    last_release_size = g_star.num_vertices();

    // Refinement of earlier attempts against this release.
    const VertexSet sybils_now(state.sybils.begin(), state.sybils.end());
    const VertexSet released = g_star.vertex_set();
    for (Attempt& a : attempts) {
      if (i - a.release > cfg.refine_depth) continue;
      const auto start = Clock::now();
      const MatchOptions mo{cfg.eta.at(a.knowledge.sybils.size()),
                            cfg.temporal};
      a.result = refine(a.result, a.sybils, sybils_now, released, a.g_star,
                        a.knowledge, index, mo);
      rows[a.row].success_prob_refined =
          success_probability(a.result, a.truth, a.victims);
      rows[a.row].refine_seconds += seconds_since(start);
    }
    std::erase_if(attempts, [&](const Attempt& a) {
      return i - a.release >= cfg.refine_depth;
    });

    if (i < sched.first_attack) continue;

    // Attack phase.
    SnapshotRow row;
    row.trial = trial;
    row.snapshot = i;
    row.n_vertices = g_star.num_vertices();
    row.n_edges = g_star.num_edges();
    row.n_sybils = state.sybils.size();
    row.n_victims = state.victims.size();
    row.utility = utility_report(g_plus, g_star, phi);

    AttackKnowledge knowledge = state.knowledge(i);
    const MatchOptions mo{cfg.eta.at(knowledge.sybils.size()), cfg.temporal};
    ReidentResult result;
    result.release = i;
    auto start = Clock::now();
    auto found = retrieve_sybil_candidates(g_star, knowledge, index,
                                           cfg.theta.at(i), retrieval);
    row.retrieval_seconds = seconds_since(start);
    start = Clock::now();
    result.truncated = found.truncated;
    result.candidates = std::move(found.candidates);
    for (const auto& x : result.candidates) {
      bool over = false;
      result.mappings.push_back(
          match_fingerprints(g_star, x, knowledge, index, mo, &over));
      if (over) ++result.overflowed;
    }
    row.matching_seconds = seconds_since(start);

    row.truncated = result.truncated;
    row.n_candidates = result.candidates.size();
    if (auto pick = select_candidate(result.candidates, att_rng)) {
      row.n_mappings_selected = result.mappings[*pick].size();
    }
    const VertexSet victims = state.victims;
    row.success_prob = success_probability(result, phi, victims);
    row.success_prob_refined = row.success_prob;
    state.reident_history[i] = result;

    rows.push_back(row);
    if (cfg.refine_depth > 0 && i < dg.size()) {
      attempts.push_back({i, rows.size() - 1, std::move(result),
                          std::move(knowledge), std::move(g_star),
                          VertexSet(state.sybils.begin(), state.sybils.end()),
                          victims, std::move(phi)});
    }
  }
  return rows;
}

std::string strip_seed_lines(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.starts_with("seed=") || line.starts_with("trials=")) continue;
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!dataset) synth.validate();
  if (!(noise_ratio >= 0.0 && noise_ratio < 1.0)) {
    throw ConfigError("noise_ratio must lie in [0, 1)");
  }
  theta.validate();
  schedule.validate();
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (node_budget < 1) throw ConfigError("node_budget must be positive");
  if (dataset) {
    if (dataset->path.empty()) throw ConfigError("dataset path is empty");
    if (dataset->cuts.empty() && !dataset->cut_every) {
      throw ConfigError("dataset needs cuts or cut_every");
    }
  }
}

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  auto ds = [this]() -> DatasetSource& {
    if (!dataset) dataset.emplace();
    return *dataset;
  };
  if (key == "n0") {
    synth.n0 = parse_number<std::size_t>(key, value);
  } else if (key == "me") {
    synth.me = parse_number<std::size_t>(key, value);
  } else if (key == "nv") {
    synth.nv = parse_number<std::size_t>(key, value);
  } else if (key == "r_delta") {
    synth.r_delta = parse_number<double>(key, value);
  } else if (key == "snapshots") {
    synth.num_snapshots = parse_number<std::size_t>(key, value);
  } else if (key == "noise_ratio") {
    noise_ratio = parse_number<double>(key, value);
  } else if (key == "theta") {
    theta = parse_theta_schedule(value);
  } else if (key == "eta") {
    eta = parse_eta(value);
  } else if (key == "min_new_victims") {
    schedule.min_new_victims = parse_number<std::size_t>(key, value);
  } else if (key == "max_new_victims") {
    schedule.max_new_victims = parse_number<std::size_t>(key, value);
  } else if (key == "replacement_divisor") {
    schedule.replacement_divisor = parse_number<std::size_t>(key, value);
  } else if (key == "creation_span") {
    schedule.creation_span.clear();
    for (std::int64_t r : parse_cut_list(value)) {
      if (r < 1) throw ConfigError("creation_span releases are 1-based");
      schedule.creation_span.push_back(static_cast<ReleaseIndex>(r));
    }
  } else if (key == "first_attack") {
    schedule.first_attack = parse_number<std::size_t>(key, value);
  } else if (key == "trials") {
    trials = parse_number<std::size_t>(key, value);
  } else if (key == "seed") {
    seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "temporal") {
    temporal = parse_bool(key, value);
  } else if (key == "refine_depth") {
    refine_depth = parse_number<std::size_t>(key, value);
  } else if (key == "node_budget") {
    node_budget = parse_number<std::size_t>(key, value);
  } else if (key == "threads") {
    threads = parse_number<std::size_t>(key, value);
  } else if (key == "out") {
    out_dir = std::string(value);
  } else if (key == "dataset") {
    ds().path = std::string(value);
  } else if (key == "format") {
    ds().format = parse_format(value);
  } else if (key == "cuts") {
    ds().cuts = parse_cut_list(value);
  } else if (key == "cut_every") {
    ds().cut_every = parse_cut_interval(value);
  } else if (key == "include_isolated") {
    ds().snapshot_options.include_isolated = parse_bool(key, value);
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

std::string ExperimentConfig::resolved(bool include_runtime) const {
  std::ostringstream os;
  if (dataset) {
    os << "dataset=" << dataset->path.string() << '\n'
       << "format=" << format_name(dataset->format) << '\n';
    if (!dataset->cuts.empty()) {
      os << "cuts=" << join(std::span<const std::int64_t>(dataset->cuts))
         << '\n';
    } else if (dataset->cut_every) {
      os << "cut_every=" << dataset->cut_every->amount
         << (dataset->cut_every->calendar_months ? "mo" : "") << '\n';
    }
    os << "include_isolated="
       << (dataset->snapshot_options.include_isolated ? "true" : "false")
       << '\n';
  } else {
    os << "n0=" << synth.n0 << '\n'
       << "me=" << synth.me << '\n'
       << "nv=" << synth.nv << '\n'
       << "r_delta=" << format_double(synth.r_delta) << '\n'
       << "snapshots=" << synth.num_snapshots << '\n';
  }
  os << "noise_ratio=" << format_double(noise_ratio) << '\n'
     << "theta=" << format_double(theta.base) << ','
     << format_double(theta.scale) << ',' << format_double(theta.exponent)
     << ',' << format_double(theta.cap) << '\n'
     << "eta=" << (eta.half_sybils ? "half" : std::to_string(eta.fixed))
     << '\n'
     << "min_new_victims=" << schedule.min_new_victims << '\n'
     << "max_new_victims=" << schedule.max_new_victims << '\n'
     << "replacement_divisor=" << schedule.replacement_divisor << '\n'
     << "creation_span="
     << join(std::span<const ReleaseIndex>(schedule.creation_span)) << '\n'
     << "first_attack=" << schedule.first_attack << '\n'
     << "trials=" << trials << '\n'
     << "seed=" << seed << '\n'
     << "temporal=" << (temporal ? "true" : "false") << '\n'
     << "refine_depth=" << refine_depth << '\n'
     << "node_budget=" << node_budget << '\n';
  if (include_runtime) {
    os << "threads=" << threads << '\n' << "out=" << out_dir.string() << '\n';
  }
  return os.str();
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto hash = line.find('#');
    const std::string body =
        trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError(n, "expected key=value");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ParseError(n, "empty key");
    try {
      base.set(key, value);
    } catch (const ConfigError& e) {
      throw ParseError(n, e.what());
    }
  }
  return base;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path,
                                   ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse_config(in, std::move(base));
}

DynamicGraph load_dataset(const DatasetSource& source) {
  const TemporalEdgeList tel = load_temporal_edges(source.path, source.format);
  std::vector<std::int64_t> cuts = source.cuts;
  if (cuts.empty() && source.cut_every) {
    cuts = regular_cuts(tel, *source.cut_every);
  }
  return take_snapshots(tel, cuts, source.snapshot_options);
}

DynamicGraph trial_graph(const ExperimentConfig& config,
                         std::uint64_t trial_seed,
                         const DynamicGraph* dataset) {
  if (config.dataset) {
    if (dataset) return *dataset;
    return load_dataset(*config.dataset);
  }
  SynthesizerConfig sc = config.synth;
  sc.seed = derive_seed(trial_seed, "synth");
  return generate(sc);
}

TrialOutcome run_trial(const ExperimentConfig& config, std::size_t trial,
                       const DynamicGraph* dataset) {
  TrialOutcome out;
  out.trial = trial;
  try {
    out.rows = play(config, trial, dataset);
  } catch (const std::exception& e) {
    out.failed = true;
    out.error = e.what();
    out.rows.clear();
  }
  return out;
}

RunReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::optional<DynamicGraph> data;
  if (config.dataset) data = load_dataset(*config.dataset);

  RunReport report;
  report.config_text = config.resolved();
  report.master_seed = config.seed;
  report.trials.resize(config.trials);

  std::size_t workers = config.threads;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, config.trials);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < config.trials;) {
      report.trials[t] = run_trial(config, t, data ? &*data : nullptr);
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  pool.clear();

  report.summary = summarize(report.trials);
  return report;
}

std::vector<SnapshotSummary> summarize(std::span<const TrialOutcome> trials) {
  constexpr std::size_t kMetrics = std::size(kSummaryMetrics);
  std::map<std::size_t, std::vector<std::vector<double>>> samples;
  std::map<std::size_t, std::size_t> counts;
  for (const TrialOutcome& t : trials) {
    if (t.failed) continue;
    for (const SnapshotRow& r : t.rows) {
      auto& s = samples[r.snapshot];
      s.resize(kMetrics);
      ++counts[r.snapshot];
      const std::optional<double> values[kMetrics] = {
          r.success_prob,
          r.success_prob_refined,
          static_cast<double>(r.n_candidates),
          r.utility.edge_edit_pct,
          r.utility.lcc_variation,
          r.utility.degree_kl,
          r.retrieval_seconds + r.matching_seconds};
      for (std::size_t m = 0; m < kMetrics; ++m) {
        if (values[m]) s[m].push_back(*values[m]);
      }
    }
  }
  std::vector<SnapshotSummary> out;
  for (const auto& [snap, per_metric] : samples) {
    SnapshotSummary s;
    s.snapshot = snap;
    s.samples = counts[snap];
    for (const auto& xs : per_metric) {
      // Shifted by the first sample so equal samples give exactly zero.
      const double shift = xs.empty() ? 0.0 : xs.front();
      double dmean = 0.0;
      for (double x : xs) dmean += x - shift;
      if (!xs.empty()) dmean /= static_cast<double>(xs.size());
      double var = 0.0;
      for (double x : xs) var += (x - shift - dmean) * (x - shift - dmean);
      if (xs.size() > 1) var /= static_cast<double>(xs.size() - 1);
      const double mean = shift + dmean;
      s.mean.push_back(xs.empty() ? std::nan("") : mean);
      s.variance.push_back(xs.size() > 1 ? var : 0.0);
    }
    out.push_back(std::move(s));
  }
  return out;
}

RunReport aggregate(std::span<const RunReport> reports) {
  RunReport out;
  if (reports.empty()) return out;
  out.config_text = reports.front().config_text;
  out.master_seed = reports.front().master_seed;
  const std::string shape = strip_seed_lines(out.config_text);
  std::size_t offset = 0;
  for (const RunReport& r : reports) {
    if (strip_seed_lines(r.config_text) != shape) {
      throw ConfigError("cannot aggregate reports of different configs");
    }
    std::size_t span = 0;
    for (TrialOutcome t : r.trials) {
      span = std::max(span, t.trial + 1);
      t.trial += offset;
      for (auto& row : t.rows) row.trial = t.trial;
      out.trials.push_back(std::move(t));
    }
    offset += span;
  }
  out.summary = summarize(out.trials);
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

void write_results_csv(std::ostream& out, const RunReport& report) {
  std::istringstream cfg(report.config_text);
  for (std::string line; std::getline(cfg, line);) out << "# " << line << '\n';
  out << "# master_seed=" << report.master_seed << '\n'
      << "# degree_kl=KL(original||released)\n";
  for (const TrialOutcome& t : report.trials) {
    if (t.failed) out << "# failed_trial=" << t.trial << ": " << t.error << '\n';
  }
  out << "trial,snapshot,n_vertices,n_edges,n_sybils,n_victims,n_candidates,"
         "n_mappings_selected,success_prob,success_prob_refined,"
         "edge_edit_pct,lcc_var,degree_kl\n";
  for (const TrialOutcome& t : report.trials) {
    for (const SnapshotRow& r : t.rows) {
      out << r.trial << ',' << r.snapshot << ',' << r.n_vertices << ','
          << r.n_edges << ',' << r.n_sybils << ',' << r.n_victims << ','
          << r.n_candidates << ',' << r.n_mappings_selected << ','
          << format_double(r.success_prob) << ','
          << format_double(r.success_prob_refined) << ','
          << format_opt(r.utility.edge_edit_pct) << ','
          << format_opt(r.utility.lcc_variation) << ','
          << format_opt(r.utility.degree_kl) << '\n';
    }
  }
}

void write_timings_csv(std::ostream& out, const RunReport& report) {
  out << "trial,snapshot,retrieval_seconds,matching_seconds,refine_seconds,"
         "retrieval_truncated\n";
  for (const TrialOutcome& t : report.trials) {
    for (const SnapshotRow& r : t.rows) {
      out << r.trial << ',' << r.snapshot << ','
          << format_double(r.retrieval_seconds) << ','
          << format_double(r.matching_seconds) << ','
          << format_double(r.refine_seconds) << ',' << (r.truncated ? 1 : 0)
          << '\n';
    }
  }
}

void write_summary_csv(std::ostream& out, const RunReport& report) {
  out << "snapshot,samples";
  for (std::string_view m : kSummaryMetrics) {
    out << ",mean_" << m << ",var_" << m;
  }
  out << '\n';
  for (const SnapshotSummary& s : report.summary) {
    out << s.snapshot << ',' << s.samples;
    for (std::size_t m = 0; m < s.mean.size(); ++m) {
      out << ',' << format_double(s.mean[m]) << ','
          << format_double(s.variance[m]);
    }
    out << '\n';
  }
}

void write_outputs(const std::filesystem::path& dir, const RunReport& report,
                   const ExperimentConfig& config) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("results.csv");
    write_results_csv(f, report);
  }
  {
    auto f = open("timings.csv");
    write_timings_csv(f, report);
  }
  {
    auto f = open("summary.csv");
    write_summary_csv(f, report);
  }
  {
    auto f = open("config.resolved.txt");
    f << config.resolved(true);
  }
}

}  // namespace dynaa
