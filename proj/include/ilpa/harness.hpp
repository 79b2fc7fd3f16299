#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include "json.hpp"

#include "ilpa/bench_gen.hpp"
#include "ilpa/graph.hpp"
#include "ilpa/lpa.hpp"
#include "ilpa/metrics.hpp"
#include "ilpa/similarity.hpp"

namespace ilpa {

enum class Algorithm { lpa, ili_lpa };

inline std::string_view to_string(Algorithm a) { return a == Algorithm::lpa ? "lpa" : "ili-lpa"; }

inline Algorithm parse_algorithm(std::string_view s) {
  if (s == "lpa") return Algorithm::lpa;
  if (s == "ili-lpa") return Algorithm::ili_lpa;
  throw ParameterError("unknown algorithm '" + std::string(s) + "'");
}

/// Edge-list input with optional ground truth.
struct FileInput {
  std::string edges;
  std::optional<std::string> truth;
};

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::ili_lpa;
  double beta = kDefaultBeta;
  std::vector<Seed> seeds;
  std::size_t max_iter = kDefaultMaxIter;
  VoteMode vote = VoteMode::unweighted;
  std::variant<FileInput, PlantedPartitionSpec> input;
  bool keep_partitions = false;
  unsigned threads = 1;
};

struct TrialResult {
  Seed seed = 0;
  double modularity = 0.0;
  std::optional<double> nmi_vs_truth;
  std::size_t community_count = 0;
  std::size_t iterations = 0;
  bool converged = false;
  double wall_time_ms = 0.0;
  std::optional<Partition> partition;
};

struct Summary {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

inline Summary summarize(std::span<const double> xs) {
  Summary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  s.min = *std::min_element(xs.begin(), xs.end());
  s.max = *std::max_element(xs.begin(), xs.end());
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  double sq = 0.0;
  for (double x : xs) sq += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(sq / static_cast<double>(xs.size()));
  return s;
}

struct StabilityReport {
  Summary modularity;
  std::optional<Summary> nmi_vs_truth;
  Summary communities;
  Summary iterations;
  Summary wall_time_ms;
  double converged_fraction = 0.0;
  /// Mean NMI over all unordered pairs of trial partitions; empty with fewer
  /// than two trials.
  std::optional<double> mean_pairwise_nmi;
  std::size_t pair_count = 0;
  std::map<std::size_t, std::size_t> community_histogram;
};

struct ExperimentResult {
  std::vector<TrialResult> trials;
  StabilityReport report;
};

/// Parses "7", "0..99" (inclusive) or a comma separated mix of both.
inline std::vector<Seed> parse_seeds(std::string_view text) {
  std::vector<Seed> seeds;
  auto parse_one = [&](std::string_view tok) -> Seed {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string_view::npos)
      throw ParameterError("bad seed '" + std::string(tok) + "'");
    return std::stoull(std::string(tok));
  };
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    auto tok = text.substr(start, end - start);
    if (auto dots = tok.find(".."); dots != std::string_view::npos) {
      const Seed lo = parse_one(tok.substr(0, dots));
      const Seed hi = parse_one(tok.substr(dots + 2));
      if (hi < lo) throw ParameterError("empty seed range '" + std::string(tok) + "'");
      for (Seed s = lo; s <= hi; ++s) seeds.push_back(s);
    } else {
      seeds.push_back(parse_one(tok));
    }
    start = end + 1;
  }
  return seeds;
}

struct ResolvedInput {
  Graph graph;
  std::optional<GroundTruth> truth;
};

inline ResolvedInput resolve_input(const FileInput& in) {
  std::ifstream edges(in.edges);
  if (!edges) throw InputError("cannot open edge list '" + in.edges + "'");
  ResolvedInput r{load_edge_list(edges), std::nullopt};
  if (in.truth) {
    std::ifstream truth(*in.truth);
    if (!truth) throw InputError("cannot open ground truth '" + *in.truth + "'");
    r.truth = load_ground_truth(truth, r.graph);
  }
  return r;
}

inline ResolvedInput resolve_input(const PlantedPartitionSpec& spec) {
  auto b = generate(spec);
  return {std::move(b.graph), std::move(b.truth)};
}

/// Runs one detection and scores it.
inline TrialResult run_trial(const Graph& g, const TsiTable* table, const ExperimentConfig& cfg,
                             const std::optional<Partition>& truth, Seed seed) {
  PropagationOptions opt;
  opt.max_iter = cfg.max_iter;
  opt.vote = cfg.vote;
  opt.weights = table;

  const auto t0 = std::chrono::steady_clock::now();
  Labeling start = cfg.algorithm == Algorithm::lpa ? init_unique(g) : init_identical(g, *table, cfg.beta);
  RunReport run = propagate(g, std::move(start), seed, opt);
  const auto t1 = std::chrono::steady_clock::now();

  TrialResult r;
  r.seed = seed;
  auto p = Partition::from_labels(run.final.label);
  r.modularity = g.edge_count() > 0 ? modularity(g, p) : 0.0;
  if (truth) r.nmi_vs_truth = nmi(p, *truth);
  r.community_count = p.block_count();
  r.iterations = run.iterations;
  r.converged = run.converged;
  r.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  r.partition = std::move(p);
  return r;
}

inline StabilityReport summarize_trials(std::span<const TrialResult> trials) {
  StabilityReport rep;
  std::vector<double> q, nm, comm, iters, wall;
  std::size_t converged = 0;
  for (const auto& t : trials) {
    q.push_back(t.modularity);
    if (t.nmi_vs_truth) nm.push_back(*t.nmi_vs_truth);
    comm.push_back(static_cast<double>(t.community_count));
    iters.push_back(static_cast<double>(t.iterations));
    wall.push_back(t.wall_time_ms);
    converged += t.converged;
    ++rep.community_histogram[t.community_count];
  }
  rep.modularity = summarize(q);
  if (!nm.empty()) rep.nmi_vs_truth = summarize(nm);
  rep.communities = summarize(comm);
  rep.iterations = summarize(iters);
  rep.wall_time_ms = summarize(wall);
  if (!trials.empty()) rep.converged_fraction = static_cast<double>(converged) / trials.size();

  if (trials.size() >= 2) {
    double sum = 0.0;
    for (std::size_t a = 0; a < trials.size(); ++a)
      for (std::size_t b = a + 1; b < trials.size(); ++b) {
        sum += nmi(*trials[a].partition, *trials[b].partition);
        ++rep.pair_count;
      }
    rep.mean_pairwise_nmi = sum / static_cast<double>(rep.pair_count);
  }
  return rep;
}

/// Runs every seed of `cfg` on an already resolved input. Trials may execute
/// on several threads; results are ordered as cfg.seeds.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg, const ResolvedInput& input) {
  if (cfg.seeds.empty()) throw ParameterError("at least one seed is required");
  if (cfg.algorithm == Algorithm::ili_lpa) check_beta(cfg.beta);
  if (cfg.max_iter < 1) throw ParameterError("max_iter must be at least 1");

  const Graph& g = input.graph;
  std::optional<TsiTable> table;
  if (cfg.algorithm == Algorithm::ili_lpa || cfg.vote == VoteMode::tsi_weighted) table.emplace(g);
  std::optional<Partition> truth;
  if (input.truth) truth = Partition::from_labels(input.truth->assignment);
  const TsiTable* tp = table ? &*table : nullptr;

  ExperimentResult out;
  out.trials.resize(cfg.seeds.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(cfg.seeds.size())));
  if (workers == 1) {
    for (std::size_t k = 0; k < cfg.seeds.size(); ++k) out.trials[k] = run_trial(g, tp, cfg, truth, cfg.seeds[k]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t k; (k = next.fetch_add(1)) < cfg.seeds.size();)
          out.trials[k] = run_trial(g, tp, cfg, truth, cfg.seeds[k]);
      });
  }

  out.report = summarize_trials(out.trials);
  if (!cfg.keep_partitions)
    for (auto& t : out.trials) t.partition.reset();
  return out;
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const ResolvedInput input = std::visit([](const auto& in) { return resolve_input(in); }, cfg.input);
  return run_experiment(cfg, input);
}

struct SweepRow {
  double mixing = 0.0;
  Algorithm algorithm = Algorithm::lpa;
  Summary nmi;
  Summary modularity;
  Summary communities;
};

/// For every mixing value and both algorithms, averages NMI against the
/// planted communities and modularity over the seeds of `base`. Trial seed s
/// runs on its own graph, generated with seed base_spec.seed + s.
inline std::vector<SweepRow> mu_sweep(const ExperimentConfig& base, std::span<const double> mixing_values) {
  const auto* spec = std::get_if<PlantedPartitionSpec>(&base.input);
  if (!spec) throw ParameterError("mu sweep requires generator input");
  if (base.seeds.empty()) throw ParameterError("at least one seed is required");
  check_beta(base.beta);

  std::vector<SweepRow> rows;
  for (double mu : mixing_values) {
    PlantedPartitionSpec s = *spec;
    s.mixing = mu;
    validate(s);
    std::vector<double> nm[2], q[2], comm[2];
    for (Seed seed : base.seeds) {
      s.seed = spec->seed + seed;
      const ResolvedInput in = resolve_input(s);
      for (Algorithm a : {Algorithm::lpa, Algorithm::ili_lpa}) {
        ExperimentConfig cfg = base;
        cfg.algorithm = a;
        cfg.seeds = {seed};
        cfg.threads = 1;
        auto r = run_experiment(cfg, in);
        const auto idx = static_cast<std::size_t>(a);
        nm[idx].push_back(r.trials[0].nmi_vs_truth.value());
        q[idx].push_back(r.trials[0].modularity);
        comm[idx].push_back(static_cast<double>(r.trials[0].community_count));
      }
    }
    for (Algorithm a : {Algorithm::lpa, Algorithm::ili_lpa}) {
      const auto idx = static_cast<std::size_t>(a);
      rows.push_back({mu, a, summarize(nm[idx]), summarize(q[idx]), summarize(comm[idx])});
    }
  }
  return rows;
}

/// Smallest swept mixing value at which `algorithm`'s mean NMI falls below
/// `threshold`; empty if it never does.
inline std::optional<double> collapse_point(std::span<const SweepRow> rows, Algorithm algorithm,
                                            double threshold = 0.1) {
  std::optional<double> best;
  for (const auto& r : rows)
    if (r.algorithm == algorithm && r.nmi.mean < threshold && (!best || r.mixing < *best)) best = r.mixing;
  return best;
}

// Output ---------------------------------------------------------------------

inline constexpr std::string_view kTrialCsvHeader =
    "seed,modularity,nmi,communities,iterations,converged,wall_time_ms";

struct OutputOptions {
  bool omit_timing = false;  // write wall_time_ms as 0 for byte-stable files
};

inline std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline void write_trials_csv(std::ostream& out, std::span<const TrialResult> trials, OutputOptions opt = {}) {
  out << kTrialCsvHeader << '\n';
  for (const auto& t : trials) {
    out << t.seed << ',' << format_fixed(t.modularity, 6) << ','
        << (t.nmi_vs_truth ? format_fixed(*t.nmi_vs_truth, 6) : "") << ',' << t.community_count << ','
        << t.iterations << ',' << (t.converged ? "true" : "false") << ','
        << format_fixed(opt.omit_timing ? 0.0 : t.wall_time_ms, 3) << '\n';
  }
}

inline nlohmann::ordered_json to_json(const Summary& s) {
  return {{"mean", s.mean}, {"std", s.std}, {"min", s.min}, {"max", s.max}, {"count", s.count}};
}

inline nlohmann::ordered_json to_json(const StabilityReport& r, OutputOptions opt = {}) {
  nlohmann::ordered_json j;
  j["modularity"] = to_json(r.modularity);
  j["nmi"] = r.nmi_vs_truth ? to_json(*r.nmi_vs_truth) : nullptr;
  j["communities"] = to_json(r.communities);
  j["iterations"] = to_json(r.iterations);
  j["wall_time_ms"] = opt.omit_timing ? to_json(Summary{}) : to_json(r.wall_time_ms);
  j["converged_fraction"] = r.converged_fraction;
  j["mean_pairwise_nmi"] = r.mean_pairwise_nmi ? nlohmann::ordered_json(*r.mean_pairwise_nmi) : nullptr;
  j["pair_count"] = r.pair_count;
  auto& hist = j["community_histogram"] = nlohmann::ordered_json::object();
  for (auto [k, v] : r.community_histogram) hist[std::to_string(k)] = v;
  return j;
}

inline nlohmann::ordered_json to_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["algorithm"] = to_string(cfg.algorithm);
  j["beta"] = cfg.beta;
  j["max_iter"] = cfg.max_iter;
  j["vote"] = cfg.vote == VoteMode::unweighted ? "unweighted" : "tsi-weighted";
  j["seeds"] = cfg.seeds;
  if (const auto* f = std::get_if<FileInput>(&cfg.input)) {
    j["input"] = {{"edges", f->edges}, {"truth", f->truth ? nlohmann::ordered_json(*f->truth) : nullptr}};
  } else {
    const auto& s = std::get<PlantedPartitionSpec>(cfg.input);
    j["input"] = {{"generator", "planted-partition"}, {"n", s.n},   {"k", s.communities},
                  {"avg_degree", s.avg_degree},       {"mu", s.mixing}, {"seed", s.seed}};
  }
  return j;
}

inline void write_experiment_json(std::ostream& out, const ExperimentConfig& cfg, const ExperimentResult& r,
                                  OutputOptions opt = {}) {
  nlohmann::ordered_json j;
  j["config"] = to_json(cfg);
  auto& trials = j["trials"] = nlohmann::ordered_json::array();
  for (const auto& t : r.trials) {
    nlohmann::ordered_json tj;
    tj["seed"] = t.seed;
    tj["modularity"] = t.modularity;
    tj["nmi"] = t.nmi_vs_truth ? nlohmann::ordered_json(*t.nmi_vs_truth) : nullptr;
    tj["communities"] = t.community_count;
    tj["iterations"] = t.iterations;
    tj["converged"] = t.converged;
    tj["wall_time_ms"] = opt.omit_timing ? 0.0 : t.wall_time_ms;
    if (t.partition) {
      auto b = t.partition->block_of();
      tj["partition"] = std::vector<CommunityId>(b.begin(), b.end());
    }
    trials.push_back(std::move(tj));
  }
  j["summary"] = to_json(r.report, opt);
  out << j.dump(2) << '\n';
}

inline constexpr std::string_view kSweepCsvHeader =
    "mu,algorithm,nmi_mean,nmi_std,modularity_mean,modularity_std,communities_mean,seeds";

inline void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << kSweepCsvHeader << '\n';
  for (const auto& r : rows)
    out << format_fixed(r.mixing, 4) << ',' << to_string(r.algorithm) << ',' << format_fixed(r.nmi.mean, 6)
        << ',' << format_fixed(r.nmi.std, 6) << ',' << format_fixed(r.modularity.mean, 6) << ','
        << format_fixed(r.modularity.std, 6) << ',' << format_fixed(r.communities.mean, 3) << ','
        << r.nmi.count << '\n';
}

/// "node community" lines with external node ids; communities numbered by
/// their smallest member.
inline void write_partition(std::ostream& out, const Graph& g, const Partition& p) {
  write_ground_truth(out, g, p.block_of());
}

}  // namespace ilpa
