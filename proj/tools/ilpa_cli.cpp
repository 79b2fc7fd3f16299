// Command-line front end: detect, experiment, sweep, generate, tsi, metrics.

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ilpa/ilpa.hpp"

namespace {

using namespace ilpa;

constexpr int kExitInput = 1;
constexpr int kExitParameter = 2;

struct CommonFlags {
  std::string algorithm = "ili-lpa";
  double beta = kDefaultBeta;
  std::string seeds = "0";
  std::size_t max_iter = kDefaultMaxIter;
  bool weighted_vote = false;
};

struct GeneratorFlags {
  NodeId n = 1000;
  NodeId k = 20;
  double avg_degree = 20.0;
  double mu = 0.3;
  std::uint64_t graph_seed = 0;

  PlantedPartitionSpec spec() const { return {n, k, avg_degree, mu, graph_seed}; }
};

struct OutputFlags {
  std::string output;
  std::string format = "csv";
  bool omit_timing = false;
  bool partitions = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--algorithm", f.algorithm, "lpa or ili-lpa")->check(CLI::IsMember({"lpa", "ili-lpa"}));
  cmd->add_option("--beta", f.beta, "tsi threshold for identical initialization, in (0, 1]")
      ->capture_default_str();
  cmd->add_option("--seeds", f.seeds, "seed, inclusive range a..b, or comma list")->capture_default_str();
  cmd->add_option("--max-iter", f.max_iter, "propagation pass limit")->capture_default_str();
  cmd->add_flag("--weighted-vote", f.weighted_vote, "experimental: weight neighbor votes by tsi");
}

void add_generator(CLI::App* cmd, GeneratorFlags& f) {
  cmd->add_option("--n", f.n, "generator node count")->capture_default_str();
  cmd->add_option("--k", f.k, "generator community count")->capture_default_str();
  cmd->add_option("--avg-degree", f.avg_degree, "generator mean degree")->capture_default_str();
  cmd->add_option("--graph-seed", f.graph_seed, "generator seed")->capture_default_str();
}

ExperimentConfig make_config(const CommonFlags& f) {
  ExperimentConfig cfg;
  cfg.algorithm = parse_algorithm(f.algorithm);
  cfg.beta = f.beta;
  cfg.seeds = parse_seeds(f.seeds);
  cfg.max_iter = f.max_iter;
  cfg.vote = f.weighted_vote ? VoteMode::tsi_weighted : VoteMode::unweighted;
  if (cfg.algorithm == Algorithm::ili_lpa) check_beta(cfg.beta);
  if (cfg.max_iter < 1) throw ParameterError("--max-iter must be at least 1");
  return cfg;
}

/// Output stream: the named file, or stdout when the path is empty or "-".
class Sink {
public:
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw InputError("cannot open output '" + path + "'");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
  std::unique_ptr<std::ofstream> file_;
};

Graph read_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open edge list '" + path + "'");
  LoadStats stats;
  Graph g = load_edge_list(in, &stats);
  if (stats.self_loops > 0) std::cerr << "warning: dropped " << stats.self_loops << " self-loop(s)\n";
  return g;
}

std::vector<double> parse_mu_values(const std::string& list, const std::string& range) {
  if (!list.empty() && !range.empty()) throw ParameterError("use either --mu or --mu-range");
  std::vector<double> out;
  if (!list.empty()) {
    std::stringstream ss(list);
    for (std::string tok; std::getline(ss, tok, ',');) {
      if (tok.empty()) continue;
      try {
        out.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw ParameterError("bad mixing value '" + tok + "'");
      }
    }
    return out;
  }
  double lo = 0.1, hi = 0.8, step = 0.05;
  if (!range.empty()) {
    char c1 = 0, c2 = 0;
    std::stringstream ss(range);
    if (!(ss >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0.0)
      throw ParameterError("--mu-range expects start:stop:step");
  }
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= count; ++i) out.push_back(std::round((lo + i * step) * 1e6) / 1e6);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Label propagation community detection with identical label initialization"};
  app.require_subcommand(1);

  CommonFlags common;
  GeneratorFlags gen;
  OutputFlags out;
  std::string input, truth, partition_file, mu_list, mu_range;
  unsigned threads = 1;

  auto* detect = app.add_subcommand("detect", "run one detection and print the partition");
  add_common(detect, common);
  detect->add_option("--input", input, "edge list")->required();
  detect->add_option("--output", out.output, "partition file (default stdout)");

  auto* experiment = app.add_subcommand("experiment", "multi-seed run with stability statistics");
  add_common(experiment, common);
  add_generator(experiment, gen);
  experiment->add_option("--mu", gen.mu, "generator mixing parameter")->capture_default_str();
  experiment->add_option("--input", input, "edge list (omit to use the generator)");
  experiment->add_option("--truth", truth, "ground-truth communities");
  experiment->add_option("--output", out.output, "result file (default stdout)");
  experiment->add_option("--format", out.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  experiment->add_option("--threads", threads, "worker threads")->capture_default_str();
  experiment->add_flag("--omit-timing", out.omit_timing, "write wall times as 0");
  experiment->add_flag("--partitions", out.partitions, "include final partitions in json output");

  auto* sweep = app.add_subcommand("sweep", "mixing-parameter sweep on planted partitions, both algorithms");
  add_common(sweep, common);
  add_generator(sweep, gen);
  sweep->add_option("--mu", mu_list, "comma separated mixing values");
  sweep->add_option("--mu-range", mu_range, "start:stop:step (default 0.1:0.8:0.05)");
  sweep->add_option("--output", out.output, "CSV file (default stdout)");

  auto* generate_cmd = app.add_subcommand("generate", "write a planted partition benchmark");
  add_generator(generate_cmd, gen);
  generate_cmd->add_option("--mu", gen.mu, "mixing parameter")->capture_default_str();
  generate_cmd->add_option("--output", out.output, "edge list file")->required();
  generate_cmd->add_option("--truth", truth, "ground-truth file")->required();

  auto* tsi_cmd = app.add_subcommand("tsi", "dump the link similarity table");
  tsi_cmd->add_option("--input", input, "edge list")->required();
  tsi_cmd->add_option("--output", out.output, "table file (default stdout)");

  auto* metrics_cmd = app.add_subcommand("metrics", "score a partition file");
  metrics_cmd->add_option("--input", input, "edge list")->required();
  metrics_cmd->add_option("--partition", partition_file, "partition in node/community format")->required();
  metrics_cmd->add_option("--truth", truth, "ground-truth communities");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParameter;
  }

  try {
    if (*detect) {
      auto cfg = make_config(common);
      if (cfg.seeds.size() != 1) throw ParameterError("detect takes exactly one seed");
      Graph g = read_graph(input);
      PropagationOptions opt;
      opt.max_iter = cfg.max_iter;
      opt.vote = cfg.vote;
      std::optional<TsiTable> table;
      if (cfg.algorithm == Algorithm::ili_lpa || cfg.vote == VoteMode::tsi_weighted) table.emplace(g);
      opt.weights = table ? &*table : nullptr;
      Labeling start = cfg.algorithm == Algorithm::lpa ? init_unique(g) : init_identical(g, *table, cfg.beta);
      RunReport run = propagate(g, std::move(start), cfg.seeds.front(), opt);
      auto p = Partition::from_labels(run.final.label);
      Sink sink(out.output);
      write_partition(sink.stream(), g, p);
      std::cerr << "communities=" << p.block_count() << " iterations=" << run.iterations
                << " converged=" << (run.converged ? "true" : "false");
      if (g.edge_count() > 0) std::cerr << " modularity=" << format_fixed(modularity(g, p), 6);
      std::cerr << '\n';
    } else if (*experiment) {
      auto cfg = make_config(common);
      cfg.threads = threads;
      cfg.keep_partitions = out.partitions;
      if (!input.empty()) {
        cfg.input = FileInput{input, truth.empty() ? std::nullopt : std::optional<std::string>(truth)};
      } else {
        if (!truth.empty()) throw ParameterError("--truth requires --input");
        cfg.input = gen.spec();
      }
      auto result = run_experiment(cfg);
      Sink sink(out.output);
      OutputOptions oo{out.omit_timing};
      if (out.format == "json") {
        write_experiment_json(sink.stream(), cfg, result, oo);
      } else {
        write_trials_csv(sink.stream(), result.trials, oo);
      }
      const auto& r = result.report;
      std::cerr << "modularity mean=" << format_fixed(r.modularity.mean, 4) << " std="
                << format_fixed(r.modularity.std, 4);
      if (r.nmi_vs_truth) std::cerr << " nmi mean=" << format_fixed(r.nmi_vs_truth->mean, 4);
      if (r.mean_pairwise_nmi) std::cerr << " pairwise nmi=" << format_fixed(*r.mean_pairwise_nmi, 4);
      std::cerr << '\n';
    } else if (*sweep) {
      auto cfg = make_config(common);
      cfg.input = gen.spec();
      const auto mus = parse_mu_values(mu_list, mu_range);
      auto rows = mu_sweep(cfg, mus);
      Sink sink(out.output);
      write_sweep_csv(sink.stream(), rows);
    } else if (*generate_cmd) {
      auto bench = generate(gen.spec());
      Sink edges(out.output);
      write_edge_list(edges.stream(), bench.graph);
      Sink truth_sink(truth);
      write_ground_truth(truth_sink.stream(), bench.graph, bench.truth.assignment);
    } else if (*tsi_cmd) {
      Graph g = read_graph(input);
      Sink sink(out.output);
      write_tsi_table(sink.stream(), compute_tsi_table(g));
    } else if (*metrics_cmd) {
      Graph g = read_graph(input);
      std::ifstream pin(partition_file);
      if (!pin) throw InputError("cannot open partition '" + partition_file + "'");
      auto p = Partition::from_labels(load_ground_truth(pin, g).assignment);
      std::cout << "communities " << community_count(p) << '\n';
      std::cout << "modularity " << format_fixed(modularity(g, p), 6) << '\n';
      if (!truth.empty()) {
        std::ifstream tin(truth);
        if (!tin) throw InputError("cannot open ground truth '" + truth + "'");
        auto t = Partition::from_labels(load_ground_truth(tin, g).assignment);
        std::cout << "nmi " << format_fixed(nmi(p, t), 6) << '\n';
      }
    }
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParameter;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}
