#include <gtest/gtest.h>

#include <sstream>

#include "ilpa/harness.hpp"
#include "oracles.hpp"

namespace ilpa {
namespace {

ExperimentConfig karate_config(Algorithm a, const std::string& seeds) {
  ExperimentConfig cfg;
  cfg.algorithm = a;
  cfg.seeds = parse_seeds(seeds);
  cfg.input = FileInput{testing::data_path("karate.edges"), testing::data_path("karate.truth")};
  return cfg;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

TEST(ParseSeeds, Forms) {
  EXPECT_EQ(parse_seeds("7"), (std::vector<Seed>{7}));
  EXPECT_EQ(parse_seeds("0..3"), (std::vector<Seed>{0, 1, 2, 3}));
  EXPECT_EQ(parse_seeds("1,5..6,9"), (std::vector<Seed>{1, 5, 6, 9}));
  EXPECT_THROW(parse_seeds(""), ParameterError);
  EXPECT_THROW(parse_seeds("3..1"), ParameterError);
  EXPECT_THROW(parse_seeds("x"), ParameterError);
  EXPECT_THROW(parse_seeds("-1"), ParameterError);
}

TEST(Summarize, Basics) {
  std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
  Summary s = summarize(xs);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.std, std::sqrt(1.25));
  EXPECT_EQ(s.min, 1.0);
  EXPECT_EQ(s.max, 4.0);
  EXPECT_EQ(s.count, 4u);
}

TEST(RunExperiment, KarateIliLpaModularityBand) {
  auto r = run_experiment(karate_config(Algorithm::ili_lpa, "0..99"));
  ASSERT_EQ(r.trials.size(), 100u);
  for (std::size_t k = 0; k < r.trials.size(); ++k) EXPECT_EQ(r.trials[k].seed, k);
  EXPECT_GE(r.report.modularity.mean, 0.32);
  EXPECT_LE(r.report.modularity.mean, 0.42);
  ASSERT_TRUE(r.report.nmi_vs_truth);
  EXPECT_EQ(r.report.pair_count, 100u * 99u / 2u);
  EXPECT_EQ(r.report.converged_fraction, 1.0);
}

TEST(RunExperiment, KaratePairwiseStability) {
  auto lpa = run_experiment(karate_config(Algorithm::lpa, "0..99"));
  auto ili = run_experiment(karate_config(Algorithm::ili_lpa, "0..99"));
  ASSERT_TRUE(lpa.report.mean_pairwise_nmi && ili.report.mean_pairwise_nmi);
  RecordProperty("lpa_pairwise_nmi", std::to_string(*lpa.report.mean_pairwise_nmi));
  RecordProperty("ili_pairwise_nmi", std::to_string(*ili.report.mean_pairwise_nmi));
  EXPECT_LE(*lpa.report.mean_pairwise_nmi, *ili.report.mean_pairwise_nmi);
}

TEST(RunExperiment, SingleSeedHasNoSpread) {
  auto r = run_experiment(karate_config(Algorithm::lpa, "3"));
  ASSERT_EQ(r.trials.size(), 1u);
  EXPECT_EQ(r.report.modularity.std, 0.0);
  EXPECT_EQ(r.report.communities.std, 0.0);
  EXPECT_FALSE(r.report.mean_pairwise_nmi);
  EXPECT_EQ(r.report.pair_count, 0u);
}

TEST(RunExperiment, NmiOnlyWithTruth) {
  auto cfg = karate_config(Algorithm::lpa, "0..4");
  std::get<FileInput>(cfg.input).truth.reset();
  auto r = run_experiment(cfg);
  for (const auto& t : r.trials) EXPECT_FALSE(t.nmi_vs_truth);
  EXPECT_FALSE(r.report.nmi_vs_truth);
}

TEST(RunExperiment, ThreadsDoNotChangeResults) {
  auto cfg = karate_config(Algorithm::ili_lpa, "0..39");
  cfg.keep_partitions = true;
  auto serial = run_experiment(cfg);
  cfg.threads = 4;
  auto pooled = run_experiment(cfg);
  ASSERT_EQ(serial.trials.size(), pooled.trials.size());
  for (std::size_t k = 0; k < serial.trials.size(); ++k) {
    EXPECT_EQ(serial.trials[k].seed, pooled.trials[k].seed);
    EXPECT_EQ(serial.trials[k].modularity, pooled.trials[k].modularity);
    EXPECT_EQ(serial.trials[k].partition, pooled.trials[k].partition);
  }
}

TEST(RunExperiment, GeneratorInput) {
  ExperimentConfig cfg;
  cfg.seeds = parse_seeds("0..4");
  cfg.input = PlantedPartitionSpec{300, 6, 10.0, 0.2, 3};
  auto r = run_experiment(cfg);
  ASSERT_TRUE(r.report.nmi_vs_truth);
  EXPECT_GT(r.report.nmi_vs_truth->mean, 0.9);
}

TEST(RunExperiment, Errors) {
  auto cfg = karate_config(Algorithm::ili_lpa, "0");
  cfg.seeds.clear();
  EXPECT_THROW(run_experiment(cfg), ParameterError);
  cfg = karate_config(Algorithm::ili_lpa, "0");
  cfg.beta = 1.2;
  EXPECT_THROW(run_experiment(cfg), ParameterError);
  cfg = karate_config(Algorithm::lpa, "0");
  cfg.input = FileInput{"/nonexistent/graph.txt", std::nullopt};
  EXPECT_THROW(run_experiment(cfg), InputError);
  cfg.input = PlantedPartitionSpec{30, 10, 10.0, 0.2, 0};
  EXPECT_THROW(run_experiment(cfg), ParameterError);
}

TEST(Output, CsvIsStableAndShaped) {
  auto cfg = karate_config(Algorithm::ili_lpa, "0..9");
  std::ostringstream a, b;
  write_trials_csv(a, run_experiment(cfg).trials, {true});
  write_trials_csv(b, run_experiment(cfg).trials, {true});
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(count_lines(a.str()), 1u + 10u);
  EXPECT_EQ(a.str().substr(0, kTrialCsvHeader.size()), kTrialCsvHeader);
}

TEST(Output, JsonCarriesConfigTrialsAndPartitions) {
  auto cfg = karate_config(Algorithm::lpa, "0..2");
  cfg.keep_partitions = true;
  auto r = run_experiment(cfg);
  std::ostringstream out;
  write_experiment_json(out, cfg, r, {true});
  auto j = nlohmann::json::parse(out.str());
  EXPECT_EQ(j["config"]["algorithm"], "lpa");
  EXPECT_EQ(j["config"]["beta"], 0.35);
  ASSERT_EQ(j["trials"].size(), 3u);
  EXPECT_EQ(j["trials"][0]["partition"].size(), 34u);
  EXPECT_EQ(j["trials"][1]["wall_time_ms"], 0.0);
  EXPECT_EQ(j["summary"]["pair_count"], 3u);

  std::ostringstream again;
  write_experiment_json(again, cfg, run_experiment(cfg), {true});
  EXPECT_EQ(out.str(), again.str());
}

TEST(MuSweep, EmptyListGivesEmptyTable) {
  ExperimentConfig cfg;
  cfg.seeds = {0};
  cfg.input = PlantedPartitionSpec{};
  EXPECT_TRUE(mu_sweep(cfg, {}).empty());
}

TEST(MuSweep, RequiresGeneratorInput) {
  auto cfg = karate_config(Algorithm::lpa, "0");
  std::vector<double> mus = {0.1};
  EXPECT_THROW(mu_sweep(cfg, mus), ParameterError);
}

TEST(MuSweep, EasyRegimeAndShape) {
  ExperimentConfig cfg;
  cfg.seeds = parse_seeds("0..2");
  cfg.input = PlantedPartitionSpec{1000, 20, 20.0, 0.0, 0};
  std::vector<double> mus = {0.1, 0.7};
  auto rows = mu_sweep(cfg, mus);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].algorithm, Algorithm::lpa);
  EXPECT_EQ(rows[1].algorithm, Algorithm::ili_lpa);
  EXPECT_GE(rows[0].nmi.mean, 0.95);
  EXPECT_GE(rows[1].nmi.mean, 0.95);
  EXPECT_EQ(rows[0].nmi.count, 3u);

  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  EXPECT_EQ(count_lines(csv.str()), 5u);
  std::ostringstream again;
  write_sweep_csv(again, mu_sweep(cfg, mus));
  EXPECT_EQ(csv.str(), again.str());
}

TEST(CollapsePoint, PicksSmallestFailingMixing) {
  auto row = [](double mu, Algorithm a, double nmi_mean) {
    SweepRow r;
    r.mixing = mu;
    r.algorithm = a;
    r.nmi.mean = nmi_mean;
    return r;
  };
  std::vector<SweepRow> rows = {row(0.5, Algorithm::lpa, 0.05), row(0.4, Algorithm::lpa, 0.5),
                                row(0.6, Algorithm::lpa, 0.0), row(0.6, Algorithm::ili_lpa, 0.2)};
  EXPECT_EQ(collapse_point(rows, Algorithm::lpa), 0.5);
  EXPECT_FALSE(collapse_point(rows, Algorithm::ili_lpa));
}

}  // namespace
}  // namespace ilpa
