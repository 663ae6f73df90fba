#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "uamcts/config.hpp"
#include "uamcts/envs.hpp"

namespace uamcts {

struct EpisodeRecord {
  Variant variant = Variant::true_model;
  double c = 0.0;
  std::int64_t seed = 0;
  int episode = 0;
  double reward = 0.0;  // undiscounted
  int steps = 0;        // truncated episodes count as the step limit
  bool reached_terminal = false;  // false when cut off by the step limit
};

// One seeded agent playing `config.episodes` episodes in the real environment.
// Learned estimators, tau schedule and the global step counter persist across
// episodes of the run.
std::vector<EpisodeRecord> run_seed(const ExperimentConfig& config, Variant variant, std::int64_t seed);

struct RunSummary {
  Variant variant = Variant::true_model;
  double c = 0.0;
  std::size_t n_runs = 0;
  // Final performance per seed: mean of the last min(50, episodes) episodes.
  std::vector<double> final_reward;
  std::vector<double> final_steps;
  double mean_reward = 0.0;
  double std_reward = 0.0;
  double mean_steps = 0.0;
  double std_steps = 0.0;
  // Window-50 moving averages per seed, averaged across seeds.
  std::vector<double> moving_reward;
  std::vector<double> moving_steps;
};

inline constexpr std::size_t kMovingWindow = 50;

// Records of a single (variant, c) group, any seed order.
RunSummary summarize(const std::vector<EpisodeRecord>& records);

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<EpisodeRecord> records;  // sorted by (variant, c, seed, episode)
  std::vector<RunSummary> summaries;   // config.variants order

  const RunSummary& summary(Variant v) const;
};

// Runs every (variant, seed) pair on a bounded worker pool.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct SweepResult {
  std::vector<RunSummary> table;  // variant-major, candidates ascending
  std::vector<std::pair<Variant, double>> best_c;
  std::vector<EpisodeRecord> records;
};

// Ties in mean reward go to the smaller c.
SweepResult sweep_c(const ExperimentConfig& config);

void write_episodes_csv(std::ostream& out, const std::vector<EpisodeRecord>& records);
void write_summary_csv(std::ostream& out, const std::vector<RunSummary>& summaries, bool steps = false);
void write_metadata(std::ostream& out, const ExperimentConfig& config);

// Writes episodes.csv, summary.csv, summary_steps.csv and metadata.txt.
void write_experiment(const std::string& dir, const ExperimentResult& result);
void write_sweep(const std::string& dir, const ExperimentConfig& config, const SweepResult& result);

struct ProbeResult {
  std::int64_t seed = 0;
  std::vector<int> budgets;
  // Over nodes of depth <= 2; children an unexpanded node would have count as 0.
  std::vector<std::int64_t> min_visits;
  std::vector<std::int64_t> depth1_min_visits;
};

// Single searches on the chain probe from its start state, with the exact U as
// estimator. `ua` selects all uncertainty-adapted phases, otherwise baseline.
ProbeResult completeness_probe(std::int64_t seed, const std::vector<int>& budgets, bool ua, double tau,
                               std::uint64_t master_seed = 0);

// 9 significant digits.
std::string format_number(double x);

}  // namespace uamcts
