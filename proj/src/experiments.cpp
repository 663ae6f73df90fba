#include "uamcts/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "uamcts/gridworld.hpp"
#include "uamcts/learned_transition.hpp"
#include "uamcts/minigames.hpp"
#include "uamcts/stats.hpp"

namespace uamcts {

namespace {

// Sub-stream indices of a run seed.
enum Stream : std::uint64_t { kSearch = 0, kTrain = 1, kInit = 2 };

Rng stream(std::uint64_t master, std::int64_t seed, Stream s) {
  return Rng(derive_seed(derive_seed(master, static_cast<std::uint64_t>(seed)), s));
}

bool record_less(const EpisodeRecord& a, const EpisodeRecord& b) {
  return std::tie(a.variant, a.c, a.seed, a.episode) < std::tie(b.variant, b.c, b.seed, b.episode);
}

template <class Job>
void parallel_for(std::size_t n, int workers, Job job) {
  std::size_t threads = workers > 0 ? static_cast<std::size_t>(workers) : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

double tail_mean(std::span<const double> xs) {
  const std::size_t k = std::min(xs.size(), kMovingWindow);
  return stats::mean(xs.subspan(xs.size() - k));
}

}  // namespace

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::vector<EpisodeRecord> run_seed(const ExperimentConfig& config, Variant variant, std::int64_t seed) {
  const ModelPair env = make_env(config.env);
  const DeterministicModel& truth = *env.truth;
  const DeterministicModel& model = *env.model;
  const bool online = config.scenario == Scenario::online;

  Rng search_rng = stream(config.master_seed, seed, kSearch);
  Rng train_rng = stream(config.master_seed, seed, kTrain);
  Rng init_rng = stream(config.master_seed, seed, kInit);

  ZeroUncertainty zero;
  std::unique_ptr<OracleUncertainty> oracle;
  std::unique_ptr<LearnedUncertainty> learned;
  std::unique_ptr<LearnedTransitionModel> learned_model;
  const UncertaintyEstimator* estimator = &zero;
  const DeterministicModel* planner = variant == Variant::true_model ? &truth : &model;

  if (is_learned_transition(variant)) {
    const auto* grid = dynamic_cast<const GridWorld*>(&model);
    if (!grid) throw std::invalid_argument("learned transition agents need a gridworld model");
    LearnedTransitionOptions opt{learned_transition_hidden(variant), config.learning_rate, config.batch_size};
    learned_model = std::make_unique<LearnedTransitionModel>(*grid, opt, init_rng);
    planner = learned_model.get();
  } else if (uses_uncertainty(variant)) {
    if (online) {
      LearnedUncertaintyOptions opt{config.hidden, config.encoding(), config.learning_rate, config.batch_size};
      opt.fit_bias = opt.encoding != InputEncoding::state_action_product;
      learned = std::make_unique<LearnedUncertainty>(model, opt, init_rng);
      estimator = learned.get();
    } else {
      oracle = std::make_unique<OracleUncertainty>(truth, model, config.normalize_uncertainty);
      estimator = oracle.get();
    }
  }

  const PhaseStrategies baseline = make_phases(PhaseMask::none());
  const PhaseStrategies adapted = make_phases(variant_phases(variant));
  TauSchedule tau(config.tau_initial, config.tau_floor);
  const TrainingSchedule schedule{config.train_period, config.train_steps};
  Hyperparams hp = config.hp;
  std::int64_t global_steps = 0;

  std::vector<EpisodeRecord> out;
  out.reserve(static_cast<std::size_t>(config.episodes));
  for (int ep = 0; ep < config.episodes; ++ep) {
    EpisodeRecord rec;
    rec.variant = variant;
    rec.c = config.hp.c;
    rec.seed = seed;
    rec.episode = ep;
    State s = truth.initial_state();
    while (!s.terminal) {
      // Online agents plan like the corrupted-model baseline until U^ has been trained once.
      const bool adapt = learned ? learned->training_rounds() > 0 : true;
      if (learned) hp.tau = tau.value();
      const int a = search(s, *planner, adapt ? adapted : baseline, hp, *estimator, search_rng);
      Transition real = truth.step(s, a);
      ++global_steps;
      if (learned) {
        const State predicted = model.step(s, a).next;
        learned->record({model.features(s), a, model.feature_distance_sq(predicted, real.next)});
        on_env_step(*learned, tau, global_steps, schedule, train_rng);
      } else if (learned_model) {
        learned_model->record(s, a, real.next);
        if (global_steps % schedule.period == 0) learned_model->train(schedule.steps, train_rng);
      }
      rec.reward += real.reward;
      rec.steps += 1;
      s = std::move(real.next);
    }
    rec.reached_terminal = true;
    if (const auto* grid = dynamic_cast<const GridWorld*>(&truth)) {
      rec.reached_terminal = GridWorld::position(s) == grid->spec().goal;
    }
    out.push_back(rec);
  }
  return out;
}

RunSummary summarize(const std::vector<EpisodeRecord>& records) {
  if (records.empty()) throw std::invalid_argument("summarize: no records");
  std::vector<EpisodeRecord> sorted = records;
  std::sort(sorted.begin(), sorted.end(), record_less);

  RunSummary s;
  s.variant = sorted.front().variant;
  s.c = sorted.front().c;
  std::vector<std::vector<double>> ma_r, ma_s;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    std::vector<double> rewards, steps;
    while (j < sorted.size() && sorted[j].seed == sorted[i].seed) {
      rewards.push_back(sorted[j].reward);
      steps.push_back(sorted[j].steps);
      ++j;
    }
    s.final_reward.push_back(tail_mean(rewards));
    s.final_steps.push_back(tail_mean(steps));
    ma_r.push_back(stats::moving_average(rewards, kMovingWindow));
    ma_s.push_back(stats::moving_average(steps, kMovingWindow));
    i = j;
  }
  s.n_runs = s.final_reward.size();
  s.mean_reward = stats::mean(s.final_reward);
  s.std_reward = stats::stddev(s.final_reward);
  s.mean_steps = stats::mean(s.final_steps);
  s.std_steps = stats::stddev(s.final_steps);

  auto average = [](const std::vector<std::vector<double>>& series) {
    std::size_t len = series.front().size();
    for (const auto& x : series) len = std::min(len, x.size());
    std::vector<double> out(len, 0.0);
    for (std::size_t t = 0; t < len; ++t) {
      for (const auto& x : series) out[t] += x[t];
      out[t] /= static_cast<double>(series.size());
    }
    return out;
  };
  s.moving_reward = average(ma_r);
  s.moving_steps = average(ma_s);
  return s;
}

const RunSummary& ExperimentResult::summary(Variant v) const {
  for (const auto& s : summaries) {
    if (s.variant == v) return s;
  }
  throw std::out_of_range(std::string("no summary for variant ") + variant_name(v));
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto seeds = config.seeds();
  std::vector<std::pair<Variant, std::int64_t>> jobs;
  for (Variant v : config.variants) {
    for (auto s : seeds) jobs.emplace_back(v, s);
  }
  std::vector<std::vector<EpisodeRecord>> slots(jobs.size());
  parallel_for(jobs.size(), config.workers,
               [&](std::size_t i) { slots[i] = run_seed(config, jobs[i].first, jobs[i].second); });

  ExperimentResult result;
  result.config = config;
  for (auto& slot : slots) result.records.insert(result.records.end(), slot.begin(), slot.end());
  std::sort(result.records.begin(), result.records.end(), record_less);
  for (Variant v : config.variants) {
    std::vector<EpisodeRecord> group;
    for (const auto& r : result.records) {
      if (r.variant == v) group.push_back(r);
    }
    result.summaries.push_back(summarize(group));
  }
  return result;
}

SweepResult sweep_c(const ExperimentConfig& config) {
  if (config.c_candidates.empty()) throw std::invalid_argument("sweep: no candidates");
  std::vector<double> candidates = config.c_candidates;
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  SweepResult out;
  std::vector<ExperimentResult> runs;
  for (double c : candidates) {
    ExperimentConfig cfg = config;
    cfg.hp.c = c;
    runs.push_back(run_experiment(cfg));
  }
  for (Variant v : config.variants) {
    const RunSummary* best = nullptr;
    for (const auto& run : runs) {
      const RunSummary& s = run.summary(v);
      out.table.push_back(s);
      if (!best || s.mean_reward > best->mean_reward) best = &s;
    }
    out.best_c.emplace_back(v, best->c);
  }
  for (const auto& run : runs) out.records.insert(out.records.end(), run.records.begin(), run.records.end());
  std::sort(out.records.begin(), out.records.end(), record_less);
  return out;
}

void write_episodes_csv(std::ostream& out, const std::vector<EpisodeRecord>& records) {
  out << "variant,seed,episode,reward,steps\n";
  for (const auto& r : records) {
    out << variant_name(r.variant) << ',' << r.seed << ',' << r.episode << ',' << format_number(r.reward) << ','
        << r.steps << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<RunSummary>& summaries, bool steps) {
  out << "variant,c,mean,std,n_runs\n";
  for (const auto& s : summaries) {
    out << variant_name(s.variant) << ',' << format_number(s.c) << ','
        << format_number(steps ? s.mean_steps : s.mean_reward) << ','
        << format_number(steps ? s.std_steps : s.std_reward) << ',' << s.n_runs << '\n';
  }
}

void write_metadata(std::ostream& out, const ExperimentConfig& config) {
  out << "# final performance: mean of the last " << kMovingWindow << " episodes per seed\n";
  out << "# truncated episodes count as the environment step limit\n";
  out << "# online runs keep one step counter across episodes\n";
  out << "runs_per_variant = " << config.seeds().size() << "\n";
  out << format_config(config);
}

namespace {

void write_file(const std::filesystem::path& p, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  body(out);
}

}  // namespace

void write_experiment(const std::string& dir, const ExperimentResult& result) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path d(dir);
  write_file(d / "episodes.csv", [&](std::ostream& o) { write_episodes_csv(o, result.records); });
  write_file(d / "summary.csv", [&](std::ostream& o) { write_summary_csv(o, result.summaries); });
  write_file(d / "summary_steps.csv", [&](std::ostream& o) { write_summary_csv(o, result.summaries, true); });
  write_file(d / "metadata.txt", [&](std::ostream& o) { write_metadata(o, result.config); });
}

void write_sweep(const std::string& dir, const ExperimentConfig& config, const SweepResult& result) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path d(dir);
  write_file(d / "episodes.csv", [&](std::ostream& o) { write_episodes_csv(o, result.records); });
  write_file(d / "summary.csv", [&](std::ostream& o) { write_summary_csv(o, result.table); });
  write_file(d / "best_c.csv", [&](std::ostream& o) {
    o << "variant,c\n";
    for (const auto& [v, c] : result.best_c) o << variant_name(v) << ',' << format_number(c) << '\n';
  });
  write_file(d / "metadata.txt", [&](std::ostream& o) { write_metadata(o, config); });
}

ProbeResult completeness_probe(std::int64_t seed, const std::vector<int>& budgets, bool ua, double tau,
                               std::uint64_t master_seed) {
  const ChainMdp truth(true);
  const ChainMdp model(false);
  const OracleUncertainty oracle(truth, model);
  const PhaseStrategies phases = make_phases(ua ? PhaseMask::all() : PhaseMask::none());
  Hyperparams hp = env_info("chain").defaults;
  hp.tau = tau;

  ProbeResult r;
  r.seed = seed;
  r.budgets = budgets;
  for (std::size_t b = 0; b < budgets.size(); ++b) {
    hp.iterations = budgets[b];
    Rng rng(derive_seed(derive_seed(master_seed, static_cast<std::uint64_t>(seed)), b));
    const SearchResult sr = search_tree(model.initial_state(), model, phases, hp, oracle, rng);
    std::int64_t min_all = -1, min_d1 = -1;
    std::vector<std::pair<NodeId, int>> stack{{sr.tree.root(), 0}};
    while (!stack.empty()) {
      const auto [id, d] = stack.back();
      stack.pop_back();
      const Node& n = sr.tree[id];
      if (min_all < 0 || n.visits < min_all) min_all = n.visits;
      if (d == 1 && (min_d1 < 0 || n.visits < min_d1)) min_d1 = n.visits;
      if (d < 2 && !n.expanded && !n.terminal) {
        // Children not created yet count as unvisited.
        min_all = 0;
        if (d == 0) min_d1 = 0;
      }
      if (d < 2) {
        for (NodeId ch : n.children) stack.emplace_back(ch, d + 1);
      }
    }
    r.min_visits.push_back(min_all);
    r.depth1_min_visits.push_back(min_d1);
  }
  return r;
}

}  // namespace uamcts
