// Command line front end: experiments, c-sweeps, corrupted bandits and the
// completeness probe. Exit codes: 0 success, 2 configuration error, 3 runtime
// failure.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "uamcts/bandit.hpp"
#include "uamcts/config.hpp"
#include "uamcts/envs.hpp"
#include "uamcts/experiments.hpp"
#include "uamcts/stats.hpp"

namespace {

using namespace uamcts;

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

ExperimentConfig experiment_config(const std::string& path, const std::string& seeds) {
  ExperimentConfig cfg = path.empty() ? ExperimentConfig{} : load_config(path);
  if (path.empty()) cfg.hp = env_info(cfg.env).defaults;
  if (!seeds.empty()) {
    try {
      std::tie(cfg.seed_first, cfg.seed_last) = parse_seed_range(seeds);
    } catch (const std::exception& e) {
      throw ConfigError({std::string("seeds: ") + e.what()});
    }
    cfg.validate();
  }
  return cfg;
}

void print_summaries(const std::vector<RunSummary>& rows) {
  std::cout << "variant,c,mean_reward,std_reward,mean_steps,std_steps,n_runs\n";
  for (const auto& s : rows) {
    std::cout << variant_name(s.variant) << ',' << format_number(s.c) << ',' << format_number(s.mean_reward) << ','
              << format_number(s.std_reward) << ',' << format_number(s.mean_steps) << ','
              << format_number(s.std_steps) << ',' << s.n_runs << '\n';
  }
}

int cmd_bandit(const std::string& true_means, const std::string& corrupted_means, double c, std::int64_t horizon,
               const std::string& seeds, std::uint64_t master, std::int64_t log_every, const std::string& out_dir) {
  bandit::BanditInstance inst(parse_doubles(true_means), parse_doubles(corrupted_means));
  const auto [first, last] = parse_seed_range(seeds);
  if (horizon < 1 || log_every < 1 || last < first) throw ConfigError({"horizon/log-every/seeds: invalid values"});

  std::filesystem::create_directories(out_dir);
  std::ofstream regret(std::filesystem::path(out_dir) / "regret.csv", std::ios::binary);
  std::ofstream summary(std::filesystem::path(out_dir) / "summary.csv", std::ios::binary);
  std::ofstream bound(std::filesystem::path(out_dir) / "bound.csv", std::ios::binary);
  regret << "seed,t,cum_regret,policy\n";
  summary << "policy,mean_final_regret,std_final_regret,theoretical_bound\n";
  bound << "t,ua_ucb_bound,ucb_bound\n";

  auto logged = [&](std::int64_t t) { return t % log_every == 0 || t == horizon; };
  for (auto p : {bandit::Policy::ucb, bandit::Policy::ua_ucb}) {
    std::vector<double> finals;
    for (auto s = first; s <= last; ++s) {
      const auto curve = bandit::run(inst, p, c, horizon, derive_seed(master, static_cast<std::uint64_t>(s)));
      for (std::int64_t t = 1; t <= horizon; ++t) {
        if (logged(t)) {
          regret << s << ',' << t << ',' << format_number(curve.at(t)) << ',' << bandit::policy_name(p) << '\n';
        }
      }
      finals.push_back(curve.at(horizon));
    }
    const double b = p == bandit::Policy::ua_ucb ? bandit::theoretical_bound(inst, c, horizon)
                                                  : bandit::theoretical_bound_ucb(inst, c, horizon);
    summary << bandit::policy_name(p) << ',' << format_number(stats::mean(finals)) << ','
            << format_number(stats::stddev(finals)) << ',' << format_number(b) << '\n';
    std::cout << bandit::policy_name(p) << ": mean final regret " << format_number(stats::mean(finals))
              << ", bound " << format_number(b) << '\n';
  }
  for (std::int64_t t = 1; t <= horizon; ++t) {
    if (logged(t)) {
      bound << t << ',' << format_number(bandit::theoretical_bound(inst, c, t)) << ','
            << format_number(bandit::theoretical_bound_ucb(inst, c, t)) << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uncertainty-adapted MCTS experiments"};
  app.require_subcommand(1);

  std::string config_path, seeds, out_dir = "results";
  auto* run = app.add_subcommand("run", "Run every configured variant over the seed range");
  run->add_option("--config", config_path, "Config file (key = value lines)")->required();
  run->add_option("--seeds", seeds, "Seed range a..b, overrides the config");
  run->add_option("--out", out_dir, "Output directory");

  std::string sweep_config, sweep_seeds, sweep_out = "results";
  auto* sweep = app.add_subcommand("sweep", "Sweep the exploration constant over c_candidates");
  sweep->add_option("--config", sweep_config, "Config file")->required();
  sweep->add_option("--seeds", sweep_seeds, "Seed range a..b");
  sweep->add_option("--out", sweep_out, "Output directory");

  std::string means = "0.9,0.8,0.7,0.6,0.5", corrupted = "0.9,0.8,0.4,0.6,0.5", bandit_seeds = "0..99";
  std::string bandit_out = "results";
  double bandit_c = 1.4142135623730951;
  std::int64_t horizon = 100000, log_every = 1000;
  std::uint64_t bandit_master = 0;
  auto* bandit_cmd = app.add_subcommand("bandit", "UCB vs UA-UCB on a corrupted bandit");
  bandit_cmd->add_option("--true-means", means, "Comma separated true means");
  bandit_cmd->add_option("--corrupted-means", corrupted, "Comma separated corrupted means");
  bandit_cmd->add_option("--c", bandit_c, "Exploration constant");
  bandit_cmd->add_option("--horizon", horizon, "Pulls per run");
  bandit_cmd->add_option("--seeds", bandit_seeds, "Seed range a..b");
  bandit_cmd->add_option("--master-seed", bandit_master, "Master seed");
  bandit_cmd->add_option("--log-every", log_every, "Regret logging interval");
  bandit_cmd->add_option("--out", bandit_out, "Output directory");

  std::string probe_seeds = "0..19", budgets = "100,1000,10000";
  double probe_tau = 0.1;
  bool probe_baseline = false;
  auto* probe = app.add_subcommand("probe-completeness", "Visit counts of shallow nodes on the chain probe");
  probe->add_option("--seeds", probe_seeds, "Seed range a..b");
  probe->add_option("--budgets", budgets, "Comma separated iteration budgets");
  probe->add_option("--tau", probe_tau, "Uncertainty temperature");
  probe->add_flag("--baseline", probe_baseline, "Use plain UCT phases");

  auto* list = app.add_subcommand("list-envs", "List environments and their default search settings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*run) {
      const ExperimentConfig cfg = experiment_config(config_path, seeds);
      const ExperimentResult result = run_experiment(cfg);
      write_experiment(out_dir, result);
      print_summaries(result.summaries);
    } else if (*sweep) {
      const ExperimentConfig cfg = experiment_config(sweep_config, sweep_seeds);
      const SweepResult result = sweep_c(cfg);
      write_sweep(sweep_out, cfg, result);
      print_summaries(result.table);
      for (const auto& [v, c] : result.best_c) std::cout << "best c for " << variant_name(v) << ": " << format_number(c) << '\n';
    } else if (*bandit_cmd) {
      return cmd_bandit(means, corrupted, bandit_c, horizon, bandit_seeds, bandit_master, log_every, bandit_out);
    } else if (*probe) {
      const auto [first, last] = parse_seed_range(probe_seeds);
      std::vector<int> b;
      for (double x : parse_doubles(budgets)) b.push_back(static_cast<int>(x));
      std::cout << "seed,budget,min_visits_depth_le_2,min_visits_depth_1\n";
      for (auto s = first; s <= last; ++s) {
        const ProbeResult r = completeness_probe(s, b, !probe_baseline, probe_tau);
        for (std::size_t i = 0; i < b.size(); ++i) {
          std::cout << s << ',' << b[i] << ',' << r.min_visits[i] << ',' << r.depth1_min_visits[i] << '\n';
        }
      }
    } else if (*list) {
      for (const auto& e : list_envs()) {
        std::cout << e.id << "  N_I=" << e.defaults.iterations << " N_S=" << e.defaults.rollouts
                  << " D_S=" << e.defaults.depth << "  " << e.description << '\n';
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << '\n';
    return kRuntimeError;
  }
  return 0;
}
