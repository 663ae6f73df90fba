#pragma once

#include <cstdint>
#include <vector>

#include "uamcts/rng.hpp"

namespace uamcts::bandit {

enum class RewardLaw { bernoulli, truncated_gaussian };

// K-armed bandit whose observed rewards come from corrupted means mu^_i while
// regret is measured against the true means mu_i.
class BanditInstance {
 public:
  BanditInstance(std::vector<double> true_means, std::vector<double> corrupted_means,
                 RewardLaw law = RewardLaw::bernoulli, double gaussian_sigma = 0.1);

  std::size_t arms() const { return true_means_.size(); }
  double true_mean(std::size_t i) const { return true_means_.at(i); }
  double corrupted_mean(std::size_t i) const { return corrupted_means_.at(i); }
  const std::vector<double>& true_means() const { return true_means_; }
  const std::vector<double>& corrupted_means() const { return corrupted_means_; }
  RewardLaw law() const { return law_; }

  // delta_i = |mu^_i - mu_i|
  double delta(std::size_t i) const;
  std::vector<double> deltas() const;
  std::size_t optimal_arm() const;            // i*
  std::size_t corrupted_optimal_arm() const;  // i^*
  double gap(std::size_t i) const;            // Delta_i on true means
  double corrupted_gap(std::size_t i) const;  // Delta^_i on corrupted means

  // Reward drawn from the corrupted distribution of arm i.
  double sample_reward(std::size_t i, Rng& rng) const;

 private:
  std::vector<double> true_means_;
  std::vector<double> corrupted_means_;
  RewardLaw law_;
  double gaussian_sigma_;
};

struct PolicyState {
  std::int64_t t = 0;
  std::vector<std::int64_t> counts;
  std::vector<double> empirical_means;
  double c = 1.4142135623730951;

  PolicyState(std::size_t arms, double exploration)
      : counts(arms, 0), empirical_means(arms, 0.0), c(exploration) {}

  void update(std::size_t arm, double reward);
};

// Score for the decision at timestep t (t >= 1) given the statistics of the
// first t-1 pulls. +inf for arms never pulled.
double ua_ucb_score(const PolicyState& state, std::size_t arm, double delta, std::int64_t t);
double ucb_score(const PolicyState& state, std::size_t arm, std::int64_t t);

enum class Policy { ucb, ua_ucb };
const char* policy_name(Policy p);

struct RegretCurve {
  std::int64_t horizon = 0;
  std::vector<double> cumulative_regret;  // index t-1 holds R_t
  std::vector<std::int64_t> pulls;        // arm-pull counts at the horizon
  std::vector<std::size_t> arm_sequence;

  double at(std::int64_t t) const { return cumulative_regret.at(static_cast<std::size_t>(t - 1)); }
};

RegretCurve run(const BanditInstance& instance, Policy policy, double c, std::int64_t horizon,
                std::uint64_t seed);

// Exact pre-simplification regret bound summed term by term.
// beta_i = c^2 (1 - delta_i)^2. Throws std::domain_error when a truly
// suboptimal arm has a zero corrupted gap.
double theoretical_bound(const BanditInstance& instance, double c, std::int64_t n);
// Same expression with beta_i = c^2 for every arm (plain UCB exploration).
double theoretical_bound_ucb(const BanditInstance& instance, double c, std::int64_t n);

// Largest delta for which UA-UCB keeps logarithmic regret.
double sublinearity_threshold(double c);

}  // namespace uamcts::bandit
