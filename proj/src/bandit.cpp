#include "uamcts/bandit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace uamcts::bandit {

namespace {

void check_mean(double m, const char* what) {
  if (!(m >= 0.0 && m <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0,1], got " + std::to_string(m));
  }
}

std::size_t argmax_first(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace

BanditInstance::BanditInstance(std::vector<double> true_means, std::vector<double> corrupted_means,
                               RewardLaw law, double gaussian_sigma)
    : true_means_(std::move(true_means)),
      corrupted_means_(std::move(corrupted_means)),
      law_(law),
      gaussian_sigma_(gaussian_sigma) {
  if (true_means_.size() < 2) throw std::invalid_argument("bandit needs at least 2 arms");
  if (true_means_.size() != corrupted_means_.size()) {
    throw std::invalid_argument("true and corrupted means differ in length");
  }
  for (double m : true_means_) check_mean(m, "true mean");
  for (double m : corrupted_means_) check_mean(m, "corrupted mean");
  if (!(gaussian_sigma_ > 0.0)) throw std::invalid_argument("gaussian sigma must be positive");
}

double BanditInstance::delta(std::size_t i) const {
  return std::abs(corrupted_means_.at(i) - true_means_.at(i));
}

std::vector<double> BanditInstance::deltas() const {
  std::vector<double> out(arms());
  for (std::size_t i = 0; i < arms(); ++i) out[i] = delta(i);
  return out;
}

std::size_t BanditInstance::optimal_arm() const { return argmax_first(true_means_); }
std::size_t BanditInstance::corrupted_optimal_arm() const { return argmax_first(corrupted_means_); }

double BanditInstance::gap(std::size_t i) const {
  return true_means_[optimal_arm()] - true_means_.at(i);
}

double BanditInstance::corrupted_gap(std::size_t i) const {
  return corrupted_means_[corrupted_optimal_arm()] - corrupted_means_.at(i);
}

double BanditInstance::sample_reward(std::size_t i, Rng& rng) const {
  const double mean = corrupted_means_.at(i);
  if (law_ == RewardLaw::bernoulli) return rng.bernoulli(mean) ? 1.0 : 0.0;
  for (;;) {
    const double x = mean + gaussian_sigma_ * rng.normal();
    if (x >= 0.0 && x <= 1.0) return x;
  }
}

void PolicyState::update(std::size_t arm, double reward) {
  ++t;
  const auto n = ++counts.at(arm);
  empirical_means[arm] += (reward - empirical_means[arm]) / static_cast<double>(n);
}

double ua_ucb_score(const PolicyState& state, std::size_t arm, double delta, std::int64_t t) {
  if (arm >= state.counts.size()) {
    throw std::out_of_range("arm index " + std::to_string(arm) + " out of range");
  }
  if (t < 1) throw std::invalid_argument("timestep must be >= 1");
  if (!(delta >= 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in [0,1]");
  const auto n = state.counts[arm];
  if (n == 0) return std::numeric_limits<double>::infinity();
  const double explore = std::sqrt(std::log(static_cast<double>(t - 1)) / static_cast<double>(n));
  return state.empirical_means[arm] + state.c * explore * (1.0 - delta);
}

double ucb_score(const PolicyState& state, std::size_t arm, std::int64_t t) {
  return ua_ucb_score(state, arm, 0.0, t);
}

const char* policy_name(Policy p) { return p == Policy::ucb ? "ucb" : "ua-ucb"; }

RegretCurve run(const BanditInstance& instance, Policy policy, double c, std::int64_t horizon,
                std::uint64_t seed) {
  const std::size_t k = instance.arms();
  if (horizon < static_cast<std::int64_t>(k)) {
    throw std::invalid_argument("horizon must be at least the number of arms");
  }
  if (!(c > 0.0)) throw std::invalid_argument("exploration constant must be positive");

  Rng rng(seed);
  PolicyState state(k, c);
  const auto deltas = instance.deltas();
  std::vector<double> gaps(k);
  for (std::size_t i = 0; i < k; ++i) gaps[i] = instance.gap(i);

  RegretCurve curve;
  curve.horizon = horizon;
  curve.cumulative_regret.reserve(static_cast<std::size_t>(horizon));
  curve.arm_sequence.reserve(static_cast<std::size_t>(horizon));

  double regret = 0.0;
  for (std::int64_t t = 1; t <= horizon; ++t) {
    std::size_t arm = 0;
    if (t <= static_cast<std::int64_t>(k)) {
      arm = static_cast<std::size_t>(t - 1);
    } else {
      double best = -std::numeric_limits<double>::infinity();
      std::size_t ties = 0;
      for (std::size_t i = 0; i < k; ++i) {
        const double d = policy == Policy::ua_ucb ? deltas[i] : 0.0;
        const double s = ua_ucb_score(state, i, d, t);
        if (s > best) {
          best = s;
          arm = i;
          ties = 1;
        } else if (s == best) {
          ++ties;
          if (rng.below(ties) == 0) arm = i;
        }
      }
    }
    state.update(arm, instance.sample_reward(arm, rng));
    regret += gaps[arm];
    curve.cumulative_regret.push_back(regret);
    curve.arm_sequence.push_back(arm);
  }
  curve.pulls = state.counts;
  return curve;
}

namespace {

double bound_impl(const BanditInstance& inst, const std::vector<double>& beta, std::int64_t n) {
  const std::size_t k = inst.arms();
  if (n <= static_cast<std::int64_t>(k)) throw std::invalid_argument("bound requires n > K");
  const std::size_t star_hat = inst.corrupted_optimal_arm();
  const double offset = inst.true_mean(inst.optimal_arm()) - inst.corrupted_mean(star_hat);
  const double log_n = std::log(static_cast<double>(n - 1));

  long double total = 0.0L;
  for (std::size_t i = 0; i < k; ++i) {
    if (i == star_hat) continue;
    const double gap_hat = inst.corrupted_gap(i);
    if (gap_hat == 0.0) {
      if (inst.gap(i) > 0.0) throw std::domain_error("degenerate gap: corrupted gap is zero");
      continue;
    }
    long double series = 0.0L;
    for (std::int64_t t = static_cast<std::int64_t>(k) + 1; t <= n; ++t) {
      const long double base = static_cast<long double>(t - 1);
      series += 4.0L * std::pow(base, -2.0L * beta[i]) + 4.0L * std::pow(base, -2.0L * beta[star_hat]);
    }
    const long double first = 4.0L * beta[i] * log_n / (gap_hat * gap_hat);
    total += (first + series) * (gap_hat + inst.delta(i) + offset);
  }
  return static_cast<double>(total);
}

}  // namespace

double theoretical_bound(const BanditInstance& instance, double c, std::int64_t n) {
  std::vector<double> beta(instance.arms());
  for (std::size_t i = 0; i < beta.size(); ++i) {
    const double damp = 1.0 - instance.delta(i);
    beta[i] = c * c * damp * damp;
  }
  return bound_impl(instance, beta, n);
}

double theoretical_bound_ucb(const BanditInstance& instance, double c, std::int64_t n) {
  return bound_impl(instance, std::vector<double>(instance.arms(), c * c), n);
}

double sublinearity_threshold(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
  const double v = 1.0 - std::sqrt(1.0 / (2.0 * c * c));
  return v > 0.0 ? v : 0.0;
}

}  // namespace uamcts::bandit
