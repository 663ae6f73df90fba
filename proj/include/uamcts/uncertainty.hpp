#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "uamcts/estimator.hpp"
#include "uamcts/neuralnet.hpp"

namespace uamcts {

// U(s, a) = || features(M^(s,a)) - features(M(s,a)) ||^2. Rewards do not enter.
double true_uncertainty(const DeterministicModel& truth, const DeterministicModel& model,
                        const State& state, int action);

// Offline scenario: the exact U.
class OracleUncertainty final : public UncertaintyEstimator {
 public:
  // With `per_dimension` the squared distance is divided by the feature size.
  OracleUncertainty(const DeterministicModel& truth, const DeterministicModel& model,
                    bool per_dimension = false);
  double query(const State& state, int action) const override;

 private:
  const DeterministicModel& truth_;
  const DeterministicModel& model_;
  double scale_;
};

struct TransitionSample {
  std::vector<double> state;  // features of s
  int action = 0;
  double target = 0.0;  // U(s, a) >= 0
};

// How (s, a) is presented to the network: features followed by a one-hot
// action, or the feature vector placed in the block of the taken action
// (features (x) one-hot), which makes a linear net tabular on one-hot states.
enum class InputEncoding { concat, state_action_product };

std::vector<double> encode_input(std::span<const double> features, int action, int num_actions,
                                 InputEncoding encoding);
std::size_t encoded_size(std::size_t feature_size, int num_actions, InputEncoding encoding);

struct LearnedUncertaintyOptions {
  std::vector<std::size_t> hidden;  // empty: linear regression, zero initialized
  InputEncoding encoding = InputEncoding::concat;
  double learning_rate = 1e-3;
  std::size_t batch_size = 32;
  // Without an intercept the product encoding is a plain table, so pairs
  // never observed keep U^ = 0 instead of inheriting the mean target.
  bool fit_bias = true;
};

// Online scenario: U^ regressed from real transitions.
class LearnedUncertainty final : public UncertaintyEstimator {
 public:
  LearnedUncertainty(const DeterministicModel& model, LearnedUncertaintyOptions options, Rng& init_rng);

  // max(0, net(encode(s, a)))
  double query(const State& state, int action) const override;
  double query_features(std::span<const double> features, int action) const;

  void record(TransitionSample sample);
  void train(int steps, Rng& rng);

  std::size_t buffer_size() const { return buffer_.size(); }
  const nn::RegressionBuffer& buffer() const { return buffer_; }
  const std::vector<TransitionSample>& samples() const { return samples_; }
  const nn::DenseNetwork& network() const { return net_; }
  double buffer_loss() const;
  int training_rounds() const { return rounds_; }

  // CSV with header s0..s{n-1},action,target
  void export_csv(std::ostream& out) const;

 private:
  const DeterministicModel& model_;
  LearnedUncertaintyOptions options_;
  nn::DenseNetwork net_;
  nn::AdamState adam_;
  nn::RegressionBuffer buffer_;
  std::vector<TransitionSample> samples_;
  int rounds_ = 0;
};

// tau <- max(floor, tau / 10) once per training period.
class TauSchedule {
 public:
  explicit TauSchedule(double initial = 10.0, double floor = 0.1);
  double value() const { return tau_; }
  double initial() const { return initial_; }
  double floor() const { return floor_; }
  void decay();

 private:
  double initial_;
  double floor_;
  double tau_;
};

struct TrainingSchedule {
  std::int64_t period = 5000;  // I, environment steps between trainings
  int steps = 5000;            // E, gradient steps per training
};

// Bookkeeping after each real environment step. `step_counter` is the number
// of steps taken so far (already incremented). On every multiple of the period
// the estimator is trained and tau decays once. Returns true when it trained.
bool on_env_step(LearnedUncertainty& estimator, TauSchedule& tau, std::int64_t step_counter,
                 const TrainingSchedule& schedule, Rng& rng);

}  // namespace uamcts
