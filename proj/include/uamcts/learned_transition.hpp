#pragma once

#include <vector>

#include "uamcts/gridworld.hpp"
#include "uamcts/neuralnet.hpp"
#include "uamcts/rng.hpp"

namespace uamcts {

struct LearnedTransitionOptions {
  std::vector<std::size_t> hidden;  // empty: linear
  double learning_rate = 1e-3;
  std::size_t batch_size = 32;
};

// Planning model whose dynamics are a network mapping [features(s), onehot(a)]
// to features(s'). Predictions are snapped to the nearest open cell of the
// base gridworld, which also supplies rewards and termination. Until the
// first training round the base (corrupted) model is used as is.
class LearnedTransitionModel final : public DeterministicModel {
 public:
  LearnedTransitionModel(const GridWorld& base, LearnedTransitionOptions options, Rng& init_rng);

  std::string name() const override { return base_.name() + "-learned"; }
  int num_actions() const override { return base_.num_actions(); }
  State initial_state() const override { return base_.initial_state(); }
  Transition step(const State& state, int action) const override;
  std::size_t feature_size() const override { return base_.feature_size(); }
  void write_features(const State& state, std::span<double> out) const override {
    base_.write_features(state, out);
  }
  double feature_distance_sq(const State& a, const State& b) const override {
    return base_.feature_distance_sq(a, b);
  }

  // Adds <s, a, M(s, a)> to the buffer.
  void record(const State& state, int action, const State& next);
  void train(int steps, Rng& rng);
  bool trained() const { return rounds_ > 0; }
  std::size_t buffer_size() const { return buffer_.size(); }
  const nn::DenseNetwork& network() const { return net_; }
  std::vector<double> predict(const State& state, int action) const;

 private:
  std::vector<double> encode(const State& state, int action) const;

  const GridWorld& base_;
  LearnedTransitionOptions options_;
  nn::DenseNetwork net_;
  nn::AdamState adam_;
  nn::RegressionBuffer buffer_;
  int rounds_ = 0;
};

}  // namespace uamcts
