#include "uamcts/learned_transition.hpp"

#include <stdexcept>
#include <utility>

namespace uamcts {

namespace {

std::vector<std::size_t> layer_sizes(std::size_t in, const std::vector<std::size_t>& hidden, std::size_t out) {
  std::vector<std::size_t> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

}  // namespace

LearnedTransitionModel::LearnedTransitionModel(const GridWorld& base, LearnedTransitionOptions options,
                                               Rng& init_rng)
    : base_(base),
      options_(std::move(options)),
      net_(layer_sizes(base.feature_size() + static_cast<std::size_t>(base.num_actions()), options_.hidden,
                       base.feature_size()),
           init_rng),
      adam_(net_, options_.learning_rate) {
  if (options_.batch_size == 0) throw std::invalid_argument("learned transition: batch size must be positive");
}

std::vector<double> LearnedTransitionModel::encode(const State& state, int action) const {
  std::vector<double> x(base_.feature_size() + static_cast<std::size_t>(base_.num_actions()), 0.0);
  base_.write_features(state, std::span<double>(x.data(), base_.feature_size()));
  x[base_.feature_size() + static_cast<std::size_t>(action)] = 1.0;
  return x;
}

std::vector<double> LearnedTransitionModel::predict(const State& state, int action) const {
  check_action(action);
  return net_.forward(encode(state, action));
}

Transition LearnedTransitionModel::step(const State& state, int action) const {
  if (!trained()) return base_.step(state, action);
  check_action(action);
  if (state.terminal) throw std::logic_error("learned transition: step from a terminal state");
  return base_.transition_to(state, base_.decode_position(predict(state, action)));
}

void LearnedTransitionModel::record(const State& state, int action, const State& next) {
  check_action(action);
  buffer_.push_back({encode(state, action), base_.features(next)});
}

void LearnedTransitionModel::train(int steps, Rng& rng) {
  if (buffer_.empty()) return;
  nn::train(net_, adam_, buffer_, steps, options_.batch_size, rng);
  ++rounds_;
}

}  // namespace uamcts
