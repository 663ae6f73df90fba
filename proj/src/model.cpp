#include "uamcts/model.hpp"

#include <stdexcept>

namespace uamcts {

std::vector<double> DeterministicModel::features(const State& state) const {
  std::vector<double> out(feature_size(), 0.0);
  write_features(state, out);
  return out;
}

double DeterministicModel::feature_distance_sq(const State& a, const State& b) const {
  const auto fa = features(a);
  const auto fb = features(b);
  double sum = 0.0;
  for (std::size_t i = 0; i < fa.size(); ++i) {
    const double d = fa[i] - fb[i];
    sum += d * d;
  }
  return sum;
}

void DeterministicModel::check_action(int action) const {
  if (action < 0 || action >= num_actions()) {
    throw std::out_of_range(name() + ": invalid action id " + std::to_string(action));
  }
}

}  // namespace uamcts
