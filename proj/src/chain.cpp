#include <algorithm>
#include <stdexcept>

#include "uamcts/minigames.hpp"

namespace uamcts {

ChainMdp::ChainMdp(bool corrupted, int max_steps) : corrupted_(corrupted), max_steps_(max_steps) {
  if (max_steps <= 0) throw std::invalid_argument("chain: max_steps must be positive");
}

std::string ChainMdp::name() const { return corrupted_ ? "chain" : "chain-model"; }

State ChainMdp::initial_state() const {
  State s;
  s.cells = {0};
  return s;
}

Transition ChainMdp::step(const State& state, int action) const {
  check_action(action);
  if (state.terminal) throw std::logic_error("chain: step from a terminal state");
  Transition t{state, 0.0};
  int& pos = t.next.cells[0];
  if (action == 0) {
    pos = std::max(0, pos - 1);
  } else if (!(corrupted_ && pos == 1)) {
    pos = std::min(2, pos + 1);
  }
  if (pos == 2) t.reward = 1.0 / max_steps_;
  t.next.step += 1;
  if (t.next.step >= max_steps_) t.next.terminal = true;
  return t;
}

void ChainMdp::write_features(const State& state, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  out[static_cast<std::size_t>(state.cells[0])] = 1.0;
}

}  // namespace uamcts
