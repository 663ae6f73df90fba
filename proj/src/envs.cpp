#include "uamcts/envs.hpp"

#include <stdexcept>

#include "uamcts/gridworld.hpp"
#include "uamcts/minigames.hpp"

namespace uamcts {

namespace {

Hyperparams defaults(int iterations, int rollouts, int depth) {
  Hyperparams hp;
  hp.iterations = iterations;
  hp.rollouts = rollouts;
  hp.depth = depth;
  return hp;
}

template <class Game>
ModelPair game_pair() {
  return {std::make_unique<Game>(true), std::make_unique<Game>(false)};
}

}  // namespace

const std::vector<EnvInfo>& list_envs() {
  static const std::vector<EnvInfo> envs{
      {"two-way-gridworld", "3x7 grid, two corridors; the model misses the wall at (0,2)", defaults(10, 10, 30)},
      {"icy-two-way-gridworld", "two-way grid plus a slippery cell at (2,3) the model does not know",
       defaults(10, 10, 30)},
      {"mini-space-invaders", "10x10 invaders; firing is disabled in columns 2-6", defaults(10, 10, 20)},
      {"mini-freeway", "10x10 freeway; 'none' moves the chicken up in six rows", defaults(100, 10, 50)},
      {"mini-breakout", "10x10 breakout; the paddle misses at columns 3 and 6", defaults(100, 10, 50)},
      {"chain", "three-state chain; moving right from state 1 is blocked", defaults(100, 10, 10)},
  };
  return envs;
}

const EnvInfo& env_info(const std::string& id) {
  for (const auto& e : list_envs()) {
    if (e.id == id) return e;
  }
  throw std::invalid_argument("unknown environment '" + id + "'");
}

ModelPair make_env(const std::string& id) {
  if (id == "two-way-gridworld") return two_way_gridworld();
  if (id == "icy-two-way-gridworld") return icy_two_way_gridworld();
  if (id == "mini-space-invaders") return game_pair<MiniSpaceInvaders>();
  if (id == "mini-freeway") return game_pair<MiniFreeway>();
  if (id == "mini-breakout") return game_pair<MiniBreakout>();
  if (id == "chain") return game_pair<ChainMdp>();
  throw std::invalid_argument("unknown environment '" + id + "'");
}

}  // namespace uamcts
