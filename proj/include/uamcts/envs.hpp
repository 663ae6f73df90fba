#pragma once

#include <memory>
#include <string>
#include <vector>

#include "uamcts/mcts.hpp"
#include "uamcts/model.hpp"

namespace uamcts {

// The real environment M and the agent's imperfect model M^.
struct ModelPair {
  std::unique_ptr<DeterministicModel> truth;
  std::unique_ptr<DeterministicModel> model;
};

struct EnvInfo {
  std::string id;
  std::string description;
  Hyperparams defaults;
};

const std::vector<EnvInfo>& list_envs();
const EnvInfo& env_info(const std::string& id);
ModelPair make_env(const std::string& id);

}  // namespace uamcts
