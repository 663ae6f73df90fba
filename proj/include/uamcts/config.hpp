#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "uamcts/mcts.hpp"
#include "uamcts/uncertainty.hpp"

namespace uamcts {

enum class Scenario { offline, online };

enum class Variant {
  true_model,
  corrupted_model,
  ua_select_only,
  ua_expand_only,
  ua_simulate_only,
  ua_backprop_only,
  ua_combined,
  learned_linear,
  learned_hidden8,
  learned_hidden16,
};

const char* variant_name(Variant v);
// Accepts the names returned by variant_name and the forms
// learned-transition(linear|hidden-8|hidden-16).
Variant parse_variant(const std::string& name);
const std::vector<Variant>& all_variants();

// Phase slots that use the uncertainty-adapted strategy.
PhaseMask variant_phases(Variant v);
bool uses_uncertainty(Variant v);
bool is_learned_transition(Variant v);
std::vector<std::size_t> learned_transition_hidden(Variant v);

enum class EncodingChoice { automatic, concat, product };

struct ExperimentConfig {
  std::string env = "two-way-gridworld";
  Scenario scenario = Scenario::offline;
  std::vector<Variant> variants{Variant::true_model, Variant::corrupted_model, Variant::ua_combined};
  Hyperparams hp;  // starts from the environment defaults
  // Online uncertainty learning.
  double tau_initial = 10.0;
  double tau_floor = 0.1;
  std::int64_t train_period = 5000;
  int train_steps = 5000;
  std::size_t batch_size = 32;
  double learning_rate = 1e-3;
  std::vector<std::size_t> hidden;  // hidden layers of the uncertainty net
  // automatic: product for a linear net, concat otherwise. The product
  // encoding is fitted without an intercept.
  EncodingChoice input_encoding = EncodingChoice::automatic;
  bool normalize_uncertainty = false;  // offline: divide U by the feature size
  int episodes = 100;
  std::int64_t seed_first = 0;
  std::int64_t seed_last = 29;
  std::uint64_t master_seed = 0;
  int workers = 0;  // 0: hardware concurrency
  std::vector<double> c_candidates{0.5, 1.0, 1.4142135623730951, 2.0};

  std::vector<std::int64_t> seeds() const;
  InputEncoding encoding() const;
  // Throws ConfigError listing every offending field.
  void validate() const;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

// Flat `key = value` text, one key per line, `#` starts a comment. The env key
// is applied first so that its defaults can be overridden by later keys.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string format_config(const ExperimentConfig& config);

// "a..b" or a single integer.
std::pair<std::int64_t, std::int64_t> parse_seed_range(const std::string& text);

}  // namespace uamcts
