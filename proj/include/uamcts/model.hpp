#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace uamcts {

// Compact environment state. `cells` is environment specific; `step` counts
// transitions since the episode start.
struct State {
  std::vector<int> cells;
  int step = 0;
  bool terminal = false;

  bool operator==(const State&) const = default;
};

struct Transition {
  State next;
  double reward = 0.0;
};

// Deterministic dynamics (s, a) -> (s', r, terminal). The real environment and
// the agent's imperfect model are both instances of this interface.
class DeterministicModel {
 public:
  virtual ~DeterministicModel() = default;

  virtual std::string name() const = 0;
  virtual int num_actions() const = 0;
  virtual State initial_state() const = 0;
  virtual Transition step(const State& state, int action) const = 0;

  virtual std::size_t feature_size() const = 0;
  virtual void write_features(const State& state, std::span<double> out) const = 0;

  std::vector<double> features(const State& state) const;

  // Squared Euclidean distance between the feature vectors of two states.
  // Environments with cheap closed forms override this.
  virtual double feature_distance_sq(const State& a, const State& b) const;

 protected:
  void check_action(int action) const;
};

}  // namespace uamcts
