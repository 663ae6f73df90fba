#pragma once

#include <set>
#include <string>
#include <utility>

#include "uamcts/model.hpp"

namespace uamcts {

using Cell = std::pair<int, int>;  // (row, col), row 0 on top

struct GridWorldSpec {
  int rows = 3;
  int cols = 7;
  std::set<Cell> walls;
  Cell start{1, 0};
  Cell goal{1, 6};
  std::set<Cell> icy;
  double goal_reward = 10.0;
  double step_reward = 0.0;
  int max_steps = 50;
  bool slip = false;  // icy cells push the agent one more cell

  void validate() const;
};

// ASCII layout: '#' wall, '.' empty, 'S' start, 'G' goal, 'I' ice. Parsing
// turns `slip` on when any ice is present.
std::string to_ascii(const GridWorldSpec& spec);
GridWorldSpec parse_ascii(const std::string& text);

enum GridAction : int { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };

// Deterministic episodic gridworld. State cells = {row, col}; features are a
// one-hot position of size rows * cols.
class GridWorld final : public DeterministicModel {
 public:
  explicit GridWorld(GridWorldSpec spec, std::string name = "gridworld");

  std::string name() const override { return name_; }
  int num_actions() const override { return 4; }
  State initial_state() const override;
  Transition step(const State& state, int action) const override;
  std::size_t feature_size() const override;
  void write_features(const State& state, std::span<double> out) const override;
  double feature_distance_sq(const State& a, const State& b) const override;

  const GridWorldSpec& spec() const { return spec_; }
  bool is_wall(Cell c) const;
  bool in_bounds(Cell c) const;
  State make_state(Cell c, int step) const;
  static Cell position(const State& s) { return {s.cells[0], s.cells[1]}; }

  // Transition from `from` to an externally chosen cell, with this world's
  // reward and termination rules applied.
  Transition transition_to(const State& from, Cell next) const;
  // Nearest valid (non-wall) state for a predicted feature vector: argmax over
  // the one-hot block restricted to open cells.
  Cell decode_position(std::span<const double> features) const;

  // Length of the shortest action sequence from start to goal, or -1.
  int shortest_path() const;

 private:
  Cell move(Cell c, int action) const;

  GridWorldSpec spec_;
  std::string name_;
};

// Canonical 3x7 layout: interior walls (1,1)..(1,5) split a top and a bottom
// corridor between start (1,0) and goal (1,6).
GridWorldSpec two_way_layout();

struct ModelPair;
ModelPair two_way_gridworld();
ModelPair icy_two_way_gridworld();

}  // namespace uamcts
