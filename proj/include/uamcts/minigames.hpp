#pragma once

#include <array>
#include <set>

#include "uamcts/model.hpp"

namespace uamcts {

// Simplified 10x10 arcade games in the spirit of MinAtar. Each class is the
// uncorrupted game unless constructed with the corruption enabled; the real
// environment carries the corruption and the agent's model does not.

// Space Invaders. Actions: 0 no-op, 1 left, 2 right, 3 fire.
// - cannon on row 9; a 4x6 alien block starts on rows 1-4, columns 2-7
// - one friendly bullet at a time, moving up one row per step; +1 per alien hit
// - the block shifts sideways every kMoveInterval steps and drops one row
//   (reversing direction) when it would leave the screen
// - every kFireInterval steps the bottom alien closest to the cannon fires;
//   enemy bullets move down one row per step
// - terminal: cannon hit, an alien reaches row 9, all 24 aliens destroyed,
//   or max steps
// Corruption: firing does nothing while the cannon is in columns 2-6.
class MiniSpaceInvaders final : public DeterministicModel {
 public:
  static constexpr int kSize = 10;
  static constexpr int kAlienRows = 4;
  static constexpr int kAlienCols = 6;
  static constexpr int kAliens = kAlienRows * kAlienCols;
  static constexpr int kMoveInterval = 5;
  static constexpr int kFireInterval = 8;

  explicit MiniSpaceInvaders(bool corrupted, int max_steps = 300);

  std::string name() const override;
  int num_actions() const override { return 4; }
  State initial_state() const override;
  Transition step(const State& state, int action) const override;
  std::size_t feature_size() const override { return 4 * kSize * kSize + 3; }
  void write_features(const State& state, std::span<double> out) const override;

  bool can_fire(int column) const;
  static int aliens_alive(const State& s);

 private:
  bool corrupted_;
  int max_steps_;
};

// Freeway. Actions: 0 none, 1 up, 2 down.
// - the chicken stays in column 4, starting on row 9; row 0 is the far side
// - rows 1-8 each carry one car that wraps around horizontally, moving one
//   cell every kPeriods[lane] steps
// - reaching row 0 gives +1 and ends the episode; touching a car ends it with 0
// Corruption: in rows kDriftRows, "none" moves the chicken up one row.
class MiniFreeway final : public DeterministicModel {
 public:
  static constexpr int kSize = 10;
  static constexpr int kColumn = 4;
  static constexpr std::array<int, 8> kPeriods{2, 3, 4, 5, 5, 4, 3, 2};
  static constexpr std::array<int, 8> kDirections{1, -1, 1, -1, 1, -1, 1, -1};
  static constexpr std::array<int, 8> kStartX{0, 7, 3, 9, 5, 1, 8, 2};

  explicit MiniFreeway(bool corrupted, int max_steps = 100);

  std::string name() const override;
  int num_actions() const override { return 3; }
  State initial_state() const override;
  Transition step(const State& state, int action) const override;
  std::size_t feature_size() const override { return 2 * kSize * kSize + 8; }
  void write_features(const State& state, std::span<double> out) const override;

  static const std::set<int>& drift_rows();

 private:
  bool corrupted_;
  int max_steps_;
};

// Breakout. Actions: 0 none, 1 left, 2 right.
// - paddle on row 9, three rows of bricks (rows 1-3), ball moving diagonally
// - the ball bounces off the side walls, the ceiling and bricks (+1 per brick)
// - a ball reaching row 9 at the paddle column bounces; when the paddle moved
//   this step the ball takes that horizontal direction
// - terminal: ball missed, all bricks cleared, or max steps
// Corruption: the paddle cannot stop the ball at columns kDeadColumns.
class MiniBreakout final : public DeterministicModel {
 public:
  static constexpr int kSize = 10;
  static constexpr int kBrickRows = 3;

  explicit MiniBreakout(bool corrupted, int max_steps = 300);

  std::string name() const override;
  int num_actions() const override { return 3; }
  State initial_state() const override;
  Transition step(const State& state, int action) const override;
  std::size_t feature_size() const override { return 3 * kSize * kSize + 2; }
  void write_features(const State& state, std::span<double> out) const override;

  static const std::set<int>& dead_columns();
  static int bricks_left(const State& s);

 private:
  bool corrupted_;
  int max_steps_;
};

// Three-state chain 0 - 1 - 2 with actions 0 left / 1 right and reward
// 1 / max_steps for every transition into state 2, so episode returns lie in
// [0, 1]. The episode only ends at max steps.
// Corruption: moving right from state 1 is blocked.
class ChainMdp final : public DeterministicModel {
 public:
  explicit ChainMdp(bool corrupted, int max_steps = 3);

  std::string name() const override;
  int num_actions() const override { return 2; }
  State initial_state() const override;
  Transition step(const State& state, int action) const override;
  std::size_t feature_size() const override { return 3; }
  void write_features(const State& state, std::span<double> out) const override;

 private:
  bool corrupted_;
  int max_steps_;
};

}  // namespace uamcts
