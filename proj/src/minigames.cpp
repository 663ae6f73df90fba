#include "uamcts/minigames.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace uamcts {

namespace {

constexpr int kN = 10;

void require_live(const DeterministicModel& m, const State& s) {
  if (s.terminal) throw std::logic_error(m.name() + ": step from a terminal state");
}

void finish(State& s, int max_steps) {
  s.step += 1;
  if (s.step >= max_steps) s.terminal = true;
}

std::size_t cell(int channel, int row, int col) {
  return static_cast<std::size_t>(channel * kN * kN + row * kN + col);
}

}  // namespace

// ---------------------------------------------------------------- invaders
//
// cells: [0] cannon x, [1,2] friendly bullet row/col (row -1: none),
// [3,4] enemy bullet row/col, [5,6] alien block top row / left column,
// [7] block direction, [8] move timer, [9] fire timer, [10..33] alive flags.

namespace {

enum Si : int { kCannon = 0, kFbRow, kFbCol, kEbRow, kEbCol, kBlockRow, kBlockCol, kDir, kMoveT, kFireT, kAlive };

int& alive(State& s, int i, int j) { return s.cells[static_cast<std::size_t>(kAlive + i * 6 + j)]; }
int alive(const State& s, int i, int j) { return s.cells[static_cast<std::size_t>(kAlive + i * 6 + j)]; }

// Destroys the alien at (row, col) if there is one.
bool hit_alien(State& s, int row, int col) {
  const int i = row - s.cells[kBlockRow];
  const int j = col - s.cells[kBlockCol];
  if (i < 0 || i >= MiniSpaceInvaders::kAlienRows || j < 0 || j >= MiniSpaceInvaders::kAlienCols) return false;
  if (!alive(s, i, j)) return false;
  alive(s, i, j) = 0;
  return true;
}

}  // namespace

MiniSpaceInvaders::MiniSpaceInvaders(bool corrupted, int max_steps)
    : corrupted_(corrupted), max_steps_(max_steps) {
  if (max_steps <= 0) throw std::invalid_argument("space invaders: max_steps must be positive");
}

std::string MiniSpaceInvaders::name() const {
  return corrupted_ ? "mini-space-invaders" : "mini-space-invaders-model";
}

bool MiniSpaceInvaders::can_fire(int column) const { return !corrupted_ || column < 2 || column > 6; }

int MiniSpaceInvaders::aliens_alive(const State& s) {
  int n = 0;
  for (int k = 0; k < kAliens; ++k) n += s.cells[static_cast<std::size_t>(kAlive + k)];
  return n;
}

State MiniSpaceInvaders::initial_state() const {
  State s;
  s.cells.assign(kAlive + kAliens, 0);
  s.cells[kCannon] = 4;
  s.cells[kFbRow] = -1;
  s.cells[kEbRow] = -1;
  s.cells[kBlockRow] = 1;
  s.cells[kBlockCol] = 2;
  s.cells[kDir] = 1;
  s.cells[kMoveT] = kMoveInterval;
  s.cells[kFireT] = kFireInterval;
  std::fill(s.cells.begin() + kAlive, s.cells.end(), 1);
  return s;
}

Transition MiniSpaceInvaders::step(const State& state, int action) const {
  check_action(action);
  require_live(*this, state);
  Transition t{state, 0.0};
  State& s = t.next;
  auto& x = s.cells[kCannon];

  if (action == 1) x = std::max(0, x - 1);
  if (action == 2) x = std::min(kN - 1, x + 1);
  if (action == 3 && s.cells[kFbRow] < 0 && can_fire(x)) {
    s.cells[kFbRow] = kN - 1;
    s.cells[kFbCol] = x;
  }

  if (s.cells[kFbRow] >= 0) {
    s.cells[kFbRow] -= 1;
    if (s.cells[kFbRow] < 0) {
      s.cells[kFbRow] = -1;
    } else if (hit_alien(s, s.cells[kFbRow], s.cells[kFbCol])) {
      t.reward += 1.0;
      s.cells[kFbRow] = -1;
    }
  }

  if (s.cells[kEbRow] >= 0) {
    s.cells[kEbRow] += 1;
    if (s.cells[kEbRow] > kN - 1) {
      s.cells[kEbRow] = -1;
    } else if (s.cells[kEbRow] == kN - 1 && s.cells[kEbCol] == x) {
      s.terminal = true;
    }
  }

  int lo = kN, hi = -1, bottom = -1;
  auto bounds = [&] {
    lo = kN, hi = -1, bottom = -1;
    for (int i = 0; i < kAlienRows; ++i) {
      for (int j = 0; j < kAlienCols; ++j) {
        if (!alive(s, i, j)) continue;
        lo = std::min(lo, s.cells[kBlockCol] + j);
        hi = std::max(hi, s.cells[kBlockCol] + j);
        bottom = std::max(bottom, s.cells[kBlockRow] + i);
      }
    }
  };
  bounds();

  if (--s.cells[kMoveT] == 0 && hi >= 0) {
    s.cells[kMoveT] = kMoveInterval;
    const int dir = s.cells[kDir];
    if ((dir > 0 && hi + 1 > kN - 1) || (dir < 0 && lo - 1 < 0)) {
      s.cells[kBlockRow] += 1;
      s.cells[kDir] = -dir;
    } else {
      s.cells[kBlockCol] += dir;
    }
    if (s.cells[kFbRow] >= 0 && hit_alien(s, s.cells[kFbRow], s.cells[kFbCol])) {
      t.reward += 1.0;
      s.cells[kFbRow] = -1;
    }
    bounds();
    if (bottom >= kN - 1) s.terminal = true;
  } else if (s.cells[kMoveT] == 0) {
    s.cells[kMoveT] = kMoveInterval;
  }

  if (--s.cells[kFireT] == 0) {
    s.cells[kFireT] = kFireInterval;
    if (s.cells[kEbRow] < 0 && hi >= 0) {
      // Bottom-most alien in the living column closest to the cannon.
      int best_col = -1, best_row = -1;
      for (int j = 0; j < kAlienCols; ++j) {
        const int col = s.cells[kBlockCol] + j;
        int row = -1;
        for (int i = kAlienRows - 1; i >= 0 && row < 0; --i) {
          if (alive(s, i, j)) row = s.cells[kBlockRow] + i;
        }
        if (row < 0) continue;
        if (best_col < 0 || std::abs(col - x) < std::abs(best_col - x)) {
          best_col = col;
          best_row = row;
        }
      }
      if (best_row + 1 <= kN - 1) {
        s.cells[kEbRow] = best_row + 1;
        s.cells[kEbCol] = best_col;
      }
    }
  }

  if (aliens_alive(s) == 0) s.terminal = true;
  finish(s, max_steps_);
  return t;
}

void MiniSpaceInvaders::write_features(const State& s, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  out[cell(0, kN - 1, s.cells[kCannon])] = 1.0;
  for (int i = 0; i < kAlienRows; ++i) {
    for (int j = 0; j < kAlienCols; ++j) {
      if (!alive(s, i, j)) continue;
      const int r = s.cells[kBlockRow] + i;
      const int c = s.cells[kBlockCol] + j;
      if (r >= 0 && r < kN && c >= 0 && c < kN) out[cell(1, r, c)] = 1.0;
    }
  }
  if (s.cells[kFbRow] >= 0) out[cell(2, s.cells[kFbRow], s.cells[kFbCol])] = 1.0;
  if (s.cells[kEbRow] >= 0) out[cell(3, s.cells[kEbRow], s.cells[kEbCol])] = 1.0;
  const std::size_t base = 4 * kN * kN;
  out[base] = s.cells[kDir] > 0 ? 1.0 : 0.0;
  out[base + 1] = static_cast<double>(s.cells[kMoveT]) / kMoveInterval;
  out[base + 2] = static_cast<double>(s.cells[kFireT]) / kFireInterval;
}

// ----------------------------------------------------------------- freeway
//
// cells: [0] chicken row, [1..8] car column in lanes (rows) 1..8. Car timing
// is driven by State::step.

MiniFreeway::MiniFreeway(bool corrupted, int max_steps) : corrupted_(corrupted), max_steps_(max_steps) {
  if (max_steps <= 0) throw std::invalid_argument("freeway: max_steps must be positive");
}

std::string MiniFreeway::name() const { return corrupted_ ? "mini-freeway" : "mini-freeway-model"; }

const std::set<int>& MiniFreeway::drift_rows() {
  static const std::set<int> rows{2, 3, 4, 5, 6, 7};
  return rows;
}

State MiniFreeway::initial_state() const {
  State s;
  s.cells.assign(9, 0);
  s.cells[0] = kN - 1;
  for (int lane = 0; lane < 8; ++lane) s.cells[static_cast<std::size_t>(lane + 1)] = kStartX[static_cast<std::size_t>(lane)];
  return s;
}

Transition MiniFreeway::step(const State& state, int action) const {
  check_action(action);
  require_live(*this, state);
  Transition t{state, 0.0};
  State& s = t.next;
  int& row = s.cells[0];

  if (action == 1) row -= 1;
  else if (action == 2) row = std::min(kN - 1, row + 1);
  else if (corrupted_ && drift_rows().count(row)) row -= 1;

  auto collided = [&] { return row >= 1 && row <= 8 && s.cells[static_cast<std::size_t>(row)] == kColumn; };

  bool crash = collided();
  for (int lane = 0; lane < 8; ++lane) {
    const auto l = static_cast<std::size_t>(lane);
    if ((s.step + 1) % kPeriods[l] == 0) {
      int& cx = s.cells[l + 1];
      cx = (cx + kDirections[l] + kN) % kN;
    }
  }
  crash = crash || collided();

  if (row == 0) {
    t.reward = 1.0;
    s.terminal = true;
  } else if (crash) {
    s.terminal = true;
  }
  finish(s, max_steps_);
  return t;
}

void MiniFreeway::write_features(const State& s, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  out[cell(0, s.cells[0], kColumn)] = 1.0;
  for (int lane = 0; lane < 8; ++lane) out[cell(1, lane + 1, s.cells[static_cast<std::size_t>(lane + 1)])] = 1.0;
  const std::size_t base = 2 * kN * kN;
  for (int lane = 0; lane < 8; ++lane) {
    const int p = kPeriods[static_cast<std::size_t>(lane)];
    out[base + static_cast<std::size_t>(lane)] = static_cast<double>(s.step % p) / p;
  }
}

// ---------------------------------------------------------------- breakout
//
// cells: [0] paddle column, [1,2] ball row/col, [3,4] ball direction
// (row, col), [5..34] brick flags for rows 1..3.

namespace {

enum Bo : int { kPaddle = 0, kBallRow, kBallCol, kDr, kDc, kBricks };

int& brick(State& s, int row, int col) { return s.cells[static_cast<std::size_t>(kBricks + (row - 1) * kN + col)]; }

}  // namespace

MiniBreakout::MiniBreakout(bool corrupted, int max_steps) : corrupted_(corrupted), max_steps_(max_steps) {
  if (max_steps <= 0) throw std::invalid_argument("breakout: max_steps must be positive");
}

std::string MiniBreakout::name() const { return corrupted_ ? "mini-breakout" : "mini-breakout-model"; }

const std::set<int>& MiniBreakout::dead_columns() {
  static const std::set<int> cols{3, 6};
  return cols;
}

int MiniBreakout::bricks_left(const State& s) {
  int n = 0;
  for (int k = 0; k < kBrickRows * kN; ++k) n += s.cells[static_cast<std::size_t>(kBricks + k)];
  return n;
}

State MiniBreakout::initial_state() const {
  State s;
  s.cells.assign(kBricks + kBrickRows * kN, 1);
  s.cells[kPaddle] = 4;
  s.cells[kBallRow] = 4;
  s.cells[kBallCol] = 0;
  s.cells[kDr] = 1;
  s.cells[kDc] = 1;
  return s;
}

Transition MiniBreakout::step(const State& state, int action) const {
  check_action(action);
  require_live(*this, state);
  Transition t{state, 0.0};
  State& s = t.next;

  int& paddle = s.cells[kPaddle];
  int moved = 0;
  if (action == 1 && paddle > 0) {
    paddle -= 1;
    moved = -1;
  } else if (action == 2 && paddle < kN - 1) {
    paddle += 1;
    moved = 1;
  }

  int& row = s.cells[kBallRow];
  int& col = s.cells[kBallCol];
  int& dr = s.cells[kDr];
  int& dc = s.cells[kDc];

  int nc = col + dc;
  if (nc < 0 || nc > kN - 1) {
    dc = -dc;
    nc = col + dc;
  }
  int nr = row + dr;
  if (nr < 0) {
    dr = 1;
    nr = 0;
  } else if (nr >= 1 && nr <= kBrickRows && brick(s, nr, nc)) {
    brick(s, nr, nc) = 0;
    t.reward = 1.0;
    dr = -dr;
    nr = row;
  } else if (nr == kN - 1) {
    const bool blocked = corrupted_ && dead_columns().count(paddle) > 0;
    if (nc == paddle && !blocked) {
      dr = -1;
      nr = row;
      if (moved != 0) dc = moved;
    } else {
      s.terminal = true;
    }
  }
  row = nr;
  col = nc;

  if (bricks_left(s) == 0) s.terminal = true;
  finish(s, max_steps_);
  return t;
}

void MiniBreakout::write_features(const State& s, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  out[cell(0, kN - 1, s.cells[kPaddle])] = 1.0;
  out[cell(1, s.cells[kBallRow], s.cells[kBallCol])] = 1.0;
  for (int r = 1; r <= kBrickRows; ++r) {
    for (int c = 0; c < kN; ++c) {
      if (s.cells[static_cast<std::size_t>(kBricks + (r - 1) * kN + c)]) out[cell(2, r, c)] = 1.0;
    }
  }
  const std::size_t base = 3 * kN * kN;
  out[base] = s.cells[kDr];
  out[base + 1] = s.cells[kDc];
}

}  // namespace uamcts
