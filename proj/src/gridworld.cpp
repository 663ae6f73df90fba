#include "uamcts/gridworld.hpp"

#include <queue>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "uamcts/envs.hpp"

namespace uamcts {

void GridWorldSpec::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("gridworld: " + what); };
  if (rows <= 0 || cols <= 0) fail("rows and cols must be positive");
  auto inside = [&](Cell c) { return c.first >= 0 && c.first < rows && c.second >= 0 && c.second < cols; };
  for (const auto& w : walls) {
    if (!inside(w)) fail("wall outside the grid");
  }
  for (const auto& i : icy) {
    if (!inside(i)) fail("ice outside the grid");
    if (walls.count(i)) fail("icy cell is a wall");
  }
  if (!inside(start) || !inside(goal)) fail("start or goal outside the grid");
  if (walls.count(start) || walls.count(goal)) fail("start or goal is a wall");
  if (start == goal) fail("start equals goal");
  if (max_steps <= 0) fail("max_steps must be positive");
}

std::string to_ascii(const GridWorldSpec& spec) {
  std::ostringstream out;
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      const Cell cell{r, c};
      char ch = '.';
      if (spec.walls.count(cell)) ch = '#';
      else if (cell == spec.start) ch = 'S';
      else if (cell == spec.goal) ch = 'G';
      else if (spec.icy.count(cell)) ch = 'I';
      out << ch;
    }
    out << '\n';
  }
  return out.str();
}

GridWorldSpec parse_ascii(const std::string& text) {
  GridWorldSpec spec;
  spec.walls.clear();
  spec.icy.clear();
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) throw std::invalid_argument("gridworld ascii: empty layout");
  spec.rows = static_cast<int>(lines.size());
  spec.cols = static_cast<int>(lines[0].size());
  bool have_start = false;
  bool have_goal = false;
  for (int r = 0; r < spec.rows; ++r) {
    if (static_cast<int>(lines[r].size()) != spec.cols) {
      throw std::invalid_argument("gridworld ascii: ragged row " + std::to_string(r));
    }
    for (int c = 0; c < spec.cols; ++c) {
      switch (lines[r][c]) {
        case '#': spec.walls.insert({r, c}); break;
        case '.': break;
        case 'S': spec.start = {r, c}; have_start = true; break;
        case 'G': spec.goal = {r, c}; have_goal = true; break;
        case 'I': spec.icy.insert({r, c}); break;
        default:
          throw std::invalid_argument(std::string("gridworld ascii: unknown symbol '") + lines[r][c] + "'");
      }
    }
  }
  if (!have_start || !have_goal) throw std::invalid_argument("gridworld ascii: missing S or G");
  spec.slip = !spec.icy.empty();
  return spec;
}

GridWorld::GridWorld(GridWorldSpec spec, std::string name) : spec_(std::move(spec)), name_(std::move(name)) {
  spec_.validate();
  if (shortest_path() < 0) throw std::invalid_argument("gridworld: goal unreachable from start");
}

bool GridWorld::in_bounds(Cell c) const {
  return c.first >= 0 && c.first < spec_.rows && c.second >= 0 && c.second < spec_.cols;
}

bool GridWorld::is_wall(Cell c) const { return spec_.walls.count(c) > 0; }

State GridWorld::make_state(Cell c, int step) const {
  State s;
  s.cells = {c.first, c.second};
  s.step = step;
  s.terminal = c == spec_.goal || step >= spec_.max_steps;
  return s;
}

State GridWorld::initial_state() const { return make_state(spec_.start, 0); }

Cell GridWorld::move(Cell c, int action) const {
  static constexpr int dr[4] = {-1, 1, 0, 0};
  static constexpr int dc[4] = {0, 0, -1, 1};
  auto one = [&](Cell from) {
    const Cell to{from.first + dr[action], from.second + dc[action]};
    return in_bounds(to) && !is_wall(to) ? to : from;
  };
  Cell next = one(c);
  if (spec_.slip && next != c && spec_.icy.count(next)) next = one(next);
  return next;
}

Transition GridWorld::transition_to(const State& from, Cell next) const {
  Transition t;
  t.next = make_state(next, from.step + 1);
  t.reward = next == spec_.goal ? spec_.goal_reward : spec_.step_reward;
  return t;
}

Transition GridWorld::step(const State& state, int action) const {
  check_action(action);
  if (state.terminal) throw std::logic_error("gridworld: step from a terminal state");
  return transition_to(state, move(position(state), action));
}

std::size_t GridWorld::feature_size() const {
  return static_cast<std::size_t>(spec_.rows * spec_.cols);
}

void GridWorld::write_features(const State& state, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  out[static_cast<std::size_t>(state.cells[0] * spec_.cols + state.cells[1])] = 1.0;
}

double GridWorld::feature_distance_sq(const State& a, const State& b) const {
  return a.cells[0] == b.cells[0] && a.cells[1] == b.cells[1] ? 0.0 : 2.0;
}

Cell GridWorld::decode_position(std::span<const double> features) const {
  if (features.size() != feature_size()) throw std::invalid_argument("gridworld decode: size mismatch");
  Cell best{-1, -1};
  double best_v = 0.0;
  for (int r = 0; r < spec_.rows; ++r) {
    for (int c = 0; c < spec_.cols; ++c) {
      if (is_wall({r, c})) continue;
      const double v = features[static_cast<std::size_t>(r * spec_.cols + c)];
      if (best.first < 0 || v > best_v) {
        best = {r, c};
        best_v = v;
      }
    }
  }
  return best;
}

int GridWorld::shortest_path() const {
  std::vector<int> dist(static_cast<std::size_t>(spec_.rows * spec_.cols), -1);
  auto idx = [&](Cell c) { return static_cast<std::size_t>(c.first * spec_.cols + c.second); };
  std::queue<Cell> q;
  dist[idx(spec_.start)] = 0;
  q.push(spec_.start);
  while (!q.empty()) {
    const Cell c = q.front();
    q.pop();
    if (c == spec_.goal) return dist[idx(c)];
    for (int a = 0; a < 4; ++a) {
      const Cell n = move(c, a);
      if (dist[idx(n)] < 0) {
        dist[idx(n)] = dist[idx(c)] + 1;
        q.push(n);
      }
    }
  }
  return -1;
}

GridWorldSpec two_way_layout() {
  return parse_ascii(
      ".......\n"
      "S#####G\n"
      ".......\n");
}

ModelPair two_way_gridworld() {
  GridWorldSpec truth = two_way_layout();
  truth.walls.insert({0, 2});
  GridWorldSpec model = two_way_layout();
  return {std::make_unique<GridWorld>(truth, "two-way-gridworld"),
          std::make_unique<GridWorld>(model, "two-way-gridworld-model")};
}

ModelPair icy_two_way_gridworld() {
  GridWorldSpec truth = two_way_layout();
  truth.walls.insert({0, 2});
  truth.icy.insert({2, 3});
  truth.slip = true;
  GridWorldSpec model = two_way_layout();
  return {std::make_unique<GridWorld>(truth, "icy-two-way-gridworld"),
          std::make_unique<GridWorld>(model, "icy-two-way-gridworld-model")};
}

}  // namespace uamcts
