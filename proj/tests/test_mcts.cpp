#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "uamcts/envs.hpp"
#include "uamcts/gridworld.hpp"
#include "uamcts/mcts.hpp"

using namespace uamcts;

namespace {

// Walk on 0..length with reward 1 for reaching the right end.
class Line final : public DeterministicModel {
 public:
  explicit Line(int length, int actions = 2) : length_(length), actions_(actions) {}
  std::string name() const override { return "line"; }
  int num_actions() const override { return actions_; }
  State initial_state() const override { return {{0}, 0, false}; }
  Transition step(const State& s, int a) const override {
    check_action(a);
    Transition t{s, 0.0};
    int& x = t.next.cells[0];
    x = a == 0 ? std::max(0, x - 1) : std::min(length_, x + 1);
    t.next.step += 1;
    if (x == length_) {
      t.reward = 1.0;
      t.next.terminal = true;
    }
    return t;
  }
  std::size_t feature_size() const override { return static_cast<std::size_t>(length_ + 1); }
  void write_features(const State& s, std::span<double> out) const override {
    std::fill(out.begin(), out.end(), 0.0);
    out[static_cast<std::size_t>(s.cells[0])] = 1.0;
  }

 private:
  int length_;
  int actions_;
};

class Constant final : public UncertaintyEstimator {
 public:
  explicit Constant(double v) : v_(v) {}
  double query(const State&, int) const override { return v_; }

 private:
  double v_;
};

Tree two_children(double q0, double q1, std::int64_t n) {
  Tree t(State{{0}, 0, false});
  t.add_child(t.root(), Transition{State{{1}}, 0.0}, 0, 0.0);
  t.add_child(t.root(), Transition{State{{2}}, 0.0}, 1, 0.0);
  t[t.root()].expanded = true;
  t[1].visits = n;
  t[1].value = q0 * static_cast<double>(n);
  t[2].visits = n;
  t[2].value = q1 * static_cast<double>(n);
  t[t.root()].visits = 2 * n;
  return t;
}

// Independent absorption computation on the model layout (no wall at (0,2)).
double absorption_probability(std::pair<int, int> start, int steps) {
  const std::set<std::pair<int, int>> walls{{1, 1}, {1, 2}, {1, 3}, {1, 4}, {1, 5}};
  const std::pair<int, int> goal{1, 6};
  std::map<std::pair<int, int>, double> p{{start, 1.0}};
  double absorbed = 0.0;
  const int dr[4] = {-1, 1, 0, 0}, dc[4] = {0, 0, -1, 1};
  for (int k = 0; k < steps; ++k) {
    std::map<std::pair<int, int>, double> next;
    for (const auto& [cell, mass] : p) {
      for (int a = 0; a < 4; ++a) {
        std::pair<int, int> to{cell.first + dr[a], cell.second + dc[a]};
        if (to.first < 0 || to.first > 2 || to.second < 0 || to.second > 6 || walls.count(to)) to = cell;
        if (to == goal) absorbed += mass / 4;
        else next[to] += mass / 4;
      }
    }
    p = std::move(next);
  }
  return absorbed;
}

}  // namespace

TEST_CASE("tree bookkeeping") {
  Tree t(State{{0}});
  CHECK(t.size() == 1);
  CHECK(t[t.root()].parent == kNoNode);
  const NodeId a = t.add_child(t.root(), Transition{State{{1}}, 2.5}, 1, 0.75);
  const NodeId b = t.add_child(a, Transition{State{{2}, 2, true}, 0.0}, 0, 0.0);
  CHECK(t[a].reward == 2.5);
  CHECK(t[a].uncertainty == 0.75);
  CHECK(t[b].terminal);
  CHECK(t.depth(b) == 2);
  t.remove_child(t.root(), 0);
  CHECK(t[t.root()].children.empty());
  CHECK(t[a].state.cells[0] == 1);  // slot kept
}

TEST_CASE("hyperparams validation") {
  Hyperparams hp;
  CHECK_NOTHROW(hp.validate());
  hp.gamma = 1.5;
  CHECK_THROWS_AS(hp.validate(), std::invalid_argument);
  hp = {};
  hp.tau = 0.0;
  CHECK_THROWS_AS(hp.validate(), std::invalid_argument);
  hp = {};
  hp.iterations = 0;
  CHECK_THROWS_AS(hp.validate(), std::invalid_argument);
}

TEST_CASE("uct score") {
  Node n;
  CHECK(uct_score(n, 10, 1.0, 1.0) == std::numeric_limits<double>::infinity());
  n.visits = 4;
  n.value = 2.0;
  CHECK(uct_score(n, 16, 2.0, 1.0) == doctest::Approx(0.5 + 2.0 * std::sqrt(std::log(16.0) / 4.0)));
  CHECK(uct_score(n, 16, 2.0, 0.0) == 0.5);
}

TEST_CASE("argmax tie breaking is uniform and lazy") {
  Rng rng(5);
  const std::uint64_t before = Rng(5).next();
  CHECK(argmax_random_ties({0.1, 0.7, 0.3}, rng) == 1);
  CHECK(rng.next() == before);  // no draw without ties

  std::array<int, 4> counts{};
  for (int i = 0; i < 30000; ++i) ++counts[argmax_random_ties({1.0, 1.0, 0.0, 1.0}, rng)];
  CHECK(counts[2] == 0);
  for (int k : {0, 1, 3}) CHECK(counts[static_cast<std::size_t>(k)] == doctest::Approx(10000).epsilon(0.05));
}

TEST_CASE("select baseline") {
  Rng rng(1);
  SUBCASE("unexpanded root is returned") {
    Tree t(State{{0}});
    CHECK(select_baseline(t, 1.0, rng) == t.root());
  }
  SUBCASE("unvisited child wins") {
    Tree t = two_children(0.9, 0.0, 3);
    t[2].visits = 0;
    t[2].value = 0.0;
    CHECK(select_baseline(t, 1.0, rng) == 2);
  }
  SUBCASE("c = 0 exploits") {
    Tree t = two_children(0.9, 0.1, 5);
    CHECK(select_baseline(t, 0.0, rng) == 1);
  }
}

TEST_CASE("expand baseline") {
  auto env = make_env("two-way-gridworld");
  const auto& g = dynamic_cast<const GridWorld&>(*env.model);
  Tree t(g.make_state({1, 0}, 0));
  Rng rng(2);
  ZeroUncertainty zero;
  const NodeId chosen = expand_baseline(t, t.root(), g, zero, rng);
  CHECK(t[t.root()].children.size() == 4);
  CHECK(t[t.root()].expanded);
  CHECK(t[chosen].parent == t.root());
  // Left and Right from (1,0) are blocked: self transitions.
  for (NodeId ch : t[t.root()].children) {
    const Node& n = t[ch];
    CHECK(n.uncertainty == 0.0);
    if (n.action == kLeft || n.action == kRight) CHECK(GridWorld::position(n.state) == Cell{1, 0});
  }
  CHECK_THROWS_AS(expand_baseline(t, t.root(), g, zero, rng), std::logic_error);

  Constant half(0.5);
  Tree u(g.make_state({0, 0}, 0));
  expand_baseline(u, u.root(), g, half, rng);
  for (NodeId ch : u[u.root()].children) CHECK(u[ch].uncertainty == 0.5);
}

TEST_CASE("rollout") {
  Line line(3);
  Rng rng(4);
  Constant one(1.0);
  SUBCASE("depth 0") {
    const auto r = rollout(line.initial_state(), line, 0, 0.9, &one, rng);
    CHECK(r.ret == 0.0);
    CHECK(r.uncertainty == 0.0);
  }
  SUBCASE("zero estimator gives zero sigma") {
    ZeroUncertainty zero;
    CHECK(rollout(line.initial_state(), line, 20, 0.9, &zero, rng).uncertainty == 0.0);
  }
  SUBCASE("sigma is a discounted count of steps") {
    // Two actions, unit uncertainty: sigma = sum gamma^k over the steps taken.
    const auto r = rollout(State{{2}}, line, 5, 0.5, &one, rng);
    const double full = 1 + 0.5 + 0.25 + 0.125 + 0.0625;
    CHECK(r.uncertainty <= full);
    CHECK(r.uncertainty >= 1.0);
  }
  SUBCASE("reproducible") {
    Rng a(77), b(77);
    const auto x = rollout(line.initial_state(), line, 30, 0.95, &one, a);
    const auto y = rollout(line.initial_state(), line, 30, 0.95, &one, b);
    CHECK(x.ret == y.ret);
    CHECK(x.uncertainty == y.uncertainty);
  }
  SUBCASE("terminal start consumes no randomness") {
    Rng a(8);
    const auto r = rollout(State{{3}, 0, true}, line, 30, 0.9, &one, a);
    CHECK(r.ret == 0.0);
    CHECK(a.next() == Rng(8).next());
  }
}

TEST_CASE("simulate baseline") {
  Line line(50);
  Hyperparams hp;
  hp.depth = 10;
  Rng rng(3);
  CHECK(simulate_baseline(State{{0}, 0, true}, line, hp, rng) == 0.0);
  CHECK(simulate_baseline(line.initial_state(), line, hp, rng) == 0.0);  // goal out of reach
}

TEST_CASE("simulate baseline matches the absorption probability") {
  auto env = make_env("two-way-gridworld");
  const auto& g = dynamic_cast<const GridWorld&>(*env.model);
  Hyperparams hp;
  hp.gamma = 1.0;
  hp.depth = 30;
  hp.rollouts = 10;
  const double expected = 10.0 * absorption_probability({0, 6}, 30);
  Rng rng(12);
  double sum = 0.0;
  const int calls = 3000;
  for (int i = 0; i < calls; ++i) sum += simulate_baseline(g.make_state({0, 6}, 0), g, hp, rng);
  // 30000 rollouts: standard error of the mean is below 0.03.
  CHECK(std::abs(sum / calls - expected) < 0.12);
}

TEST_CASE("backpropagate baseline") {
  SUBCASE("root only") {
    Tree t(State{{0}});
    backpropagate_baseline(t, t.root(), 5.0, 0.9);
    CHECK(t[t.root()].visits == 1);
    CHECK(t[t.root()].value == 5.0);
  }
  SUBCASE("depth two geometric") {
    Tree t(State{{0}});
    const NodeId a = t.add_child(t.root(), Transition{State{{1}}, 0.0}, 0, 0.0);
    const NodeId b = t.add_child(a, Transition{State{{2}}, 0.0}, 0, 0.0);
    backpropagate_baseline(t, b, 4.0, 0.5);
    CHECK(t[b].value == 4.0);
    CHECK(t[a].value == 2.0);
    CHECK(t[t.root()].value == 1.0);
  }
  SUBCASE("gamma 1 is flat") {
    Tree t(State{{0}});
    const NodeId a = t.add_child(t.root(), Transition{State{{1}}, 0.0}, 0, 0.0);
    const NodeId b = t.add_child(a, Transition{State{{2}}, 0.0}, 0, 0.0);
    backpropagate_baseline(t, b, 3.0, 1.0);
    CHECK(t[b].value == t[a].value);
    CHECK(t[a].value == t[t.root()].value);
  }
  SUBCASE("edge rewards are added on the way up") {
    Tree t(State{{0}});
    const NodeId a = t.add_child(t.root(), Transition{State{{1}}, 1.0}, 0, 0.0);
    backpropagate_baseline(t, a, 2.0, 0.5);
    CHECK(t[a].value == 3.0);
    CHECK(t[t.root()].value == 1.5);
  }
}

TEST_CASE("search") {
  const auto phases = make_phases(PhaseMask::none());
  ZeroUncertainty zero;
  SUBCASE("one iteration visits the root once") {
    Line line(5);
    Hyperparams hp;
    hp.iterations = 1;
    Rng rng(1);
    const auto r = search_tree(line.initial_state(), line, phases, hp, zero, rng);
    CHECK(r.tree[r.tree.root()].visits == 1);
    CHECK(r.tree.size() == 1);
    CHECK((r.action == 0 || r.action == 1));
  }
  SUBCASE("visit conservation") {
    Line line(5);
    Hyperparams hp;
    hp.iterations = 200;
    Rng rng(2);
    const auto r = search_tree(line.initial_state(), line, phases, hp, zero, rng);
    CHECK(r.tree[r.tree.root()].visits == 200);
    for (std::size_t id = 0; id < r.tree.size(); ++id) {
      const Node& n = r.tree[static_cast<NodeId>(id)];
      std::int64_t below = 0;
      for (NodeId ch : n.children) below += r.tree[ch].visits;
      CHECK(n.visits >= below);
      CHECK(n.children.empty() == !(n.expanded && !n.terminal));
    }
  }
  SUBCASE("single action") {
    Line line(5, 1);
    Hyperparams hp;
    hp.iterations = 20;
    Rng rng(3);
    for (int i = 0; i < 5; ++i) CHECK(search(line.initial_state(), line, phases, hp, zero, rng) == 0);
  }
  SUBCASE("terminal root rejected") {
    Line line(5);
    Rng rng(1);
    CHECK_THROWS_AS(search(State{{5}, 0, true}, line, phases, Hyperparams{}, zero, rng), std::invalid_argument);
  }
  SUBCASE("deterministic per seed") {
    Line line(6);
    Hyperparams hp;
    hp.iterations = 50;
    for (std::uint64_t s = 0; s < 5; ++s) {
      Rng a(s), b(s);
      CHECK(search(line.initial_state(), line, phases, hp, zero, a) ==
            search(line.initial_state(), line, phases, hp, zero, b));
    }
  }
  SUBCASE("mean value per visit stays within achievable returns") {
    Line line(4);
    Hyperparams hp;
    hp.iterations = 300;
    hp.gamma = 0.9;
    Rng rng(9);
    const auto r = search_tree(line.initial_state(), line, phases, hp, zero, rng);
    for (std::size_t id = 0; id < r.tree.size(); ++id) {
      const Node& n = r.tree[static_cast<NodeId>(id)];
      if (n.visits == 0) continue;
      CHECK(n.value / static_cast<double>(n.visits) >= 0.0);
      CHECK(n.value / static_cast<double>(n.visits) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("true-model planning on the gridworld reaches the goal within 2 steps of the shortest path" *
          doctest::may_fail()) {
  auto env = make_env("two-way-gridworld");
  const auto& truth = *env.truth;
  const auto phases = make_phases(PhaseMask::none());
  Hyperparams hp = env_info("two-way-gridworld").defaults;
  hp.c = 2.0;
  ZeroUncertainty zero;
  double steps = 0;
  for (int seed = 0; seed < 30; ++seed) {
    Rng rng(derive_seed(123, static_cast<std::uint64_t>(seed)));
    State s = truth.initial_state();
    while (!s.terminal) s = truth.step(s, search(s, truth, phases, hp, zero, rng)).next;
    steps += s.step;
  }
  const auto& grid = dynamic_cast<const GridWorld&>(truth);
  MESSAGE("mean steps ", steps / 30, " shortest ", grid.shortest_path());
  CHECK(steps / 30 <= grid.shortest_path() + 2);
}
