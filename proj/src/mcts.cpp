#include "uamcts/mcts.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace uamcts {

Tree::Tree(State root_state) {
  Node root;
  root.terminal = root_state.terminal;
  root.state = std::move(root_state);
  nodes_.push_back(std::move(root));
}

NodeId Tree::add_child(NodeId parent, Transition transition, int action, double uncertainty) {
  Node child;
  child.terminal = transition.next.terminal;
  child.state = std::move(transition.next);
  child.reward = transition.reward;
  child.action = action;
  child.uncertainty = uncertainty;
  child.parent = parent;
  const auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(std::move(child));
  nodes_[static_cast<std::size_t>(parent)].children.push_back(id);
  return id;
}

void Tree::remove_child(NodeId parent, std::size_t child_index) {
  auto& kids = (*this)[parent].children;
  kids.erase(kids.begin() + static_cast<std::ptrdiff_t>(child_index));
}

int Tree::depth(NodeId id) const {
  int d = 0;
  for (NodeId p = (*this)[id].parent; p != kNoNode; p = (*this)[p].parent) ++d;
  return d;
}

void Hyperparams::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("hyperparams: " + what); };
  if (iterations < 1) fail("iterations must be positive");
  if (rollouts < 1) fail("rollouts must be positive");
  if (depth < 0) fail("depth must be non-negative");
  if (!(c >= 0.0)) fail("exploration constant must be non-negative");
  if (!(gamma >= 0.0 && gamma <= 1.0)) fail("gamma must lie in [0,1]");
  if (!(tau > 0.0)) fail("tau must be positive");
}

double uct_score(const Node& child, std::int64_t parent_visits, double c, double dampening) {
  if (child.visits == 0) return std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(child.visits);
  const double explore = std::sqrt(std::log(static_cast<double>(parent_visits)) / n);
  return child.value / n + (c * dampening) * explore;
}

std::size_t argmax_random_ties(const std::vector<double>& scores, Rng& rng) {
  std::size_t best = 0;
  std::size_t ties = 1;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) {
      best = i;
      ties = 1;
    } else if (scores[i] == scores[best]) {
      ++ties;
      if (rng.below(ties) == 0) best = i;
    }
  }
  return best;
}

NodeId select_baseline(const Tree& tree, double c, Rng& rng) {
  NodeId v = tree.root();
  std::vector<double> scores;
  while (tree[v].expanded && !tree[v].children.empty()) {
    const Node& node = tree[v];
    scores.clear();
    for (NodeId ch : node.children) scores.push_back(uct_score(tree[ch], node.visits, c, 1.0));
    v = node.children[argmax_random_ties(scores, rng)];
  }
  return v;
}

NodeId expand_baseline(Tree& tree, NodeId v, const DeterministicModel& model,
                       const UncertaintyEstimator& estimator, Rng& rng) {
  if (tree[v].expanded || tree[v].terminal) {
    throw std::logic_error("expand: node is already expanded or terminal");
  }
  const State parent_state = tree[v].state;
  for (int a = 0; a < model.num_actions(); ++a) {
    const double u = estimator.query(parent_state, a);
    tree.add_child(v, model.step(parent_state, a), a, u);
  }
  tree[v].expanded = true;
  const auto& kids = tree[v].children;
  return kids[rng.below(kids.size())];
}

RolloutResult rollout(const State& state, const DeterministicModel& model, int depth, double gamma,
                      const UncertaintyEstimator* estimator, Rng& rng, RolloutUncertainty mode) {
  RolloutResult out;
  State s = state;
  double discount = 1.0;
  const auto actions = static_cast<std::size_t>(model.num_actions());
  for (int count = 0; !s.terminal && count < depth; ++count) {
    const int a = static_cast<int>(rng.below(actions));
    double u = 0.0;
    if (estimator != nullptr && mode == RolloutUncertainty::pre_transition) {
      u = estimator->query(s, a);
    }
    Transition tr = model.step(s, a);
    s = std::move(tr.next);
    // A terminal successor has no outgoing transition to score.
    if (estimator != nullptr && mode == RolloutUncertainty::post_transition && !s.terminal) {
      u = estimator->query(s, a);
    }
    out.ret += discount * tr.reward;
    out.uncertainty += discount * u;
    discount *= gamma;
  }
  return out;
}

double weighted_return(const std::vector<double>& returns, const std::vector<double>& weights) {
  double g = 0.0;
  for (std::size_t i = 0; i < returns.size(); ++i) g += weights[i] * returns[i];
  return g;
}

double simulate_baseline(const State& state, const DeterministicModel& model, const Hyperparams& hp,
                         Rng& rng) {
  const auto n = static_cast<std::size_t>(hp.rollouts);
  std::vector<double> returns(n);
  for (std::size_t i = 0; i < n; ++i) {
    returns[i] = rollout(state, model, hp.depth, hp.gamma, nullptr, rng).ret;
  }
  // Same arithmetic as a softmax over equal inputs, so the uncertainty-adapted
  // simulation reproduces this value bit for bit when all sigma coincide.
  return weighted_return(returns, std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

void backpropagate_baseline(Tree& tree, NodeId v, double value, double gamma) {
  double carried = value;
  for (NodeId id = v; id != kNoNode; id = tree[id].parent) {
    Node& node = tree[id];
    const double increment = node.reward + carried;
    node.visits += 1;
    node.value += increment;
    carried = increment * gamma;
  }
}

SearchResult search_tree(const State& root_state, const DeterministicModel& model,
                         const PhaseStrategies& phases, const Hyperparams& hp,
                         const UncertaintyEstimator& estimator, Rng& rng) {
  if (root_state.terminal) throw std::invalid_argument("search: root state is terminal");
  hp.validate();
  SearchResult result{-1, Tree(root_state)};
  Tree& tree = result.tree;
  const SearchContext ctx{model, estimator, hp, rng};

  for (int it = 0; it < hp.iterations; ++it) {
    NodeId leaf = phases.select(tree, ctx);
    if (tree[leaf].visits > 0 && !tree[leaf].terminal) leaf = phases.expand(tree, leaf, ctx);
    const double value = phases.simulate(tree[leaf].state, ctx);
    phases.backpropagate(tree, leaf, value, ctx);
  }

  const Node& root = tree[tree.root()];
  if (root.expanded && root.children.empty()) {
    throw std::logic_error("search: every root child was deleted");
  }
  if (root.children.empty()) {
    // Budget too small to expand the root.
    result.action = static_cast<int>(rng.below(static_cast<std::size_t>(model.num_actions())));
    return result;
  }
  std::vector<double> visits;
  for (NodeId ch : root.children) visits.push_back(static_cast<double>(tree[ch].visits));
  result.action = tree[root.children[argmax_random_ties(visits, rng)]].action;
  return result;
}

int search(const State& root_state, const DeterministicModel& model, const PhaseStrategies& phases,
           const Hyperparams& hp, const UncertaintyEstimator& estimator, Rng& rng) {
  return search_tree(root_state, model, phases, hp, estimator, rng).action;
}

}  // namespace uamcts
