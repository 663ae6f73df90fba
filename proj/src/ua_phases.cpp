#include "uamcts/ua_phases.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace uamcts {

std::vector<double> softmax_weights(std::span<const double> values, double tau, double sign) {
  if (values.empty()) throw std::invalid_argument("softmax_weights: empty input");
  if (!(tau > 0.0)) throw std::invalid_argument("softmax_weights: tau must be positive");
  std::vector<double> w(values.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw std::invalid_argument("softmax_weights: non-finite input");
    // Divide before multiplying by sign so huge inputs cannot overflow.
    w[i] = sign * (values[i] / tau);
    top = std::max(top, w[i]);
  }
  double sum = 0.0;
  for (double& x : w) {
    x = std::exp(x - top);
    sum += x;
  }
  for (double& x : w) x /= sum;
  return w;
}

NodeId ua_select(const Tree& tree, double c, double tau, Rng& rng) {
  NodeId v = tree.root();
  std::vector<double> u;
  std::vector<double> scores;
  while (tree[v].expanded && !tree[v].children.empty()) {
    const Node& node = tree[v];
    u.clear();
    for (NodeId ch : node.children) u.push_back(tree[ch].uncertainty);
    const auto alpha = softmax_weights(u, tau, +1.0);
    scores.clear();
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      scores.push_back(uct_score(tree[node.children[i]], node.visits, c, 1.0 - alpha[i]));
    }
    v = node.children[argmax_random_ties(scores, rng)];
  }
  return v;
}

double deletion_probability(double tau, ExpansionRule rule) {
  const double p = rule == ExpansionRule::pseudocode ? 1.0 - tau / 10.0 : tau / 10.0;
  return std::clamp(p, 0.0, 1.0);
}

NodeId ua_expand(Tree& tree, NodeId v, const DeterministicModel& model,
                 const UncertaintyEstimator& estimator, double tau, Rng& rng, ExpansionRule rule) {
  if (tree[v].expanded || tree[v].terminal) {
    throw std::logic_error("ua_expand: node is already expanded or terminal");
  }
  const State parent_state = tree[v].state;
  for (int a = 0; a < model.num_actions(); ++a) {
    const double u = estimator.query(parent_state, a);
    tree.add_child(v, model.step(parent_state, a), a, u);
  }
  tree[v].expanded = true;

  const auto& kids = tree[v].children;
  double mass = 0.0;
  for (NodeId ch : kids) mass += tree[ch].uncertainty;
  // The uniform draw happens only when deletion is possible, which keeps the
  // random stream aligned with expand_baseline when U^ vanishes.
  if (mass > 0.0 && kids.size() >= 2 && rng.uniform() < deletion_probability(tau, rule)) {
    const double target = rng.uniform() * mass;
    double acc = 0.0;
    std::size_t victim = kids.size() - 1;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      acc += tree[kids[i]].uncertainty;
      if (target < acc) {
        victim = i;
        break;
      }
    }
    // Guard against rounding landing on a zero-mass tail child.
    while (tree[kids[victim]].uncertainty <= 0.0) --victim;
    tree.remove_child(v, victim);
  }
  const auto& survivors = tree[v].children;
  return survivors[rng.below(survivors.size())];
}

double ua_simulate(const State& state, const DeterministicModel& model,
                   const UncertaintyEstimator& estimator, const Hyperparams& hp, Rng& rng) {
  const auto n = static_cast<std::size_t>(hp.rollouts);
  std::vector<double> returns(n);
  std::vector<double> sigma(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = rollout(state, model, hp.depth, hp.gamma, &estimator, rng, hp.rollout_uncertainty);
    returns[i] = r.ret;
    sigma[i] = r.uncertainty;
  }
  return weighted_return(returns, softmax_weights(sigma, hp.tau, -1.0));
}

void ua_backpropagate(Tree& tree, NodeId v, double value, double tau, double gamma) {
  double carried = value;
  std::vector<double> sibling_u;
  for (NodeId id = v; id != kNoNode; id = tree[id].parent) {
    Node& node = tree[id];
    double alpha = 1.0;
    if (node.parent != kNoNode) {
      const auto& siblings = tree[node.parent].children;
      sibling_u.clear();
      std::size_t self = 0;
      for (std::size_t i = 0; i < siblings.size(); ++i) {
        if (siblings[i] == id) self = i;
        sibling_u.push_back(tree[siblings[i]].uncertainty);
      }
      alpha = softmax_weights(sibling_u, tau, -1.0)[self];
    }
    const double increment = node.reward + carried;
    node.visits += 1;
    node.value += alpha * increment;
    carried = increment * gamma;
  }
}

PhaseStrategies make_phases(PhaseMask ua) {
  PhaseStrategies p;
  if (ua.select) {
    p.select = [](const Tree& t, const SearchContext& ctx) { return ua_select(t, ctx.hp.c, ctx.hp.tau, ctx.rng); };
  } else {
    p.select = [](const Tree& t, const SearchContext& ctx) { return select_baseline(t, ctx.hp.c, ctx.rng); };
  }
  if (ua.expand) {
    p.expand = [](Tree& t, NodeId v, const SearchContext& ctx) {
      return ua_expand(t, v, ctx.model, ctx.estimator, ctx.hp.tau, ctx.rng, ctx.hp.expansion_rule);
    };
  } else {
    p.expand = [](Tree& t, NodeId v, const SearchContext& ctx) {
      return expand_baseline(t, v, ctx.model, ctx.estimator, ctx.rng);
    };
  }
  if (ua.simulate) {
    p.simulate = [](const State& s, const SearchContext& ctx) {
      return ua_simulate(s, ctx.model, ctx.estimator, ctx.hp, ctx.rng);
    };
  } else {
    p.simulate = [](const State& s, const SearchContext& ctx) {
      return simulate_baseline(s, ctx.model, ctx.hp, ctx.rng);
    };
  }
  if (ua.backpropagate) {
    p.backpropagate = [](Tree& t, NodeId v, double value, const SearchContext& ctx) {
      ua_backpropagate(t, v, value, ctx.hp.tau, ctx.hp.gamma);
    };
  } else {
    p.backpropagate = [](Tree& t, NodeId v, double value, const SearchContext& ctx) {
      backpropagate_baseline(t, v, value, ctx.hp.gamma);
    };
  }
  return p;
}

}  // namespace uamcts
