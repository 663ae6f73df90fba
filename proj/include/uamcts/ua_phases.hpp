#pragma once

#include <span>
#include <vector>

#include "uamcts/mcts.hpp"

namespace uamcts {

// softmax(sign * values / tau) with max subtraction. sign is +1 for the
// selection weights over U^ and -1 for the simulation/backpropagation weights.
std::vector<double> softmax_weights(std::span<const double> values, double tau, double sign);

// UCT whose exploration term is scaled by (1 - alpha_i), alpha = softmax(U^/tau)
// over the current children.
NodeId ua_select(const Tree& tree, double c, double tau, Rng& rng);

// Probability of deleting one child after an expansion.
double deletion_probability(double tau, ExpansionRule rule);

// Expands every action, then with deletion_probability(tau) removes one child
// drawn proportionally to its U^ (only when the U^ mass is positive).
NodeId ua_expand(Tree& tree, NodeId v, const DeterministicModel& model,
                 const UncertaintyEstimator& estimator, double tau, Rng& rng,
                 ExpansionRule rule = ExpansionRule::pseudocode);

// N_S rollouts weighted by softmax(-sigma/tau).
double ua_simulate(const State& state, const DeterministicModel& model,
                   const UncertaintyEstimator& estimator, const Hyperparams& hp, Rng& rng);

// Backpropagation where each non-root node's increment is scaled by the
// softmax(-U^/tau) weight of that node among its siblings.
void ua_backpropagate(Tree& tree, NodeId v, double value, double tau, double gamma);

}  // namespace uamcts
