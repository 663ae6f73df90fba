#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "uamcts/estimator.hpp"
#include "uamcts/model.hpp"
#include "uamcts/rng.hpp"

namespace uamcts {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

struct Node {
  State state;
  int action = -1;  // incoming action, -1 at the root
  double reward = 0.0;  // reward of the incoming transition
  std::int64_t visits = 0;
  double value = 0.0;  // Q(v): summed backed-up returns
  double uncertainty = 0.0;  // U^(v) of the incoming transition
  NodeId parent = kNoNode;
  std::vector<NodeId> children;
  bool expanded = false;
  bool terminal = false;
};

// Arena-allocated search tree. Deleted children are unlinked from their parent
// but keep their slot, so NodeIds stay stable.
class Tree {
 public:
  explicit Tree(State root_state);

  NodeId root() const { return 0; }
  Node& operator[](NodeId id) { return nodes_[static_cast<std::size_t>(id)]; }
  const Node& operator[](NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return nodes_.size(); }

  NodeId add_child(NodeId parent, Transition transition, int action, double uncertainty);
  void remove_child(NodeId parent, std::size_t child_index);

  int depth(NodeId id) const;

 private:
  std::vector<Node> nodes_;
};

enum class RolloutUncertainty { pre_transition, post_transition };
enum class ExpansionRule { pseudocode, text };

struct Hyperparams {
  int iterations = 10;   // N_I
  int rollouts = 10;     // N_S
  int depth = 30;        // D_S
  double c = 1.4142135623730951;
  double gamma = 0.99;
  double tau = 0.1;
  RolloutUncertainty rollout_uncertainty = RolloutUncertainty::pre_transition;
  ExpansionRule expansion_rule = ExpansionRule::pseudocode;

  void validate() const;
};

// Everything a phase strategy may read during one search.
struct SearchContext {
  const DeterministicModel& model;
  const UncertaintyEstimator& estimator;
  const Hyperparams& hp;
  Rng& rng;
};

struct PhaseStrategies {
  std::function<NodeId(const Tree&, const SearchContext&)> select;
  std::function<NodeId(Tree&, NodeId, const SearchContext&)> expand;
  std::function<double(const State&, const SearchContext&)> simulate;
  std::function<void(Tree&, NodeId, double, const SearchContext&)> backpropagate;
};

struct PhaseMask {
  bool select = false;
  bool expand = false;
  bool simulate = false;
  bool backpropagate = false;

  static PhaseMask none() { return {}; }
  static PhaseMask all() { return {true, true, true, true}; }
  bool any() const { return select || expand || simulate || backpropagate; }
};

// Baseline phases in every slot whose mask bit is false, uncertainty-adapted
// phases in the others.
PhaseStrategies make_phases(PhaseMask uncertainty_adapted);

// --- baseline phases ---

// UCT score with the exploration term scaled by `dampening`. N=0 scores +inf.
double uct_score(const Node& child, std::int64_t parent_visits, double c, double dampening);

// argmax over `scores` with uniformly random tie breaking; consumes randomness
// only when ties occur.
std::size_t argmax_random_ties(const std::vector<double>& scores, Rng& rng);

NodeId select_baseline(const Tree& tree, double c, Rng& rng);
NodeId expand_baseline(Tree& tree, NodeId v, const DeterministicModel& model,
                       const UncertaintyEstimator& estimator, Rng& rng);
double simulate_baseline(const State& state, const DeterministicModel& model, const Hyperparams& hp,
                         Rng& rng);
void backpropagate_baseline(Tree& tree, NodeId v, double value, double gamma);

struct RolloutResult {
  double ret = 0.0;        // g = sum gamma^(k-1) r_k
  double uncertainty = 0.0;  // sigma = sum gamma^(k-1) U^(s_k, a_k)
};

// Uniform-random rollout. `estimator` may be null, in which case sigma is 0.
RolloutResult rollout(const State& state, const DeterministicModel& model, int depth, double gamma,
                      const UncertaintyEstimator* estimator, Rng& rng,
                      RolloutUncertainty mode = RolloutUncertainty::pre_transition);

// Mean of `returns` under the given weights, summed in index order.
double weighted_return(const std::vector<double>& returns, const std::vector<double>& weights);

struct SearchResult {
  int action = -1;
  Tree tree;
};

SearchResult search_tree(const State& root_state, const DeterministicModel& model,
                         const PhaseStrategies& phases, const Hyperparams& hp,
                         const UncertaintyEstimator& estimator, Rng& rng);

int search(const State& root_state, const DeterministicModel& model, const PhaseStrategies& phases,
           const Hyperparams& hp, const UncertaintyEstimator& estimator, Rng& rng);

}  // namespace uamcts
