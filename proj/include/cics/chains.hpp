#ifndef CICS_CHAINS_HPP
#define CICS_CHAINS_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cics/rng.hpp"
#include "cics/scalar.hpp"

namespace cics {

// Information-acquisition MDP. States form a DAG; terminals carry values,
// internal states carry one or more costed actions with stochastic
// transitions.
struct MdpAction {
  double cost = 0;
  std::vector<std::pair<std::string, double>> transitions;  // (to, prob)
};

struct MdpState {
  bool terminal = false;
  double value = 0;                // terminals only
  std::vector<MdpAction> actions;  // internals only
};

struct Mdp {
  std::string root;
  std::map<std::string, MdpState> states;
};

// Per-state distribution over action indices, fixed in advance.
struct Commitment {
  std::map<std::string, std::vector<double>> per_state;
};

// throws InputError (pointer relative to the MDP object) on violation
void validate_mdp(const Mdp& m, int depth_cap = 64);

bool is_chain(const Mdp& m);

// Collapses each internal state's actions into one mixed action with cost
// sum_a pi(s,a) c(a) and transitions sum_a pi(s,a) Pi(s,a,.). The result is
// Markov-chain shaped.
Mdp apply_commitment(const Mdp& m, const Commitment& pi);

// Out-tree of all root paths of a Markov chain. Surrogate values live on
// trees: a DAG terminal reached by several paths becomes several leaves.
template <class K>
struct ChainTreeT {
  struct Node {
    int parent = -1;
    K cost{0};   // internal nodes: cost of the single action
    K value{0};  // leaves
    std::vector<std::pair<K, int>> kids;  // (prob, child index)
    std::string id;
    bool leaf() const { return kids.empty(); }
  };
  std::vector<Node> nodes;  // index 0 is the root

  std::vector<int> leaves() const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
      if (nodes[i].leaf()) out.push_back(i);
    return out;
  }
};

using ChainTree = ChainTreeT<double>;

ChainTree unroll_to_tree(const Mdp& chain, int depth_cap = 64);

// product of edge probabilities along the unique root path, per node
template <class K>
std::vector<K> reach_probabilities(const ChainTreeT<K>& t) {
  std::vector<K> p(t.nodes.size(), K(0));
  p[0] = K(1);
  for (std::size_t i = 0; i < t.nodes.size(); ++i)
    for (const auto& [q, c] : t.nodes[i].kids) p[c] = p[i] * q;
  return p;
}

// random walk to a leaf; returns (leaf index, accumulated cost)
std::pair<int, double> sample_walk(const ChainTree& t, Rng& rng);

// exact (E[terminal value], E[total cost]) by leaf enumeration
std::pair<double, double> expected_full_walk(const ChainTree& t);

// MDP unrolled into an out-tree with actions preserved (states become
// histories); this is where per-path commitments live.
struct MdpTree {
  struct Action {
    double cost = 0;
    std::vector<std::pair<double, int>> kids;  // (prob, child node)
  };
  struct Node {
    int parent = -1;
    bool terminal = false;
    double value = 0;
    std::vector<Action> actions;
    std::string id;     // path id
    std::string state;  // originating MDP state
  };
  std::vector<Node> nodes;  // index 0 is the root
};

MdpTree unroll_mdp(const Mdp& m, int depth_cap = 64);

// tree-shaped Mdp whose state ids are the tree path ids
Mdp mdp_from_tree(const MdpTree& t);

// commitment application directly on an unrolled tree
ChainTree apply_commitment_tree(const MdpTree& t, const Commitment& pi);

struct ValidationReport {
  bool ok = true;
  struct Problem {
    std::string where;
    std::string message;
  };
  std::vector<Problem> problems;
  struct MdpStats {
    int states = 0, internals = 0, terminals = 0, actions = 0;
  };
  std::vector<MdpStats> stats;
};

ValidationReport validate_instance(const std::vector<Mdp>& mdps, int constraint_arity);

}  // namespace cics

#endif
