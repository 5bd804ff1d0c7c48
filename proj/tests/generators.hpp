#ifndef CICS_TESTS_GENERATORS_HPP
#define CICS_TESTS_GENERATORS_HPP

#include <string>
#include <vector>

#include "cics/chains.hpp"
#include "cics/distributions.hpp"
#include "cics/rng.hpp"

namespace cics::testgen {

inline DiscreteDist random_dist(Rng& rng, int max_atoms, double lo = 0, double hi = 5) {
  int k = 1 + static_cast<int>(rng.below(max_atoms));
  std::vector<Atom> raw;
  for (int i = 0; i < k; ++i)
    raw.push_back({rng.uniform(lo, hi), 0.05 + rng.uniform01()});
  return normalize(std::move(raw));
}

// atom values on a coarse grid, distinct; probabilities arbitrary positive
inline DiscreteDist random_grid_dist(Rng& rng, int max_atoms) {
  int k = 1 + static_cast<int>(rng.below(max_atoms));
  std::vector<Atom> raw;
  std::vector<int> used;
  for (int i = 0; i < k; ++i) {
    int v;
    do {
      v = static_cast<int>(rng.below(200));
    } while (std::find(used.begin(), used.end(), v) != used.end());
    used.push_back(v);
    raw.push_back({v / 20.0, 0.05 + rng.uniform01()});
  }
  return normalize(std::move(raw));
}

// random chain tree, preorder construction
inline ChainTree random_tree(Rng& rng, int max_depth, int max_branch, double cost_hi = 5,
                             double value_hi = 5) {
  ChainTree t;
  struct Frame {
    int node, depth;
  };
  t.nodes.push_back({});
  t.nodes[0].id = "n0";
  std::vector<Frame> stack{{0, 0}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    bool leaf = f.depth >= max_depth || (f.depth > 0 && rng.uniform01() < 0.3);
    auto& n = t.nodes[f.node];
    if (leaf) {
      n.value = rng.uniform(0, value_hi);
      continue;
    }
    n.cost = rng.uniform(0, cost_hi);
    int kids = 2 + static_cast<int>(rng.below(std::max(1, max_branch - 1)));
    std::vector<double> ps;
    double tot = 0;
    for (int i = 0; i < kids; ++i) {
      ps.push_back(0.1 + rng.uniform01());
      tot += ps.back();
    }
    for (int i = 0; i < kids; ++i) {
      int c = static_cast<int>(t.nodes.size());
      t.nodes.push_back({});
      t.nodes[c].parent = f.node;
      t.nodes[c].id = t.nodes[f.node].id + "/" + std::to_string(i);
      t.nodes[f.node].kids.push_back({ps[i] / tot, c});
      stack.push_back({c, f.depth + 1});
    }
  }
  return t;
}

// random DAG-shaped MDP over layered states
inline Mdp random_mdp(Rng& rng, int max_depth = 3, int max_actions = 2, int max_branch = 2,
                      double cost_hi = 2, double value_lo = -1, double value_hi = 5) {
  Mdp m;
  // layered ids: L<depth>_<i>; terminals at the last layer or sprinkled
  std::vector<std::vector<std::string>> layers(max_depth + 1);
  int counter = 0;
  for (int d = 0; d <= max_depth; ++d) {
    int width = d == 0 ? 1 : 1 + static_cast<int>(rng.below(3));
    for (int i = 0; i < width; ++i)
      layers[d].push_back("L" + std::to_string(d) + "_" + std::to_string(counter++));
  }
  m.root = layers[0][0];
  for (int d = 0; d <= max_depth; ++d) {
    for (const auto& id : layers[d]) {
      bool terminal = d == max_depth || (d > 0 && rng.uniform01() < 0.35);
      MdpState st;
      if (terminal) {
        st.terminal = true;
        st.value = rng.uniform(value_lo, value_hi);
      } else {
        int na = 1 + static_cast<int>(rng.below(max_actions));
        for (int a = 0; a < na; ++a) {
          MdpAction act;
          act.cost = rng.uniform(0, cost_hi);
          int nb = 1 + static_cast<int>(rng.below(max_branch));
          std::vector<std::string> targets;
          for (int b = 0; b < nb; ++b)
            targets.push_back(layers[d + 1][rng.below(layers[d + 1].size())]);
          std::sort(targets.begin(), targets.end());
          targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
          double tot = 0;
          std::vector<double> ps;
          for (std::size_t b = 0; b < targets.size(); ++b) {
            ps.push_back(0.2 + rng.uniform01());
            tot += ps.back();
          }
          for (std::size_t b = 0; b < targets.size(); ++b)
            act.transitions.push_back({targets[b], ps[b] / tot});
          st.actions.push_back(std::move(act));
        }
      }
      m.states[id] = std::move(st);
    }
  }
  return m;
}

// tree-shaped chain Mdp from a ChainTree
inline Mdp mdp_from_chain_tree(const ChainTree& t) {
  Mdp m;
  m.root = t.nodes[0].id;
  for (const auto& n : t.nodes) {
    MdpState st;
    if (n.leaf()) {
      st.terminal = true;
      st.value = n.value;
    } else {
      MdpAction act;
      act.cost = n.cost;
      for (const auto& [p, c] : n.kids) act.transitions.push_back({t.nodes[c].id, p});
      st.actions.push_back(std::move(act));
    }
    m.states[n.id] = std::move(st);
  }
  return m;
}

}  // namespace cics::testgen

#endif
