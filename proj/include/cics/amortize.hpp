#ifndef CICS_AMORTIZE_HPP
#define CICS_AMORTIZE_HPP

#include <algorithm>
#include <vector>

#include "cics/chains.hpp"
#include "cics/distributions.hpp"
#include "cics/plcurves.hpp"

namespace cics {

// Surrogate-value amortization of a Markov chain tree. w(t) is the terminal
// value capped by the running minimum of ancestor fair indices; g(s) is the
// maximum surrogate value reachable below s; tau(s) is the indifference value
// of the local continue-vs-quit game at s.
template <class K>
struct SurrogateProfileT {
  std::vector<K> w;      // per node, meaningful at leaves
  std::vector<K> g;      // per node
  std::vector<K> tau;    // per node, meaningful at internal nodes
  std::vector<K> reach;  // root reach probability per node
};

using SurrogateProfile = SurrogateProfileT<double>;

namespace detail {

// curve domain wide enough to contain every fair index of the tree
template <class K>
std::pair<K, K> curve_domain(const ChainTreeT<K>& t) {
  K minv(0), maxv(0), costs(0);
  bool first = true;
  for (const auto& n : t.nodes) {
    if (n.leaf()) {
      if (first || n.value < minv) minv = n.value;
      if (first || n.value > maxv) maxv = n.value;
      first = false;
    } else {
      costs += n.cost;
    }
  }
  return {K(minv - costs - K(1)), K(maxv + K(1))};
}

}  // namespace detail

// V_y per node, bottom-up: leaves max(v, y); internal states
// max(y, -cost + sum_c p_c V_y(child)). Convex with slopes in [0, 1].
template <class K>
std::vector<PiecewiseLinearT<K>> optimality_curves(const ChainTreeT<K>& t) {
  auto [lo, hi] = detail::curve_domain(t);
  std::vector<PiecewiseLinearT<K>> curves(t.nodes.size());
  // nodes are stored in preorder, so children follow parents
  for (int i = static_cast<int>(t.nodes.size()) - 1; i >= 0; --i) {
    const auto& n = t.nodes[i];
    if (n.leaf()) {
      PiecewiseLinearT<K> flat{{{lo, n.value}, {hi, n.value}}, Shape::convex};
      curves[i] = max_with_identity(flat);
    } else {
      std::vector<std::pair<K, PiecewiseLinearT<K>>> weighted;
      weighted.reserve(n.kids.size());
      for (const auto& [p, c] : n.kids) weighted.push_back({p, curves[c]});
      auto cont = shift_add(weighted_sum(weighted, Shape::convex), K(-n.cost));
      curves[i] = max_with_identity(cont);
    }
  }
  return curves;
}

template <class K>
PiecewiseLinearT<K> optimality_curve(const ChainTreeT<K>& t, int node) {
  return optimality_curves(t)[node];
}

// tau(s) = min{ y : V_y(s) = y }
template <class K>
K fair_index(const ChainTreeT<K>& t, int node) {
  auto curves = optimality_curves(t);
  return root_of_curve_minus_identity(curves[node]);
}

template <class K>
SurrogateProfileT<K> surrogate_values(const ChainTreeT<K>& t) {
  auto curves = optimality_curves(t);
  SurrogateProfileT<K> prof;
  const std::size_t n = t.nodes.size();
  prof.w.assign(n, K(0));
  prof.g.assign(n, K(0));
  prof.tau.assign(n, K(0));
  prof.reach = reach_probabilities(t);
  // cap[i]: min fair index over internal ancestors of i, inclusive
  std::vector<K> cap(n, K(0));
  std::vector<bool> has_cap(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& node = t.nodes[i];
    K inherited{};
    bool inh = false;
    if (node.parent >= 0) {
      inherited = cap[node.parent];
      inh = has_cap[node.parent];
    }
    if (node.leaf()) {
      prof.w[i] = (inh && inherited < node.value) ? inherited : node.value;
      cap[i] = inherited;
      has_cap[i] = inh;
    } else {
      prof.tau[i] = root_of_curve_minus_identity(curves[i]);
      cap[i] = (inh && inherited < prof.tau[i]) ? inherited : prof.tau[i];
      has_cap[i] = true;
    }
  }
  // g by upward max over subtree leaves (children are stored after parents)
  for (int i = static_cast<int>(n) - 1; i >= 0; --i) {
    const auto& node = t.nodes[i];
    if (node.leaf()) {
      prof.g[i] = prof.w[i];
    } else {
      bool first = true;
      for (const auto& [p, c] : node.kids) {
        if (first || prof.g[c] > prof.g[i]) prof.g[i] = prof.g[c];
        first = false;
      }
    }
  }
  return prof;
}

// merged (w, p) pairs sorted by value descending; probabilities summed exactly
template <class K>
std::vector<std::pair<K, K>> surrogate_atoms(const ChainTreeT<K>& t,
                                             const SurrogateProfileT<K>& prof) {
  std::vector<std::pair<K, K>> raw;
  for (std::size_t i = 0; i < t.nodes.size(); ++i)
    if (t.nodes[i].leaf()) raw.push_back({prof.w[i], prof.reach[i]});
  std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::pair<K, K>> out;
  for (const auto& a : raw) {
    if (!out.empty() && out.back().first == a.first)
      out.back().second += a.second;
    else
      out.push_back(a);
  }
  return out;
}

inline DiscreteDist surrogate_distribution(const ChainTree& t, const SurrogateProfile& prof) {
  std::vector<Atom> raw;
  for (std::size_t i = 0; i < t.nodes.size(); ++i)
    if (t.nodes[i].leaf()) raw.push_back({prof.w[i], prof.reach[i]});
  return normalize(std::move(raw));
}

// Inverse construction M(D): a descending path with one terminal hanging off
// each internal state. Branch probability q_i = p_i / sum_{j<=i} p_j and
// terminal value w_i + eps/q_i make the surrogate distribution reproduce D.
// Atoms are given in increasing value order with their probabilities.
template <class K>
ChainTreeT<K> chain_from_distribution(const std::vector<std::pair<K, K>>& atoms_ascending,
                                      const K& eps) {
  if (atoms_ascending.empty())
    throw std::invalid_argument("chain_from_distribution: no atoms");
  if (!(eps > K(0))) throw std::invalid_argument("chain_from_distribution: eps must be > 0");
  const int k = static_cast<int>(atoms_ascending.size());
  for (int i = 1; i < k; ++i)
    if (!(atoms_ascending[i - 1].first < atoms_ascending[i].first))
      throw std::invalid_argument("chain_from_distribution: atoms must be strictly increasing");
  std::vector<K> prefix(k);  // prefix[i] = sum_{j<=i} p_j
  K run(0);
  for (int i = 0; i < k; ++i) {
    run += atoms_ascending[i].second;
    prefix[i] = run;
  }
  ChainTreeT<K> t;
  // build the path s_k ... s_2 with terminals t_k ... t_2, ending at t_1
  int parent = -1;
  K last_q(0);
  for (int i = k - 1; i >= 1; --i) {
    const K qi = atoms_ascending[i].second / prefix[i];
    int s = static_cast<int>(t.nodes.size());
    t.nodes.push_back({});
    t.nodes[s].parent = parent;
    t.nodes[s].cost = eps;
    t.nodes[s].id = "s" + std::to_string(i + 1);
    if (parent >= 0) t.nodes[parent].kids.push_back({K(1) - last_q, s});
    int leaf = static_cast<int>(t.nodes.size());
    t.nodes.push_back({});
    t.nodes[leaf].parent = s;
    t.nodes[leaf].value = atoms_ascending[i].first + eps / qi;
    t.nodes[leaf].id = "t" + std::to_string(i + 1);
    t.nodes[s].kids.push_back({qi, leaf});
    last_q = qi;
    parent = s;
  }
  int final_leaf = static_cast<int>(t.nodes.size());
  t.nodes.push_back({});
  t.nodes[final_leaf].parent = parent;
  t.nodes[final_leaf].value = atoms_ascending[0].first;
  t.nodes[final_leaf].id = "t1";
  if (parent >= 0)
    t.nodes[parent].kids.push_back({K(1) - last_q, final_leaf});
  return t;
}

inline ChainTree chain_from_distribution(const DiscreteDist& d, double eps) {
  std::vector<std::pair<double, double>> atoms;
  for (auto it = d.atoms.rbegin(); it != d.atoms.rend(); ++it)
    atoms.push_back({it->value, it->prob});
  return chain_from_distribution<double>(atoms, eps);
}

}  // namespace cics

#endif
