#include "cics/chains.hpp"

#include <cmath>
#include <functional>
#include <set>

namespace cics {

namespace {

constexpr double kProbTol = 1e-9;

std::string state_pointer(const std::string& id) { return "/states/" + id; }

}  // namespace

void validate_mdp(const Mdp& m, int depth_cap) {
  if (m.states.find(m.root) == m.states.end())
    throw InputError("/root", "root state '" + m.root + "' not defined");
  for (const auto& [id, st] : m.states) {
    if (st.terminal) {
      if (!st.actions.empty())
        throw InputError(state_pointer(id), "terminal state has actions");
      if (!std::isfinite(st.value))
        throw InputError(state_pointer(id) + "/value", "non-finite terminal value");
      continue;
    }
    if (st.actions.empty())
      throw InputError(state_pointer(id), "internal state has no actions");
    for (std::size_t ai = 0; ai < st.actions.size(); ++ai) {
      const auto& act = st.actions[ai];
      const std::string ap = state_pointer(id) + "/actions/" + std::to_string(ai);
      if (act.cost < 0 || !std::isfinite(act.cost))
        throw InputError(ap + "/cost", "action cost must be finite and >= 0");
      if (act.transitions.empty()) throw InputError(ap, "action has no transitions");
      double sum = 0;
      for (const auto& [to, p] : act.transitions) {
        if (m.states.find(to) == m.states.end())
          throw InputError(ap, "transition to unknown state '" + to + "'");
        if (p < 0 || p > 1 + kProbTol || !std::isfinite(p))
          throw InputError(ap, "transition probability outside [0,1]");
        sum += p;
      }
      if (std::fabs(sum - 1.0) > kProbTol)
        throw InputError(ap, "transition probabilities sum to " + std::to_string(sum));
    }
  }
  // acyclicity + depth bound by DFS over states
  std::map<std::string, int> color;  // 0 unseen, 1 on stack, 2 done
  std::function<void(const std::string&, int)> dfs = [&](const std::string& id, int depth) {
    if (depth > depth_cap)
      throw InputError(state_pointer(id), "path depth exceeds cap " + std::to_string(depth_cap));
    if (color[id] == 1) throw InputError(state_pointer(id), "transition graph has a cycle");
    if (color[id] == 2) return;
    color[id] = 1;
    for (const auto& act : m.states.at(id).actions)
      for (const auto& [to, p] : act.transitions) dfs(to, depth + 1);
    color[id] = 2;
  };
  dfs(m.root, 0);
}

bool is_chain(const Mdp& m) {
  for (const auto& [id, st] : m.states)
    if (!st.terminal && st.actions.size() != 1) return false;
  return true;
}

Mdp apply_commitment(const Mdp& m, const Commitment& pi) {
  Mdp out;
  out.root = m.root;
  for (const auto& [id, st] : m.states) {
    if (st.terminal) {
      out.states[id] = st;
      continue;
    }
    auto it = pi.per_state.find(id);
    if (it == pi.per_state.end())
      throw std::invalid_argument("apply_commitment: no distribution for state '" + id + "'");
    const auto& dist = it->second;
    if (dist.size() != st.actions.size())
      throw std::invalid_argument("apply_commitment: arity mismatch at state '" + id + "'");
    double sum = 0;
    for (double p : dist) {
      if (p < -kProbTol) throw std::invalid_argument("apply_commitment: negative weight");
      sum += p;
    }
    if (std::fabs(sum - 1.0) > kProbTol)
      throw std::invalid_argument("apply_commitment: weights at '" + id + "' sum to " +
                                  std::to_string(sum));
    MdpAction mixed;
    std::map<std::string, double> trans;
    for (std::size_t ai = 0; ai < st.actions.size(); ++ai) {
      if (dist[ai] <= 0) continue;
      mixed.cost += dist[ai] * st.actions[ai].cost;
      for (const auto& [to, p] : st.actions[ai].transitions) trans[to] += dist[ai] * p;
    }
    for (const auto& [to, p] : trans) mixed.transitions.push_back({to, p});
    MdpState ns;
    ns.terminal = false;
    ns.actions.push_back(std::move(mixed));
    out.states[id] = std::move(ns);
  }
  return out;
}

ChainTree unroll_to_tree(const Mdp& chain, int depth_cap) {
  if (!is_chain(chain))
    throw std::invalid_argument("unroll_to_tree: mdp is not Markov-chain shaped");
  ChainTree t;
  std::function<int(const std::string&, int, int, const std::string&)> build =
      [&](const std::string& sid, int parent, int depth, const std::string& path) -> int {
    if (depth > depth_cap)
      throw GuardError("unroll_to_tree: depth exceeds cap " + std::to_string(depth_cap));
    const MdpState& st = chain.states.at(sid);
    int idx = static_cast<int>(t.nodes.size());
    t.nodes.push_back({});
    t.nodes[idx].parent = parent;
    t.nodes[idx].id = path;
    if (st.terminal) {
      t.nodes[idx].value = st.value;
      return idx;
    }
    const MdpAction& act = st.actions.front();
    t.nodes[idx].cost = act.cost;
    std::map<std::string, double> merged;  // duplicate targets merged
    for (const auto& [to, p] : act.transitions) merged[to] += p;
    for (const auto& [to, p] : merged) {
      if (p <= 0) continue;
      int c = build(to, idx, depth + 1, path + "/" + to);
      t.nodes[idx].kids.push_back({p, c});
    }
    return idx;
  };
  build(chain.root, -1, 0, chain.root);
  return t;
}

std::pair<int, double> sample_walk(const ChainTree& t, Rng& rng) {
  int cur = 0;
  double cost = 0;
  while (!t.nodes[cur].leaf()) {
    cost += t.nodes[cur].cost;
    double u = rng.uniform01(), cum = 0;
    int next = t.nodes[cur].kids.back().second;
    for (const auto& [p, c] : t.nodes[cur].kids) {
      cum += p;
      if (u < cum) {
        next = c;
        break;
      }
    }
    cur = next;
  }
  return {cur, cost};
}

std::pair<double, double> expected_full_walk(const ChainTree& t) {
  std::vector<double> reach = reach_probabilities(t);
  double ev = 0, ec = 0;
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    if (t.nodes[i].leaf())
      ev += reach[i] * t.nodes[i].value;
    else
      ec += reach[i] * t.nodes[i].cost;
  }
  return {ev, ec};
}

MdpTree unroll_mdp(const Mdp& m, int depth_cap) {
  MdpTree t;
  std::function<int(const std::string&, int, int, const std::string&)> build =
      [&](const std::string& sid, int parent, int depth, const std::string& path) -> int {
    if (depth > depth_cap)
      throw GuardError("unroll_mdp: depth exceeds cap " + std::to_string(depth_cap));
    const MdpState& st = m.states.at(sid);
    int idx = static_cast<int>(t.nodes.size());
    t.nodes.push_back({});
    t.nodes[idx].parent = parent;
    t.nodes[idx].id = path;
    t.nodes[idx].state = sid;
    if (st.terminal) {
      t.nodes[idx].terminal = true;
      t.nodes[idx].value = st.value;
      return idx;
    }
    for (std::size_t ai = 0; ai < st.actions.size(); ++ai) {
      MdpTree::Action out;
      out.cost = st.actions[ai].cost;
      std::map<std::string, double> merged;
      for (const auto& [to, p] : st.actions[ai].transitions) merged[to] += p;
      std::string prefix = path + "/a" + std::to_string(ai) + ".";
      for (const auto& [to, p] : merged) {
        if (p <= 0) continue;
        int c = build(to, idx, depth + 1, prefix + to);
        out.kids.push_back({p, c});
      }
      t.nodes[idx].actions.push_back(std::move(out));
    }
    return idx;
  };
  build(m.root, -1, 0, m.root);
  return t;
}

Mdp mdp_from_tree(const MdpTree& t) {
  Mdp m;
  m.root = t.nodes[0].id;
  for (const auto& n : t.nodes) {
    MdpState st;
    if (n.terminal) {
      st.terminal = true;
      st.value = n.value;
    } else {
      for (const auto& a : n.actions) {
        MdpAction act;
        act.cost = a.cost;
        for (const auto& [p, c] : a.kids) act.transitions.push_back({t.nodes[c].id, p});
        st.actions.push_back(std::move(act));
      }
    }
    m.states[n.id] = std::move(st);
  }
  return m;
}

ChainTree apply_commitment_tree(const MdpTree& t, const Commitment& pi) {
  ChainTree out;
  std::function<int(int, int)> build = [&](int src, int parent) -> int {
    const auto& n = t.nodes[src];
    int idx = static_cast<int>(out.nodes.size());
    out.nodes.push_back({});
    out.nodes[idx].parent = parent;
    out.nodes[idx].id = n.id;
    if (n.terminal) {
      out.nodes[idx].value = n.value;
      return idx;
    }
    auto it = pi.per_state.find(n.id);
    if (it == pi.per_state.end())
      throw std::invalid_argument("apply_commitment_tree: no distribution for '" + n.id + "'");
    const auto& dist = it->second;
    if (dist.size() != n.actions.size())
      throw std::invalid_argument("apply_commitment_tree: arity mismatch at '" + n.id + "'");
    double cost = 0;
    for (std::size_t ai = 0; ai < dist.size(); ++ai) cost += dist[ai] * n.actions[ai].cost;
    out.nodes[idx].cost = cost;
    for (std::size_t ai = 0; ai < dist.size(); ++ai) {
      if (dist[ai] <= 0) continue;
      for (const auto& [p, c] : n.actions[ai].kids) {
        int child = build(c, idx);
        out.nodes[idx].kids.push_back({dist[ai] * p, child});
      }
    }
    return idx;
  };
  build(0, -1);
  return out;
}

ValidationReport validate_instance(const std::vector<Mdp>& mdps, int constraint_arity) {
  ValidationReport rep;
  if (constraint_arity != static_cast<int>(mdps.size())) {
    rep.ok = false;
    rep.problems.push_back(
        {"/constraint", "constraint arity " + std::to_string(constraint_arity) +
                            " does not match " + std::to_string(mdps.size()) + " mdps"});
  }
  for (std::size_t i = 0; i < mdps.size(); ++i) {
    ValidationReport::MdpStats s;
    s.states = static_cast<int>(mdps[i].states.size());
    for (const auto& [id, st] : mdps[i].states) {
      if (st.terminal)
        ++s.terminals;
      else {
        ++s.internals;
        s.actions += static_cast<int>(st.actions.size());
      }
    }
    rep.stats.push_back(s);
    try {
      validate_mdp(mdps[i]);
    } catch (const InputError& e) {
      rep.ok = false;
      rep.problems.push_back({"/mdps/" + std::to_string(i) + e.pointer, e.what()});
    }
  }
  return rep;
}

}  // namespace cics
