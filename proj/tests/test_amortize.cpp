#include "cics/amortize.hpp"

#include <cmath>
#include <map>

#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"

using namespace cics;

namespace {

ChainTree weitzman_box(double cost = 0.5, double hi = 2.0, double lo = 0.0) {
  ChainTree t;
  t.nodes.resize(3);
  t.nodes[0].cost = cost;
  t.nodes[0].id = "r";
  t.nodes[0].kids = {{0.5, 1}, {0.5, 2}};
  t.nodes[1].parent = 0;
  t.nodes[1].value = hi;
  t.nodes[1].id = "hi";
  t.nodes[2].parent = 0;
  t.nodes[2].value = lo;
  t.nodes[2].id = "lo";
  return t;
}

// exact utility of the threshold policy "advance while g >= theta, accept
// leaf iff w >= theta", by enumeration of the stopped walk
double threshold_policy_utility(const ChainTree& t, const SurrogateProfile& prof, double theta) {
  double util = 0;
  std::function<void(int, double)> go = [&](int node, double prob) {
    const auto& n = t.nodes[node];
    if (n.leaf()) {
      if (prof.w[node] >= theta) util += prob * n.value;
      return;
    }
    if (prof.g[node] < theta) return;  // halt here, no cost paid
    util -= prob * n.cost;
    for (const auto& [p, c] : n.kids) go(c, prob * p);
  };
  go(0, 1.0);
  return util;
}

}  // namespace

TEST_CASE("optimality curve on leaves and the Weitzman box") {
  ChainTree box = weitzman_box();
  auto curves = optimality_curves(box);
  // leaf v=2 -> max(2, y)
  CHECK(eval_at(curves[1], 0.0) == doctest::Approx(2.0));
  CHECK(eval_at(curves[1], 2.5) == doctest::Approx(2.5));
  // root: V_y = max(y, -0.5 + 0.5 max(2,y) + 0.5 max(0,y)) at y in {0,1,3}
  CHECK(eval_at(curves[0], 0.0) == doctest::Approx(0.5));
  CHECK(eval_at(curves[0], 1.0) == doctest::Approx(1.0));
  CHECK(eval_at(curves[0], 3.0) == doctest::Approx(3.0));
  CHECK(is_convex(curves[0]));
}

TEST_CASE("fair index closed forms") {
  CHECK(fair_index(weitzman_box(), 0) == doctest::Approx(1.0));
  // zero-cost box: tau = max terminal value
  CHECK(fair_index(weitzman_box(0.0), 0) == doctest::Approx(2.0));
  // prohibitive cost: tau = -c + E[X] on the flat segment
  CHECK(fair_index(weitzman_box(10.0), 0) == doctest::Approx(-9.0));
}

TEST_CASE("fair index vs bisection oracle on random trees") {
  Rng rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    ChainTree t = testgen::random_tree(rng, 3, 3);
    if (t.nodes[0].leaf()) continue;
    double got = fair_index(t, 0);
    double lo = -100, hi = 100;
    double want = oracles::fair_index_bisect(t, 0, lo, hi);
    CHECK(got == doctest::Approx(want).epsilon(1e-7));
  }
}

TEST_CASE("surrogate values of the Weitzman box") {
  ChainTree box = weitzman_box();
  SurrogateProfile prof = surrogate_values(box);
  CHECK(prof.w[1] == doctest::Approx(1.0));
  CHECK(prof.w[2] == doctest::Approx(0.0));
  CHECK(prof.g[0] == doctest::Approx(1.0));
  DiscreteDist W = surrogate_distribution(box, prof);
  REQUIRE(W.atoms.size() == 2);
  CHECK(W.atoms[0].value == doctest::Approx(1.0));
  CHECK(W.atoms[0].prob == doctest::Approx(0.5));
  // full-walk identity: sum p w = E[v] - E[cost]
  auto [ev, ec] = expected_full_walk(box);
  CHECK(prof.reach[1] * prof.w[1] + prof.reach[2] * prof.w[2] ==
        doctest::Approx(ev - ec).epsilon(1e-12));
}

TEST_CASE("zero-cost trees keep w = v") {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    ChainTree t = testgen::random_tree(rng, 3, 3, /*cost_hi=*/0.0);
    SurrogateProfile prof = surrogate_values(t);
    for (int l : t.leaves()) CHECK(prof.w[l] == doctest::Approx(t.nodes[l].value).epsilon(1e-12));
  }
}

TEST_CASE("amortization identities on 100 random trees") {
  Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    ChainTree t = testgen::random_tree(rng, 4, 3, 5, 5);
    SurrogateProfile prof = surrogate_values(t);

    // w <= v and g non-increasing along every edge (exact)
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
      if (t.nodes[i].leaf()) CHECK(prof.w[i] <= t.nodes[i].value + 1e-12);
      if (t.nodes[i].parent >= 0) CHECK(prof.g[i] <= prof.g[t.nodes[i].parent] + 1e-12);
    }

    // full-walk identity
    auto [ev, ec] = expected_full_walk(t);
    double sw = 0;
    for (int l : t.leaves()) sw += prof.reach[l] * prof.w[l];
    CHECK(sw == doctest::Approx(ev - ec).epsilon(1e-7).scale(1));

    // threshold-sweep identity at every distinct w level
    std::vector<double> levels;
    for (int l : t.leaves()) levels.push_back(prof.w[l]);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    for (double theta : levels) {
      double util = threshold_policy_utility(t, prof, theta);
      double want = 0;
      for (int l : t.leaves())
        if (prof.w[l] >= theta) want += prof.reach[l] * prof.w[l];
      CHECK(util == doctest::Approx(want).epsilon(1e-7).scale(1));
    }
  }
}

TEST_CASE("chain from distribution matches the stated construction") {
  DiscreteDist d = normalize({{1, 0.5}, {3, 0.5}});
  ChainTree t = chain_from_distribution(d, 0.01);
  // root s_2: cost 0.01, kids t_2 (v = 3 + 0.01/0.5 = 3.02) w.p. 0.5 and t_1 (v=1)
  REQUIRE(t.nodes.size() == 3);
  CHECK(t.nodes[0].cost == doctest::Approx(0.01));
  std::map<std::string, int> byid;
  for (int i = 0; i < 3; ++i) byid[t.nodes[i].id] = i;
  CHECK(t.nodes[byid["t2"]].value == doctest::Approx(3.02));
  CHECK(t.nodes[byid["t1"]].value == doctest::Approx(1.0));
  for (const auto& [p, c] : t.nodes[0].kids) CHECK(p == doctest::Approx(0.5));

  // degenerate single atom
  ChainTree single = chain_from_distribution(normalize({{4, 1}}), 0.01);
  REQUIRE(single.nodes.size() == 1);
  CHECK(single.nodes[0].value == doctest::Approx(4.0));

  CHECK_THROWS_AS(chain_from_distribution(d, 0.0), std::invalid_argument);
}

TEST_CASE("round trip in doubles is tight") {
  Rng rng(44);
  for (int trial = 0; trial < 100; ++trial) {
    DiscreteDist d = testgen::random_grid_dist(rng, 6);
    ChainTree t = chain_from_distribution(d, 1e-4);
    SurrogateProfile prof = surrogate_values(t);
    DiscreteDist w = surrogate_distribution(t, prof);
    REQUIRE(w.atoms.size() == d.atoms.size());
    for (std::size_t i = 0; i < d.atoms.size(); ++i) {
      CHECK(w.atoms[i].value == doctest::Approx(d.atoms[i].value).epsilon(1e-9));
      CHECK(w.atoms[i].prob == doctest::Approx(d.atoms[i].prob).epsilon(1e-9));
    }
  }
}

TEST_CASE("round trip over rationals is exact") {
  using R = Rational;
  Rng rng(45);
  for (int trial = 0; trial < 100; ++trial) {
    int k = 1 + static_cast<int>(rng.below(6));
    // arbitrary double values (exact as rationals), integer-ratio probabilities
    std::vector<double> vals;
    for (int i = 0; i < k; ++i) vals.push_back(rng.uniform(-3, 6));
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    k = static_cast<int>(vals.size());
    std::vector<long> weights;
    long wsum = 0;
    for (int i = 0; i < k; ++i) {
      weights.push_back(1 + static_cast<long>(rng.below(97)));
      wsum += weights.back();
    }
    std::vector<std::pair<R, R>> atoms;
    for (int i = 0; i < k; ++i) atoms.push_back({R(vals[i]), R(weights[i]) / R(wsum)});
    ChainTreeT<R> t = chain_from_distribution<R>(atoms, R(1) / 10000);
    SurrogateProfileT<R> prof = surrogate_values(t);
    auto rec = surrogate_atoms(t, prof);  // descending
    REQUIRE(rec.size() == atoms.size());
    R total(0);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const auto& want = atoms[atoms.size() - 1 - i];
      CHECK(rec[i].first == want.first);    // zero value error
      CHECK(rec[i].second == want.second);  // zero probability error
      total += rec[i].second;
    }
    CHECK(total == R(1));
  }
}

TEST_CASE("surrogate distribution of M(D) reproduces D through the double api") {
  DiscreteDist d = normalize({{0.5, 0.25}, {2, 0.25}, {5, 0.5}});
  ChainTree t = chain_from_distribution(d, 1e-4);
  SurrogateProfile prof = surrogate_values(t);
  DiscreteDist w = surrogate_distribution(t, prof);
  REQUIRE(w.atoms.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(w.atoms[i].value == doctest::Approx(d.atoms[i].value).epsilon(1e-10));
    CHECK(w.atoms[i].prob == doctest::Approx(d.atoms[i].prob).epsilon(1e-12));
  }
}
