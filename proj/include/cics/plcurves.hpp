#ifndef CICS_PLCURVES_HPP
#define CICS_PLCURVES_HPP

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cics/scalar.hpp"

namespace cics {

enum class Shape { concave, convex };

// Exact breakpoint representation of a piecewise-linear function on
// [bp.front().first, bp.back().first]. Breakpoint x coordinates are strictly
// increasing; a single breakpoint denotes a degenerate constant.
template <class K>
struct PiecewiseLinearT {
  std::vector<std::pair<K, K>> bp;
  Shape shape = Shape::concave;

  const K& xmin() const { return bp.front().first; }
  const K& xmax() const { return bp.back().first; }
  bool constant() const { return bp.size() == 1; }
};

using PiecewiseLinear = PiecewiseLinearT<double>;

namespace detail {

template <class K>
void check_breakpoints(const std::vector<std::pair<K, K>>& bp) {
  if (bp.empty()) throw std::invalid_argument("piecewise linear: no breakpoints");
  for (std::size_t i = 1; i < bp.size(); ++i)
    if (!(bp[i - 1].first < bp[i].first))
      throw std::invalid_argument("piecewise linear: x not strictly increasing");
}

// drops interior breakpoints whose slope change is below eps
template <class K>
void merge_collinear(std::vector<std::pair<K, K>>& bp) {
  const K eps = scalar_traits<K>::slope_eps();
  if (bp.size() < 3) return;
  std::vector<std::pair<K, K>> out;
  out.reserve(bp.size());
  out.push_back(bp[0]);
  out.push_back(bp[1]);
  for (std::size_t i = 2; i < bp.size(); ++i) {
    const auto& a = out[out.size() - 2];
    const auto& b = out[out.size() - 1];
    const auto& c = bp[i];
    // slope(a,b) vs slope(b,c), compared cross-multiplied
    K lhs = (b.second - a.second) * (c.first - b.first);
    K rhs = (c.second - b.second) * (b.first - a.first);
    K tol = eps * (b.first - a.first) * (c.first - b.first);
    if (scalar_abs(K(lhs - rhs)) <= tol)
      out.back() = c;
    else
      out.push_back(c);
  }
  bp = std::move(out);
}

}  // namespace detail

template <class K>
PiecewiseLinearT<K> make_curve(std::vector<std::pair<K, K>> bp, Shape shape) {
  detail::check_breakpoints(bp);
  detail::merge_collinear(bp);
  return PiecewiseLinearT<K>{std::move(bp), shape};
}

template <class K>
PiecewiseLinearT<K> make_segment(const K& x0, const K& y0, const K& x1, const K& y1,
                                 Shape shape = Shape::concave) {
  return make_curve<K>({{x0, y0}, {x1, y1}}, shape);
}

template <class K>
bool is_concave(const PiecewiseLinearT<K>& f) {
  const K eps = scalar_traits<K>::slope_eps();
  for (std::size_t i = 2; i < f.bp.size(); ++i) {
    const auto& a = f.bp[i - 2];
    const auto& b = f.bp[i - 1];
    const auto& c = f.bp[i];
    K lhs = (b.second - a.second) * (c.first - b.first);
    K rhs = (c.second - b.second) * (b.first - a.first);
    if (rhs > lhs + eps * (b.first - a.first) * (c.first - b.first)) return false;
  }
  return true;
}

template <class K>
bool is_convex(const PiecewiseLinearT<K>& f) {
  const K eps = scalar_traits<K>::slope_eps();
  for (std::size_t i = 2; i < f.bp.size(); ++i) {
    const auto& a = f.bp[i - 2];
    const auto& b = f.bp[i - 1];
    const auto& c = f.bp[i];
    K lhs = (b.second - a.second) * (c.first - b.first);
    K rhs = (c.second - b.second) * (b.first - a.first);
    if (lhs > rhs + eps * (b.first - a.first) * (c.first - b.first)) return false;
  }
  return true;
}

template <class K>
K eval_at(const PiecewiseLinearT<K>& f, const K& x) {
  const K eps = scalar_traits<K>::exact ? K(0) : K(1e-12);
  if (x < f.xmin() - eps || x > f.xmax() + eps)
    throw std::domain_error("piecewise linear: evaluation outside domain");
  if (f.constant()) return f.bp.front().second;
  const K xq = std::min(std::max(x, f.xmin()), f.xmax());
  // first breakpoint with bp.x >= xq
  std::size_t hi = 1;
  while (hi + 1 < f.bp.size() && f.bp[hi].first < xq) ++hi;
  const auto& a = f.bp[hi - 1];
  const auto& b = f.bp[hi];
  if (xq == a.first) return a.second;
  if (xq == b.first) return b.second;
  return a.second + (b.second - a.second) * (xq - a.first) / (b.first - a.first);
}

template <class K>
PiecewiseLinearT<K> shift_add(const PiecewiseLinearT<K>& f, const K& c) {
  PiecewiseLinearT<K> out = f;
  for (auto& p : out.bp) p.second += c;
  return out;
}

// pointwise running max from the left; flattens a concave curve after its peak
template <class K>
PiecewiseLinearT<K> clip_monotone_hull(const PiecewiseLinearT<K>& f) {
  std::vector<std::pair<K, K>> out;
  out.reserve(f.bp.size() + 1);
  K best = f.bp.front().second;
  out.push_back(f.bp.front());
  for (std::size_t i = 1; i < f.bp.size(); ++i) {
    const auto& a = f.bp[i - 1];
    const auto& b = f.bp[i];
    if (b.second > best) {
      if (a.second < best) {
        // segment rises through the running max partway
        K t = a.first + (best - a.second) * (b.first - a.first) / (b.second - a.second);
        if (t > out.back().first && t < b.first) out.push_back({t, best});
      }
      best = b.second;
      out.push_back(b);
    } else {
      out.push_back({b.first, best});
    }
  }
  detail::merge_collinear(out);
  return PiecewiseLinearT<K>{std::move(out), f.shape};
}

// Upper concave envelope (2D upper hull) of all breakpoints of the given
// curves plus extra points. Domain is the x-range of the cloud.
template <class K>
PiecewiseLinearT<K> upper_concave_envelope(const std::vector<PiecewiseLinearT<K>>& curves,
                                           std::vector<std::pair<K, K>> points = {}) {
  for (const auto& c : curves)
    points.insert(points.end(), c.bp.begin(), c.bp.end());
  if (points.empty()) throw std::invalid_argument("upper_concave_envelope: empty input");
  std::sort(points.begin(), points.end());
  // collapse equal x keeping max y
  std::vector<std::pair<K, K>> pts;
  for (const auto& p : points) {
    if (!pts.empty() && pts.back().first == p.first)
      pts.back().second = std::max(pts.back().second, p.second);
    else
      pts.push_back(p);
  }
  if (pts.size() == 1) return PiecewiseLinearT<K>{pts, Shape::concave};
  std::vector<std::pair<K, K>> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull[hull.size() - 1];
      // keep b only if it lies strictly above chord a-p
      K cross = (b.first - a.first) * (p.second - a.second) -
                (b.second - a.second) * (p.first - a.first);
      if (cross >= K(0))
        hull.pop_back();
      else
        break;
    }
    hull.push_back(p);
  }
  detail::merge_collinear(hull);
  return PiecewiseLinearT<K>{std::move(hull), Shape::concave};
}

// h(q) = max { sum_j p_j f_j(q_j) : sum_j p_j q_j = q, q_j in [0,1] } for
// concave f_j on [0,1]: concatenate all segment slopes in decreasing order,
// each extent scaled by p_j. Domain [0, sum_j p_j].
template <class K>
PiecewiseLinearT<K> budget_merge(const std::vector<std::pair<K, PiecewiseLinearT<K>>>& weighted) {
  if (weighted.empty()) throw std::invalid_argument("budget_merge: empty input");
  const K eps = scalar_traits<K>::exact ? K(0) : K(1e-9);
  K total(0), y0(0);
  struct Seg {
    K slope, extent;
    std::size_t src;
  };
  std::vector<Seg> segs;
  for (std::size_t j = 0; j < weighted.size(); ++j) {
    const K& p = weighted[j].first;
    const auto& f = weighted[j].second;
    if (!(p > K(0))) throw std::invalid_argument("budget_merge: nonpositive weight");
    if (!is_concave(f)) throw std::invalid_argument("budget_merge: curve not concave");
    if (scalar_abs(f.xmin()) > eps || scalar_abs(K(f.xmax() - K(1))) > eps)
      throw std::invalid_argument("budget_merge: curve domain must be [0,1]");
    total += p;
    y0 += p * f.bp.front().second;
    for (std::size_t i = 1; i < f.bp.size(); ++i) {
      K dx = f.bp[i].first - f.bp[i - 1].first;
      K dy = f.bp[i].second - f.bp[i - 1].second;
      if (dx > K(0)) segs.push_back({dy / dx, p * dx, j});
    }
  }
  if (total > K(1) + K(1e-9)) throw std::invalid_argument("budget_merge: weights exceed 1");
  std::stable_sort(segs.begin(), segs.end(), [](const Seg& a, const Seg& b) {
    if (a.slope != b.slope) return a.slope > b.slope;
    return a.src < b.src;
  });
  std::vector<std::pair<K, K>> bp{{K(0), y0}};
  K x(0), y(y0);
  for (const auto& s : segs) {
    x += s.extent;
    y += s.slope * s.extent;
    bp.push_back({x, y});
  }
  detail::merge_collinear(bp);
  return PiecewiseLinearT<K>{std::move(bp), Shape::concave};
}

// sum_j p_j f_j on the common domain (x-union refinement)
template <class K>
PiecewiseLinearT<K> weighted_sum(const std::vector<std::pair<K, PiecewiseLinearT<K>>>& weighted,
                                 Shape shape) {
  if (weighted.empty()) throw std::invalid_argument("weighted_sum: empty input");
  std::vector<K> xs;
  for (const auto& [p, f] : weighted)
    for (const auto& b : f.bp) xs.push_back(b.first);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<std::pair<K, K>> bp;
  bp.reserve(xs.size());
  for (const auto& x : xs) {
    K y(0);
    for (const auto& [p, f] : weighted) y += p * eval_at(f, x);
    bp.push_back({x, y});
  }
  detail::merge_collinear(bp);
  return PiecewiseLinearT<K>{std::move(bp), shape};
}

// Smallest y with f(y) = y for convex f with slopes <= 1 that starts on or
// above the identity. Extends the final segment rightward when the crossing
// lies beyond the stored domain.
template <class K>
K root_of_curve_minus_identity(const PiecewiseLinearT<K>& f) {
  const K eps = scalar_traits<K>::exact ? K(0) : K(1e-9);
  // relative fuzz for the crossing test: probability sums carry ~1e-16 noise
  auto fuzz = [](const K& x) {
    if constexpr (scalar_traits<K>::exact)
      return K(0);
    else
      return K(1e-12) * (K(1) + scalar_abs(x));
  };
  if (f.bp.front().second <= f.bp.front().first + fuzz(f.bp.front().first))
    return f.bp.front().first;
  for (std::size_t i = 1; i < f.bp.size(); ++i) {
    const auto& a = f.bp[i - 1];
    const auto& b = f.bp[i];
    K slope = (b.second - a.second) / (b.first - a.first);
    if (slope > K(1) + eps)
      throw std::invalid_argument("root_of_curve_minus_identity: slope exceeds 1");
    if (b.second <= b.first + fuzz(b.first)) {
      // sign change inside [a, b]
      if (b.second >= b.first || slope >= K(1) - eps) return b.first;
      K t = (a.second - slope * a.first) / (K(1) - slope);
      return t;
    }
  }
  // extend last segment (or constant) rightward
  const auto& a = f.bp.back();
  K slope(0);
  if (f.bp.size() >= 2) {
    const auto& p = f.bp[f.bp.size() - 2];
    slope = (a.second - p.second) / (a.first - p.first);
  }
  if (slope >= K(1) - eps)
    throw std::invalid_argument("root_of_curve_minus_identity: no root (terminal slope 1)");
  return (a.second - slope * a.first) / (K(1) - slope);
}

// max(f(y), y) for convex f with slopes <= 1; inserts the crossing breakpoint
// exactly so later root extraction lands on it.
template <class K>
PiecewiseLinearT<K> max_with_identity(const PiecewiseLinearT<K>& f) {
  const K hi = f.xmax();
  if (f.bp.front().second <= f.bp.front().first) {
    // below identity from the start
    const K lo = f.xmin();
    return PiecewiseLinearT<K>{{{lo, lo}, {hi, hi}}, Shape::convex};
  }
  K cross = root_of_curve_minus_identity(f);
  std::vector<std::pair<K, K>> bp;
  for (const auto& b : f.bp) {
    if (b.first < cross)
      bp.push_back(b);
    else
      break;
  }
  bp.push_back({cross, cross});
  if (cross < hi) bp.push_back({hi, hi});
  detail::merge_collinear(bp);
  return PiecewiseLinearT<K>{std::move(bp), Shape::convex};
}

}  // namespace cics

#endif
