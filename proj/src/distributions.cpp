#include "cics/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cics {

DiscreteDist normalize(std::vector<Atom> raw) {
  if (raw.empty()) throw std::invalid_argument("normalize: empty atom list");
  double total = 0;
  for (const auto& a : raw) {
    if (!std::isfinite(a.value)) throw std::invalid_argument("normalize: non-finite value");
    if (a.prob < 0 || !std::isfinite(a.prob))
      throw std::invalid_argument("normalize: negative probability");
    total += a.prob;
  }
  if (total <= 0) throw std::invalid_argument("normalize: probabilities sum to zero");
  std::sort(raw.begin(), raw.end(),
            [](const Atom& a, const Atom& b) { return a.value > b.value; });
  DiscreteDist d;
  for (const auto& a : raw) {
    if (a.prob == 0) continue;
    if (!d.atoms.empty() && d.atoms.back().value == a.value)
      d.atoms.back().prob += a.prob / total;
    else
      d.atoms.push_back({a.value, a.prob / total});
  }
  if (d.atoms.empty()) throw std::invalid_argument("normalize: no atom has positive mass");
  return d;
}

double top_quantile_revenue(const DiscreteDist& d, double q) {
  if (q < 0 || q > 1) throw std::domain_error("top_quantile_revenue: q outside [0,1]");
  double acc = 0, cum = 0;
  for (const auto& a : d.atoms) {
    if (cum + a.prob <= q) {
      acc += a.prob * a.value;
      cum += a.prob;
    } else {
      acc += (q - cum) * a.value;  // split the point mass
      return acc;
    }
  }
  return acc;
}

PiecewiseLinear revenue_curve(const DiscreteDist& d) {
  std::vector<std::pair<double, double>> bp{{0.0, 0.0}};
  double cum = 0, acc = 0;
  for (const auto& a : d.atoms) {
    cum += a.prob;
    acc += a.prob * a.value;
    bp.push_back({cum, acc});
  }
  bp.back().first = 1.0;  // absorb normalization rounding
  return make_curve(std::move(bp), Shape::concave);
}

std::optional<DiscreteDist> condition_below(const DiscreteDist& d, double t) {
  std::vector<Atom> kept;
  for (const auto& a : d.atoms)
    if (a.value < t) kept.push_back(a);
  if (kept.empty()) return std::nullopt;
  return normalize(std::move(kept));
}

std::optional<DiscreteDist> condition_above(const DiscreteDist& d, double t) {
  std::vector<Atom> kept;
  for (const auto& a : d.atoms)
    if (a.value > t) kept.push_back(a);
  if (kept.empty()) return std::nullopt;
  return normalize(std::move(kept));
}

double max_support(const DiscreteDist& d) { return d.atoms.front().value; }

double min_support(const DiscreteDist& d) { return d.atoms.back().value; }

double mean(const DiscreteDist& d) {
  double m = 0;
  for (const auto& a : d.atoms) m += a.prob * a.value;
  return m;
}

DiscreteDist negated(const DiscreteDist& d) {
  std::vector<Atom> raw;
  raw.reserve(d.atoms.size());
  for (const auto& a : d.atoms) raw.push_back({-a.value, a.prob});
  return normalize(std::move(raw));
}

double sample(const DiscreteDist& d, Rng& rng) {
  double u = rng.uniform01(), cum = 0;
  for (const auto& a : d.atoms) {
    cum += a.prob;
    if (u < cum) return a.value;
  }
  return d.atoms.back().value;
}

}  // namespace cics
