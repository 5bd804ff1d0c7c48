#ifndef CICS_DISTRIBUTIONS_HPP
#define CICS_DISTRIBUTIONS_HPP

#include <optional>
#include <vector>

#include "cics/plcurves.hpp"
#include "cics/rng.hpp"

namespace cics {

struct Atom {
  double value = 0;
  double prob = 0;
};

// Finite real-valued distribution. Atoms are sorted by value descending with
// duplicates merged and probabilities normalized to sum 1; immutable after
// construction.
struct DiscreteDist {
  std::vector<Atom> atoms;
};

// merges duplicates, rescales probabilities, sorts by value descending
DiscreteDist normalize(std::vector<Atom> raw);

// R_D(q) = q * F_D(q): integral of the descending quantile function over
// [0, q], point masses split linearly
double top_quantile_revenue(const DiscreteDist& d, double q);

// concave curve q -> R_D(q) on [0, 1]
PiecewiseLinear revenue_curve(const DiscreteDist& d);

// conditional distribution on {X < t}; nullopt when no mass lies below t
std::optional<DiscreteDist> condition_below(const DiscreteDist& d, double t);

// conditional distribution on {X > t}; nullopt when no mass lies above t
std::optional<DiscreteDist> condition_above(const DiscreteDist& d, double t);

double max_support(const DiscreteDist& d);
double min_support(const DiscreteDist& d);
double mean(const DiscreteDist& d);

// distribution of -X
DiscreteDist negated(const DiscreteDist& d);

double sample(const DiscreteDist& d, Rng& rng);

}  // namespace cics

#endif
