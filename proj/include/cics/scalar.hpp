#ifndef CICS_SCALAR_HPP
#define CICS_SCALAR_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>

namespace cics {

// Exact rational scalar. The piecewise-linear and amortization machinery is
// generic over the scalar so that constructions whose contracts demand exact
// recovery (e.g. the chain-from-distribution round trip) can run without
// rounding; everything else uses double.
using Rational = boost::multiprecision::cpp_rational;

template <class K>
struct scalar_traits {
  static constexpr bool exact = false;
  static K slope_eps() { return K(1e-9); }
};

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static Rational slope_eps() { return Rational(0); }
};

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

template <class K>
K scalar_from_double(double x);

template <>
inline double scalar_from_double<double>(double x) { return x; }

template <>
inline Rational scalar_from_double<Rational>(double x) { return Rational(x); }

template <class K>
K scalar_abs(const K& x) { return x < K(0) ? K(-x) : x; }

// Guard violations (state-space or enumeration budgets) map to CLI exit 1,
// malformed inputs to exit 2.
struct GuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputError : std::runtime_error {
  std::string pointer;  // JSON pointer to the offending field, may be empty
  InputError(std::string ptr, const std::string& msg)
      : std::runtime_error(msg), pointer(std::move(ptr)) {}
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cics

#endif
