#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace hyperdev {

// Exact arithmetic backend. All expectation/deviation identities are checked
// with zero tolerance, so these must never silently round.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& x) { return x.convert_to<double>(); }
inline double to_double(const Int& x) { return x.convert_to<double>(); }

inline std::string to_string(const Rat& x) { return x.str(); }
inline std::string to_string(const Int& x) { return x.str(); }

inline Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }
inline Rat abs_rat(const Rat& x) { return x < 0 ? Rat(-x) : x; }

// Largest integer <= x (works for negative x too).
inline Int floor_rat(const Rat& x) {
  Int q = numerator(x) / denominator(x);
  if (x < 0 && q * denominator(x) != numerator(x)) --q;
  return q;
}

}  // namespace hyperdev
