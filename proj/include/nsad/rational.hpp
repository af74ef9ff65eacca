#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "nsad/errors.hpp"

namespace nsad {

// Exact arbitrary-precision rational scalar. Sign tests at zero must be exact,
// so everything graph- or hardness-related runs on this type.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double rat_to_double(const Rat& r) { return r.template convert_to<double>(); }

// Exact: every finite double is a dyadic rational.
Rat rat_from_double(double x);

// Accepts "n", "-n/d" and plain decimal/scientific literals (converted through
// the exactly-representing double).
Rat rat_from_string(const std::string& s);

// Lowest terms, "n" when the denominator is 1, otherwise "n/d".
std::string rat_to_string(const Rat& r);

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }
inline int rat_sign(const Rat& r) { return r < 0 ? -1 : (r > 0 ? 1 : 0); }

} // namespace nsad
