#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace nil {

// Exact rational scalar. All semantic decisions (certification, rounding,
// candidate identity) are made on Rat; doubles appear only where the numeric
// layer (SVM, interval endpoints) genuinely lives in floating point.
using Rat = mpq_class;

inline Rat rat_of_long(long n, long d = 1) {
  Rat q(n, d);
  q.canonicalize();
  return q;
}

// Exact: every finite double is a dyadic rational.
inline Rat rat_of_double(double x) { return Rat(x); }

// Nearest-double conversion is not needed; GMP's truncating mpq_get_d is
// within one ulp, which the interval layer widens over anyway.
inline double rat_to_double(const Rat& q) { return q.get_d(); }

// True if q converts to double without error (used to tighten point
// intervals to a single float when possible).
inline bool rat_fits_double(const Rat& q) {
  double d = q.get_d();
  if (!(d == d) || d - d != 0.0) return false;  // NaN or +-inf
  return Rat(d) == q;
}

// "3", "-0.8", "49.61", "1e-2", "2.5e3" -> exact rational.
// Returns nullopt on malformed input.
std::optional<Rat> rat_of_decimal(const std::string& text);

// Exact decimal rendering when the denominator is of the form 2^a * 5^b
// (always true for parsed literals); "num/den" otherwise.
std::string rat_to_string(const Rat& q);

}  // namespace nil
