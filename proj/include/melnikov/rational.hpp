// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mlk {

// Exact rational scalar used throughout the closed-form engine.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

// Parses "p/q", "p", or a plain decimal string like "-0.125".
Rat parse_rational(const std::string& text);

// Canonical "p/q" form ("p" when the denominator is 1).
std::string to_string(const Rat& q);

// Floor division as used by the paper's bracket notation [x].
inline long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline int sign_of(const Rat& q) { return sgn(q); }

inline double to_double(const Rat& q) { return q.get_d(); }

}  // namespace mlk
