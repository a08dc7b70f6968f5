// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <mpfr.h>

#include <algorithm>
#include <string>

#include "melnikov/rational.hpp"

namespace mlk {

// Directed-rounding interval over MPFR, just wide enough for what the
// zero-counting machinery needs: ring arithmetic, sqrt/asin, and decided
// sign queries at a chosen precision.
class Interval {
 public:
  explicit Interval(mpfr_prec_t prec = 128);
  Interval(const Interval& o);
  Interval(Interval&& o) noexcept;
  Interval& operator=(const Interval& o);
  Interval& operator=(Interval&& o) noexcept;
  ~Interval();

  static Interval from_rat(const Rat& q, mpfr_prec_t prec);
  static Interval from_int(long v, mpfr_prec_t prec);
  static Interval pi(mpfr_prec_t prec);
  // Hull of two rationals (order irrelevant).
  static Interval hull(const Rat& a, const Rat& b, mpfr_prec_t prec);

  mpfr_prec_t precision() const { return prec_; }

  Interval operator+(const Interval& o) const;
  Interval operator-(const Interval& o) const;
  Interval operator*(const Interval& o) const;
  Interval operator-() const;

  Interval sqrt() const;   // requires lo >= 0
  Interval asin() const;   // requires [lo,hi] within [-1,1]
  Interval recip() const;  // requires 0 not contained

  bool contains_zero() const;
  // +1, -1, or 0 when the interval straddles zero.
  int sign() const;

  double lo_d() const { return mpfr_get_d(lo_, MPFR_RNDD); }
  double hi_d() const { return mpfr_get_d(hi_, MPFR_RNDU); }
  double mid_d() const { return 0.5 * (lo_d() + hi_d()); }
  double width_d() const;

  std::string str() const;

 private:
  mpfr_t lo_, hi_;
  mpfr_prec_t prec_;
};

// Evaluates sum_k coeff[k] * pi^k with rigorous enclosure.
Interval eval_pi_poly(const std::vector<Rat>& coeff, mpfr_prec_t prec);

}  // namespace mlk
