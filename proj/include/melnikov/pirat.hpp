// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "melnikov/interval.hpp"
#include "melnikov/rational.hpp"

namespace mlk {

// Element of Q[pi]: an exact polynomial in pi with rational coefficients.
// Expansion coefficients of the Melnikov function live in Q + Q*pi; the
// Sturm remainder sequences raise the pi-degree, which is why the full
// ring is kept.  Sign queries are decided by evaluating at pi with MPFR
// intervals of increasing precision; a nonzero element always resolves
// because pi is transcendental, and the exact zero test is coefficientwise.
class PiRat {
 public:
  PiRat() = default;
  PiRat(const Rat& r);  // NOLINT(google-explicit-constructor)
  PiRat(long v);        // NOLINT(google-explicit-constructor)
  static PiRat pi();
  static PiRat pi_times(const Rat& r);

  bool is_zero() const { return c_.empty(); }
  bool is_rational() const { return c_.size() <= 1; }
  int pi_degree() const { return static_cast<int>(c_.size()) - 1; }

  // Coefficient of pi^k.
  Rat coeff(int k) const;
  const std::vector<Rat>& coeffs() const { return c_; }

  PiRat operator+(const PiRat& o) const;
  PiRat operator-(const PiRat& o) const;
  PiRat operator*(const PiRat& o) const;
  PiRat operator-() const;
  PiRat& operator+=(const PiRat& o);
  PiRat& operator-=(const PiRat& o);
  PiRat& operator*=(const PiRat& o);
  bool operator==(const PiRat& o) const { return c_ == o.c_; }

  PiRat scaled(const Rat& r) const;

  // Exact sign of the real number this element represents.
  int sign() const;

  double to_double() const;
  Interval to_interval(mpfr_prec_t prec) const;

  // "a" / "a+b*pi" / "b*pi^k" rendering for diagnostics.
  std::string str() const;

 private:
  void trim();
  std::vector<Rat> c_;  // c_[k] * pi^k, no trailing zeros
};

PiRat operator*(const Rat& r, const PiRat& p);

// gcd/divexact in Q[pi], used by the primitive pseudo-remainder sequences.
// gcd is normalized monic in pi (positive leading rational).
PiRat pirat_gcd(const PiRat& a, const PiRat& b);
// Exact division; throws std::logic_error if the division has a remainder.
PiRat pirat_divexact(const PiRat& a, const PiRat& b);

// Starting precision for pi-interval sign refinement (MELNIKOV_PREC_BITS).
mpfr_prec_t pi_sign_start_precision();

}  // namespace mlk
