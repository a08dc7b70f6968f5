// SPDX-License-Identifier: Apache-2.0
#include "melnikov/interval.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace mlk {

Interval::Interval(mpfr_prec_t prec) : prec_(prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Interval& o) : prec_(o.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set(lo_, o.lo_, MPFR_RNDD);
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& o) noexcept : prec_(o.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_swap(lo_, o.lo_);
  mpfr_swap(hi_, o.hi_);
}

Interval& Interval::operator=(const Interval& o) {
  if (this != &o) {
    mpfr_set_prec(lo_, o.prec_);
    mpfr_set_prec(hi_, o.prec_);
    prec_ = o.prec_;
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
  }
  return *this;
}

Interval& Interval::operator=(Interval&& o) noexcept {
  if (this != &o) {
    prec_ = o.prec_;
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
  }
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Interval Interval::from_rat(const Rat& q, mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
  return r;
}

Interval Interval::from_int(long v, mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_set_si(r.lo_, v, MPFR_RNDD);
  mpfr_set_si(r.hi_, v, MPFR_RNDU);
  return r;
}

Interval Interval::pi(mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_const_pi(r.lo_, MPFR_RNDD);
  mpfr_const_pi(r.hi_, MPFR_RNDU);
  return r;
}

Interval Interval::hull(const Rat& a, const Rat& b, mpfr_prec_t prec) {
  const Rat& lo = (a <= b) ? a : b;
  const Rat& hi = (a <= b) ? b : a;
  Interval r(prec);
  mpfr_set_q(r.lo_, lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, hi.get_mpq_t(), MPFR_RNDU);
  return r;
}

Interval Interval::operator+(const Interval& o) const {
  Interval r(prec_);
  mpfr_add(r.lo_, lo_, o.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, hi_, o.hi_, MPFR_RNDU);
  return r;
}

Interval Interval::operator-(const Interval& o) const {
  Interval r(prec_);
  mpfr_sub(r.lo_, lo_, o.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, hi_, o.lo_, MPFR_RNDU);
  return r;
}

Interval Interval::operator-() const {
  Interval r(prec_);
  mpfr_neg(r.lo_, hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  return r;
}

Interval Interval::operator*(const Interval& o) const {
  Interval r(prec_);
  mpfr_t c, best_lo, best_hi;
  mpfr_init2(c, prec_);
  mpfr_init2(best_lo, prec_);
  mpfr_init2(best_hi, prec_);
  bool first = true;
  const mpfr_srcptr xs[2] = {lo_, hi_};
  const mpfr_srcptr ys[2] = {o.lo_, o.hi_};
  for (auto x : xs)
    for (auto y : ys) {
      mpfr_mul(c, x, y, MPFR_RNDD);
      if (first || mpfr_cmp(c, best_lo) < 0) mpfr_set(best_lo, c, MPFR_RNDD);
      mpfr_mul(c, x, y, MPFR_RNDU);
      if (first || mpfr_cmp(c, best_hi) > 0) mpfr_set(best_hi, c, MPFR_RNDU);
      first = false;
    }
  mpfr_set(r.lo_, best_lo, MPFR_RNDD);
  mpfr_set(r.hi_, best_hi, MPFR_RNDU);
  mpfr_clear(c);
  mpfr_clear(best_lo);
  mpfr_clear(best_hi);
  return r;
}

Interval Interval::sqrt() const {
  if (mpfr_sgn(lo_) < 0) throw std::domain_error("Interval::sqrt of negative range");
  Interval r(prec_);
  mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
  mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval Interval::asin() const {
  Interval r(prec_);
  mpfr_asin(r.lo_, lo_, MPFR_RNDD);
  mpfr_asin(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval Interval::recip() const {
  if (contains_zero()) throw std::domain_error("Interval::recip across zero");
  Interval r(prec_);
  mpfr_t one;
  mpfr_init2(one, prec_);
  mpfr_set_ui(one, 1, MPFR_RNDN);
  mpfr_div(r.lo_, one, hi_, MPFR_RNDD);
  mpfr_div(r.hi_, one, lo_, MPFR_RNDU);
  mpfr_clear(one);
  return r;
}

bool Interval::contains_zero() const {
  return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0;
}

int Interval::sign() const {
  if (mpfr_sgn(lo_) > 0) return 1;
  if (mpfr_sgn(hi_) < 0) return -1;
  return 0;
}

double Interval::width_d() const {
  mpfr_t w;
  mpfr_init2(w, prec_);
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  double d = mpfr_get_d(w, MPFR_RNDU);
  mpfr_clear(w);
  return d;
}

std::string Interval::str() const {
  char buf[128];
  std::snprintf(buf, sizeof buf, "[%.17g, %.17g]", lo_d(), hi_d());
  return buf;
}

Interval eval_pi_poly(const std::vector<Rat>& coeff, mpfr_prec_t prec) {
  Interval acc(prec);
  Interval pi = Interval::pi(prec);
  for (auto it = coeff.rbegin(); it != coeff.rend(); ++it)
    acc = acc * pi + Interval::from_rat(*it, prec);
  return acc;
}

}  // namespace mlk
