// SPDX-License-Identifier: Apache-2.0
#include "melnikov/pirat.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace mlk {

mpfr_prec_t pi_sign_start_precision() {
  static mpfr_prec_t cached = [] {
    if (const char* env = std::getenv("MELNIKOV_PREC_BITS")) {
      long v = std::strtol(env, nullptr, 10);
      if (v >= 16 && v <= (1 << 22)) return static_cast<mpfr_prec_t>(v);
    }
    return static_cast<mpfr_prec_t>(256);
  }();
  return cached;
}

PiRat::PiRat(const Rat& r) {
  if (r != 0) {
    c_.push_back(r);
    c_.back().canonicalize();
  }
}

PiRat::PiRat(long v) {
  if (v != 0) c_.push_back(Rat(v));
}

PiRat PiRat::pi() {
  PiRat p;
  p.c_ = {Rat(0), Rat(1)};
  return p;
}

PiRat PiRat::pi_times(const Rat& r) {
  if (r == 0) return {};
  PiRat p;
  p.c_ = {Rat(0), r};
  p.c_[1].canonicalize();
  return p;
}

Rat PiRat::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size())) return Rat(0);
  return c_[k];
}

void PiRat::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

PiRat PiRat::operator+(const PiRat& o) const {
  PiRat r = *this;
  r += o;
  return r;
}

PiRat& PiRat::operator+=(const PiRat& o) {
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), Rat(0));
  for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  trim();
  return *this;
}

PiRat PiRat::operator-(const PiRat& o) const {
  PiRat r = *this;
  r -= o;
  return r;
}

PiRat& PiRat::operator-=(const PiRat& o) {
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), Rat(0));
  for (size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  trim();
  return *this;
}

PiRat PiRat::operator*(const PiRat& o) const {
  if (is_zero() || o.is_zero()) return {};
  PiRat r;
  r.c_.assign(c_.size() + o.c_.size() - 1, Rat(0));
  for (size_t a = 0; a < c_.size(); ++a) {
    if (c_[a] == 0) continue;
    for (size_t b = 0; b < o.c_.size(); ++b) {
      if (o.c_[b] == 0) continue;
      r.c_[a + b] += c_[a] * o.c_[b];
    }
  }
  r.trim();
  return r;
}

PiRat& PiRat::operator*=(const PiRat& o) {
  *this = *this * o;
  return *this;
}

PiRat PiRat::operator-() const {
  PiRat r = *this;
  for (auto& q : r.c_) q = -q;
  return r;
}

PiRat PiRat::scaled(const Rat& r) const {
  if (r == 0) return {};
  PiRat out = *this;
  for (auto& q : out.c_) q *= r;
  return out;
}

PiRat operator*(const Rat& r, const PiRat& p) { return p.scaled(r); }

int PiRat::sign() const {
  if (c_.empty()) return 0;
  if (c_.size() == 1) return sgn(c_[0]);
  // pi^k with a single surviving coefficient.
  size_t nonzero = 0, idx = 0;
  for (size_t k = 0; k < c_.size(); ++k)
    if (c_[k] != 0) {
      ++nonzero;
      idx = k;
    }
  if (nonzero == 1) return sgn(c_[idx]);
  for (mpfr_prec_t prec = pi_sign_start_precision(); prec <= (1 << 20); prec *= 2) {
    Interval v = eval_pi_poly(c_, prec);
    int s = v.sign();
    if (s != 0) return s;
  }
  throw std::logic_error("PiRat::sign: undecided at maximum precision");
}

double PiRat::to_double() const {
  double acc = 0;
  const double pi_d = 3.14159265358979323846264338327950288;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * pi_d + it->get_d();
  return acc;
}

Interval PiRat::to_interval(mpfr_prec_t prec) const {
  if (c_.empty()) return Interval(prec);
  return eval_pi_poly(c_, prec);
}

std::string PiRat::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t k = 0; k < c_.size(); ++k) {
    if (c_[k] == 0) continue;
    if (!first) os << (sgn(c_[k]) > 0 ? "+" : "");
    os << c_[k].get_str();
    if (k == 1) os << "*pi";
    if (k > 1) os << "*pi^" << k;
    first = false;
  }
  return os.str();
}

namespace {

// Dense Q-polynomial view of a PiRat (variable = pi).
std::vector<Rat> poly_of(const PiRat& p) { return p.coeffs(); }

void poly_trim(std::vector<Rat>& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

// Remainder of a by b (b nonzero), both in Q[x].
std::vector<Rat> poly_rem(std::vector<Rat> a, const std::vector<Rat>& b) {
  poly_trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    Rat f = a.back() / b.back();
    size_t off = a.size() - b.size();
    for (size_t k = 0; k < b.size(); ++k) a[off + k] -= f * b[k];
    poly_trim(a);
  }
  return a;
}

std::vector<Rat> poly_quot(std::vector<Rat> a, const std::vector<Rat>& b,
                           bool* exact) {
  poly_trim(a);
  std::vector<Rat> q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rat(0));
  while (a.size() >= b.size() && !a.empty()) {
    Rat f = a.back() / b.back();
    size_t off = a.size() - b.size();
    q[off] = f;
    for (size_t k = 0; k < b.size(); ++k) a[off + k] -= f * b[k];
    poly_trim(a);
  }
  *exact = a.empty();
  return q;
}

PiRat from_poly(std::vector<Rat> v) {
  poly_trim(v);
  PiRat r;
  for (size_t k = 0; k < v.size(); ++k) {
    if (v[k] != 0) {
      PiRat term = PiRat(v[k]);
      for (size_t j = 0; j < k; ++j) term *= PiRat::pi();
      r += term;
    }
  }
  return r;
}

}  // namespace

PiRat pirat_gcd(const PiRat& a, const PiRat& b) {
  std::vector<Rat> x = poly_of(a), y = poly_of(b);
  poly_trim(x);
  poly_trim(y);
  while (!y.empty()) {
    auto r = poly_rem(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  if (x.empty()) return {};
  // Monic normalization (positive leading rational).
  Rat lead = x.back();
  for (auto& q : x) q /= lead;
  return from_poly(std::move(x));
}

PiRat pirat_divexact(const PiRat& a, const PiRat& b) {
  if (b.is_zero()) throw std::logic_error("pirat_divexact: division by zero");
  if (a.is_zero()) return {};
  bool exact = false;
  auto q = poly_quot(poly_of(a), poly_of(b), &exact);
  if (!exact) throw std::logic_error("pirat_divexact: inexact division");
  return from_poly(std::move(q));
}

}  // namespace mlk
