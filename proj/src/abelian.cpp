// SPDX-License-Identifier: Apache-2.0
#include "melnikov/abelian.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <tuple>

#include <json.hpp>

namespace mlk::abelian {

using nlohmann::ordered_json;

const char* gen_name(Gen g) {
  switch (g) {
    case Gen::Unit: return "1";
    case Gen::J00: return "J00";
    case Gen::J01: return "J01";
    case Gen::J11: return "J11";
    case Gen::I01: return "I01";
  }
  return "?";
}

void IntegralExpr::add(const Rat& c, int hp, int up, Gen g) {
  if (c == 0) return;
  terms.push_back(Term{c, hp, up, g});
  terms.back().coeff.canonicalize();
}

void IntegralExpr::normalize() {
  auto key = [](const Term& t) { return std::make_tuple(static_cast<int>(t.gen), t.h_pow, t.u_pow); };
  std::sort(terms.begin(), terms.end(),
            [&](const Term& a, const Term& b) { return key(a) < key(b); });
  std::vector<Term> out;
  for (auto& t : terms) {
    if (!out.empty() && key(out.back()) == key(t))
      out.back().coeff += t.coeff;
    else
      out.push_back(t);
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const Term& t) { return t.coeff == 0; }),
            out.end());
  terms = std::move(out);
}

IntegralExpr IntegralExpr::operator+(const IntegralExpr& o) const {
  IntegralExpr r = *this;
  r.terms.insert(r.terms.end(), o.terms.begin(), o.terms.end());
  r.normalize();
  return r;
}

IntegralExpr IntegralExpr::operator-(const IntegralExpr& o) const {
  return *this + o.scaled(Rat(-1));
}

IntegralExpr IntegralExpr::scaled(const Rat& c) const {
  IntegralExpr r;
  if (c == 0) return r;
  for (const auto& t : terms) {
    r.terms.push_back(Term{t.coeff * c, t.h_pow, t.u_pow, t.gen});
    r.terms.back().coeff.canonicalize();
  }
  return r;
}

IntegralExpr IntegralExpr::times_h(int k) const {
  IntegralExpr r = *this;
  for (auto& t : r.terms) t.h_pow += k;
  return r;
}

IntegralExpr IntegralExpr::expand_h(CurvePower m) const {
  IntegralExpr r;
  for (const auto& t : terms) {
    if (t.h_pow == 0) {
      r.terms.push_back(t);
      continue;
    }
    for (int s = 0; s <= t.h_pow; ++s) {
      mpz_class b;
      mpz_bin_uiui(b.get_mpz_t(), t.h_pow, s);
      r.add(t.coeff * Rat(b), 0, t.u_pow + 2 * (t.h_pow - s) + 2 * m.m * s, t.gen);
    }
  }
  r.normalize();
  return r;
}

bool IntegralExpr::operator==(const IntegralExpr& o) const {
  IntegralExpr a = *this, b = o;
  a.normalize();
  b.normalize();
  if (a.terms.size() != b.terms.size()) return false;
  for (size_t k = 0; k < a.terms.size(); ++k) {
    const auto& x = a.terms[k];
    const auto& y = b.terms[k];
    if (x.gen != y.gen || x.h_pow != y.h_pow || x.u_pow != y.u_pow || x.coeff != y.coeff)
      return false;
  }
  return true;
}

namespace {

double arc_T(double u, int m) {
  // T(u) = (a sqrt(1-a^2) + asin a)/2 with a = 1/sqrt(1 + u^{2m-2}).
  const double w = std::pow(u, 2.0 * m - 2.0);
  const double a = 1.0 / std::sqrt(1.0 + w);
  const double s = std::sqrt(std::max(0.0, 1.0 - a * a));
  return 0.5 * (a * s + std::asin(std::min(1.0, a)));
}

double gen_value(Gen g, double u, CurvePower m) {
  const double h = u * u + std::pow(u, 2.0 * m.m);
  switch (g) {
    case Gen::Unit: return 1.0;
    case Gen::J00: return 2.0 * u;
    case Gen::J01:
      if (m.odd()) return 0.5 * M_PI * h;
      return 2.0 * h * arc_T(u, m.m);
    case Gen::J11: return m.odd() ? -(2.0 / 3.0) * std::pow(u, 3.0 * m.m) : 0.0;
    case Gen::I01: return M_PI * h - 2.0 * h * arc_T(u, m.m);
  }
  return 0.0;
}

}  // namespace

double IntegralExpr::eval(double u, CurvePower m) const {
  const double h = u * u + std::pow(u, 2.0 * m.m);
  double acc = 0;
  for (const auto& t : terms)
    acc += t.coeff.get_d() * std::pow(h, t.h_pow) * std::pow(u, t.u_pow) *
           gen_value(t.gen, u, m);
  return acc;
}

std::string IntegralExpr::to_json() const {
  ordered_json arr = ordered_json::array();
  for (const auto& t : terms) {
    ordered_json e;
    e["c"] = to_string(t.coeff);
    e["h"] = t.h_pow;
    e["u"] = t.u_pow;
    e["g"] = gen_name(t.gen);
    arr.push_back(e);
  }
  ordered_json j;
  j["terms"] = arr;
  return j.dump();
}

namespace {

IntegralExpr base_expr(int i, int j, CurvePower m, bool lower) {
  IntegralExpr e;
  if (i == 1) return e;  // J_{1,0} = I_{1,0} = 0; J_{1,1}/I_{1,1} handled below
  if (i == 0 && j == 0) {
    e.add(Rat(lower ? -1 : 1), 0, 0, Gen::J00);
    return e;
  }
  if (i == 0 && j == 1) {
    if (m.odd())
      e.add(Rat(1), 0, 0, Gen::J01);  // I_{0,1} = J_{0,1} for odd m
    else
      e.add(Rat(1), 0, 0, lower ? Gen::I01 : Gen::J01);
    return e;
  }
  throw std::logic_error("base_expr: not a base index");
}

IntegralExpr base_expr11(CurvePower m, bool lower) {
  IntegralExpr e;
  if (m.odd()) e.add(Rat(lower ? -1 : 1), 0, 0, Gen::J11);
  return e;  // J_{1,1} = I_{1,1} = 0 for even m
}

struct MemoKey {
  int i, j, m;
  bool lower;
  auto operator<=>(const MemoKey&) const = default;
};

std::map<MemoKey, IntegralExpr> g_memo;
std::shared_mutex g_memo_mutex;

IntegralExpr reduce_impl(int i, int j, CurvePower m, bool lower) {
  if (i < 0 || j < 0) throw std::domain_error("reduce: indices must be >= 0");
  MemoKey key{i, j, m.m, lower};
  {
    std::shared_lock lk(g_memo_mutex);
    auto it = g_memo.find(key);
    if (it != g_memo.end()) return it->second;
  }

  IntegralExpr result;
  // Boundary parity factor 1 + (-1)^{i+mj}; nonzero exactly when i+mj is even.
  const bool boundary_live = ((i + m.m * j) % 2 == 0);
  const int bsign = lower ? -1 : 1;
  if (i <= 1 && j <= 1) {
    result = (i == 1 && j == 1) ? base_expr11(m, lower) : base_expr(i, j, m, lower);
  } else if (j >= 2) {
    // Lower j: X_{i,j} = (j/(i+j+1)) h X_{i,j-2} ± (2/(i+j+1)) u^{i+mj+1}.
    IntegralExpr sub = reduce_impl(i, j - 2, m, lower);
    result = sub.times_h().scaled(rat(j, i + j + 1));
    if (boundary_live) result.add(rat(2 * bsign, i + j + 1), 0, i + m.m * j + 1, Gen::Unit);
  } else {
    // Lower i: X_{i,j} = ((i-1)/(i+j+1)) h X_{i-2,j} ∓ (2/(i+j+1)) u^{i+mj+2m-1}.
    IntegralExpr sub = reduce_impl(i - 2, j, m, lower);
    result = sub.times_h().scaled(rat(i - 1, i + j + 1));
    if (boundary_live)
      result.add(rat(-2 * bsign, i + j + 1), 0, i + m.m * j + 2 * m.m - 1, Gen::Unit);
  }
  result.normalize();

  std::unique_lock lk(g_memo_mutex);
  return g_memo.emplace(key, std::move(result)).first->second;
}

}  // namespace

IntegralExpr reduce_J(int i, int j, CurvePower m) { return reduce_impl(i, j, m, false); }
IntegralExpr reduce_I(int i, int j, CurvePower m) { return reduce_impl(i, j, m, true); }

BaseTable base_integrals(CurvePower m) {
  BaseTable t;
  t.J00 = reduce_J(0, 0, m);
  t.J10 = reduce_J(1, 0, m);
  t.J01 = reduce_J(0, 1, m);
  t.J11 = reduce_J(1, 1, m);
  t.I00 = reduce_I(0, 0, m);
  t.I10 = reduce_I(1, 0, m);
  t.I01 = reduce_I(0, 1, m);
  t.I11 = reduce_I(1, 1, m);
  return t;
}

IntegralExpr pythagoras_defect(int i, int j, CurvePower m, bool lower_arc) {
  auto red = [&](int a, int b) { return lower_arc ? reduce_I(a, b, m) : reduce_J(a, b, m); };
  // h and u are dependent (h = u^2 + u^{2m}); the cancellation is exact only
  // after the substitution.
  IntegralExpr d = red(i + 2, j) + red(i, j + 2) - red(i, j).times_h();
  d = d.expand_h(m);
  d.normalize();
  return d;
}

double verify_pythagoras(int i, int j, double h, CurvePower m) {
  if (!(h > 0)) throw std::domain_error("verify_pythagoras: h must be positive");
  const double u = model::u_from_h(h, m);
  const double lhs = reduce_J(i + 2, j, m).eval(u, m) + reduce_J(i, j + 2, m).eval(u, m);
  const double rhs = h * reduce_J(i, j, m).eval(u, m);
  return std::abs(lhs - rhs);
}

}  // namespace mlk::abelian
