// SPDX-License-Identifier: Apache-2.0
#include "melnikov/roots.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include <json.hpp>

namespace mlk::roots {

using melnikov::ArcFunction;
using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// PiPoly
// ---------------------------------------------------------------------------

void PiPoly::trim() {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

int PiPoly::valuation() const {
  for (size_t k = 0; k < a.size(); ++k)
    if (!a[k].is_zero()) return static_cast<int>(k);
  return -1;
}

PiPoly PiPoly::operator+(const PiPoly& o) const {
  PiPoly r = *this;
  if (r.a.size() < o.a.size()) r.a.resize(o.a.size());
  for (size_t k = 0; k < o.a.size(); ++k) r.a[k] += o.a[k];
  r.trim();
  return r;
}

PiPoly PiPoly::operator-(const PiPoly& o) const {
  PiPoly r = *this;
  if (r.a.size() < o.a.size()) r.a.resize(o.a.size());
  for (size_t k = 0; k < o.a.size(); ++k) r.a[k] -= o.a[k];
  r.trim();
  return r;
}

PiPoly PiPoly::operator*(const PiPoly& o) const {
  if (is_zero() || o.is_zero()) return {};
  PiPoly r;
  r.a.assign(a.size() + o.a.size() - 1, PiRat());
  for (size_t x = 0; x < a.size(); ++x) {
    if (a[x].is_zero()) continue;
    for (size_t y = 0; y < o.a.size(); ++y) {
      if (o.a[y].is_zero()) continue;
      r.a[x + y] += a[x] * o.a[y];
    }
  }
  r.trim();
  return r;
}

PiPoly PiPoly::scaled(const PiRat& c) const {
  if (c.is_zero()) return {};
  PiPoly r = *this;
  for (auto& v : r.a) v *= c;
  r.trim();
  return r;
}

PiPoly PiPoly::derivative() const {
  PiPoly r;
  if (a.size() <= 1) return r;
  r.a.resize(a.size() - 1);
  for (size_t k = 1; k < a.size(); ++k) r.a[k - 1] = a[k].scaled(Rat(static_cast<long>(k)));
  r.trim();
  return r;
}

PiPoly PiPoly::shifted_down(int k) const {
  if (k == 0) return *this;
  if (valuation() < k) throw std::logic_error("PiPoly::shifted_down: valuation too low");
  PiPoly r;
  r.a.assign(a.begin() + k, a.end());
  return r;
}

PiRat PiPoly::eval(const Rat& u) const {
  PiRat acc;
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc.scaled(u) + *it;
  return acc;
}

double PiPoly::eval_d(double u) const {
  double acc = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * u + it->to_double();
  return acc;
}

Interval PiPoly::eval_interval(const Interval& u, mpfr_prec_t prec) const {
  Interval acc(prec);
  for (auto it = a.rbegin(); it != a.rend(); ++it)
    acc = acc * u + it->to_interval(prec);
  return acc;
}

bool PiPoly::rational_only() const {
  return std::all_of(a.begin(), a.end(), [](const PiRat& c) { return c.is_rational(); });
}

// ---------------------------------------------------------------------------
// Sturm machinery
// ---------------------------------------------------------------------------

namespace {

// Divides out the Q[pi]-content; sign-faithful (the removed factor is made
// positive at pi).
PiPoly strip_content(PiPoly p) {
  p.trim();
  if (p.is_zero()) return p;
  PiRat g;
  for (const auto& c : p.a)
    if (!c.is_zero()) g = pirat_gcd(g, c);
  if (!(g.is_rational() && g.coeff(0) == 1)) {
    for (auto& c : p.a)
      if (!c.is_zero()) c = pirat_divexact(c, g);
    if (g.sign() < 0)
      for (auto& c : p.a) c = -c;
  }
  // Rational content: gcd of numerators over lcm of denominators.
  mpz_class num_gcd(0), den_lcm(1);
  for (const auto& c : p.a)
    for (const auto& q : c.coeffs()) {
      if (q == 0) continue;
      mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), q.get_num().get_mpz_t());
      mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), q.get_den().get_mpz_t());
    }
  if (num_gcd != 0) {
    Rat scale(den_lcm, num_gcd);
    scale.canonicalize();
    for (auto& c : p.a) c = c.scaled(scale);
  }
  return p;
}

// -rem(f, g) up to a positive constant factor, computed fraction-free.
PiPoly neg_rem_signfaithful(const PiPoly& f, const PiPoly& g) {
  const PiRat d = g.lead();
  int dmults = 0;
  PiPoly r = f;
  while (!r.is_zero() && r.degree() >= g.degree()) {
    const int k = r.degree() - g.degree();
    const PiRat c = r.lead();
    PiPoly shifted;
    shifted.a.assign(k, PiRat());
    shifted.a.insert(shifted.a.end(), g.a.begin(), g.a.end());
    r = r.scaled(d) - shifted.scaled(c);
    ++dmults;
    r.trim();
  }
  // r = d^{dmults} * rem(f, g); flip once more if the accumulated multiplier
  // is negative at pi.
  int mult_sign = (d.sign() < 0 && dmults % 2 == 1) ? -1 : 1;
  PiPoly out = strip_content(std::move(r));
  if (mult_sign > 0)
    for (auto& c : out.a) c = -c;
  return out;
}

int nonzero_sign(const PiRat& v) { return v.is_zero() ? 0 : v.sign(); }

}  // namespace

std::vector<PiPoly> sturm_sequence(const PiPoly& p) {
  std::vector<PiPoly> chain;
  PiPoly p0 = strip_content(p);
  if (p0.is_zero()) return chain;
  chain.push_back(p0);
  PiPoly p1 = strip_content(p0.derivative());
  if (p1.is_zero()) return chain;
  chain.push_back(p1);
  while (chain.back().degree() > 0) {
    PiPoly nxt = neg_rem_signfaithful(chain[chain.size() - 2], chain.back());
    if (nxt.is_zero()) break;
    chain.push_back(std::move(nxt));
  }
  return chain;
}

namespace {
int count_variations(const std::vector<int>& signs) {
  int v = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}
}  // namespace

int sign_variations_at(const std::vector<PiPoly>& chain, const Rat& x) {
  std::vector<int> signs;
  signs.reserve(chain.size());
  for (const auto& p : chain) signs.push_back(nonzero_sign(p.eval(x)));
  return count_variations(signs);
}

int sign_variations_at_inf(const std::vector<PiPoly>& chain, int dir) {
  if (dir != 1) throw std::domain_error("sign_variations_at_inf: dir must be +1");
  std::vector<int> signs;
  for (const auto& p : chain) signs.push_back(nonzero_sign(p.lead()));
  return count_variations(signs);
}

int sturm_count(const std::vector<PiPoly>& chain, const Rat& lo, const Rat& hi) {
  return sign_variations_at(chain, lo) - sign_variations_at(chain, hi);
}

namespace {

Rat rat_from_double_up(double d) {
  Rat q;
  mpq_set_d(q.get_mpq_t(), std::nextafter(d, 1e308));
  return q;
}

// Rigorous upper bound of |v| at pi.
Rat abs_upper(const PiRat& v) {
  Interval iv = v.to_interval(128);
  return rat_from_double_up(std::max(std::abs(iv.lo_d()), std::abs(iv.hi_d())));
}

// Rigorous positive lower bound of |v| (v nonzero).
Rat abs_lower(const PiRat& v) {
  for (mpfr_prec_t prec = 128; prec <= (1 << 20); prec *= 2) {
    Interval iv = v.to_interval(prec);
    if (!iv.contains_zero()) {
      const double lo = std::min(std::abs(iv.lo_d()), std::abs(iv.hi_d()));
      Rat q;
      mpq_set_d(q.get_mpq_t(), std::nextafter(lo, 0.0));
      if (q > 0) return q;
    }
  }
  throw std::logic_error("abs_lower: could not separate from zero");
}

}  // namespace

Rat root_upper_bound(const PiPoly& p) {
  if (p.degree() < 1) return Rat(1);
  const Rat denom = abs_lower(p.lead());
  Rat max_ratio(0);
  for (int k = 0; k < p.degree(); ++k) {
    if (p.a[k].is_zero()) continue;
    Rat r = abs_upper(p.a[k]) / denom;
    if (r > max_ratio) max_ratio = r;
  }
  return Rat(1) + max_ratio;
}

// ---------------------------------------------------------------------------
// Isolation with exact multiplicities (Yun decomposition over Frac(Q[pi]))
// ---------------------------------------------------------------------------

namespace {

struct PiFrac {
  PiRat num, den = PiRat(Rat(1));
  void reduce() {
    if (num.is_zero()) {
      den = PiRat(Rat(1));
      return;
    }
    PiRat g = pirat_gcd(num, den);
    num = pirat_divexact(num, g);
    den = pirat_divexact(den, g);
  }
  bool is_zero() const { return num.is_zero(); }
  PiFrac operator+(const PiFrac& o) const {
    PiFrac r{num * o.den + o.num * den, den * o.den};
    r.reduce();
    return r;
  }
  PiFrac operator-(const PiFrac& o) const {
    PiFrac r{num * o.den - o.num * den, den * o.den};
    r.reduce();
    return r;
  }
  PiFrac operator*(const PiFrac& o) const {
    PiFrac r{num * o.num, den * o.den};
    r.reduce();
    return r;
  }
  PiFrac operator/(const PiFrac& o) const {
    if (o.is_zero()) throw std::logic_error("PiFrac division by zero");
    PiFrac r{num * o.den, den * o.num};
    r.reduce();
    return r;
  }
};

using FPoly = std::vector<PiFrac>;  // coefficient of u^k at index k

void ftrim(FPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

FPoly to_fpoly(const PiPoly& p) {
  FPoly r(p.a.size());
  for (size_t k = 0; k < p.a.size(); ++k) r[k] = PiFrac{p.a[k], PiRat(Rat(1))};
  ftrim(r);
  return r;
}

PiPoly from_fpoly(const FPoly& p) {
  // Clear denominators.
  PiRat lcm(Rat(1));
  for (const auto& c : p)
    if (!c.is_zero()) lcm = pirat_divexact(lcm * c.den, pirat_gcd(lcm, c.den));
  PiPoly out;
  out.a.resize(p.size());
  for (size_t k = 0; k < p.size(); ++k)
    if (!p[k].is_zero()) out.a[k] = p[k].num * pirat_divexact(lcm, p[k].den);
  out.trim();
  return strip_content(std::move(out));
}

FPoly fderiv(const FPoly& p) {
  FPoly r;
  if (p.size() <= 1) return r;
  r.resize(p.size() - 1);
  for (size_t k = 1; k < p.size(); ++k)
    r[k - 1] = p[k] * PiFrac{PiRat(Rat(static_cast<long>(k))), PiRat(Rat(1))};
  ftrim(r);
  return r;
}

FPoly fsub(const FPoly& a, const FPoly& b) {
  FPoly r = a;
  if (r.size() < b.size()) r.resize(b.size());
  for (size_t k = 0; k < b.size(); ++k) r[k] = r[k] - b[k];
  ftrim(r);
  return r;
}

// Remainder and exact quotient over the fraction field.
FPoly frem(FPoly a, const FPoly& b) {
  ftrim(a);
  while (a.size() >= b.size() && !a.empty()) {
    PiFrac f = a.back() / b.back();
    size_t off = a.size() - b.size();
    for (size_t k = 0; k < b.size(); ++k) a[off + k] = a[off + k] - f * b[k];
    a.pop_back();
    ftrim(a);
  }
  return a;
}

FPoly fquot(FPoly a, const FPoly& b) {
  ftrim(a);
  if (a.size() < b.size()) return {};
  FPoly q(a.size() - b.size() + 1);
  while (a.size() >= b.size() && !a.empty()) {
    PiFrac f = a.back() / b.back();
    q[a.size() - b.size()] = f;
    size_t off = a.size() - b.size();
    for (size_t k = 0; k < b.size(); ++k) a[off + k] = a[off + k] - f * b[k];
    a.pop_back();
    ftrim(a);
  }
  return q;
}

FPoly fmonic(FPoly p) {
  ftrim(p);
  if (p.empty()) return p;
  PiFrac lead = p.back();
  for (auto& c : p) c = c / lead;
  return p;
}

FPoly fgcd(FPoly a, FPoly b) {
  ftrim(a);
  ftrim(b);
  while (!b.empty()) {
    FPoly r = frem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return fmonic(std::move(a));
}

// Yun squarefree decomposition: p ~ prod factors[k].poly^{factors[k].mult}.
struct SqfFactor {
  PiPoly poly;
  int mult;
};

std::vector<SqfFactor> squarefree_decompose(const PiPoly& p) {
  std::vector<SqfFactor> out;
  FPoly f = to_fpoly(p);
  FPoly fp = fderiv(f);
  FPoly g = fgcd(f, fp);
  if (g.size() <= 1) {
    out.push_back({strip_content(p), 1});
    return out;
  }
  FPoly w = fquot(f, g);
  FPoly y = fquot(fp, g);
  FPoly z = fsub(y, fderiv(w));
  int k = 1;
  while (w.size() > 1) {
    FPoly gk = fgcd(w, z);
    PiPoly factor = from_fpoly(gk);
    if (factor.degree() >= 1) out.push_back({factor, k});
    w = fquot(w, gk);
    y = fquot(z, gk);
    z = fsub(y, fderiv(w));
    ++k;
  }
  return out;
}

struct IsolatedRoot {
  Rat lo, hi;
  int mult;
};

// Midpoint that is not a root of the chain head.
Rat split_point(const std::vector<PiPoly>& chain, const Rat& lo, const Rat& hi) {
  for (int k = 1; k <= 8; ++k) {
    Rat mid = lo + (hi - lo) * rat(2 * k - 1, 16);
    if (!chain[0].eval(mid).is_zero()) return mid;
  }
  throw std::logic_error("split_point: could not find a non-root cut");
}

std::vector<IsolatedRoot> isolate_squarefree(const PiPoly& q, int mult) {
  std::vector<IsolatedRoot> out;
  if (q.degree() < 1) return out;
  auto chain = sturm_sequence(q);
  const Rat B = root_upper_bound(q);
  struct Seg {
    Rat lo, hi;
    int count;
  };
  std::deque<Seg> work;
  {
    int total = sturm_count(chain, Rat(0), B);
    if (total > 0) work.push_back({Rat(0), B, total});
  }
  while (!work.empty()) {
    Seg s = work.front();
    work.pop_front();
    if (s.count == 1) {
      out.push_back({s.lo, s.hi, mult});
      continue;
    }
    Rat mid = split_point(chain, s.lo, s.hi);
    int left = sturm_count(chain, s.lo, mid);
    if (left > 0) work.push_back({s.lo, mid, left});
    if (s.count - left > 0) work.push_back({mid, s.hi, s.count - left});
  }
  std::sort(out.begin(), out.end(),
            [](const IsolatedRoot& a, const IsolatedRoot& b) { return a.lo < b.lo; });
  return out;
}

// Shrinks [lo,hi] (containing exactly one root of `chain`) until `other`
// has no sign-variation there.
void shrink_against(const std::vector<PiPoly>& chain, Rat& lo, Rat& hi,
                    const std::vector<PiPoly>& other) {
  for (int it = 0; it < 256 && sturm_count(other, lo, hi) > 0; ++it) {
    Rat mid = split_point(chain, lo, hi);
    if (sturm_count(chain, lo, mid) == 1)
      hi = mid;
    else
      lo = mid;
  }
  if (sturm_count(other, lo, hi) > 0)
    throw std::logic_error("isolation: could not separate squarefree factors");
}

}  // namespace

std::vector<RootInterval> isolate_positive_roots(const PiPoly& p) {
  std::vector<RootInterval> out;
  PiPoly q = p;
  q.trim();
  if (q.is_zero()) throw std::domain_error("isolate_positive_roots: zero polynomial");
  const int v = q.valuation();
  if (v > 0) q = q.shifted_down(v);
  if (q.degree() < 1) return out;

  // The pseudo-remainder chain ends in a constant exactly when q is
  // squarefree; only the degenerate case pays for the Yun decomposition.
  std::vector<SqfFactor> factors;
  {
    auto chain = sturm_sequence(q);
    if (chain.back().degree() == 0)
      factors.push_back({strip_content(q), 1});
    else
      factors = squarefree_decompose(q);
  }

  std::vector<std::vector<PiPoly>> chains;
  chains.reserve(factors.size());
  for (auto& f : factors) chains.push_back(sturm_sequence(f.poly));

  struct Located {
    IsolatedRoot root;
    size_t factor;
  };
  std::vector<Located> roots;
  for (size_t fi = 0; fi < factors.size(); ++fi)
    for (auto& r : isolate_squarefree(factors[fi].poly, factors[fi].mult))
      roots.push_back({r, fi});

  // Distinct factors have distinct roots; make the intervals pairwise disjoint.
  if (factors.size() > 1)
    for (size_t a = 0; a < roots.size(); ++a)
      for (size_t b = 0; b < roots.size(); ++b) {
        if (a == b || roots[a].factor == roots[b].factor) continue;
        auto& ra = roots[a].root;
        const auto& rb = roots[b].root;
        if (!(ra.hi <= rb.lo || rb.hi <= ra.lo))
          shrink_against(chains[roots[a].factor], ra.lo, ra.hi, chains[roots[b].factor]);
      }

  std::sort(roots.begin(), roots.end(), [](const Located& x, const Located& y) {
    return x.root.lo < y.root.lo;
  });
  for (auto& loc : roots) {
    RootInterval ri;
    ri.lo = loc.root.lo;
    ri.hi = loc.root.hi;
    ri.mult = loc.root.mult == 1         ? RootInterval::Mult::Simple
              : (loc.root.mult % 2 == 1) ? RootInterval::Mult::Odd
                                         : RootInterval::Mult::Even;
    out.push_back(ri);
  }
  return out;
}

// ---------------------------------------------------------------------------
// count_zeros
// ---------------------------------------------------------------------------

namespace {

PiPoly h_poly(int m) {
  PiPoly h;
  h.a.assign(2 * m + 1, PiRat());
  h.a[2] = PiRat(Rat(1));
  h.a[2 * m] += PiRat(Rat(1));
  h.trim();
  return h;
}

Rat binom_rat(int a, int b) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), a, b);
  return Rat(r);
}

// Polynomial part (monos + rings) of the expansion.
PiPoly poly_part(const MelnikovExpansion& e) {
  PiPoly p;
  auto ensure = [&](int deg) {
    if (static_cast<int>(p.a.size()) <= deg) p.a.resize(deg + 1);
  };
  for (const auto& [exp, c] : e.mono) {
    ensure(exp);
    p.a[exp] += c;
  }
  const int m = e.m.m;
  for (const auto& [l, c] : e.ring)
    for (int t = 0; t <= l + 1; ++t) {
      const int exp = 2 * (l + 1 - t) + 2 * m * t;
      ensure(exp);
      p.a[exp] += c * PiRat(binom_rat(l + 1, t));
    }
  p.trim();
  return p;
}

// F~(u) = sum_l arc_l h^l (so the arc part of M is h * F~ * T).
PiPoly arc_series_poly(const MelnikovExpansion& e) {
  PiPoly f;
  const int m = e.m.m;
  auto ensure = [&](int deg) {
    if (static_cast<int>(f.a.size()) <= deg) f.a.resize(deg + 1);
  };
  for (const auto& [l, c] : e.arc)
    for (int t = 0; t <= l; ++t) {
      const int exp = 2 * (l - t) + 2 * m * t;
      ensure(exp);
      f.a[exp] += c * PiRat(binom_rat(l, t));
    }
  f.trim();
  return f;
}

void append_exact_roots(ZeroReport& rep, const PiPoly& p) {
  auto roots = isolate_positive_roots(p);
  rep.intervals = std::move(roots);
  rep.rigor = ZeroReport::Rigor::Exact;
  rep.certified_lower = static_cast<int>(rep.intervals.size());
  rep.upper_bound = rep.certified_lower;
  rep.search_bound = to_double(root_upper_bound(p));
}

// Sign of M at rational u > 0, refined until decided; 0 if undecidable
// within the precision cap (never observed for nonzero values).
int expansion_sign_at(const MelnikovExpansion& e, const Rat& u) {
  for (mpfr_prec_t prec = pi_sign_start_precision(); prec <= (1 << 16); prec *= 2) {
    Interval v = e.enclose(u, prec);
    int s = v.sign();
    if (s != 0) return s;
    if (v.width_d() < 1e-200) break;
  }
  return 0;
}

// Exact asymptotic coefficients of T at u -> +inf:
// T = sum_j t_j x^{2j+1}, x = u^{-(m-1)}; returns t_0..t_J.
std::vector<Rat> arc_tail_series(int J) {
  // T as a series in a: T(a) = sum_k c_k a^{2k+1}, c_k = (-1)^k binom(1/2,k)/(2k+1).
  std::vector<Rat> c(J + 1);
  {
    Rat b(1);  // binom(1/2, k) accumulated
    for (int k = 0; k <= J; ++k) {
      Rat term = b / Rat(2 * k + 1);
      c[k] = (k % 2 == 0) ? term : -term;
      b *= Rat(1, 2) - Rat(k);
      b /= Rat(k + 1);
    }
  }
  // a(x) = x (1+x^2)^{-1/2} = sum_j binom(-1/2, j) x^{2j+1}.
  std::vector<Rat> a(2 * J + 2, Rat(0));  // coefficient of x^{idx}
  {
    Rat b(1);
    for (int j = 0; 2 * j + 1 < static_cast<int>(a.size()); ++j) {
      a[2 * j + 1] = b;
      b *= Rat(-1, 2) - Rat(j);
      b /= Rat(j + 1);
    }
  }
  const int NX = 2 * J + 2;
  auto mul = [&](const std::vector<Rat>& x, const std::vector<Rat>& y) {
    std::vector<Rat> r(NX, Rat(0));
    for (int i = 0; i < NX; ++i) {
      if (x[i] == 0) continue;
      for (int j = 0; i + j < NX; ++j)
        if (y[j] != 0) r[i + j] += x[i] * y[j];
    }
    return r;
  };
  std::vector<Rat> acc(NX, Rat(0));
  std::vector<Rat> apow = a;  // a^1
  std::vector<Rat> a2 = mul(a, a);
  for (int k = 0; k <= J; ++k) {
    for (int i = 0; i < NX; ++i)
      if (apow[i] != 0) acc[i] += c[k] * apow[i];
    if (k < J) apow = mul(apow, a2);
  }
  std::vector<Rat> t(J + 1, Rat(0));
  for (int j = 0; j <= J; ++j) t[j] = acc[2 * j + 1];
  return t;
}

// Sign of M(u) as u -> +inf (first nonzero asymptotic coefficient).
int tail_sign(const PiPoly& prs, const PiPoly& pf, int m) {
  const int top = std::max(prs.degree(), pf.degree() - (m - 1));
  for (int depth = 8; depth <= 256; depth *= 2) {
    auto t = arc_tail_series(depth);
    std::map<int, PiRat, std::greater<int>> coeff;
    for (int k = 0; k <= prs.degree(); ++k)
      if (!prs.a[k].is_zero()) coeff[k] += prs.a[k];
    for (int k = 0; k <= pf.degree(); ++k) {
      if (pf.a[k].is_zero()) continue;
      for (int j = 0; j < static_cast<int>(t.size()); ++j) {
        const int e = k - (m - 1) * (2 * j + 1);
        if (e < top - depth * (m - 1)) break;
        if (t[j] != 0) coeff[e] += pf.a[k] * PiRat(t[j]);
      }
    }
    const int floor_exp = top - (depth / 2) * (m - 1);  // fully summed range
    for (const auto& [e, c] : coeff) {
      if (e < floor_exp) break;
      if (!c.is_zero()) return c.sign();
    }
  }
  throw std::logic_error("tail_sign: asymptotic comparison exhausted");
}

}  // namespace

ZeroReport count_zeros(const MelnikovExpansion& e) {
  if (e.is_zero())
    throw std::domain_error("count_zeros: expansion is identically zero");
  ZeroReport rep;
  PiPoly prs = poly_part(e);
  PiPoly ftilde = arc_series_poly(e);

  if (ftilde.is_zero()) {
    // Pure polynomial in u over Q[pi] (all odd m; even m with F_l = 0).
    if (!e.arc.empty()) rep.notes.push_back("arc coefficients all zero; polynomial fallback");
    append_exact_roots(rep, prs);
    return rep;
  }
  const int m = e.m.m;
  PiPoly pf = ftilde * h_poly(m);
  if (prs.is_zero()) {
    // M = M0 * T with T > 0 on (0, inf): zeros are exactly those of M0.
    rep.notes.push_back("polynomial part zero; zeros are those of the arc factor");
    append_exact_roots(rep, pf);
    return rep;
  }

  // Rolle reduction: M1 = M / M0, M2 = M1' M0^2 is polynomial because
  // T' = -(m-1) u^{3m} / h^2.
  PiPoly u3m;
  u3m.a.assign(3 * m + 1, PiRat());
  u3m.a[3 * m] = PiRat(Rat(-(m - 1)));
  PiPoly m2 = prs.derivative() * pf - prs * pf.derivative() + u3m * ftilde * ftilde;

  auto m0_roots = isolate_positive_roots(pf);
  std::vector<RootInterval> m2_roots;
  if (!m2.is_zero()) m2_roots = isolate_positive_roots(m2);
  const int z0 = static_cast<int>(m0_roots.size());
  const int z2 = static_cast<int>(m2_roots.size());
  rep.upper_bound = z2 + 2 * z0 + 1;

  // Scan anchors: M0/M2 root-interval endpoints bracket every monotonicity
  // cell of M1, so sign changes of M between consecutive anchors are
  // exhaustive once refinement stalls.
  Rat tail = root_upper_bound(pf);
  if (!m2.is_zero()) tail = std::max(tail, root_upper_bound(m2));
  std::vector<Rat> anchors{Rat(1, 1000), tail};
  for (const auto& r : m0_roots) {
    anchors.push_back(r.lo);
    anchors.push_back(r.hi);
  }
  for (const auto& r : m2_roots) {
    anchors.push_back(r.lo);
    anchors.push_back(r.hi);
  }
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());

  bool undecided = false;
  auto collect_changes = [&](const std::vector<Rat>& pts) {
    std::vector<std::pair<Rat, int>> signs;
    for (const auto& x : pts) {
      if (!(x > 0)) continue;
      int s = expansion_sign_at(e, x);
      if (s == 0) {
        undecided = true;
        continue;
      }
      signs.emplace_back(x, s);
    }
    std::vector<RootInterval> found;
    for (size_t k = 1; k < signs.size(); ++k)
      if (signs[k - 1].second != signs[k].second) {
        RootInterval ri;
        ri.lo = signs[k - 1].first;
        ri.hi = signs[k].first;
        ri.mult = RootInterval::Mult::Odd;
        found.push_back(ri);
      }
    return found;
  };

  std::vector<Rat> pts = anchors;
  std::vector<RootInterval> found = collect_changes(pts);
  for (int rounds = 0; rounds < 3 && static_cast<int>(found.size()) < rep.upper_bound;
       ++rounds) {
    std::vector<Rat> finer;
    for (size_t k = 1; k < pts.size(); ++k) {
      finer.push_back(pts[k - 1]);
      const int parts = 4;
      for (int t = 1; t < parts; ++t)
        finer.push_back(pts[k - 1] + (pts[k] - pts[k - 1]) * rat(t, parts));
    }
    finer.push_back(pts.back());
    pts = std::move(finer);
    found = collect_changes(pts);
  }

  // Tail: beyond `tail` both M0 and M2 are sign-definite, so M1 is strictly
  // monotone; one extra crossing exists iff the sign at `tail` differs from
  // the asymptotic sign.
  int s_tail_pt = expansion_sign_at(e, tail);
  int s_inf = tail_sign(prs, pf, m);
  if (s_tail_pt != 0 && s_inf != 0 && s_tail_pt != s_inf) {
    Rat big = tail * 2;
    for (int it = 0; it < 200; ++it) {
      int s = expansion_sign_at(e, big);
      if (s == s_inf) break;
      big *= 2;
    }
    RootInterval ri;
    ri.lo = tail;
    ri.hi = big;
    ri.mult = RootInterval::Mult::Simple;  // strictly monotone crossing
    found.push_back(ri);
    tail = big;
  } else if (s_tail_pt == 0 || s_inf == 0) {
    undecided = true;
  }

  // Tighten each sign-change bracket before attempting simple-certification.
  for (auto& ri : found) {
    int s_lo = expansion_sign_at(e, ri.lo);
    if (s_lo == 0) continue;
    for (int it = 0; it < 60; ++it) {
      if (ri.hi - ri.lo < Rat(1, 1 << 24) * (1 + ri.hi)) break;
      Rat mid = (ri.lo + ri.hi) / 2;
      int sm = expansion_sign_at(e, mid);
      if (sm == 0) break;  // mid indistinguishable from a zero; stop here
      if (sm == s_lo)
        ri.lo = mid;
      else
        ri.hi = mid;
    }
  }

  // Simple-certification: sign-definite derivative over the bracket.
  ArcFunction arct(e.m);
  PiPoly prs_d = prs.derivative();
  PiPoly pf_d = pf.derivative();
  for (auto& ri : found) {
    if (ri.mult == RootInterval::Mult::Simple) continue;
    const mpfr_prec_t prec = 256;
    Interval u = Interval::hull(ri.lo, ri.hi, prec);
    // T is decreasing, so over [lo,hi] it lies in the hull of the endpoint
    // enclosures.
    Interval tlo = arct.enclose(ri.hi, prec);
    Interval thi = arct.enclose(ri.lo, prec);
    Interval T = tlo + (thi - tlo) * Interval::hull(Rat(0), Rat(1), prec);
    // T' = -(m-1) u^{3m} / h^2 with h = u^2 + u^{2m}.
    Interval upow = Interval::from_int(1, prec);
    for (int t = 0; t < 3 * m; ++t) upow = upow * u;
    Interval u2 = u * u;
    Interval u2m = Interval::from_int(1, prec);
    for (int t = 0; t < 2 * m; ++t) u2m = u2m * u;
    Interval h = u2 + u2m;
    Interval tprime = -(Interval::from_int(m - 1, prec) * upow * h.recip() * h.recip());
    Interval deriv = prs_d.eval_interval(u, prec) + pf_d.eval_interval(u, prec) * T +
                     pf.eval_interval(u, prec) * tprime;
    if (deriv.sign() != 0) ri.mult = RootInterval::Mult::Simple;
  }

  std::sort(found.begin(), found.end(),
            [](const RootInterval& a, const RootInterval& b) { return a.lo < b.lo; });
  rep.intervals = std::move(found);
  rep.certified_lower = static_cast<int>(rep.intervals.size());
  rep.search_bound = to_double(tail);
  rep.rigor = undecided ? ZeroReport::Rigor::Heuristic
                        : ZeroReport::Rigor::IntervalCertified;
  if (rep.certified_lower > rep.upper_bound)
    throw std::logic_error("count_zeros: certified lower exceeds Rolle upper bound");
  return rep;
}

std::string ZeroReport::to_json() const {
  ordered_json j;
  ordered_json arr = ordered_json::array();
  for (const auto& ri : intervals) {
    ordered_json e;
    e["lo"] = to_string(ri.lo);
    e["hi"] = to_string(ri.hi);
    e["lo_d"] = to_double(ri.lo);
    e["hi_d"] = to_double(ri.hi);
    e["mult"] = ri.mult == RootInterval::Mult::Simple ? "simple-certified"
                : ri.mult == RootInterval::Mult::Odd  ? "odd"
                                                      : "even";
    arr.push_back(e);
  }
  j["intervals"] = arr;
  j["rigor"] = rigor == Rigor::Exact             ? "exact"
               : rigor == Rigor::IntervalCertified ? "interval-certified"
                                                    : "heuristic";
  j["certified_lower"] = certified_lower;
  j["upper_bound"] = upper_bound;
  j["search_bound"] = search_bound;
  j["notes"] = notes;
  return j.dump();
}

// ---------------------------------------------------------------------------
// Wronskians / ECT
// ---------------------------------------------------------------------------

double wronskian_monomials(const std::vector<int>& exponents, double u) {
  const int k = static_cast<int>(exponents.size());
  if (k == 0) throw std::domain_error("wronskian_monomials: empty exponent list");
  Eigen::MatrixXd W(k, k);
  for (int c = 0; c < k; ++c) {
    const int n = exponents[c];
    double ff = 1;
    for (int r = 0; r < k; ++r) {
      W(r, c) = (r > n) ? 0.0 : ff * std::pow(u, n - r);
      ff *= (n - r);
    }
  }
  return W.determinant();
}

bool ect_certify(const std::vector<int>& exponents) {
  for (size_t k = 0; k < exponents.size(); ++k) {
    if (exponents[k] < 0)
      throw std::domain_error("ect_certify: exponents must be non-negative");
    if (k > 0 && exponents[k] == exponents[k - 1])
      throw std::domain_error("ect_certify: repeated exponents are degenerate");
    if (k > 0 && exponents[k] < exponents[k - 1])
      throw std::domain_error("ect_certify: exponents must be strictly increasing");
  }
  // Every leading principal Wronskian of (u^{n_1},...,u^{n_r}) equals
  // prod_{i<j} (n_j - n_i) * u^{sum n_i - r(r-1)/2}, nonzero on (0, inf)
  // exactly when the product is nonzero.
  for (size_t r = 1; r <= exponents.size(); ++r) {
    mpz_class prod(1);
    for (size_t i = 0; i < r; ++i)
      for (size_t j = i + 1; j < r; ++j) prod *= (exponents[j] - exponents[i]);
    if (prod == 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Z(m,n) bounds
// ---------------------------------------------------------------------------

namespace {
long fl(long a, long b) { return floor_div(a, b); }

long rat_to_long_exact(const Rat& q, BoundPair& bp, const char* what) {
  if (q.get_den() != 1) {
    bp.finding = true;
    bp.finding_note += std::string(what) + " not an integer; ";
    return static_cast<long>(std::floor(q.get_d()));
  }
  return static_cast<long>(q.get_num().get_si());
}
}  // namespace

BoundPair bound_Z(CurvePower m, int n) {
  if (n < 0) throw std::domain_error("bound_Z: n must be >= 0");
  BoundPair bp;
  bp.region = melnikov::classify_region(m, n);
  const long dn = (n % 2 == 0) ? -1 : 0;  // delta_n
  const long n2 = fl(n, 2), n12 = fl(n - 1, 2);

  if (m.odd()) {
    const long k = m.k();
    if (bp.region == Region::D1) {
      Rat up = Rat(1, 2) * Rat(fl(n + 3, 2)) * Rat(fl(n + 5, 2)) +
               Rat(fl(n + 2, 2)) * Rat(fl(n + 4, 2)) - 2;
      bp.upper = rat_to_long_exact(up, bp, "D1 upper");
      bp.lower = n2 * fl(n + 6, 2) + n12 + 2;
    } else {
      if (bp.region == Region::D2) {
        Rat up = Rat(1, 2) * Rat(fl(n + 3, 2)) * Rat(fl(n + 5, 2)) +
                 Rat((2 * k + 1) * n2) - Rat((k - 1) * (k - 1));
        bp.upper = rat_to_long_exact(up, bp, "D2 upper");
      } else {
        bp.upper = (2 * k + 1) * (2 * n2 + dn) + k * (5 - 3 * k) + 1;
      }
      bp.lower = 2 * (k + 1) * n2 + dn - (k - 1) * (k - 1) + 2;
    }
  } else {
    const long k = m.k();
    if (bp.region == Region::D4) {
      bp.upper = 4 * n2 * n2 + (6 * dn + 11) * n2 + (dn * (5 * dn + 17)) / 2 + 4;
      Rat low = Rat(1, 2) * Rat(n2) * Rat(n2 + 3) + Rat(1, 2) * Rat(n12) * Rat(n12 + 7) + 3;
      bp.lower = rat_to_long_exact(low, bp, "D4 lower");
    } else {
      bp.upper = (3 * k + 1) * n12 + k * n2 - k * (k - 5) - 1;
      if (bp.region == Region::D5) {
        bp.lower = (k + 2) * n12 + k * n2 - k * (k - 3) + 1;
      } else if (n == 2 * m.m - 2) {
        bp.lower = 3 * k * k + 4 * k - 3;
      } else if (n == 2 * m.m - 1) {
        bp.lower = 3 * k * k + 5 * k - 2;
      } else {
        // Stated for n = 2m; degree-n families contain the degree-2m family,
        // so the value remains a valid lower bound for n > 2m.
        bp.lower = 3 * k * k + 6 * k - 2;
      }
    }
  }

  // Corollary refinements.
  if (m.m == 1 && n >= 1) {
    bp.lower = n;
    bp.upper = n;
  } else if (m.m == 2) {
    if (n == 1) {
      bp.lower = 3;
      bp.upper = 3;  // proof trichotomy sharpens the D4 statement value 4
    } else if (n >= 2) {
      bp.lower = std::max(bp.lower, 3 * (n2 + 1) + 2 * dn);
      bp.upper = std::min(bp.upper, 5 * n2 + 4 * dn + 3);
    }
  } else if (m.m == 3 && n >= 1) {
    bp.lower = std::max(bp.lower, 4 * n2 + 2 + dn);
    bp.upper = std::min(bp.upper, 6 * n2 + 3 * (1 + dn));
  }
  if (m.m >= 3 && n == 1) bp.lower = std::max(bp.lower, 2L);
  if (m.m >= 5 && n == 2) bp.lower = std::max(bp.lower, 6L);

  if (bp.lower > bp.upper) {
    bp.finding = true;
    bp.finding_note += "lower > upper; ";
  }
  return bp;
}

// ---------------------------------------------------------------------------
// construct_max_zeros
// ---------------------------------------------------------------------------

std::vector<double> default_targets(int count) {
  if (count < 1) throw std::domain_error("default_targets: count must be >= 1");
  std::vector<double> t(count);
  for (int i = 0; i < count; ++i)
    t[i] = 0.3 * std::pow(10.0, (i + 1.0) / (count + 1.0));
  return t;
}

namespace {

double basis_value(const melnikov::BasisElem& b, double u, CurvePower m) {
  const double h = u * u + std::pow(u, 2.0 * m.m);
  switch (b.kind) {
    case melnikov::BasisElem::Kind::Mono: return std::pow(u, b.index);
    case melnikov::BasisElem::Kind::Ring: return std::pow(h, b.index + 1);
    case melnikov::BasisElem::Kind::Arc:
      return std::pow(h, b.index + 1) * ArcFunction(m)(u);
  }
  return 0;
}

Rat rationalize_dyadic(double x, long bits) {
  const double scale = std::ldexp(1.0, static_cast<int>(bits));
  const double r = std::nearbyint(x * scale);
  Rat q(static_cast<long>(r), 1);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, bits);
  Rat out = q / Rat(den);
  out.canonicalize();
  return out;
}

}  // namespace

ConstructResult construct_max_zeros(CurvePower m, int n,
                                    const std::vector<double>& targets) {
  if (targets.empty()) throw std::domain_error("construct_max_zeros: no targets");
  for (size_t k = 1; k < targets.size(); ++k)
    if (!(targets[k] > targets[k - 1]))
      throw std::domain_error("construct_max_zeros: targets must be strictly increasing");
  if (targets.front() <= 0)
    throw std::domain_error("construct_max_zeros: targets must be positive");

  auto jac = melnikov::independence_jacobian(m, n);
  if (jac.singular)
    throw std::runtime_error("construct_max_zeros: independence Jacobian singular (FINDING)");
  const auto& basis = jac.basis;
  const int N = basis.dimension();
  const int p = static_cast<int>(targets.size());
  if (p > N - 1)
    throw std::domain_error("construct_max_zeros: more targets than basis dimension - 1 (" +
                            std::to_string(N - 1) + " available)");

  // Interpolation in the first p+1 basis elements: the vanishing combination
  // at the p targets spans the kernel of a p x (p+1) generalized Vandermonde.
  const int cols = p + 1;
  Eigen::MatrixXd A(p, cols);
  for (int r = 0; r < p; ++r)
    for (int c = 0; c < cols; ++c)
      A(r, c) = basis_value(basis.elems[c], targets[r], m);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  {
    const auto& sv = svd.singularValues();
    if (p > 0 && sv(0) > 0 && sv(p - 1) / sv(0) < 1e-13) {
      std::ostringstream os;
      os << "construct_max_zeros: interpolation system rank-deficient at targets; "
            "deficient basis subset:";
      for (int c = 0; c < cols; ++c) {
        const auto& b = basis.elems[c];
        os << ' '
           << (b.kind == melnikov::BasisElem::Kind::Mono   ? "u^"
               : b.kind == melnikov::BasisElem::Kind::Ring ? "ring"
                                                           : "arc")
           << b.index;
      }
      throw std::runtime_error(os.str());
    }
  }
  Eigen::VectorXd c = svd.matrixV().col(cols - 1);
  // Deterministic normalization: largest magnitude 1, first nonzero positive.
  double peak = 0;
  for (int k = 0; k < cols; ++k) peak = std::max(peak, std::abs(c(k)));
  c /= peak;
  for (int k = 0; k < cols; ++k)
    if (std::abs(c(k)) > 1e-14) {
      if (c(k) < 0) c = -c;
      break;
    }

  const double pi_d = 3.14159265358979323846264338327950288;
  for (long bits : {24L, 36L, 48L}) {
    // Desired basis coefficients, rationalized.  Ring coefficients live in
    // pi*Q, so the rational content is c/pi.
    std::vector<PiRat> want(N);
    std::vector<Rat> rhs(N, Rat(0));
    for (int k = 0; k < N; ++k) {
      const double ck = (k < cols) ? c(k) : 0.0;
      if (basis.elems[k].kind == melnikov::BasisElem::Kind::Ring) {
        Rat q = rationalize_dyadic(ck / pi_d, bits);
        rhs[k] = q;
        want[k] = PiRat::pi_times(q);
      } else {
        Rat q = rationalize_dyadic(ck, bits);
        rhs[k] = q;
        want[k] = PiRat(q);
      }
    }

    // Solve the exact (descaled) Jacobian system for the reduced coordinates.
    std::vector<std::vector<Rat>> a(N, std::vector<Rat>(N, Rat(0)));
    for (int r = 0; r < N; ++r)
      for (int cn = 0; cn < N; ++cn) {
        const PiRat& v = jac.matrix[r][cn];
        a[r][cn] = v.is_rational() ? v.coeff(0) : v.coeff(1);
      }
    std::vector<Rat> x = rhs;
    // Gaussian elimination with partial (first nonzero) pivoting, exact.
    std::vector<int> perm(N);
    for (int i = 0; i < N; ++i) perm[i] = i;
    for (int col = 0; col < N; ++col) {
      int pr = -1;
      for (int r = col; r < N; ++r)
        if (a[r][col] != 0) {
          pr = r;
          break;
        }
      if (pr < 0) throw std::logic_error("construct: jacobian unexpectedly singular");
      std::swap(a[pr], a[col]);
      std::swap(x[pr], x[col]);
      for (int r = col + 1; r < N; ++r) {
        if (a[r][col] == 0) continue;
        Rat f = a[r][col] / a[col][col];
        for (int k = col; k < N; ++k) a[r][k] -= f * a[col][k];
        x[r] -= f * x[col];
      }
    }
    std::vector<Rat> sol(N, Rat(0));
    for (int r = N - 1; r >= 0; --r) {
      Rat s = x[r];
      for (int k = r + 1; k < N; ++k) s -= a[r][k] * sol[k];
      sol[r] = s / a[r][r];
    }

    melnikov::ReducedCoefficients rc{m, n};
    for (int k = 0; k < N; ++k) {
      if (sol[k] == 0) continue;
      const auto& coord = jac.selected[k];
      (coord.which == 'r'   ? rc.rho
       : coord.which == 'g' ? rc.gamma
                            : rc.zeta)[{coord.i, coord.j}] = sol[k];
    }
    PerturbationSpec spec = spec_from_reduced(rc);

    // Round trip must reproduce the rationalized coefficients exactly.
    MelnikovExpansion got = melnikov::assemble(spec);
    bool roundtrip = true;
    auto check = [&](const std::map<int, PiRat>& mp, melnikov::BasisElem::Kind kind) {
      for (int k = 0; k < N; ++k) {
        if (basis.elems[k].kind != kind) continue;
        auto it = mp.find(basis.elems[k].index);
        const PiRat have = (it == mp.end()) ? PiRat() : it->second;
        if (!(have == want[k])) roundtrip = false;
      }
    };
    check(got.mono, melnikov::BasisElem::Kind::Mono);
    check(got.ring, melnikov::BasisElem::Kind::Ring);
    check(got.arc, melnikov::BasisElem::Kind::Arc);
    if (!roundtrip)
      throw std::logic_error("construct: unimodular round trip failed");

    if (got.is_zero()) continue;
    ZeroReport report = count_zeros(got);
    int usable = 0;
    for (const auto& ri : report.intervals)
      if (ri.mult != RootInterval::Mult::Even) ++usable;
    if (usable >= p) {
      ConstructResult res;
      res.spec = std::move(spec);
      res.report = std::move(report);
      res.solved_coefficients.resize(N);
      for (int k = 0; k < N; ++k)
        res.solved_coefficients[k] = (k < cols) ? c(k) : 0.0;
      return res;
    }
  }
  throw std::runtime_error(
      "construct_max_zeros: certification failed after rationalization refinement");
}

}  // namespace mlk::roots
