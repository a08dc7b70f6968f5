// SPDX-License-Identifier: Apache-2.0
#include "melnikov/melnikov.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

namespace mlk::melnikov {

using abelian::Gen;
using abelian::IntegralExpr;
using nlohmann::ordered_json;

namespace {

Rat binom(int a, int b) {
  if (b < 0 || b > a) return Rat(0);
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), a, b);
  return Rat(r);
}

}  // namespace

Rat ReducedCoefficients::get(char which, int i, int j) const {
  const model::CoeffMap* src = which == 'r' ? &rho : which == 'g' ? &gamma : &zeta;
  auto it = src->find({i, j});
  return it == src->end() ? Rat(0) : it->second;
}

ReducedCoefficients reduce_coefficients(const PerturbationSpec& spec) {
  spec.validate();
  ReducedCoefficients rc{spec.m, spec.n};
  auto rho_side = [&](int side, int i, int j) -> Rat {
    Rat v = spec.b(side, i, j);
    if (j >= 1) v += rat(i + 1, j) * spec.a(side, i + 1, j - 1);
    return v;
  };
  for (int i = 0; i + 0 <= spec.n; ++i)
    for (int j = 0; i + j <= spec.n; ++j) {
      const Rat rp = rho_side(+1, i, j);
      const Rat rm = rho_side(-1, i, j);
      const Rat g = spec.a(+1, i, j) - spec.a(-1, i, j);
      const Rat z = spec.m.odd() ? rp + rm : rm;
      if (rp != rm) rc.rho[{i, j}] = rp - rm;
      if (g != 0) rc.gamma[{i, j}] = g;
      if (z != 0) rc.zeta[{i, j}] = z;
    }
  return rc;
}

PerturbationSpec spec_from_reduced(const ReducedCoefficients& rc) {
  PerturbationSpec s{rc.m, rc.n};
  // Minus-side a-coefficients pinned to zero, so gamma maps straight to a^+.
  for (int i = 0; i <= rc.n; ++i)
    for (int j = 0; i + j <= rc.n; ++j) {
      const Rat g = rc.get('g', i, j);
      if (g != 0) s.set_a(+1, i, j, g);
    }
  for (int i = 0; i <= rc.n; ++i)
    for (int j = 0; i + j <= rc.n; ++j) {
      const Rat gam_next = rc.get('g', i + 1, j - 1);  // = a^+_{i+1,j-1}
      const Rat a_term = (j >= 1) ? rat(i + 1, j) * gam_next : Rat(0);
      if (rc.m.odd()) {
        // rho^+ carries rho on even pairs and zeta on odd pairs; rho^- = 0.
        const bool even_pair = ((i + j) % 2 == 0);
        const Rat rho_plus = even_pair ? rc.get('r', i, j) : rc.get('z', i, j);
        s.set_b(+1, i, j, rho_plus - a_term);
      } else {
        const Rat z = rc.get('z', i, j);
        s.set_b(-1, i, j, z);
        s.set_b(+1, i, j, rc.get('r', i, j) + z - a_term);
      }
    }
  return s;
}

ArcFunction::ArcFunction(CurvePower m_) : m(m_) {
  if (!m.even()) throw std::domain_error("ArcFunction: m must be even");
}

double ArcFunction::operator()(double u) const {
  const double w = std::pow(u, 2.0 * m.m - 2.0);
  const double a = 1.0 / std::sqrt(1.0 + w);
  const double s = std::sqrt(std::max(0.0, 1.0 - a * a));
  return 0.5 * (a * s + std::asin(std::min(1.0, a)));
}

double ArcFunction::derivative(double u) const {
  const double h = u * u + std::pow(u, 2.0 * m.m);
  return -(m.m - 1) * std::pow(u, 3.0 * m.m) / (h * h);
}

Rat ArcFunction::series_coeff(int k) {
  if (k < 1) throw std::domain_error("ArcFunction::series_coeff: k >= 1");
  Rat c(k, 2 * k + 1);
  return (k % 2 == 0) ? c : -c;
}

Interval ArcFunction::enclose(const Rat& u, mpfr_prec_t prec) const {
  Rat w(1);
  for (int t = 0; t < 2 * m.m - 2; ++t) w *= u;
  const Rat a2 = Rat(1) / (1 + w);        // a^2 exactly
  const Rat s2 = w / (1 + w);             // 1 - a^2 exactly
  Interval a = Interval::from_rat(a2, prec).sqrt();
  Interval s = Interval::from_rat(s2, prec).sqrt();
  Interval half = Interval::from_rat(Rat(1, 2), prec);
  return (a * s + a.asin()) * half;
}

namespace {

// Expands coeff * h^{hp} * u^{up} * gen into the mono/ring/arc ledger,
// substituting h = u^2 + u^{2m}.
void add_term(MelnikovExpansion& out, const Rat& coeff, int hp, int up, Gen g,
              CurvePower m) {
  if (coeff == 0) return;
  auto add_mono_pows = [&](const Rat& c, int extra_u) {
    // c * h^{hp} * u^{up+extra_u} as monomials.
    for (int t = 0; t <= hp; ++t) {
      const int e = up + extra_u + 2 * (hp - t) + 2 * m.m * t;
      out.mono[e] += PiRat(c * binom(hp, t));
    }
  };
  switch (g) {
    case Gen::Unit:
      add_mono_pows(coeff, 0);
      return;
    case Gen::J00:
      add_mono_pows(2 * coeff, 1);
      return;
    case Gen::J11:
      if (m.odd()) add_mono_pows(Rat(-2, 3) * coeff, 3 * m.m);
      return;
    case Gen::J01:
      if (up != 0) throw std::logic_error("assemble: generator term with u-power");
      if (m.odd())
        out.ring[hp] += PiRat::pi_times(coeff / 2);
      else
        out.arc[hp] += PiRat(2 * coeff);
      return;
    case Gen::I01:
      if (up != 0) throw std::logic_error("assemble: generator term with u-power");
      out.ring[hp] += PiRat::pi_times(coeff);
      out.arc[hp] += PiRat(-2 * coeff);
      return;
  }
}

void add_expr(MelnikovExpansion& out, const IntegralExpr& ex, const Rat& scale,
              CurvePower m) {
  if (scale == 0) return;
  for (const auto& t : ex.terms) add_term(out, t.coeff * scale, t.h_pow, t.u_pow, t.gen, m);
}

// m = 1 degenerates: h = 2u^2, so ring elements are plain even monomials.
void fold_rings_for_m1(MelnikovExpansion& e) {
  if (e.m.m != 1) return;
  for (const auto& [l, c] : e.ring) {
    Rat pow2;
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, l + 1);
    e.mono[2 * (l + 1)] += c * PiRat(Rat(p));
  }
  e.ring.clear();
}

}  // namespace

void MelnikovExpansion::prune() {
  for (auto* m_ : {&mono, &ring, &arc})
    for (auto it = m_->begin(); it != m_->end();)
      it = it->second.is_zero() ? m_->erase(it) : std::next(it);
}

MelnikovExpansion assemble_reduced(const ReducedCoefficients& rc) {
  MelnikovExpansion out;
  out.m = rc.m;
  out.n = rc.n;
  const CurvePower m = rc.m;
  for (int i = 0; i <= rc.n; ++i)
    for (int j = 0; i + j <= rc.n; ++j) {
      const Rat rho = rc.get('r', i, j);
      const Rat gam = rc.get('g', i, j);
      const Rat zet = rc.get('z', i, j);
      if (m.odd()) {
        const bool even_pair = ((i + j) % 2 == 0);
        if (even_pair && rho != 0) add_expr(out, abelian::reduce_J(i, j, m), rho, m);
        if (!even_pair && zet != 0) add_expr(out, abelian::reduce_J(i, j, m), zet, m);
      } else {
        if (rho != 0) add_expr(out, abelian::reduce_J(i, j, m), rho, m);
        if (zet != 0) {
          add_expr(out, abelian::reduce_J(i, j, m), zet, m);
          add_expr(out, abelian::reduce_I(i, j, m), zet, m);
        }
      }
      // Boundary polynomial Phi: gamma * ((-1)^{i+mj+m} - 1)/(j+1) * u^{i+mj+m}.
      if (gam != 0 && (i + m.m * j + m.m) % 2 == 1)
        out.mono[i + m.m * j + m.m] += PiRat(gam * rat(-2, j + 1));
    }
  fold_rings_for_m1(out);
  out.prune();
  return out;
}

MelnikovExpansion assemble(const PerturbationSpec& spec) {
  return assemble_reduced(reduce_coefficients(spec));
}

double MelnikovExpansion::eval(double u) const {
  const double h = u * u + std::pow(u, 2.0 * m.m);
  double acc = 0;
  for (const auto& [e, c] : mono) acc += c.to_double() * std::pow(u, e);
  for (const auto& [l, c] : ring) acc += c.to_double() * std::pow(h, l + 1);
  if (!arc.empty()) {
    const double T = ArcFunction(m)(u);
    for (const auto& [l, c] : arc) acc += c.to_double() * std::pow(h, l + 1) * T;
  }
  return acc;
}

Interval MelnikovExpansion::enclose(const Rat& u, mpfr_prec_t prec) const {
  Rat upow(1);
  Rat h = u * u;
  {
    Rat u2m(1);
    for (int t = 0; t < 2 * m.m; ++t) u2m *= u;
    h += u2m;
  }
  Interval acc(prec);
  for (const auto& [e, c] : mono) {
    Rat p(1);
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), u.get_num().get_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), u.get_den().get_mpz_t(), e);
    p = Rat(num, den);
    acc = acc + c.to_interval(prec) * Interval::from_rat(p, prec);
  }
  auto h_pow = [&](int l) {
    Rat p(1);
    for (int t = 0; t < l + 1; ++t) p *= h;
    return p;
  };
  for (const auto& [l, c] : ring)
    acc = acc + c.to_interval(prec) * Interval::from_rat(h_pow(l), prec);
  if (!arc.empty()) {
    Interval T = ArcFunction(m).enclose(u, prec);
    for (const auto& [l, c] : arc)
      acc = acc + c.to_interval(prec) * Interval::from_rat(h_pow(l), prec) * T;
  }
  return acc;
}

namespace {

ordered_json pirat_json(const PiRat& c) {
  if (c.is_rational()) return to_string(c.coeff(0));
  if (c.pi_degree() == 1 && c.coeff(0) == 0) {
    ordered_json j;
    j["pi"] = to_string(c.coeff(1));
    return j;
  }
  if (c.pi_degree() == 1) {
    ordered_json j;
    j["rat"] = to_string(c.coeff(0));
    j["pi"] = to_string(c.coeff(1));
    return j;
  }
  ordered_json arr = ordered_json::array();
  for (int k = 0; k <= c.pi_degree(); ++k) arr.push_back(to_string(c.coeff(k)));
  ordered_json j;
  j["pi_poly"] = arr;
  return j;
}

ordered_json coeff_map_json(const std::map<int, PiRat>& m) {
  ordered_json arr = ordered_json::array();
  for (const auto& [k, c] : m) arr.push_back({k, pirat_json(c)});
  return arr;
}

}  // namespace

std::string MelnikovExpansion::to_json() const {
  ordered_json j;
  j["m"] = m.m;
  j["n"] = n;
  j["mono"] = coeff_map_json(mono);
  j["ring"] = coeff_map_json(ring);
  j["arc"] = coeff_map_json(arc);
  return j.dump();
}

Region classify_region(CurvePower m, int n) {
  if (m.odd()) {
    if (n < m.m - 1) return Region::D1;
    if (n < 2 * m.m - 1) return Region::D2;
    return Region::D3;
  }
  if (n < m.m) return Region::D4;
  if (n < 2 * m.m - 2) return Region::D5;
  return Region::D6;
}

const char* region_name(Region r) {
  switch (r) {
    case Region::D1: return "D1";
    case Region::D2: return "D2";
    case Region::D3: return "D3";
    case Region::D4: return "D4";
    case Region::D5: return "D5";
    case Region::D6: return "D6";
  }
  return "?";
}

const char* region_label(Region r) {
  switch (r) {
    case Region::D1: return "D1";
    case Region::D2:
    case Region::D3: return "D2uD3";
    case Region::D4: return "D4";
    case Region::D5:
    case Region::D6: return "D5uD6";
  }
  return "?";
}

namespace {

std::vector<ReducedCoord> participating_coords(CurvePower m, int n) {
  std::vector<ReducedCoord> out;
  auto pairs_with = [&](auto pred, char which) {
    for (int s = 0; s <= n; ++s)
      for (int i = s; i >= 0; --i) {  // paper order within a degree: i descending
        int j = s - i;
        if (pred(i, j)) out.push_back({which, i, j});
      }
  };
  if (m.odd()) {
    pairs_with([](int i, int j) { return (i + j) % 2 == 0; }, 'r');
    pairs_with([](int i, int j) { return (i + j) % 2 == 0; }, 'g');
    pairs_with([](int i, int j) { return (i + j) % 2 == 1 && i % 2 == 0; }, 'z');
  } else {
    pairs_with([](int i, int) { return i % 2 == 0; }, 'r');
    pairs_with([](int i, int) { return i % 2 == 1; }, 'g');
    pairs_with([](int i, int j) { return i % 2 == 0 && j % 2 == 1; }, 'z');
  }
  return out;
}

MelnikovExpansion unit_expansion(CurvePower m, int n, const ReducedCoord& c) {
  ReducedCoefficients rc{m, n};
  (c.which == 'r' ? rc.rho : c.which == 'g' ? rc.gamma : rc.zeta)[{c.i, c.j}] = Rat(1);
  return assemble_reduced(rc);
}

}  // namespace

GeneratingBasis generating_basis(CurvePower m, int n) {
  GeneratingBasis gb;
  gb.m = m;
  gb.n = n;
  gb.region = classify_region(m, n);
  gb.coords = participating_coords(m, n);
  std::set<int> monos, rings, arcs;
  for (const auto& c : gb.coords) {
    MelnikovExpansion e = unit_expansion(m, n, c);
    for (const auto& [k, v] : e.mono) monos.insert(k);
    for (const auto& [k, v] : e.ring) rings.insert(k);
    for (const auto& [k, v] : e.arc) arcs.insert(k);
  }
  for (int e : monos) gb.elems.push_back({BasisElem::Kind::Mono, e});
  for (int l : rings) gb.elems.push_back({BasisElem::Kind::Ring, l});
  for (int l : arcs) gb.elems.push_back({BasisElem::Kind::Arc, l});
  return gb;
}

namespace {

// Column-selection priority; chosen so the D1 Jacobian comes out diagonal in
// the paper's arrangement (single-power rho columns, then gamma columns by
// boundary exponent, then the j=1 zeta columns, then j=1 rho columns).
std::vector<ReducedCoord> priority_coords(CurvePower m, int /*n*/,
                                          const std::vector<ReducedCoord>& all) {
  std::vector<ReducedCoord> pri;
  auto push_if = [&](auto pred) {
    for (const auto& c : all)
      if (pred(c)) pri.push_back(c);
  };
  push_if([](const ReducedCoord& c) { return c.which == 'r' && c.j == 0; });
  {
    std::vector<ReducedCoord> gammas;
    for (const auto& c : all)
      if (c.which == 'g') gammas.push_back(c);
    std::stable_sort(gammas.begin(), gammas.end(),
                     [&](const ReducedCoord& a, const ReducedCoord& b) {
                       return a.i + m.m * a.j < b.i + m.m * b.j;
                     });
    pri.insert(pri.end(), gammas.begin(), gammas.end());
  }
  push_if([](const ReducedCoord& c) { return c.which == 'z' && c.j == 1; });
  push_if([](const ReducedCoord& c) { return c.which == 'r' && c.j == 1; });
  auto seen = [&](const ReducedCoord& c) {
    return std::any_of(pri.begin(), pri.end(), [&](const ReducedCoord& p) {
      return p.which == c.which && p.i == c.i && p.j == c.j;
    });
  };
  for (const auto& c : all)
    if (!seen(c)) pri.push_back(c);
  return pri;
}

int elem_coeff_index(const GeneratingBasis& gb, BasisElem::Kind kind, int index) {
  for (size_t r = 0; r < gb.elems.size(); ++r)
    if (gb.elems[r].kind == kind && gb.elems[r].index == index)
      return static_cast<int>(r);
  throw std::logic_error("basis containment violated: stray expansion element");
}

}  // namespace

IndependenceJacobian independence_jacobian(CurvePower m, int n) {
  IndependenceJacobian out;
  out.basis = generating_basis(m, n);
  const int N = out.basis.dimension();
  auto coords = priority_coords(m, n, out.basis.coords);

  // Columns as exact vectors over the basis; zeta columns are pure
  // pi-multiples, so the elimination runs over rationals after descaling.
  std::vector<std::vector<Rat>> cols;
  std::vector<ReducedCoord> col_coord;
  std::vector<bool> col_is_pi;
  for (const auto& c : coords) {
    MelnikovExpansion e = unit_expansion(m, n, c);
    std::vector<Rat> v(N, Rat(0));
    bool has_pi = false, has_rat = false;
    auto put = [&](BasisElem::Kind k, int idx, const PiRat& val) {
      if (val.is_zero()) return;
      const int r = elem_coeff_index(out.basis, k, idx);
      if (val.is_rational()) {
        v[r] = val.coeff(0);
        has_rat = true;
      } else if (val.coeff(0) == 0 && val.pi_degree() == 1) {
        v[r] = val.coeff(1);
        has_pi = true;
      } else {
        throw std::logic_error("jacobian: unexpected mixed pi coefficient");
      }
    };
    for (const auto& [k, val] : e.mono) put(BasisElem::Kind::Mono, k, val);
    for (const auto& [k, val] : e.ring) put(BasisElem::Kind::Ring, k, val);
    for (const auto& [k, val] : e.arc) put(BasisElem::Kind::Arc, k, val);
    if (has_pi && has_rat)
      throw std::logic_error("jacobian: column mixes pi and rational rows");
    if (!has_pi && !has_rat) continue;  // dead coordinate
    cols.push_back(std::move(v));
    col_coord.push_back(c);
    col_is_pi.push_back(has_pi);
  }

  // Greedy exact elimination: scan columns in priority order, keep those that
  // enlarge the rank, stop at N.
  std::vector<std::vector<Rat>> sel_cols;
  std::vector<int> sel_idx;
  std::vector<std::vector<Rat>> echelon;  // reduced copies of selected columns
  std::vector<int> pivot_row;
  for (size_t ci = 0; ci < cols.size() && static_cast<int>(sel_idx.size()) < N; ++ci) {
    std::vector<Rat> w = cols[ci];
    for (size_t k = 0; k < echelon.size(); ++k) {
      const Rat f = w[pivot_row[k]] / echelon[k][pivot_row[k]];
      if (f != 0)
        for (int r = 0; r < N; ++r) w[r] -= f * echelon[k][r];
    }
    int pr = -1;
    for (int r = 0; r < N; ++r)
      if (w[r] != 0) {
        pr = r;
        break;
      }
    if (pr < 0) continue;
    echelon.push_back(std::move(w));
    pivot_row.push_back(pr);
    sel_cols.push_back(cols[ci]);
    sel_idx.push_back(static_cast<int>(ci));
  }

  if (static_cast<int>(sel_idx.size()) < N) {
    out.singular = true;
    out.determinant = PiRat();
    return out;
  }

  // Exact determinant of the selected square matrix (rows = basis elems).
  int pi_power = 0;
  std::vector<std::vector<Rat>> a(N, std::vector<Rat>(N, Rat(0)));
  for (int c = 0; c < N; ++c) {
    if (col_is_pi[sel_idx[c]]) ++pi_power;
    for (int r = 0; r < N; ++r) a[r][c] = sel_cols[c][r];
    out.selected.push_back(col_coord[sel_idx[c]]);
  }
  out.matrix.assign(N, std::vector<PiRat>(N));
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c)
      out.matrix[r][c] =
          col_is_pi[sel_idx[c]] ? PiRat::pi_times(a[r][c]) : PiRat(a[r][c]);

  Rat det(1);
  int sign = 1;
  for (int c = 0; c < N; ++c) {
    int pr = -1;
    for (int r = c; r < N; ++r)
      if (a[r][c] != 0) {
        pr = r;
        break;
      }
    if (pr < 0) {
      out.singular = true;
      out.determinant = PiRat();
      return out;
    }
    if (pr != c) {
      std::swap(a[pr], a[c]);
      sign = -sign;
    }
    det *= a[c][c];
    for (int r = c + 1; r < N; ++r) {
      if (a[r][c] == 0) continue;
      const Rat f = a[r][c] / a[c][c];
      for (int k = c; k < N; ++k) a[r][k] -= f * a[c][k];
    }
  }
  det *= sign;
  PiRat d(det);
  for (int t = 0; t < pi_power; ++t) d *= PiRat::pi();
  out.determinant = d;
  out.singular = d.is_zero();
  return out;
}

std::string IndependenceJacobian::to_json() const {
  ordered_json j;
  j["m"] = basis.m.m;
  j["n"] = basis.n;
  j["region"] = region_name(basis.region);
  j["dimension"] = basis.dimension();
  ordered_json elems = ordered_json::array();
  for (const auto& e : basis.elems) {
    const char* k = e.kind == BasisElem::Kind::Mono   ? "mono"
                    : e.kind == BasisElem::Kind::Ring ? "ring"
                                                      : "arc";
    elems.push_back({k, e.index});
  }
  j["basis"] = elems;
  ordered_json sel = ordered_json::array();
  for (const auto& c : selected)
    sel.push_back({std::string(1, c.which), c.i, c.j});
  j["selected"] = sel;
  j["singular"] = singular;
  j["determinant"] = pirat_json(determinant);
  ordered_json rows = ordered_json::array();
  for (const auto& row : matrix) {
    ordered_json r = ordered_json::array();
    for (const auto& v : row) r.push_back(pirat_json(v));
    rows.push_back(r);
  }
  j["matrix"] = rows;
  return j.dump();
}

std::vector<std::pair<int, PiRat>> expand_series(const MelnikovExpansion& e,
                                                 int max_exponent) {
  if (max_exponent < 1) throw std::domain_error("expand_series: order must be >= 1");
  std::map<int, PiRat> acc;
  const int m = e.m.m;
  for (const auto& [k, c] : e.mono)
    if (k <= max_exponent) acc[k] += c;
  for (const auto& [l, c] : e.ring)
    for (int t = 0; t <= l + 1; ++t) {
      const int exp = 2 * (l + 1) + 2 * t * (m - 1);
      if (exp <= max_exponent) acc[exp] += c * PiRat(binom(l + 1, t));
    }
  if (!e.arc.empty()) {
    // T(u) = pi/4 + sum_{k>=1} (-1)^k k/(2k+1) u^{(2k+1)(m-1)}.
    for (const auto& [l, c] : e.arc)
      for (int t = 0; t <= l + 1; ++t) {
        const int base = 2 * (l + 1) + 2 * t * (m - 1);
        if (base > max_exponent) continue;
        const PiRat cb = c * PiRat(binom(l + 1, t));
        acc[base] += cb * PiRat::pi_times(Rat(1, 4));
        for (int k = 1; base + (2 * k + 1) * (m - 1) <= max_exponent; ++k)
          acc[base + (2 * k + 1) * (m - 1)] += cb * PiRat(ArcFunction::series_coeff(k));
      }
  }
  std::vector<std::pair<int, PiRat>> out;
  for (auto& [k, c] : acc)
    if (!c.is_zero()) out.emplace_back(k, std::move(c));
  return out;
}

}  // namespace mlk::melnikov
