// SPDX-License-Identifier: Apache-2.0
#include "melnikov/model.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace mlk::model {

using nlohmann::ordered_json;

double u_from_h(double h, CurvePower m) {
  if (!(h > 0)) throw std::domain_error("u_from_h: h must be positive");
  // phi(u) = u^2 + u^{2m} is strictly increasing on (0, inf).
  const double e = 2.0 * m.m;
  auto phi = [&](double u) { return u * u + std::pow(u, e); };
  double lo = 0.0;
  double hi = std::max(1.0, std::sqrt(h)) + 1.0;
  // Bracketed bisection to get a safe Newton start.
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    (phi(mid) < h ? lo : hi) = mid;
  }
  double u = 0.5 * (lo + hi);
  for (int it = 0; it < 60; ++it) {
    double f = phi(u) - h;
    double df = 2.0 * u + e * std::pow(u, e - 1.0);
    double step = f / df;
    double next = u - step;
    if (next <= lo || next >= hi) next = 0.5 * (lo + hi);
    (phi(next) < h ? lo : hi) = next;
    if (std::abs(next - u) <= 1e-16 * std::abs(next)) {
      u = next;
      break;
    }
    u = next;
  }
  return u;
}

std::pair<Point, Point> intersection_points(double u, CurvePower m) {
  if (!(u > 0)) throw std::domain_error("intersection_points: u must be positive");
  const double ym = std::pow(u, static_cast<double>(m.m));
  Point B{u, ym};
  Point A{-u, m.odd() ? -ym : ym};
  return {A, B};
}

namespace {
const CoeffMap& pick(const PerturbationSpec& s, char fam, int side) {
  if (fam == 'a') return side > 0 ? s.a_plus : s.a_minus;
  return side > 0 ? s.b_plus : s.b_minus;
}
CoeffMap& pick(PerturbationSpec& s, char fam, int side) {
  if (fam == 'a') return side > 0 ? s.a_plus : s.a_minus;
  return side > 0 ? s.b_plus : s.b_minus;
}
Rat lookup(const CoeffMap& m, int i, int j) {
  auto it = m.find({i, j});
  return it == m.end() ? Rat(0) : it->second;
}
}  // namespace

Rat PerturbationSpec::a(int side, int i, int j) const { return lookup(pick(*this, 'a', side), i, j); }
Rat PerturbationSpec::b(int side, int i, int j) const { return lookup(pick(*this, 'b', side), i, j); }

void PerturbationSpec::set_a(int side, int i, int j, const Rat& v) {
  if (v == 0) {
    pick(*this, 'a', side).erase({i, j});
  } else {
    Rat c = v;
    c.canonicalize();
    pick(*this, 'a', side)[{i, j}] = c;
  }
}

void PerturbationSpec::set_b(int side, int i, int j, const Rat& v) {
  if (v == 0) {
    pick(*this, 'b', side).erase({i, j});
  } else {
    Rat c = v;
    c.canonicalize();
    pick(*this, 'b', side)[{i, j}] = c;
  }
}

void PerturbationSpec::validate() const {
  if (n < 0) throw std::domain_error("PerturbationSpec: n must be >= 0");
  for (const auto* m : {&a_plus, &a_minus, &b_plus, &b_minus})
    for (const auto& [ij, v] : *m) {
      auto [i, j] = ij;
      if (i < 0 || j < 0 || i + j > n)
        throw std::domain_error("PerturbationSpec: index (" + std::to_string(i) + "," +
                                std::to_string(j) + ") outside 0 <= i+j <= n");
    }
}

namespace {
ordered_json coeffs_to_json(const CoeffMap& m) {
  ordered_json arr = ordered_json::array();
  for (const auto& [ij, v] : m)
    arr.push_back({ij.first, ij.second, to_string(v)});
  return arr;
}

CoeffMap coeffs_from_json(const ordered_json& arr) {
  CoeffMap m;
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 3)
      throw std::invalid_argument("coefficient entries must be [i, j, \"p/q\"]");
    int i = e[0].get<int>();
    int j = e[1].get<int>();
    Rat v = e[2].is_string() ? parse_rational(e[2].get<std::string>())
                             : parse_rational(e[2].dump());
    if (v != 0) m[{i, j}] = v;
  }
  return m;
}
}  // namespace

std::string PerturbationSpec::to_json() const {
  ordered_json j;
  j["m"] = m.m;
  j["n"] = n;
  j["a_plus"] = coeffs_to_json(a_plus);
  j["a_minus"] = coeffs_to_json(a_minus);
  j["b_plus"] = coeffs_to_json(b_plus);
  j["b_minus"] = coeffs_to_json(b_minus);
  return j.dump();
}

PerturbationSpec PerturbationSpec::from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("spec JSON parse error: ") + e.what());
  }
  PerturbationSpec s{CurvePower(j.at("m").get<int>()), j.at("n").get<int>()};
  if (j.contains("a_plus")) s.a_plus = coeffs_from_json(j["a_plus"]);
  if (j.contains("a_minus")) s.a_minus = coeffs_from_json(j["a_minus"]);
  if (j.contains("b_plus")) s.b_plus = coeffs_from_json(j["b_plus"]);
  if (j.contains("b_minus")) s.b_minus = coeffs_from_json(j["b_minus"]);
  s.validate();
  return s;
}

}  // namespace mlk::model
