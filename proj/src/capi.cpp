// SPDX-License-Identifier: Apache-2.0
#include "melnikov/melnikov.h"

#include <cstring>
#include <sstream>
#include <string>

#include <json.hpp>

#include "melnikov/abelian.hpp"
#include "melnikov/melnikov.hpp"
#include "melnikov/model.hpp"
#include "melnikov/oracle.hpp"
#include "melnikov/roots.hpp"
#include "melnikov/simulate.hpp"

using nlohmann::ordered_json;

struct mlk_spec {
  mlk::model::PerturbationSpec value;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Uniform exception -> status mapping for every entry point.
template <typename Fn>
mlk_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::domain_error& e) {
    g_last_error = e.what();
    return MLK_ERR_DOMAIN;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return MLK_ERR_PARSE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    const std::string what = e.what();
    return what.find("FINDING") != std::string::npos ? MLK_ERR_FINDING
                                                     : MLK_ERR_INTERNAL;
  }
}

std::string csv_escape_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

extern "C" {

const char* mlk_version(void) { return "1.0.0"; }

const char* mlk_status_name(mlk_status s) {
  switch (s) {
    case MLK_OK: return "ok";
    case MLK_ERR_DOMAIN: return "domain-error";
    case MLK_ERR_FINDING: return "finding";
    case MLK_ERR_PARSE: return "parse-error";
    case MLK_ERR_INTERNAL: return "internal-error";
  }
  return "unknown";
}

const char* mlk_last_error(void) { return g_last_error.c_str(); }

void mlk_string_free(char* s) { std::free(s); }

mlk_status mlk_spec_parse_json(const char* json, mlk_spec** out) {
  return guarded([&]() -> mlk_status {
    if (!json || !out) throw std::domain_error("null argument");
    auto spec = mlk::model::PerturbationSpec::from_json(json);
    *out = new mlk_spec{std::move(spec)};
    return MLK_OK;
  });
}

mlk_status mlk_spec_to_json(const mlk_spec* spec, char** json_out) {
  return guarded([&]() -> mlk_status {
    if (!spec || !json_out) throw std::domain_error("null argument");
    *json_out = dup_string(spec->value.to_json());
    return MLK_OK;
  });
}

mlk_status mlk_spec_get(const mlk_spec* spec, int* m, int* n) {
  return guarded([&]() -> mlk_status {
    if (!spec) throw std::domain_error("null argument");
    if (m) *m = spec->value.m.m;
    if (n) *n = spec->value.n;
    return MLK_OK;
  });
}

void mlk_spec_free(mlk_spec* spec) { delete spec; }

mlk_status mlk_u_from_h(double h, int m, double* u_out) {
  return guarded([&]() -> mlk_status {
    if (!u_out) throw std::domain_error("null argument");
    *u_out = mlk::model::u_from_h(h, mlk::model::CurvePower(m));
    return MLK_OK;
  });
}

mlk_status mlk_reduce_integral_json(int i, int j, int m, int side, char** expr_json) {
  return guarded([&]() -> mlk_status {
    if (!expr_json) throw std::domain_error("null argument");
    if (side != 1 && side != -1) throw std::domain_error("side must be +1 or -1");
    mlk::model::CurvePower mm(m);
    auto expr = side > 0 ? mlk::abelian::reduce_J(i, j, mm) : mlk::abelian::reduce_I(i, j, mm);
    *expr_json = dup_string(expr.to_json());
    return MLK_OK;
  });
}

mlk_status mlk_assemble_json(const mlk_spec* spec, char** expansion_json) {
  return guarded([&]() -> mlk_status {
    if (!spec || !expansion_json) throw std::domain_error("null argument");
    *expansion_json = dup_string(mlk::melnikov::assemble(spec->value).to_json());
    return MLK_OK;
  });
}

mlk_status mlk_reduced_coefficients_json(const mlk_spec* spec, char** json_out) {
  return guarded([&]() -> mlk_status {
    if (!spec || !json_out) throw std::domain_error("null argument");
    auto rc = mlk::melnikov::reduce_coefficients(spec->value);
    ordered_json j;
    j["m"] = rc.m.m;
    j["n"] = rc.n;
    auto fam = [](const mlk::model::CoeffMap& m) {
      ordered_json arr = ordered_json::array();
      for (const auto& [ij, v] : m) arr.push_back({ij.first, ij.second, mlk::to_string(v)});
      return arr;
    };
    j["rho"] = fam(rc.rho);
    j["gamma"] = fam(rc.gamma);
    j["zeta"] = fam(rc.zeta);
    *json_out = dup_string(j.dump());
    return MLK_OK;
  });
}

mlk_status mlk_expand_series_json(const mlk_spec* spec, int max_exponent,
                                  char** json_out) {
  return guarded([&]() -> mlk_status {
    if (!spec || !json_out) throw std::domain_error("null argument");
    auto e = mlk::melnikov::assemble(spec->value);
    auto series = mlk::melnikov::expand_series(e, max_exponent);
    ordered_json arr = ordered_json::array();
    for (const auto& [exp, c] : series) {
      ordered_json entry;
      entry["exp"] = exp;
      entry["rat"] = mlk::to_string(c.coeff(0));
      entry["pi"] = mlk::to_string(c.coeff(1));
      entry["value"] = c.to_double();
      arr.push_back(entry);
    }
    *json_out = dup_string(arr.dump());
    return MLK_OK;
  });
}

mlk_status mlk_generating_basis_json(int m, int n, char** json_out) {
  return guarded([&]() -> mlk_status {
    if (!json_out) throw std::domain_error("null argument");
    auto gb = mlk::melnikov::generating_basis(mlk::model::CurvePower(m), n);
    ordered_json j;
    j["m"] = m;
    j["n"] = n;
    j["region"] = mlk::melnikov::region_name(gb.region);
    j["dimension"] = gb.dimension();
    ordered_json arr = ordered_json::array();
    for (const auto& e : gb.elems) {
      const char* kind = e.kind == mlk::melnikov::BasisElem::Kind::Mono   ? "mono"
                         : e.kind == mlk::melnikov::BasisElem::Kind::Ring ? "ring"
                                                                          : "arc";
      arr.push_back({kind, e.index});
    }
    j["basis"] = arr;
    *json_out = dup_string(j.dump());
    return MLK_OK;
  });
}

mlk_status mlk_independence_jacobian_json(int m, int n, char** json_out) {
  return guarded([&]() -> mlk_status {
    if (!json_out) throw std::domain_error("null argument");
    auto jac = mlk::melnikov::independence_jacobian(mlk::model::CurvePower(m), n);
    *json_out = dup_string(jac.to_json());
    if (jac.singular) {
      g_last_error = "FINDING: independence Jacobian singular";
      return MLK_ERR_FINDING;
    }
    return MLK_OK;
  });
}

mlk_status mlk_count_zeros_json(const mlk_spec* spec, char** report_json) {
  return guarded([&]() -> mlk_status {
    if (!spec || !report_json) throw std::domain_error("null argument");
    auto rep = mlk::roots::count_zeros(mlk::melnikov::assemble(spec->value));
    *report_json = dup_string(rep.to_json());
    return MLK_OK;
  });
}

mlk_status mlk_bounds(int m, int n, long* lower, long* upper, char region[16],
                      int* finding) {
  return guarded([&]() -> mlk_status {
    if (!lower || !upper || !region || !finding) throw std::domain_error("null argument");
    auto bp = mlk::roots::bound_Z(mlk::model::CurvePower(m), n);
    *lower = bp.lower;
    *upper = bp.upper;
    std::snprintf(region, 16, "%s", mlk::melnikov::region_label(bp.region));
    *finding = bp.finding ? 1 : 0;
    return MLK_OK;
  });
}

mlk_status mlk_bounds_table_csv(int m_max, int n_max, char** csv_out) {
  return guarded([&]() -> mlk_status {
    if (!csv_out) throw std::domain_error("null argument");
    if (m_max < 1 || n_max < 0) throw std::domain_error("bounds table: bad ranges");
    std::ostringstream os;
    os << "m,n,region,lower,upper,finding\n";
    bool any_finding = false;
    for (int m = 1; m <= m_max; ++m)
      for (int n = 0; n <= n_max; ++n) {
        auto bp = mlk::roots::bound_Z(mlk::model::CurvePower(m), n);
        any_finding = any_finding || bp.finding;
        os << m << ',' << n << ',' << mlk::melnikov::region_label(bp.region) << ','
           << bp.lower << ',' << bp.upper << ',' << (bp.finding ? 1 : 0) << '\n';
      }
    *csv_out = dup_string(os.str());
    if (any_finding) {
      g_last_error = "FINDING: bound formulas inconsistent for some (m,n); see csv";
      return MLK_ERR_FINDING;
    }
    return MLK_OK;
  });
}

mlk_status mlk_construct_json(int m, int n, const double* targets, int n_targets,
                              char** spec_json, char** report_json) {
  return guarded([&]() -> mlk_status {
    if (!spec_json || !report_json) throw std::domain_error("null argument");
    if (n_targets < 1) throw std::domain_error("construct: need at least one target");
    std::vector<double> t;
    if (targets)
      t.assign(targets, targets + n_targets);
    else
      t = mlk::roots::default_targets(n_targets);
    auto res = mlk::roots::construct_max_zeros(mlk::model::CurvePower(m), n, t);
    *spec_json = dup_string(res.spec.to_json());
    *report_json = dup_string(res.report.to_json());
    return MLK_OK;
  });
}

mlk_status mlk_oracle_integral(int i, int j, double u, int m, int side, double* value,
                               double* error_estimate, long* evaluations) {
  return guarded([&]() -> mlk_status {
    if (!value) throw std::domain_error("null argument");
    auto side_e = side > 0 ? mlk::oracle::Side::Plus : mlk::oracle::Side::Minus;
    auto r = mlk::oracle::integral_quadrature(i, j, u, mlk::model::CurvePower(m), side_e);
    *value = r.value;
    if (error_estimate) *error_estimate = r.error_estimate;
    if (evaluations) *evaluations = r.evaluations;
    return MLK_OK;
  });
}

mlk_status mlk_oracle_melnikov(const mlk_spec* spec, double u, double* value,
                               double* error_estimate, long* evaluations) {
  return guarded([&]() -> mlk_status {
    if (!spec || !value) throw std::domain_error("null argument");
    auto r = mlk::oracle::melnikov_quadrature(spec->value, u);
    *value = r.value;
    if (error_estimate) *error_estimate = r.error_estimate;
    if (evaluations) *evaluations = r.evaluations;
    return MLK_OK;
  });
}

mlk_status mlk_verify_grid_csv(int degree_sum_max, int m_max, const double* us,
                               int n_us, char** csv_out) {
  return guarded([&]() -> mlk_status {
    if (!csv_out || !us || n_us < 1) throw std::domain_error("null argument");
    if (degree_sum_max < 0 || m_max < 1) throw std::domain_error("verify: bad ranges");
    std::ostringstream os;
    os << "m,i,j,side,u,closed_form,quadrature,rel_error\n";
    double max_err = 0;
    for (int m = 1; m <= m_max; ++m) {
      mlk::model::CurvePower mm(m);
      for (int i = 0; i <= degree_sum_max; ++i)
        for (int j = 0; i + j <= degree_sum_max; ++j)
          for (int side = 0; side < 2; ++side)
            for (int k = 0; k < n_us; ++k) {
              const double u = us[k];
              const auto expr = side == 0 ? mlk::abelian::reduce_J(i, j, mm)
                                          : mlk::abelian::reduce_I(i, j, mm);
              const double cf = expr.eval(u, mm);
              const auto q = mlk::oracle::integral_quadrature(
                  i, j, u, mm, side == 0 ? mlk::oracle::Side::Plus : mlk::oracle::Side::Minus);
              const double denom = std::max(1.0, std::abs(q.value));
              const double rel = std::abs(cf - q.value) / denom;
              max_err = std::max(max_err, rel);
              os << m << ',' << i << ',' << j << ',' << (side == 0 ? "plus" : "minus")
                 << ',' << csv_escape_double(u) << ',' << csv_escape_double(cf) << ','
                 << csv_escape_double(q.value) << ',' << csv_escape_double(rel) << '\n';
            }
    }
    os << "max_rel_error,,,,,,," << csv_escape_double(max_err) << '\n';
    *csv_out = dup_string(os.str());
    return MLK_OK;
  });
}

mlk_status mlk_displacement(const mlk_spec* spec, double epsilon, double u0,
                            double* delta) {
  return guarded([&]() -> mlk_status {
    if (!spec || !delta) throw std::domain_error("null argument");
    *delta = mlk::simulate::displacement_map(spec->value, epsilon, u0);
    return MLK_OK;
  });
}

mlk_status mlk_find_cycles_json(const mlk_spec* spec, double epsilon, double u_lo,
                                double u_hi, int samples, char** json_out) {
  return guarded([&]() -> mlk_status {
    if (!spec || !json_out) throw std::domain_error("null argument");
    auto cycles = mlk::simulate::find_limit_cycles(spec->value, epsilon, u_lo, u_hi, samples);
    ordered_json arr = ordered_json::array();
    for (const auto& c : cycles) {
      ordered_json e;
      e["u_star"] = c.u_star;
      e["h_star"] = c.h_star;
      e["stability"] = c.stability == mlk::simulate::CycleFinding::Stability::Attracting
                           ? "attracting"
                       : c.stability == mlk::simulate::CycleFinding::Stability::Repelling
                           ? "repelling"
                           : "undetermined";
      e["residual"] = c.residual;
      arr.push_back(e);
    }
    *json_out = dup_string(arr.dump());
    return MLK_OK;
  });
}

mlk_status mlk_flow_csv(const mlk_spec* spec, double epsilon, double x0, double y0,
                        double max_time, char** csv_out) {
  return guarded([&]() -> mlk_status {
    if (!spec || !csv_out) throw std::domain_error("null argument");
    mlk::simulate::FlowOptions opts;
    opts.record = true;
    auto traj = mlk::simulate::flow(spec->value, epsilon,
                                    mlk::simulate::PiecewiseState{x0, y0,
                                                                  mlk::simulate::Zone::Above, 0.0},
                                    max_time, opts);
    std::ostringstream os;
    os << "t,x,y,zone\n";
    for (const auto& p : traj.points)
      os << csv_escape_double(p.t) << ',' << csv_escape_double(p.x) << ','
         << csv_escape_double(p.y) << ','
         << (p.zone == mlk::simulate::Zone::Above ? "above" : "below") << '\n';
    *csv_out = dup_string(os.str());
    return MLK_OK;
  });
}

mlk_status mlk_displacement_scan_csv(const mlk_spec* spec, double epsilon, double u_lo,
                                     double u_hi, int samples, char** csv_out) {
  return guarded([&]() -> mlk_status {
    if (!spec || !csv_out) throw std::domain_error("null argument");
    if (samples < 2 || !(u_lo > 0) || !(u_hi > u_lo))
      throw std::domain_error("displacement scan: bad grid");
    std::ostringstream os;
    os << "u,delta\n";
    for (int k = 0; k < samples; ++k) {
      const double u = u_lo + (u_hi - u_lo) * k / (samples - 1);
      const double d = mlk::simulate::displacement_map(spec->value, epsilon, u);
      os << csv_escape_double(u) << ',' << csv_escape_double(d) << '\n';
    }
    *csv_out = dup_string(os.str());
    return MLK_OK;
  });
}

}  // extern "C"
