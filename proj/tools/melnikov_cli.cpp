// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end.  Links only the C API of the shared library.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "melnikov/melnikov.h"

namespace {

int status_to_exit(mlk_status s) {
  if (s == MLK_OK) return 0;
  if (s == MLK_ERR_FINDING) return 2;
  return 1;
}

int fail(mlk_status s) {
  std::cerr << "error (" << mlk_status_name(s) << "): " << mlk_last_error() << "\n";
  return status_to_exit(s);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ValidationError("--input", "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return 1;
  }
  out << text;
  return 0;
}

struct SpecHandle {
  mlk_spec* ptr = nullptr;
  ~SpecHandle() { mlk_spec_free(ptr); }
};

struct CString {
  char* ptr = nullptr;
  ~CString() { mlk_string_free(ptr); }
  std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

int load_spec(const std::string& path, SpecHandle& spec) {
  const std::string text = read_file(path);
  mlk_status s = mlk_spec_parse_json(text.c_str(), &spec.ptr);
  if (s != MLK_OK) return fail(s);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Melnikov-function toolkit for the piecewise linear center with switching curve y = x^m"};
  app.require_subcommand(1);
  long seed = 0;
  app.add_option("--seed", seed, "Seed for randomized suites (outputs are deterministic per seed)");

  std::string input, output, report_path;

  // reduce
  auto* reduce = app.add_subcommand("reduce", "Closed form of J_{i,j} or I_{i,j}");
  int ri = 0, rj = 0, rm = 3;
  std::string side = "plus";
  reduce->add_option("--i", ri, "index i")->required();
  reduce->add_option("--j", rj, "index j")->required();
  reduce->add_option("--m", rm, "curve power m")->required();
  reduce->add_option("--side", side, "plus (J) or minus (I)")
      ->check(CLI::IsMember({"plus", "minus"}));
  reduce->add_option("-o,--output", output, "output file (default stdout)");
  reduce->callback([&]() {
    CString expr;
    mlk_status s = mlk_reduce_integral_json(ri, rj, rm, side == "plus" ? 1 : -1, &expr.ptr);
    if (s != MLK_OK) std::exit(fail(s));
    std::exit(write_output(expr.str(), output));
  });

  // assemble
  auto* assemble = app.add_subcommand("assemble", "Melnikov expansion M(u) of a spec");
  assemble->add_option("--input", input, "PerturbationSpec JSON file")->required();
  assemble->add_option("-o,--output", output, "output file (default stdout)");
  assemble->callback([&]() {
    SpecHandle spec;
    if (int rc = load_spec(input, spec)) std::exit(rc);
    CString json;
    mlk_status s = mlk_assemble_json(spec.ptr, &json.ptr);
    if (s != MLK_OK) std::exit(fail(s));
    std::exit(write_output(json.str(), output));
  });

  // count
  auto* count = app.add_subcommand("count", "Rigorous zero count of M(u) on (0,inf)");
  count->add_option("--input", input, "PerturbationSpec JSON file")->required();
  count->add_option("-o,--output", output, "output file (default stdout)");
  count->callback([&]() {
    SpecHandle spec;
    if (int rc = load_spec(input, spec)) std::exit(rc);
    CString json;
    mlk_status s = mlk_count_zeros_json(spec.ptr, &json.ptr);
    if (s != MLK_OK) std::exit(fail(s));
    std::exit(write_output(json.str(), output));
  });

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Z(m,n) bound table as CSV");
  int m_max = 3, n_max = 4;
  bounds->add_option("--m-max", m_max, "max curve power");
  bounds->add_option("--n-max", n_max, "max perturbation degree");
  bounds->add_option("-o,--output", output, "output file (default stdout)");
  bounds->callback([&]() {
    CString csv;
    mlk_status s = mlk_bounds_table_csv(m_max, n_max, &csv.ptr);
    if (s != MLK_OK && s != MLK_ERR_FINDING) std::exit(fail(s));
    int rc = write_output(csv.str(), output);
    if (s == MLK_ERR_FINDING) {
      std::cerr << "FINDING: " << mlk_last_error() << "\n";
      std::exit(2);
    }
    std::exit(rc);
  });

  // construct
  auto* construct = app.add_subcommand(
      "construct", "Build a spec realizing many simple Melnikov zeros");
  int cm = 3, cn = 2, ccount = 0;
  std::vector<double> targets;
  construct->add_option("--m", cm, "curve power m")->required();
  construct->add_option("--n", cn, "perturbation degree n")->required();
  construct->add_option("--targets", targets, "explicit zero targets (increasing)");
  construct->add_option("--count", ccount, "number of zeros (geometric default targets)");
  construct->add_option("-o,--output", output, "spec output file (default stdout)");
  construct->add_option("--report", report_path, "zero report output file");
  construct->callback([&]() {
    CString spec_json, report_json;
    mlk_status s;
    if (!targets.empty())
      s = mlk_construct_json(cm, cn, targets.data(), static_cast<int>(targets.size()),
                             &spec_json.ptr, &report_json.ptr);
    else if (ccount > 0)
      s = mlk_construct_json(cm, cn, nullptr, ccount, &spec_json.ptr, &report_json.ptr);
    else {
      std::cerr << "error: give --targets or --count\n";
      std::exit(1);
    }
    if (s != MLK_OK) std::exit(fail(s));
    int rc = write_output(spec_json.str(), output);
    if (!report_path.empty() && rc == 0) rc = write_output(report_json.str(), report_path);
    else if (report_path.empty()) std::cerr << report_json.str() << "\n";
    std::exit(rc);
  });

  // verify
  auto* verify = app.add_subcommand("verify", "Closed forms vs quadrature oracle grid");
  int degree_sum = 8, vm_max = 6;
  std::vector<double> us{0.3, 0.7, 1.0, 1.5};
  verify->add_option("--degree-sum", degree_sum, "max i+j");
  verify->add_option("--m-max", vm_max, "max curve power");
  verify->add_option("--u", us, "u sample points");
  verify->add_option("-o,--output", output, "output file (default stdout)");
  verify->callback([&]() {
    CString csv;
    mlk_status s = mlk_verify_grid_csv(degree_sum, vm_max, us.data(),
                                       static_cast<int>(us.size()), &csv.ptr);
    if (s != MLK_OK) std::exit(fail(s));
    std::exit(write_output(csv.str(), output));
  });

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Event-detecting integration of the piecewise system");
  double eps = 1e-3, u0 = 1.0, max_time = 25.0, u_lo = 0.3, u_hi = 2.0;
  int samples = 25;
  bool find_cycles = false, plot_data = false;
  simulate->add_option("--input", input, "PerturbationSpec JSON file")->required();
  simulate->add_option("--epsilon", eps, "perturbation size (|eps| <= 0.05)");
  simulate->add_option("--u0", u0, "start on the curve at B(u0)");
  simulate->add_option("--max-time", max_time, "integration horizon");
  simulate->add_flag("--find-cycles", find_cycles, "scan the displacement map for limit cycles");
  simulate->add_flag("--plot-data", plot_data, "emit per-revolution (u, delta) pairs");
  simulate->add_option("--u-lo", u_lo, "scan lower end");
  simulate->add_option("--u-hi", u_hi, "scan upper end");
  simulate->add_option("--samples", samples, "scan grid size");
  simulate->add_option("-o,--output", output, "output file (default stdout)");
  simulate->callback([&]() {
    SpecHandle spec;
    if (int rc = load_spec(input, spec)) std::exit(rc);
    CString out;
    mlk_status s;
    if (find_cycles)
      s = mlk_find_cycles_json(spec.ptr, eps, u_lo, u_hi, samples, &out.ptr);
    else if (plot_data)
      s = mlk_displacement_scan_csv(spec.ptr, eps, u_lo, u_hi, samples, &out.ptr);
    else {
      // Trajectory from B(u0) = (u0, u0^m) on the switching curve.
      int m = 1;
      if (mlk_spec_get(spec.ptr, &m, nullptr) != MLK_OK) std::exit(fail(MLK_ERR_INTERNAL));
      double ystart = 1;
      for (int k = 0; k < m; ++k) ystart *= u0;
      s = mlk_flow_csv(spec.ptr, eps, u0, ystart, max_time, &out.ptr);
    }
    if (s != MLK_OK) std::exit(fail(s));
    std::exit(write_output(out.str(), output));
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}
