// Copyright 2026 The spinqpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spinqpt/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "spinqpt/chi_analytic.hpp"
#include "spinqpt/dynamics.hpp"
#include "spinqpt/tomography.hpp"

#ifndef SPINQPT_VERSION
#define SPINQPT_VERSION "0.0.0"
#endif

namespace spinqpt::cli {

namespace {

constexpr double kDefaultCheckTol = 1e-10;
constexpr double kDefaultBisectionTol = 1e-4;
constexpr double kMcZLimit = 5.0;

Json matrix_json(const Eigen::Matrix<double, 16, 16>& m) {
  Json rows = Json::array();
  for (int i = 0; i < 16; ++i) {
    Json row = Json::array();
    for (int j = 0; j < 16; ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json ordering_json() {
  Json out = Json::array();
  for (const auto& label : chi_labels()) out.push_back(label);
  return out;
}

void put_chi(Json& j, const ProcessMatrix& chi) {
  j["chi_real"] = matrix_json(chi.matrix().real());
  j["chi_imag"] = matrix_json(chi.matrix().imag());
}

Json params_json(const RunConfig& cfg) {
  Json p;
  p["r"] = cfg.r;
  p["gdtau"] = cfg.gdtau;
  if (cfg.g_mev) {
    p["g_mev"] = *cfg.g_mev;
    p["tomography_step_ps"] = tomography_step_picoseconds(*cfg.g_mev);
  }
  return p;
}

void add_grid_params(Json& p, const RunConfig& cfg) {
  p["r_min"] = cfg.r_min;
  p["r_max"] = cfg.r_max;
  p["r_steps"] = cfg.r_steps;
}

std::vector<double> sweep_gdtaus(const RunConfig& cfg) {
  if (cfg.gdtau_given) return {cfg.gdtau};
  return {0.0, 0.1};
}

std::string grid_method(const RunConfig& cfg) {
  const std::string m = cfg.method.empty() ? "closed-form" : cfg.method;
  if (m != "closed-form" && m != "pipeline") {
    throw std::invalid_argument("sweeps support --method closed-form or pipeline");
  }
  return m;
}

ProcessMatrix grid_chi(const std::string& method, double r, double gdtau) {
  if (method == "pipeline") return run_qpt(NoiseParams::from_dimensionless(r, gdtau)).chi;
  return chi_closed_form(r, gdtau);
}

Json check_json(const std::string& name, int samples, double deviation, double tol) {
  Json c;
  c["name"] = name;
  c["samples"] = samples;
  c["max_deviation"] = deviation;
  c["tolerance"] = tol;
  c["pass"] = deviation <= tol;
  return c;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Json sample_json(const ThresholdSample& s) {
  Json j;
  j["r"] = s.r;
  j["min_pt_eigenvalue"] = s.min_pt_eigenvalue;
  j["negativity"] = s.negativity;
  return j;
}

}  // namespace

void RunConfig::validate() const {
  if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("--r must lie in [0, 1]");
  if (!(gdtau >= 0.0) || !std::isfinite(gdtau)) {
    throw std::invalid_argument("--gdtau must be finite and >= 0");
  }
  if (samples < 1) throw std::invalid_argument("--samples must be >= 1");
  if (!(r_min >= 0.0 && r_max <= 1.0 && r_min <= r_max)) {
    throw std::invalid_argument("need 0 <= --r-min <= --r-max <= 1");
  }
  if (r_steps < 1) throw std::invalid_argument("--r-steps must be >= 1");
  if (tol && !(*tol > 0.0)) throw std::invalid_argument("--tol must be > 0");
  if (g_mev && !(*g_mev > 0.0)) throw std::invalid_argument("--g-mev must be > 0");
  if (!method.empty() && method != "pipeline" && method != "closed-form" &&
      method != "montecarlo" && method != "all") {
    throw std::invalid_argument("unknown --method " + method);
  }
}

std::vector<double> RunConfig::r_grid() const {
  if (r_steps == 1) return {r_min};
  std::vector<double> grid;
  for (int i = 0; i < r_steps; ++i) {
    grid.push_back(r_min + (r_max - r_min) * i / (r_steps - 1));
  }
  grid.back() = r_max;
  return grid;
}

std::string version() { return SPINQPT_VERSION; }

Report cmd_ideal_check(const RunConfig& cfg) {
  const double tol = cfg.tol.value_or(kDefaultCheckTol);
  const double g = 1.0;
  Rng rng(derive_seed(cfg.seed, 0, 0));
  std::uniform_real_distribution<double> time(0.0, 2.0 * std::numbers::pi / g);
  constexpr int kSamples = 20;
  double isolation = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double t = time(rng);
    isolation = std::max(isolation, phase_invariant_distance(term_isolation_unitary(g, t),
                                                             isolated_zz_unitary(g, t)));
  }
  const double synthesis =
      phase_invariant_distance(cnot_unitary(g, cfg.inject_angle_error), cnot_reference());

  Report rep;
  Json& j = rep.json;
  j["command"] = "ideal-check";
  j["checks"] = Json::array({check_json("term_isolation", kSamples, isolation, tol),
                             check_json("cnot_synthesis", 1, synthesis, tol)});
  const double worst = std::max(isolation, synthesis);
  j["max_deviation"] = worst;
  j["pass"] = worst <= tol;
  j["seed"] = cfg.seed;
  j["version"] = version();
  rep.csv_header = {"check", "max_deviation", "tolerance", "pass"};
  rep.csv_rows = {{0, isolation, tol, double(isolation <= tol)},
                  {1, synthesis, tol, double(synthesis <= tol)}};
  rep.status = worst <= tol ? 0 : 1;
  return rep;
}

Report cmd_qpt(const RunConfig& cfg) {
  const std::string method = cfg.method.empty() ? "pipeline" : cfg.method;
  const double tol = cfg.tol.value_or(kDefaultCheckTol);
  const NoiseParams noise = NoiseParams::from_dimensionless(cfg.r, cfg.gdtau);
  const ProcessMatrix ideal = ideal_cnot_process_matrix();
  const McOptions mc{cfg.samples, cfg.seed, cfg.jobs};

  auto method_json = [&](const QptResult& res) {
    Json m;
    put_chi(m, res.chi);
    m["fidelity"] = process_fidelity(res.chi, ideal);
    if (res.chi_std_error_real) {
      m["chi_std_error_real"] = matrix_json(*res.chi_std_error_real);
      m["chi_std_error_imag"] = matrix_json(*res.chi_std_error_imag);
    }
    return m;
  };

  Report rep;
  Json& j = rep.json;
  j["command"] = "qpt";
  j["params"] = params_json(cfg);
  if (method == "montecarlo" || method == "all") j["params"]["samples"] = cfg.samples;
  j["ordering"] = ordering_json();

  const ProcessMatrix* primary = nullptr;
  Json deviations = Json::object();
  QptResult pipeline, closed, sampled;
  if (method == "all") {
    pipeline = run_qpt(noise, {QptMethod::Pipeline, mc});
    closed = run_qpt(noise, {QptMethod::ClosedForm, mc});
    sampled = run_qpt(noise, {QptMethod::MonteCarlo, mc});
    primary = &pipeline.chi;

    // Differences within tol count as agreement; the rest are standardized by
    // their own propagated error.
    auto z_of = [&](double dev, double se) {
      if (std::abs(dev) <= tol) return 0.0;
      return se > 0 ? std::abs(dev) / se : INFINITY;
    };
    double z_max = 0.0;
    for (int a = 0; a < 16; ++a) {
      for (int b = 0; b < 16; ++b) {
        const Complex dev = sampled.chi.matrix()(a, b) - pipeline.chi.matrix()(a, b);
        z_max = std::max(z_max, z_of(dev.real(), (*sampled.chi_std_error_real)(a, b)));
        z_max = std::max(z_max, z_of(dev.imag(), (*sampled.chi_std_error_imag)(a, b)));
      }
    }
    const bool caveat = cfg.r < 1.0 || cfg.gdtau > 0.0;
    const double pvc = max_abs_deviation(pipeline.chi, closed.chi);
    deviations["pipeline_vs_closed_form"] = pvc;
    deviations["pipeline_vs_montecarlo"] = max_abs_deviation(pipeline.chi, sampled.chi);
    deviations["closed_form_vs_montecarlo"] = max_abs_deviation(closed.chi, sampled.chi);
    deviations["montecarlo_max_z"] = std::isfinite(z_max) ? Json(z_max) : Json(nullptr);
    deviations["expected_discrepancy"] = caveat;
    if (caveat) {
      deviations["caveat"] =
          "pipeline and closed form may differ in off-diagonal entries for r < 1 or gdtau > 0";
    }
    const bool ok = (caveat || pvc <= tol) && z_max < kMcZLimit;
    deviations["tolerance"] = tol;
    deviations["pass"] = ok;
    rep.status = ok ? 0 : 1;

    j["methods"]["pipeline"] = method_json(pipeline);
    j["methods"]["closed-form"] = method_json(closed);
    j["methods"]["montecarlo"] = method_json(sampled);
  } else {
    QptOptions opts{parse_qpt_method(method), mc};
    pipeline = run_qpt(noise, opts);
    primary = &pipeline.chi;
    if (pipeline.chi_std_error_real) {
      j["chi_std_error_real"] = matrix_json(*pipeline.chi_std_error_real);
      j["chi_std_error_imag"] = matrix_json(*pipeline.chi_std_error_imag);
    }
  }
  put_chi(j, *primary);
  j["fidelity"] = process_fidelity(*primary, ideal);
  j["deviations"] = deviations;
  j["seed"] = cfg.seed;
  j["method"] = method;
  j["version"] = version();

  rep.csv_header = {"m", "n", "k", "l", "re", "im"};
  for (int a = 0; a < 16; ++a) {
    for (int b = 0; b < 16; ++b) {
      const auto [m, n] = kChiOrdering[a];
      const auto [k, l] = kChiOrdering[b];
      const Complex v = primary->matrix()(a, b);
      rep.csv_rows.push_back({double(m), double(n), double(k), double(l), v.real(), v.imag()});
    }
  }
  return rep;
}

Report cmd_fidelity_sweep(const RunConfig& cfg) {
  const std::string method = grid_method(cfg);
  const auto rs = cfg.r_grid();
  const auto gs = sweep_gdtaus(cfg);
  std::vector<double> f(rs.size() * gs.size());
  const ProcessMatrix ideal = ideal_cnot_process_matrix();
  parallel_for(f.size(), cfg.jobs, [&](std::size_t i) {
    const double r = rs[i % rs.size()], g = gs[i / rs.size()];
    f[i] = method == "closed-form" ? fidelity_closed_form(r, g)
                                   : process_fidelity(grid_chi(method, r, g), ideal);
  });

  Report rep;
  Json& j = rep.json;
  j["command"] = "fidelity-sweep";
  Json p;
  add_grid_params(p, cfg);
  p["gdtau"] = gs;
  j["params"] = p;
  j["method"] = method;
  Json rows = Json::array();
  rep.csv_header = {"r", "gdtau", "F"};
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = rs[i % rs.size()], g = gs[i / rs.size()];
    rows.push_back(Json{{"r", r}, {"gdtau", g}, {"F", f[i]}});
    rep.csv_rows.push_back({r, g, f[i]});
  }
  j["rows"] = std::move(rows);
  j["version"] = version();
  return rep;
}

Report cmd_entanglement_threshold(const RunConfig& cfg) {
  const double tol = cfg.tol.value_or(kDefaultBisectionTol);
  const TomographyDesign design = design_sequences(1.0);
  const ThresholdResult res = entanglement_threshold(design, cfg.gdtau, tol);

  Report rep;
  Json& j = rep.json;
  j["command"] = "entanglement-threshold";
  Json p;
  p["gdtau"] = cfg.gdtau;
  p["tolerance"] = tol;
  if (cfg.g_mev) {
    p["g_mev"] = *cfg.g_mev;
    p["tomography_step_ps"] = tomography_step_picoseconds(*cfg.g_mev);
  }
  j["params"] = p;
  j["witness"] = "negativity";
  j["found"] = res.found;
  if (res.found) {
    j["r_star"] = res.r_star;
    const double above = std::min(1.0, res.r_star + 0.05);
    j["above_threshold"] = Json{
        {"r", above},
        {"negativity", negativity(entanglement_probe_state(design, above, cfg.gdtau))}};
  } else {
    j["r_star"] = nullptr;
    j["message"] = "no threshold";
  }
  j["endpoints"] = Json{{"r0", sample_json(res.at_zero)}, {"r1", sample_json(res.at_one)}};
  Json curve = Json::array(), history = Json::array();
  rep.csv_header = {"r", "min_pt_eigenvalue", "negativity"};
  for (const auto& s : res.curve) {
    curve.push_back(sample_json(s));
    rep.csv_rows.push_back({s.r, s.min_pt_eigenvalue, s.negativity});
  }
  for (const auto& s : res.history) history.push_back(sample_json(s));
  j["curve"] = std::move(curve);
  j["history"] = std::move(history);
  j["version"] = version();
  return rep;
}

Report cmd_chi_grid(const RunConfig& cfg) {
  const std::string method = grid_method(cfg);
  const auto rs = cfg.r_grid();
  const auto gs = sweep_gdtaus(cfg);
  std::vector<ProcessMatrix> chis(rs.size() * gs.size());
  parallel_for(chis.size(), cfg.jobs, [&](std::size_t i) {
    chis[i] = grid_chi(method, rs[i % rs.size()], gs[i / rs.size()]);
  });
  const ProcessMatrix ideal = ideal_cnot_process_matrix();

  Report rep;
  Json& j = rep.json;
  j["command"] = "chi-grid";
  Json p;
  add_grid_params(p, cfg);
  p["gdtau"] = gs;
  j["params"] = p;
  j["method"] = method;
  j["ordering"] = ordering_json();
  rep.csv_header = {"r", "gdtau", "F"};
  const auto labels = chi_labels();
  for (const char* part : {"re", "im"}) {
    for (int a = 0; a < 16; ++a) {
      for (int b = 0; b < 16; ++b) {
        rep.csv_header.push_back(std::string(part) + "_" + labels[a] + "_" + labels[b]);
      }
    }
  }
  Json rows = Json::array();
  for (std::size_t i = 0; i < chis.size(); ++i) {
    const double r = rs[i % rs.size()], g = gs[i / rs.size()];
    const double f = process_fidelity(chis[i], ideal);
    Json row{{"r", r}, {"gdtau", g}, {"F", f}};
    put_chi(row, chis[i]);
    rows.push_back(std::move(row));
    std::vector<double> csv{r, g, f};
    for (int a = 0; a < 16; ++a) {
      for (int b = 0; b < 16; ++b) csv.push_back(chis[i].matrix()(a, b).real());
    }
    for (int a = 0; a < 16; ++a) {
      for (int b = 0; b < 16; ++b) csv.push_back(chis[i].matrix()(a, b).imag());
    }
    rep.csv_rows.push_back(std::move(csv));
  }
  j["rows"] = std::move(rows);
  j["version"] = version();
  return rep;
}

std::string render(const Report& report, Format format) {
  if (format == Format::Json) return report.json.dump(2) + "\n";
  std::string s;
  for (std::size_t i = 0; i < report.csv_header.size(); ++i) {
    if (i) s += ',';
    s += report.csv_header[i];
  }
  s += '\n';
  for (const auto& row : report.csv_rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) s += ',';
      s += format_number(row[i]);
    }
    s += '\n';
  }
  return s;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string format = "json";
  CLI::App app{"Exchange-coupled spin-qubit CNOT: process tomography with blockade readout"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  auto add_point = [&](CLI::App* sub) {
    sub->add_option("--r", cfg.r, "Channel polarization r in [0, 1]")->capture_default_str();
    sub->add_option_function<double>(
           "--gdtau",
           [&](double v) {
             cfg.gdtau = v;
             cfg.gdtau_given = true;
           },
           "Dimensionless timing dispersion g*dtau")
        ->capture_default_str();
  };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--r-min", cfg.r_min)->capture_default_str();
    sub->add_option("--r-max", cfg.r_max)->capture_default_str();
    sub->add_option("--r-steps", cfg.r_steps)->capture_default_str();
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "Output file (default stdout)");
    sub->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    sub->add_option("--jobs", cfg.jobs, "Worker threads (0 = all cores)")->capture_default_str();
    sub->add_option_function<double>("--tol", [&](double v) { cfg.tol = v; }, "Tolerance");
    sub->add_option_function<double>("--g-mev", [&](double v) { cfg.g_mev = v; },
                                      "Exchange energy in meV, for reported timescales");
    sub->add_flag("--timing", cfg.timing, "Include wall-clock time in the report");
    sub->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  };

  auto* ideal = app.add_subcommand("ideal-check", "Verify term isolation and CNOT synthesis");
  add_common(ideal);
  ideal->add_option("--inject-angle-error", cfg.inject_angle_error)->group("");

  auto* qpt = app.add_subcommand("qpt", "Process matrix of the noisy CNOT");
  add_point(qpt);
  add_common(qpt);
  qpt->add_option("--method", cfg.method, "pipeline, closed-form, montecarlo or all")
      ->check(CLI::IsMember({"pipeline", "closed-form", "montecarlo", "all"}));
  qpt->add_option("--samples", cfg.samples, "Monte Carlo samples per probability")
      ->capture_default_str();

  auto* sweep = app.add_subcommand("fidelity-sweep", "Process fidelity against polarization");
  add_point(sweep);
  add_grid(sweep);
  add_common(sweep);
  sweep->add_option("--method", cfg.method, "closed-form or pipeline")
      ->check(CLI::IsMember({"closed-form", "pipeline"}));

  auto* ent = app.add_subcommand("entanglement-threshold",
                                 "Smallest polarization producing an entangled output");
  add_point(ent);
  add_common(ent);

  auto* grid = app.add_subcommand("chi-grid", "Process matrices over an (r, gdtau) grid");
  add_point(grid);
  add_grid(grid);
  add_common(grid);
  grid->add_option("--method", cfg.method, "closed-form or pipeline")
      ->check(CLI::IsMember({"closed-form", "pipeline"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  Report rep;
  const auto start = std::chrono::steady_clock::now();
  try {
    cfg.format = format == "csv" ? Format::Csv : Format::Json;
    cfg.subcommand = app.get_subcommands().front()->get_name();
    cfg.validate();
    if (cfg.subcommand == "ideal-check") rep = cmd_ideal_check(cfg);
    else if (cfg.subcommand == "qpt") rep = cmd_qpt(cfg);
    else if (cfg.subcommand == "fidelity-sweep") rep = cmd_fidelity_sweep(cfg);
    else if (cfg.subcommand == "entanglement-threshold") rep = cmd_entanglement_threshold(cfg);
    else rep = cmd_chi_grid(cfg);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (cfg.timing) rep.json["wall_clock_seconds"] = seconds;

  const std::string text = render(rep, cfg.format);
  if (cfg.out.empty()) {
    out << text;
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    f << text;
    f.close();
    if (!f) {
      err << "error: cannot write " << cfg.out << "\n";
      return 2;
    }
  }
  if (!cfg.timing) err << cfg.subcommand << ": " << seconds << " s\n";
  return rep.status;
}

}  // namespace spinqpt::cli
