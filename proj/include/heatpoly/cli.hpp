#pragma once

// Command-line front end: expansion, compare, models and fractal
// subcommands writing CSV or JSON.
//
// Exit codes: 0 success, 2 invalid input, 3 unsupported geometry,
// 4 quadrature budget exceeded.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "heatpoly/asymptotics.hpp"
#include "heatpoly/error.hpp"
#include "heatpoly/format.hpp"
#include "heatpoly/fractal.hpp"
#include "heatpoly/geometry.hpp"
#include "heatpoly/models.hpp"
#include "heatpoly/oracle.hpp"
#include "json.hpp"

namespace heatpoly::cli {

enum ExitCode : int { kOk = 0, kInvalidInput = 2, kUnsupportedGeometry = 3, kBudgetExceeded = 4 };

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  bool partial = false;

  void add(std::vector<double> values) {
    std::vector<std::string> row;
    for (double v : values) row.push_back(format_real(v));
    rows.push_back(std::move(row));
  }
};

inline void write_table(std::ostream& os, const Table& t, const std::string& format) {
  if (format == "json") {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) {
      nlohmann::ordered_json o;
      for (std::size_t i = 0; i < t.header.size(); ++i) o[t.header[i]] = r[i];
      rows.push_back(o);
    }
    nlohmann::ordered_json doc{{"rows", rows}};
    if (t.partial) doc["partial"] = true;
    os << doc.dump(2) << '\n';
    return;
  }
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
}

struct RunConfig {
  std::string polygon;
  std::vector<double> times;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  std::string format = "csv";
  std::string out;
  std::size_t max_cells = 200000;
  std::size_t mc_samples = 0;
  bool no_interaction = false;

  std::string subcase;
  double beta = kPi / 2, radius = 1.0;
  double gamma1 = kPi / 2, gamma2 = kPi / 2, alpha = kPi / 2;
  double length = 1.0, height = 1.0;

  double s = 0.2;
  std::string mode = "constants";
  std::string samples;
};

namespace detail {

inline void check_times(const std::vector<double>& times, bool required) {
  if (required && times.empty()) throw InputError("--t needs at least one time");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || !std::isfinite(times[i])) throw InputError("times must be positive");
    if (i > 0 && !(times[i] > times[i - 1])) throw InputError("times must be ascending");
  }
}

inline Polygon read_polygon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read polygon file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_polygon(ss.str());
}

inline Table cmd_expansion(const RunConfig& c) {
  check_times(c.times, true);
  const ExpansionReport r = expansion_report(read_polygon(c.polygon));
  Table t;
  t.header = {"t",         "area",      "perimeter_coeff", "corner_sum", "interaction_sum",
              "expansion", "envelope",  "remainder_R",     "sin2_gamma"};
  for (double time : c.times) {
    t.add({time, r.area_term, r.perimeter_term_coeff, r.corner_sum, r.interaction_sum,
           r.value(time, !c.no_interaction), r.envelope(time), r.remainder_R, r.remainder_sin2});
  }
  return t;
}

inline Table cmd_compare(const RunConfig& c) {
  check_times(c.times, true);
  if (!(c.tol > 0.0)) throw InputError("--tol must be positive");
  const Polygon p = read_polygon(c.polygon);
  const HeatContentCurve curve = residual_curve(p, c.times, c.tol, !c.no_interaction, c.max_cells);
  Table t;
  t.header = {"t", "exact", "exact_err", "asymptotic", "residual", "envelope"};
  if (c.mc_samples > 0) {
    t.header.push_back("monte_carlo");
    t.header.push_back("monte_carlo_se");
  }
  const MeshedPolygon D(p);
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    std::vector<double> row{curve.times[i],      curve.exact[i],    curve.exact_err[i],
                            curve.asymptotic[i], curve.residual[i], curve.envelope[i]};
    if (c.mc_samples > 0) {
      const MonteCarloResult mc = heat_content_monte_carlo(D, curve.times[i], c.mc_samples, c.seed);
      row.push_back(mc.value);
      row.push_back(mc.standard_error);
    }
    t.add(row);
  }
  t.partial = curve.partial;
  return t;
}

inline Table cmd_models(const RunConfig& c) {
  check_times(c.times, true);
  Table t;
  t.header = {"t", "part", "formula", "numeric", "numeric_err", "t_coefficient"};
  auto row = [&](double time, const std::string& part, double formula, QuadratureResult num, double coeff) {
    t.rows.push_back({format_real(time), part, format_real(formula), format_real(num.value),
                      format_real(num.error_estimate), format_real(coeff)});
  };
  for (double time : c.times) {
    if (c.subcase == "sector") {
      const WedgeSectorConfig cfg{c.beta, c.radius};
      row(time, "sector", sector_in_wedge_formula(cfg, time), sector_in_wedge_numeric(cfg, time, c.tol),
          corner_coefficient(c.beta));
    } else if (c.subcase == "two-wedge") {
      const double k = interaction_coefficient(c.alpha, c.gamma1, c.gamma2);
      row(time, "interaction", k * time,
          two_wedge_interaction_numeric({c.gamma1, c.gamma2, c.alpha}, time, c.tol), k);
    } else if (c.subcase == "three-halves") {
      row(time, "pi_sector", pi_sector_in_threehalfpi_wedge(c.radius, time),
          sector_wedge_numeric(1.5 * kPi, 0.0, kPi, c.radius, time, c.tol), 0.0);
      row(time, "quarter_sector", quarter_sector_in_threehalfpi_wedge(c.radius, time),
          sector_wedge_numeric(1.5 * kPi, kPi, 1.5 * kPi, c.radius, time, c.tol), 1.0 / kPi);
    } else if (c.subcase == "rectangle") {
      row(time, "rectangle", rectangle_contribution(c.length, c.height, time),
          rectangle_contribution_numeric(c.length, c.height, time), 0.0);
    } else if (c.subcase == "cusp") {
      const double R = c.radius, h = 0.5 * R * std::abs(std::sin(c.beta));
      auto f = [&](double x) {
        return (-R * x + 0.5 * R * R * std::asin(x / R) + 0.5 * x * std::sqrt(R * R - x * x)) *
               std::exp(-x * x / (4.0 * time));
      };
      QuadratureResult num = (1.0 / std::sqrt(4.0 * kPi * time)) * quad::integrate(f, 0.0, h, 1e-13);
      num.value += cusp_area(R, h);
      row(time, "cusp", cusp_contribution(R, c.beta, time), num, 0.0);
    } else {
      throw InputError("unknown models subcase '" + c.subcase +
                       "' (sector, two-wedge, three-halves, rectangle, cusp)");
    }
  }
  return t;
}

inline RenewalSamples read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read samples file: " + path);
  return read_samples_csv(in);
}

inline Table cmd_fractal(const RunConfig& c, std::ostream& err) {
  const FractalSpec f = fractal_spec(c.s);
  check_times(c.times, false);
  Table t;
  if (c.mode == "constants") {
    const Coefficients k = heat_content_coefficients(c.s);
    t.header = {"name", "value"};
    auto put = [&](const std::string& n, double v) { t.rows.push_back({n, format_real(v)}); };
    put("s", f.s);
    put("volume", f.volume);
    put("surface", f.surface);
    put("edge_length", f.edge_length);
    put("d", f.d);
    put("d_s", f.d_s);
    put("period", f.period());
    put("coeff_constant", k.constant);
    put("coeff_sqrt_t", k.sqrt_t);
    put("coeff_t_log_t", k.t_log_t);
    put("coeff_t", k.t);
    for (double time : c.times) put("heat_content(" + format_real(time) + ")", assemble_heat_content(c.s, time));
  } else if (c.mode == "renewal-check") {
    double worst = 0.0;
    if (!c.samples.empty()) {
      const RenewalSamples r = read_samples(c.samples);
      const std::vector<double> h = renewal_residual(r, c.s);
      t.header = {"log_t", "h"};
      for (std::size_t i = 0; i < h.size(); ++i) {
        t.add({r.log_times[i], h[i]});
        worst = std::max(worst, std::abs(h[i]));
      }
    } else {
      // Closed-form steady solution, or a synthetic log-periodic sample set
      // when no times are given.
      std::vector<double> times = c.times;
      std::vector<double> values;
      if (times.empty()) {
        RenewalSamples r;
        r.log_times = renewal_grid(c.s, -12.0, 3, 32);
        for (double lt : r.log_times) {
          const double time = std::exp(lt);
          r.values.push_back(steady_expansion(c.s, time) +
                             1e-3 * std::cos(kTwoPi * lt / f.period()) * std::pow(time, f.d));
        }
        const std::vector<double> h = renewal_residual(r, c.s);
        t.header = {"log_t", "h"};
        for (std::size_t i = 0; i < h.size(); ++i) {
          t.add({r.log_times[i], h[i]});
          worst = std::max(worst, std::abs(h[i]));
        }
      } else {
        t.header = {"t", "h"};
        for (double time : times) {
          const double h = steady_expansion(c.s, time) - f.lambda * steady_expansion(c.s, time / f.time_ratio) -
                           renewal_rhs(c.s, time);
          t.add({time, h});
          worst = std::max(worst, std::abs(h));
        }
      }
    }
    err << "max |h| = " << format_real(worst) << '\n';
  } else if (c.mode == "extract") {
    if (c.samples.empty()) throw InputError("extract mode needs --samples");
    const PeriodicProfile p = extract_periodic(read_samples(c.samples), c.s);
    t.header = {"phase", "p"};
    for (std::size_t i = 0; i < p.values.size(); ++i) t.add({p.phases[i], p.values[i]});
    err << "periodicity error = " << format_real(p.periodicity_error) << '\n';
  } else {
    throw InputError("unknown fractal mode '" + c.mode + "' (constants, renewal-check, extract)");
  }
  return t;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heat content of planar polygons and self-similar renewal checks", "heatpoly"};
  app.require_subcommand(1);
  RunConfig c;

  auto common = [&c](CLI::App* sub, bool polygon) {
    if (polygon) sub->add_option("--polygon", c.polygon, "Polygon JSON file")->required();
    sub->add_option("--t", c.times, "Comma-separated ascending times")->delimiter(',');
    sub->add_option("--tol", c.tol, "Absolute quadrature tolerance");
    sub->add_option("--seed", c.seed, "Monte Carlo seed");
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", c.out, "Output path (default standard output)");
  };

  CLI::App* expansion = app.add_subcommand("expansion", "Small-time expansion terms per time");
  common(expansion, true);
  expansion->add_flag("--no-interaction", c.no_interaction, "Drop the interaction terms");

  CLI::App* compare = app.add_subcommand("compare", "Exact heat content against the expansion");
  common(compare, true);
  compare->add_flag("--no-interaction", c.no_interaction, "Drop the interaction terms");
  compare->add_option("--max-cells", c.max_cells, "Cell budget of the outer quadrature");
  compare->add_option("--mc-samples", c.mc_samples, "Add a Monte Carlo estimate with this many samples");

  CLI::App* models = app.add_subcommand("models", "Model computations, formula beside oracle");
  common(models, false);
  models->add_option("subcase", c.subcase, "sector, two-wedge, three-halves, rectangle or cusp")->required();
  models->add_option("--beta", c.beta, "Sector opening, or cusp corner angle");
  models->add_option("--radius", c.radius, "Sector radius");
  models->add_option("--gamma1", c.gamma1, "First wedge opening");
  models->add_option("--gamma2", c.gamma2, "Second wedge opening");
  models->add_option("--alpha", c.alpha, "Gap between the wedges");
  models->add_option("--length", c.length, "Rectangle length");
  models->add_option("--height", c.height, "Rectangle height");

  CLI::App* fractal = app.add_subcommand("fractal", "Self-similar polyhedron constants and renewal checks");
  common(fractal, false);
  fractal->add_option("--s", c.s, "Scale ratio in (0, sqrt(2) - 1)")->required();
  fractal->add_option("--mode", c.mode, "constants, renewal-check or extract");
  fractal->add_option("--samples", c.samples, "CSV of log_t,E samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  Table table;
  int status = kOk;
  try {
    if (expansion->parsed()) table = detail::cmd_expansion(c);
    if (compare->parsed()) table = detail::cmd_compare(c);
    if (models->parsed()) table = detail::cmd_models(c);
    if (fractal->parsed()) table = detail::cmd_fractal(c, err);
  } catch (const GeometryError& e) {
    err << "unsupported geometry: " << e.what() << '\n';
    return kUnsupportedGeometry;
  } catch (const InputError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kBudgetExceeded;
  }
  if (table.partial) {
    err << "budget exceeded: results after row " << table.rows.size() << " are missing\n";
    status = kBudgetExceeded;
  }

  if (c.out.empty()) {
    write_table(out, table, c.format);
  } else {
    std::ofstream file(c.out);
    if (!file) {
      err << "invalid input: cannot write " << c.out << '\n';
      return kInvalidInput;
    }
    write_table(file, table, c.format);
  }
  return status;
}

}  // namespace heatpoly::cli
