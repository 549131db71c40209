#pragma once

// Command-line front end: eval, table, error-scan and convergence.
// Exit codes: 0 success, 1 usage or domain error, 2 numerical failure.

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "circbridge/circbridge.hpp"

namespace circbridge::cli {

enum class Format { csv, json };

struct OutputSpec {
  Format format = Format::csv;
  std::optional<std::string> path;
  int precision = 17;
};

/// Shortest round-trip form at 17 digits, otherwise %.{precision}g.
inline std::string format_number(double v, int precision) {
  char buf[64];
  std::to_chars_result res = precision >= 17
                                 ? std::to_chars(buf, buf + sizeof buf, v)
                                 : std::to_chars(buf, buf + sizeof buf, v,
                                                 std::chars_format::general, precision);
  return std::string(buf, res.ptr);
}

using Cell = std::variant<std::monostate, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

using Meta = std::vector<std::pair<std::string, std::string>>;

inline void write_csv(const Table& t, const OutputSpec& spec, std::ostream& os) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    os << (i ? "," : "") << t.columns[i];
  }
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      if (const auto* d = std::get_if<double>(&row[i])) {
        os << format_number(*d, spec.precision);
      } else if (const auto* s = std::get_if<std::string>(&row[i])) {
        os << *s;
      }
    }
    os << '\n';
  }
}

inline void write_json(const Table& t, const Meta& meta, const OutputSpec& spec,
                       std::ostream& os) {
  nlohmann::ordered_json doc;
  doc["meta"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : meta) doc["meta"][k] = v;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json rec = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (const auto* d = std::get_if<double>(&row[i])) {
        // Round to the requested digits; the serializer then prints the shortest form.
        const std::string text = format_number(*d, spec.precision);
        double rounded = *d;
        std::from_chars(text.data(), text.data() + text.size(), rounded);
        rec[t.columns[i]] = rounded;
      } else if (const auto* s = std::get_if<std::string>(&row[i])) {
        rec[t.columns[i]] = *s;
      }
    }
    doc["rows"].push_back(std::move(rec));
  }
  os << doc.dump(2) << '\n';
}

inline void emit(const Table& t, const Meta& meta, const OutputSpec& spec, std::ostream& out) {
  std::ofstream file;
  std::ostream* os = &out;
  if (spec.path) {
    file.open(*spec.path, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot open output file " + *spec.path);
    os = &file;
  }
  if (spec.format == Format::csv) {
    write_csv(t, spec, *os);
  } else {
    write_json(t, meta, spec, *os);
  }
}

inline std::string echo(double v) { return format_number(v, 17); }

inline double wrap_mu_with_warning(double mu, std::ostream& err) {
  const double wrapped = wrap_angle(mu);
  if (wrapped != mu) {
    err << "warning: --mu " << echo(mu) << " wrapped to " << echo(wrapped) << '\n';
  }
  return wrapped;
}

inline std::vector<double> geometric_grid(double lo, double hi, int steps) {
  std::vector<double> out;
  if (steps == 1) {
    out.push_back(lo);
    return out;
  }
  for (int i = 0; i < steps; ++i) {
    double k = lo * std::pow(hi / lo, static_cast<double>(i) / (steps - 1));
    const double r = std::round(k);
    if (std::abs(r - k) <= 1e-9 * k) k = r;
    out.push_back(k);
  }
  return out;
}

inline const char* target_name(ScanTarget t) {
  switch (t) {
    case ScanTarget::log_ratio: return "log_ratio";
    case ScanTarget::ratio: return "ratio";
    case ScanTarget::cdf: return "cdf";
  }
  return "";
}

inline void add_output_options(CLI::App* cmd, OutputSpec& spec, std::string& path) {
  cmd->add_option("--format", spec.format, "Output format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Format>{{"csv", Format::csv}, {"json", Format::json}}));
  cmd->add_option("--out", path, "Output file (default: standard output)");
  cmd->add_option("--precision", spec.precision, "Significant digits")
      ->check(CLI::Range(6, 17));
}

inline constexpr double kCliQuadratureTol = 1e-13;

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Von Mises / normal bridge: densities, expansions and error-order scans",
               "circbridge"};
  app.require_subcommand(1);

  OutputSpec spec;
  std::string path;

  // eval
  double mu = 0.0, kappa = 1.0, x = 0.0;
  int order = 2;
  std::string quantity;
  auto* eval = app.add_subcommand("eval", "Evaluate one quantity at one point");
  eval->add_option("--mu", mu, "Mean direction (radians)")->required();
  eval->add_option("--kappa", kappa, "Concentration")->required();
  eval->add_option("--x", x, "Evaluation point (radians)")->required();
  eval->add_option("--quantity", quantity, "Quantity to evaluate")
      ->required()
      ->check(CLI::IsMember({"density", "logratio-exact", "logratio-approx", "ratio-approx",
                             "cdf-approx", "cdf-quad"}));
  eval->add_option("--order", order, "Expansion order for *-approx")->check(CLI::Range(1, 2));
  add_output_options(eval, spec, path);

  // table
  double eta = 0.5;
  int grid = 201;
  auto* table = app.add_subcommand("table", "Per-point comparison over the bulk");
  table->add_option("--mu", mu, "Mean direction (radians)")->required();
  table->add_option("--kappa", kappa, "Concentration")->required();
  table->add_option("--eta", eta, "Bulk parameter in (0, 1)");
  table->add_option("--grid", grid, "Number of grid points (odd)");
  add_output_options(table, spec, path);

  // error-scan
  ScanTarget target = ScanTarget::log_ratio;
  double kappa_min = 32.0, kappa_max = 2048.0;
  int steps = 7;
  std::string regime_name = "fixed";
  auto* scan = app.add_subcommand("error-scan", "Residual scan across concentrations");
  scan->add_option("--target", target, "Expansion to validate")
      ->required()
      ->transform(CLI::CheckedTransformer(std::map<std::string, ScanTarget>{
          {"log_ratio", ScanTarget::log_ratio},
          {"ratio", ScanTarget::ratio},
          {"cdf", ScanTarget::cdf}}));
  scan->add_option("--kappa-min", kappa_min, "Smallest concentration")->required();
  scan->add_option("--kappa-max", kappa_max, "Largest concentration")->required();
  scan->add_option("--steps", steps, "Number of geometric kappa steps")->required();
  scan->add_option("--eta", eta, "Bulk parameter (eta, or eta_tilde when shrunken)");
  scan->add_option("--grid", grid, "Grid points per kappa (odd, >= 11)");
  scan->add_option("--regime", regime_name, "Bulk regime")
      ->check(CLI::IsMember({"fixed", "shrunken"}));
  add_output_options(scan, spec, path);

  // convergence
  std::vector<double> kappas{4.0, 16.0, 64.0, 256.0};
  int theta_grid = 1001;
  auto* conv = app.add_subcommand("convergence",
                                  "Sup density gap between von Mises and matched wrapped normal");
  conv->add_option("--mu", mu, "Mean direction (radians)");
  conv->add_option("--kappas", kappas, "Concentrations")->delimiter(',');
  conv->add_option("--grid", theta_grid, "Theta grid points on [0, 2 pi]");
  add_output_options(conv, spec, path);

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("circbridge");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }
  if (!path.empty()) spec.path = path;

  try {
    Meta meta;
    Table t;
    if (*eval) {
      mu = wrap_mu_with_warning(mu, err);
      const VonMisesParams p(mu, kappa);
      double value = 0.0;
      if (quantity == "density") {
        value = vm_density(p, x);
      } else if (quantity == "logratio-exact") {
        value = log_ratio_exact(p, x);
      } else if (quantity == "cdf-quad") {
        value = vm_cdf_quadrature(p, x, kCliQuadratureTol);
      } else {
        const double dt = standardized_deviate(p, x).delta_tilde;
        if (quantity == "logratio-approx") {
          value = log_ratio_expansion(dt, kappa, order).value;
        } else if (quantity == "ratio-approx") {
          value = ratio_expansion(dt, kappa, order).value;
        } else {
          value = cdf_expansion(dt, kappa).value;
        }
      }
      meta = {{"command", "eval"}, {"mu", echo(mu)}, {"kappa", echo(kappa)},
              {"x", echo(x)}, {"quantity", quantity}};
      t.columns = {"mu", "kappa", "x", "quantity", "value"};
      t.rows.push_back({mu, kappa, x, quantity, value});
    } else if (*table) {
      if (grid < 3 || grid % 2 == 0) throw std::invalid_argument("--grid must be odd and >= 3");
      mu = wrap_mu_with_warning(mu, err);
      const VonMisesParams p(mu, kappa);
      const BulkSpec bulk = BulkSpec::fixed(eta);
      const double half_width = bulk.delta_radius(kappa) / std::numbers::sqrt2;
      meta = {{"command", "table"}, {"mu", echo(mu)}, {"kappa", echo(kappa)},
              {"eta", echo(eta)}, {"grid", std::to_string(grid)}};
      t.columns = {"x", "delta", "delta_tilde", "vm_density", "ref_normal_density",
                   "logratio_exact", "logratio_order1", "logratio_order2", "cdf_quad",
                   "cdf_approx", "residual_log", "residual_cdf"};
      for (int i = 0; i < grid; ++i) {
        const double dt = half_width * (i - grid / 2) / (grid / 2);
        const double xi = point_at_deviate(p, dt);
        const auto dev = standardized_deviate(p, xi);
        const double lr = log_ratio_exact(p, xi);
        const double lr1 = log_ratio_expansion(dt, kappa, 1).value;
        const double lr2 = log_ratio_expansion(dt, kappa, 2).value;
        const double fq = vm_cdf_quadrature(p, xi, kCliQuadratureTol);
        const double fa = cdf_expansion(dt, kappa).value;
        t.rows.push_back({xi, dev.delta, dt, vm_density(p, xi), reference_normal_density(p, xi),
                          lr, lr1, lr2, fq, fa, lr - lr2, fq - fa});
      }
    } else if (*scan) {
      if (!(kappa_min > 0.0) || !(kappa_max >= kappa_min) || steps < 1) {
        throw std::invalid_argument("need 0 < --kappa-min <= --kappa-max and --steps >= 1");
      }
      const BulkSpec bulk =
          regime_name == "fixed" ? BulkSpec::fixed(eta) : BulkSpec::shrunken(eta);
      const auto ks = geometric_grid(kappa_min, kappa_max, steps);
      const ScanReport r = residual_scan(bulk, ks, grid, target);
      meta = {{"command", "error-scan"}, {"target", target_name(target)},
              {"kappa_min", echo(kappa_min)}, {"kappa_max", echo(kappa_max)},
              {"steps", std::to_string(steps)}, {"eta", echo(eta)},
              {"regime", regime_name}, {"grid", std::to_string(grid)}};
      t.columns = {"record", "kappa", "max_residual", "max_normalized_residual",
                   "fixed_point_residual", "fitted_slope"};
      for (std::size_t i = 0; i < r.kappa_values.size(); ++i) {
        t.rows.push_back({std::string("kappa"), r.kappa_values[i], r.max_residual[i],
                          r.max_normalized_residual[i], r.fixed_point_residual[i],
                          std::monostate{}});
      }
      t.rows.push_back({std::string("slope"), std::monostate{}, std::monostate{},
                        std::monostate{}, std::monostate{}, r.fitted_slope});
    } else if (*conv) {
      mu = wrap_mu_with_warning(mu, err);
      std::string list;
      for (std::size_t i = 0; i < kappas.size(); ++i) list += (i ? "," : "") + echo(kappas[i]);
      meta = {{"command", "convergence"}, {"mu", echo(mu)}, {"kappas", list},
              {"grid", std::to_string(theta_grid)}};
      t.columns = {"kappa", "wn_scale", "sup_abs_diff"};
      for (double k : kappas) {
        t.rows.push_back({k, matched_wn_scale(k), matched_law_sup_difference(mu, k, theta_grid)});
      }
    }
    emit(t, meta, spec, out);
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace circbridge::cli
