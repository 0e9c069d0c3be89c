#include "hetsphere/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hetsphere/density_io.hpp"
#include "hetsphere/errors.hpp"
#include "hetsphere/greens.hpp"
#include "hetsphere/quadrature_oracle.hpp"
#include "hetsphere/rayleigh_ritz.hpp"
#include "hetsphere/sumrules.hpp"

namespace hetsphere {

namespace {

struct RunConfig {
  std::string density_path;
  std::vector<int> orders{2, 3};
  std::vector<int> l_max{30};
  std::string kappa_range;
  int retained = 0;
  double tolerance = 1e-8;
  std::string format;
  std::string out_path;
  bool allow_large_lmax = false;

  int green_q = 0;
  double green_x = 0.0;
  std::vector<int> gaunt_indices;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string g17(double v) { return fmt("%.17g", v); }

std::vector<double> parse_kappa_range(const std::string& text) {
  double a = 0.0, b = 0.0, step = 0.0;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !(in >> std::ws).eof()) {
    throw ConfigError("--kappa-range expects A:B:STEP, got '" + text + "'");
  }
  if (!(step > 0.0) || b < a) throw ConfigError("--kappa-range needs STEP > 0 and B >= A");
  std::vector<double> values;
  const long n = std::lround(std::floor((b - a) / step + 1e-9));
  for (long i = 0; i <= n; ++i) values.push_back(a + static_cast<double>(i) * step);
  return values;
}

DensitySpec load_config_density(const RunConfig& cfg) {
  if (cfg.density_path.empty()) return DensitySpec();
  try {
    return load_density(cfg.density_path);
  } catch (const DensityError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ConfigError(ex.what());
  }
}

void check_orders(const RunConfig& cfg) {
  if (cfg.orders.empty()) throw ConfigError("--order needs at least one value");
  for (int p : cfg.orders) {
    if (p != 2 && p != 3) throw UnsupportedOrder(p);
  }
}

void check_lmax(const RunConfig& cfg, const DensitySpec& d) {
  if (cfg.l_max.empty()) throw ConfigError("--lmax needs at least one value");
  for (int l : cfg.l_max) {
    if (l <= d.band_limit() || l < 1) throw ConfigError("--lmax must exceed the density band limit");
    if (l > kDefaultMaxLmax && !cfg.allow_large_lmax) {
      throw ConfigError("--lmax " + std::to_string(l) + " exceeds " + std::to_string(kDefaultMaxLmax) +
                        "; pass --allow-large-lmax to proceed");
    }
    if (cfg.retained > basis_dim(l)) {
      throw ConfigError("--retained exceeds the basis dimension at l_max " + std::to_string(l));
    }
  }
  if (cfg.retained < 0) throw ConfigError("--retained must be positive");
}

CutoffPolicy policy_of(const RunConfig& cfg) {
  if (!(cfg.tolerance > 0.0)) throw ConfigError("--tol must be positive");
  CutoffPolicy p;
  p.tolerance = cfg.tolerance;
  return p;
}

std::string format_of(const RunConfig& cfg, const char* fallback) {
  const std::string f = cfg.format.empty() ? fallback : cfg.format;
  if (f != "json" && f != "csv") throw ConfigError("--format must be csv or json");
  return f;
}

// Emits to --out when given, otherwise to `out`.
void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.out_path, std::ios::binary);
  if (!file) throw ConfigError("cannot write " + cfg.out_path);
  file << text;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

int cmd_exact(const RunConfig& cfg, std::ostream& out) {
  check_orders(cfg);
  const auto fmt_name = format_of(cfg, "json");
  const auto d = load_config_density(cfg);
  validate_density(d);
  const auto reports = exact_sum_rules(d, cfg.orders, policy_of(cfg));
  if (fmt_name == "csv") {
    std::string text = "order,value,error_estimate,cutoff,I1_0,I2_00,I3_000,J1_00,J2_000,e1,e2,e3,e4\n";
    for (const auto& r : reports) {
      const auto& c = r.components;
      text += std::to_string(r.order) + "," + g17(r.value) + "," + g17(r.error_estimate) + "," +
              std::to_string(r.cutoff) + "," + g17(c.I1_0) + "," + g17(c.I2_00) + "," + g17(c.I3_000) + "," +
              g17(c.J1_00) + "," + g17(c.J2_000) + "," + g17(r.e0.e1) + "," + g17(r.e0.e2) + "," +
              g17(r.e0.e3) + "," + g17(r.e0.e4) + "\n";
    }
    emit(cfg, out, text);
    return kExitOk;
  }
  if (reports.size() == 1) {
    emit(cfg, out, dump(report_to_json(reports.front())));
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(report_to_json(r));
    emit(cfg, out, dump(arr));
  }
  return kExitOk;
}

struct NumericRow {
  double kappa = 0.0;
  int order = 2;
  int l_max = 0;
  double exact = 0.0;
  double numeric = 0.0;
  int n_retained = 0;
  double weyl_tail = 0.0;
};

// Exact and numeric values for one density over every (order, l_max).
std::vector<NumericRow> numeric_rows(const DensitySpec& d, double kappa, const RunConfig& cfg) {
  validate_density(d);
  const auto reports = exact_sum_rules(d, cfg.orders, policy_of(cfg));
  SolveOptions opts;
  opts.allow_large_lmax = cfg.allow_large_lmax;
  std::vector<NumericRow> rows;
  std::vector<SpectrumApprox> spectra;
  for (int l : cfg.l_max) spectra.push_back(solve_spectrum(d, l, opts));
  for (std::size_t k = 0; k < cfg.orders.size(); ++k) {
    for (const auto& spec : spectra) {
      NumericRow row;
      row.kappa = kappa;
      row.order = cfg.orders[k];
      row.l_max = spec.l_max;
      row.exact = reports[k].value;
      row.n_retained = cfg.retained > 0 ? cfg.retained : spec.n_retained;
      row.numeric = numeric_sum_rule(spec, row.order, row.n_retained);
      row.weyl_tail = weyl_tail(row.order, row.n_retained).value;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string rows_csv(const std::vector<NumericRow>& rows) {
  std::string text = "kappa,order,l_max,exact,numeric,abs_err,n_retained,weyl_tail\n";
  for (const auto& r : rows) {
    text += g17(r.kappa) + "," + std::to_string(r.order) + "," + std::to_string(r.l_max) + "," + g17(r.exact) +
            "," + g17(r.numeric) + "," + g17(std::abs(r.numeric - r.exact)) + "," +
            std::to_string(r.n_retained) + "," + g17(r.weyl_tail) + "\n";
  }
  return text;
}

nlohmann::json row_json(const NumericRow& r) {
  return {{"order", r.order},         {"l_max", r.l_max},     {"value", r.numeric},
          {"exact", r.exact},         {"abs_err", std::abs(r.numeric - r.exact)},
          {"n_retained", r.n_retained}, {"weyl_tail", r.weyl_tail}};
}

int cmd_numeric(const RunConfig& cfg, std::ostream& out) {
  check_orders(cfg);
  const auto fmt_name = format_of(cfg, "json");
  const auto d = load_config_density(cfg);
  check_lmax(cfg, d);
  const auto rows = numeric_rows(d, 1.0, cfg);
  if (fmt_name == "csv") {
    emit(cfg, out, rows_csv(rows));
  } else if (rows.size() == 1) {
    emit(cfg, out, dump(row_json(rows.front())));
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) arr.push_back(row_json(r));
    emit(cfg, out, dump(arr));
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  check_orders(cfg);
  const auto fmt_name = format_of(cfg, "csv");
  if (cfg.kappa_range.empty()) throw ConfigError("sweep needs --kappa-range A:B:STEP");
  const auto kappas = parse_kappa_range(cfg.kappa_range);
  // Template at unit strength: the κ Y_10 family unless a coefficient file is given.
  const DensitySpec base = cfg.density_path.empty() ? kappa_y10(1.0) : load_config_density(cfg);
  if (base.homogeneous()) throw ConfigError("sweep template density has no coefficients");
  check_lmax(cfg, base);

  std::vector<std::future<std::vector<NumericRow>>> jobs;
  for (double kappa : kappas) {
    jobs.push_back(std::async(std::launch::async, [&, kappa] { return numeric_rows(base.scaled(kappa), kappa, cfg); }));
  }
  std::vector<NumericRow> rows;
  std::exception_ptr failure;
  for (auto& job : jobs) {
    try {
      const auto part = job.get();
      rows.insert(rows.end(), part.begin(), part.end());
    } catch (...) {
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  if (fmt_name == "csv") {
    emit(cfg, out, rows_csv(rows));
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
      auto j = row_json(r);
      j["kappa"] = r.kappa;
      arr.push_back(j);
    }
    emit(cfg, out, dump(arr));
  }
  return kExitOk;
}

int cmd_greens(const RunConfig& cfg, std::ostream& out) {
  out << fmt("%.15g", green_closed(cfg.green_q, cfg.green_x)) << "\n";
  return kExitOk;
}

int cmd_gaunt(const RunConfig& cfg, std::ostream& out) {
  const auto& i = cfg.gaunt_indices;
  if (i.size() != 6) throw ConfigError("gaunt expects l1 m1 l2 m2 l3 m3");
  out << fmt("%.15g", gaunt(i[0], i[1], i[2], i[3], i[4], i[5])) << "\n";
  return kExitOk;
}

// Compares the quadrature oracles with the coefficient-space engine.
int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const DensitySpec d = cfg.density_path.empty() ? kappa_y10(1.0) : load_config_density(cfg);
  validate_density(d);
  const SpectralEngine engine(d, policy_of(cfg));
  bool ok = true;
  auto line = [&](const std::string& name, double exact, const OracleValue& o) {
    const double tol = 1e-4 * std::max(std::abs(exact), 1e-12) + std::max(o.error_estimate, 1e-12);
    const bool pass = std::abs(o.value - exact) <= tol;
    ok = ok && pass;
    out << (pass ? "PASS " : "FAIL ") << name << " engine=" << fmt("%.12g", exact) << " oracle=" << fmt("%.12g", o.value)
        << " estimate=" << fmt("%.3g", o.error_estimate) << "\n";
  };
  for (int q = 0; q <= 2; ++q) line("I1_" + std::to_string(q), engine.I1(q), oracle_I1(d, q));
  line("J1_00", engine.J1(0, 0).value, oracle_J1(d, 0, 0));
  line("J1_11", engine.J1(1, 1).value, oracle_J1(d, 1, 1));
  return ok ? kExitOk : kExitMismatch;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Spectral sum rules of the Laplacian on a sphere with a variable density"};
  app.require_subcommand(1);

  auto add_density = [&](CLI::App* sub) {
    sub->add_option("--density", cfg.density_path, "Density JSON file (homogeneous sphere when omitted)");
  };
  auto add_common = [&](CLI::App* sub) {
    add_density(sub);
    sub->add_option("--order", cfg.orders, "Sum-rule orders, comma separated")->delimiter(',');
    sub->add_option("--tol", cfg.tolerance, "Cutoff-doubling tolerance");
    sub->add_option("--format", cfg.format, "csv or json");
    sub->add_option("--out", cfg.out_path, "Write output to this file");
  };
  auto add_spectral = [&](CLI::App* sub) {
    sub->add_option("--lmax", cfg.l_max, "Basis cutoff(s), comma separated")->delimiter(',');
    sub->add_option("--retained", cfg.retained, "Ritz values kept before the Weyl tail (default dim/3)");
    sub->add_flag("--allow-large-lmax", cfg.allow_large_lmax, "Permit l_max above 96");
  };

  auto* exact = app.add_subcommand("exact", "Exact renormalized sum rules with components");
  add_common(exact);
  auto* numeric = app.add_subcommand("numeric", "Rayleigh-Ritz sum rules with Weyl completion");
  add_common(numeric);
  add_spectral(numeric);
  auto* sweep = app.add_subcommand("sweep", "Exact and numeric sum rules over a density strength range");
  add_common(sweep);
  add_spectral(sweep);
  sweep->add_option("--kappa-range", cfg.kappa_range, "A:B:STEP");
  auto* greens = app.add_subcommand("greens", "Closed-form Green's function G^(q)(x)");
  greens->add_option("--q", cfg.green_q, "Order 0, 1 or 2")->required();
  greens->add_option("--x", cfg.green_x, "Geodesic cosine")->required();
  auto* gaunt_cmd = app.add_subcommand("gaunt", "Gaunt coefficient for l1 m1 l2 m2 l3 m3");
  gaunt_cmd->add_option("indices", cfg.gaunt_indices, "l1 m1 l2 m2 l3 m3")->required()->expected(6);
  auto* verify = app.add_subcommand("verify", "Check the engine against direct quadrature");
  add_density(verify);
  verify->add_option("--tol", cfg.tolerance, "Cutoff-doubling tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalidConfig;
  }

  try {
    if (*exact) return cmd_exact(cfg, out);
    if (*numeric) return cmd_numeric(cfg, out);
    if (*sweep) return cmd_sweep(cfg, out);
    if (*greens) return cmd_greens(cfg, out);
    if (*gaunt_cmd) return cmd_gaunt(cfg, out);
    if (*verify) return cmd_verify(cfg, out);
  } catch (const DensityError& e) {
    err << "error: invalid density: " << e.what() << "\n";
    return kExitInvalidDensity;
  } catch (const NonConverged& e) {
    err << "error: not converged: " << e.what() << "\n";
    return kExitNonConverged;
  } catch (const NotPositiveDefinite& e) {
    err << "error: " << e.what() << "\n";
    return kExitNotPositiveDefinite;
  } catch (const std::exception& e) {
    // ConfigError, DomainError (singular points, bad indices, guards), malformed input.
    err << "error: " << e.what() << "\n";
    return kExitInvalidConfig;
  }
  return kExitInvalidConfig;
}

}  // namespace hetsphere
