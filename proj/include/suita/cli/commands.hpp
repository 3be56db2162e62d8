#ifndef SUITA_CLI_COMMANDS_HPP
#define SUITA_CLI_COMMANDS_HPP

#include "suita/bergman/suita.hpp"
#include "suita/cli/config.hpp"
#include "suita/extension/cutoff.hpp"
#include "suita/extension/ode.hpp"
#include "suita/extension/optimal.hpp"
#include "suita/extension/polar.hpp"
#include "suita/fuchsian/cyclic.hpp"
#include "suita/squeezing/squeeze.hpp"
#include "suita/torus/check.hpp"

#include <array>
#include <functional>

namespace suita::cli {

/// Two-column numeric data for a sweep.
struct PlotSeries {
  std::string name;
  std::string x_label;
  std::string y_label;
  std::vector<std::array<double, 2>> rows;
};

/// Per-criterion bookkeeping of the acceptance suite.
struct CriterionSummary {
  int id = 0;
  std::string title;
  bool pass = false;
  double seconds = 0.0;
  double budget = 0.0;  // seconds; 0 for none
  int checks = 0;
  int failed = 0;
};

struct RunResult {
  std::vector<ReportRecord> records;
  std::vector<PlotSeries> plots;
  std::vector<CriterionSummary> criteria;
};

inline std::string short_real(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

inline ReportRecord make_record(const std::string& command, const std::string& id, nlohmann::json inputs = {}) {
  ReportRecord r;
  r.command = command;
  r.input_id = id;
  r.inputs = inputs.is_null() ? nlohmann::json::object() : std::move(inputs);
  return r;
}

/// Runs `body` on a fresh record; library errors become a failed record.
inline ReportRecord guarded(ReportRecord rec, const std::function<void(ReportRecord&)>& body) {
  try {
    body(rec);
  } catch (const Error& e) {
    rec.fail_with(e.what());
  }
  return rec;
}

/// A count becomes sample points: the standard annulus points, or a spiral
/// inside the inscribed disc about 0.
inline std::vector<Complex> resolve_points(const nlohmann::json& p, const PlanarDomain& d) {
  std::vector<Complex> out;
  if (p.contains("list")) {
    for (const auto& z : p["list"]) out.push_back(complex_from_json(z));
    return out;
  }
  const int n = p.at("count").get<int>();
  if (d.is_annulus()) return annulus_sample_points(d.as_annulus().r_inner, n);
  double reach;
  if (d.is_disc()) {
    reach = 0.9 * d.as_disc().radius;
  } else {
    if (!d.contains({0.0, 0.0})) throw Error(ErrorKind::Parameter, "point counts need 0 inside the Jordan domain");
    reach = 0.8 * d.distance_to_boundary({0.0, 0.0});
  }
  for (int k = 0; k < n; ++k) out.push_back(std::polar(reach * k / n, kTwoPi * k / n));
  return out;
}

inline PlanarDomain domain_param(const RunConfig& c) { return parse_domain(c.params.at("domain").at("spec")); }

inline SuitaOptions suita_options(const RunConfig& c) {
  SuitaOptions o;
  o.tol = c.tol;
  if (c.params.contains("annulus-modes")) o.annulus_modes = c.params["annulus-modes"].get<int>();
  if (c.params.contains("quad-points")) o.quad_points = c.params["quad-points"].get<int>();
  return o;
}

inline GreenEvaluator::Options green_options(const RunConfig& c) {
  GreenEvaluator::Options o;
  o.annulus_modes = c.params.at("annulus-modes").get<int>();
  o.quad_points = c.params.at("quad-points").get<int>();
  o.tol = c.tol;
  return o;
}

inline std::vector<double> grid_param(const RunConfig& c, const std::string& name) {
  return c.params.at(name).get<std::vector<double>>();
}

// ---- individual commands ---------------------------------------------------

/// G(z, w) with its symmetry gap. Passes when G(z, w) <= sym_tol and the two
/// orders agree within sym_tol.
inline void cmd_green(const RunConfig& c, RunResult& out) {
  const auto domain = domain_param(c);
  const Complex z = complex_from_json(c.params["z"]);
  const Complex w = complex_from_json(c.params["w"]);
  auto rec = make_record("green", domain.describe() + "@" + point_id(z) + "," + point_id(w),
                         {{"domain", domain.describe()}, {"z", complex_json(z)}, {"w", complex_json(w)}});
  out.records.push_back(guarded(rec, [&](ReportRecord& r) {
    const GreenEvaluator g(domain, green_options(c));
    r.inputs["method"] = GreenEvaluator::method_name(g.method());
    const double gzw = g.green(z, w);
    const double gwz = g.green(w, z);
    r.add("green", gzw, "domains.green");
    r.add("green_swapped", gwz, "domains.green");
    r.add("asymmetry", std::abs(gzw - gwz), "domains.green");
    r.decide(std::min(-std::abs(gzw - gwz), -gzw), c.tol.sym_tol);
  }));
}

inline void cmd_capacity(const RunConfig& c, RunResult& out) {
  const auto domain = domain_param(c);
  const auto options = green_options(c);
  std::optional<GreenEvaluator> g;
  for (Complex z : resolve_points(c.params["points"], domain)) {
    auto rec = make_record("capacity", domain.describe() + "@" + point_id(z),
                           {{"domain", domain.describe()}, {"z", complex_json(z)}});
    out.records.push_back(guarded(rec, [&](ReportRecord& r) {
      if (!g) g.emplace(domain, options);
      const auto robin = robin_constant(*g, z);
      const double cap = std::exp(robin.value);
      r.add("robin", robin.value, "domains.robin_constant");
      r.add("capacity", cap, "domains.capacity");
      double margin = -std::abs(robin.at_fine - robin.at_coarse);
      if (domain.is_disc()) {
        const double R = domain.as_disc().radius;
        const double exact = R / (R * R - std::norm(z));
        r.add("capacity_closed_form", exact, "domains.capacity");
        margin = -std::abs(cap - exact) / exact;
      }
      r.decide(margin, c.tol.cap_tol);
    }));
  }
}

inline void cmd_bergman(const RunConfig& c, RunResult& out) {
  const auto domain = domain_param(c);
  const auto weight = parse_weight(c.params["weight"].get<std::string>());
  for (Complex z : resolve_points(c.params["points"], domain)) {
    auto rec = make_record("bergman", domain.describe() + "|" + weight.describe() + "@" + point_id(z),
                           {{"domain", domain.describe()}, {"weight", weight.describe()}, {"z", complex_json(z)}});
    out.records.push_back(guarded(rec, [&](ReportRecord& r) {
      KernelOptions k;
      k.tol = c.tol;
      const auto est = kernel_diag(domain, weight, z, k);
      r.add("kernel", est.value, "bergman.kernel_diag");
      r.add("basis_size", est.basis_size, "bergman.kernel_diag");
      r.add("gram_condition", est.gram_condition, "bergman.kernel_diag");
      r.add("truncation_error_estimate", est.truncation_error_estimate, "bergman.kernel_diag");
      if (est.ill_conditioned) r.warnings.push_back("ill-conditioned Gram");
      r.decide(-est.truncation_error_estimate, c.tol.trunc_tol);
    }));
  }
}

inline void cmd_suita(const RunConfig& c, RunResult& out) {
  const auto domain = domain_param(c);
  const auto options = suita_options(c);
  for (Complex z : resolve_points(c.params["points"], domain)) out.records.push_back(suita_record(domain, z, options));
}

inline void cmd_extended(const RunConfig& c, RunResult& out) {
  const auto domain = domain_param(c);
  const auto weight = parse_weight(c.params["weight"].get<std::string>());
  const auto options = suita_options(c);
  for (Complex z : resolve_points(c.params["points"], domain)) {
    out.records.push_back(extended_suita_check(domain, weight, z, options));
  }
}

inline std::string plot_name(const std::string& prefix, const std::string& id) {
  std::string s = prefix + "_" + id;
  for (char& ch : s) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-' || ch == '_' || ch == '=')) ch = '_';
  }
  return s;
}

inline void run_optimal(double delta, double eps, const std::vector<double>& a_grid, RunResult& out) {
  const std::string id = "delta=" + short_real(delta) + ",eps=" + short_real(eps);
  try {
    const auto ex = optimal_constant_experiment(delta, eps, a_grid);
    out.records.insert(out.records.end(), ex.records.begin(), ex.records.end());
    PlotSeries plot{plot_name("optimal-constant", id), "a", "ratio", {}};
    for (const auto& row : ex.rows) plot.rows.push_back({row.a, row.ratio});
    out.plots.push_back(std::move(plot));
  } catch (const Error& e) {
    out.records.push_back(make_record("optimal-constant", id, {{"delta", delta}, {"eps", eps}}).fail_with(e.what()));
  }
}

inline void cmd_optimal(const RunConfig& c, RunResult& out) {
  const auto a_grid = grid_param(c, "a-grid");
  for (double delta : grid_param(c, "delta")) {
    for (double eps : grid_param(c, "eps")) run_optimal(delta, eps, a_grid, out);
  }
}

inline void cmd_ode(const RunConfig& c, RunResult& out) {
  const auto grid = grid_param(c, "t-grid");
  for (double delta : grid_param(c, "delta")) out.records.push_back(ode_check(delta, grid));
}

/// Even samples on [-t0 - 2, -t0 + 1], a window around the transition.
inline std::vector<double> cutoff_samples(double t0, int n) {
  std::vector<double> s(n);
  for (int k = 0; k < n; ++k) s[k] = -t0 - 2.0 + 3.0 * k / std::max(1, n - 1);
  return s;
}

inline void cmd_cutoff(const RunConfig& c, RunResult& out) {
  const int samples = c.params["samples"].get<int>();
  for (double t0 : grid_param(c, "t0")) {
    for (double eps : grid_param(c, "eps")) out.records.push_back(cutoff_property_check(t0, eps, samples));
    out.records.push_back(cutoff_limit_check(t0, grid_param(c, "eps-limit"), cutoff_samples(t0, samples), c.tol));
  }
}

inline std::function<double(Complex)> test_function(const std::string& name) {
  if (name == "1") return [](Complex) { return 1.0; };
  if (name == "1+re") return [](Complex z) { return 1.0 + z.real(); };
  if (name == "1+im") return [](Complex z) { return 1.0 + z.imag(); };
  if (name == "cos") return [](Complex z) { return std::cos(z.real()); };
  throw Error(ErrorKind::Parameter, "unknown test function " + name);
}

/// Shell value at level t for Psi = log|z|^2 + psi0 on the unit disc against
/// the limit e^{-psi0} f(0), within 1e-3.
inline ReportRecord residual_record(double psi0, const std::string& f_name, double t) {
  std::ostringstream id;
  id.precision(6);
  id << "psi0=" << psi0 << ",f=" << f_name << ",t=" << t;
  auto rec = make_record("residual-measure", id.str(), {{"psi0", psi0}, {"f", f_name}, {"t", t}, {"domain", "disc:1"}});
  return guarded(rec, [&](ReportRecord& r) {
    const auto f = test_function(f_name);
    const auto est = residual_measure(PolarSpec::log_pole({0.0, 0.0}, psi0, PlanarDomain::disc()), f, t);
    const double expected = std::exp(-psi0) * f({0.0, 0.0});
    r.add("residual", est.value, "extension.residual_measure");
    r.add("error_estimate", est.error_estimate, "extension.residual_measure");
    r.add("expected", expected, "extension.residual_measure");
    r.decide(-std::abs(est.value - expected), 1e-3);
  });
}

inline void cmd_residual(const RunConfig& c, RunResult& out) {
  const double t = c.params["t"].get<double>();
  for (double psi0 : grid_param(c, "psi0")) {
    for (const auto& f : c.params["f"]) out.records.push_back(residual_record(psi0, f.get<std::string>(), t));
  }
}

inline void run_trend(double r, int kmax, const SuitaOptions& options, RunResult& out) {
  std::vector<TrendPoint> points;
  out.records.push_back(boundary_trend(r, kmax, &points, options));
  PlotSeries plot{plot_name("squeeze-trend", "annulus:" + short_real(r)), "distance", "C", {}};
  for (const auto& p : points) plot.rows.push_back({p.distance, p.series_ratio});
  out.plots.push_back(std::move(plot));
}

inline void cmd_squeeze(const RunConfig& c, RunResult& out) {
  const auto domain = domain_param(c);
  const auto options = suita_options(c);
  for (Complex p : resolve_points(c.params["points"], domain)) out.records.push_back(sandwich_check(domain, p, options));
  const int kmax = c.params["trend-kmax"].get<int>();
  if (kmax > 0 && domain.is_annulus()) run_trend(domain.as_annulus().r_inner, kmax, options, out);
}

inline void cmd_fuchsian(const RunConfig& c, RunResult& out) {
  const int N = c.params["N"].get<int>();
  try {
    const auto recs = inequality_check(grid_param(c, "c-grid"), N, c.tol);
    out.records.insert(out.records.end(), recs.begin(), recs.end());
  } catch (const Error& e) {
    out.records.push_back(make_record("fuchsian-check", "N=" + std::to_string(N), {{"N", N}}).fail_with(e.what()));
  }
}

inline void cmd_torus(const RunConfig& c, RunResult& out) {
  for (const auto& t : c.params["tau"]) {
    const Complex tau = complex_from_json(t);
    for (double dv : grid_param(c, "d")) {
      const std::string id = "tau=" + short_real(tau.real()) + "+" + short_real(tau.imag()) + "i,d=" + short_real(dv);
      try {
        if (dv != std::floor(dv)) throw Error(ErrorKind::Parameter, "degree must be an integer");
        const auto recs = torus_check(TorusSpec(tau), static_cast<int>(dv), c.tol);
        out.records.insert(out.records.end(), recs.begin(), recs.end());
      } catch (const Error& e) {
        out.records.push_back(make_record("torus-check", id, {{"tau", complex_json(tau)}, {"d", dv}}).fail_with(e.what()));
      }
    }
  }
}

/// Module dispatch for everything except `all`.
inline RunResult dispatch_module(const RunConfig& c) {
  static const std::map<std::string, void (*)(const RunConfig&, RunResult&)> table{
      {"green", cmd_green},
      {"capacity", cmd_capacity},
      {"bergman", cmd_bergman},
      {"suita-check", cmd_suita},
      {"extended-suita-check", cmd_extended},
      {"optimal-constant", cmd_optimal},
      {"ode-check", cmd_ode},
      {"cutoff-check", cmd_cutoff},
      {"residual-measure", cmd_residual},
      {"squeeze-check", cmd_squeeze},
      {"fuchsian-check", cmd_fuchsian},
      {"torus-check", cmd_torus},
  };
  RunResult out;
  const auto it = table.find(c.command);
  if (it == table.end()) throw ConfigError("command '" + c.command + "' has no module handler");
  try {
    it->second(c, out);
  } catch (const Error& e) {
    out.records.push_back(make_record(c.command, "run", c.params).fail_with(e.what()));
  }
  return out;
}

}  // namespace suita::cli

#endif  // SUITA_CLI_COMMANDS_HPP
