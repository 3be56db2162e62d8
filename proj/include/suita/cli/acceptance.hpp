#ifndef SUITA_CLI_ACCEPTANCE_HPP
#define SUITA_CLI_ACCEPTANCE_HPP

#include "suita/cli/commands.hpp"

#include <chrono>

namespace suita::cli {

// Criteria 1-10 of the acceptance suite. Each criterion emits ordinary
// records; it passes when all of them pass. Wall time is measured here but
// kept out of the records so that the CSV summary stays deterministic.

inline void criterion_disc(const Tolerances& tol, RunResult& out) {
  SuitaOptions options;
  options.tol = tol;
  const auto disc = PlanarDomain::disc();
  const auto circle = PlanarDomain::jordan_circle(1.0);
  for (Complex z : {Complex(0.0, 0.0), Complex(0.3, 0.0), Complex(0.0, 0.6)}) {
    const auto pid = point_id(z);
    out.records.push_back(guarded(make_record("suita-check", "closed-form:disc@" + pid, {{"z", complex_json(z)}}),
                                  [&](ReportRecord& r) {
                                    const double c = suita_ratio_disc_closed_form(z);
                                    r.add("ratio", c, "bergman.suita_ratio_disc_closed_form");
                                    r.decide(-std::abs(c - 1.0), 1e-12);
                                  }));
    out.records.push_back(guarded(make_record("suita-check", "exact-pipeline:disc@" + pid, {{"z", complex_json(z)}}),
                                  [&](ReportRecord& r) {
                                    const double c = suita_ratio(disc, z, options).ratio;
                                    r.add("ratio", c, "bergman.suita_ratio");
                                    r.decide(-std::abs(c - 1.0), 1e-12);
                                  }));
    out.records.push_back(guarded(make_record("suita-check", "nystrom-pipeline:" + circle.describe() + "@" + pid,
                                              {{"z", complex_json(z)}, {"domain", "circle:1"}}),
                                  [&](ReportRecord& r) {
                                    const auto res = suita_ratio(circle, z, options);
                                    r.add("capacity", res.capacity, "domains.capacity");
                                    r.add("kernel", res.kernel.value, "bergman.kernel_diag");
                                    r.add("ratio", res.ratio, "bergman.suita_ratio");
                                    r.decide(-std::abs(res.ratio - 1.0), 1e-6);
                                  }));
  }
}

/// Basis range and mode count both doubled.
inline SuitaOptions doubled_options(const PlanarDomain& d, Complex z, const SuitaOptions& base) {
  SuitaOptions o = base;
  o.annulus_modes = 2 * base.annulus_modes;
  const BasisRange r = base.range.value_or(default_basis(d, WeightSpec(), z));
  o.range = BasisRange{2 * r.n_min, 2 * r.n_max};
  return o;
}

inline void criterion_annulus(const Tolerances& tol, RunResult& out) {
  SuitaOptions options;
  options.tol = tol;
  const auto annulus = PlanarDomain::annulus(0.2);
  for (Complex z : annulus_sample_points(0.2)) {
    const auto base = suita_record(annulus, z, options);
    out.records.push_back(base);
    const std::string id = annulus.describe() + "@" + point_id(z);
    out.records.push_back(guarded(make_record("suita-check", "strict-margin:" + id, {{"z", complex_json(z)}}),
                                  [&](ReportRecord& r) {
                                    if (!base.error.empty()) throw Error(ErrorKind::Parameter, base.error);
                                    const double c = base.get("ratio");
                                    r.add("ratio", c, "bergman.suita_ratio");
                                    r.add("one_minus_ratio", 1.0 - c, "bergman.suita_ratio");
                                    r.decide(std::min(c, 1.0 - c) - 1e-3, 0.0);
                                  }));
    out.records.push_back(guarded(make_record("suita-check", "doubled-truncation:" + id, {{"z", complex_json(z)}}),
                                  [&](ReportRecord& r) {
                                    if (!base.error.empty()) throw Error(ErrorKind::Parameter, base.error);
                                    const double c = base.get("ratio");
                                    const double c2 = suita_ratio(annulus, z, doubled_options(annulus, z, options)).ratio;
                                    r.add("ratio", c, "bergman.suita_ratio");
                                    r.add("ratio_doubled", c2, "bergman.suita_ratio");
                                    r.add("change", std::abs(c2 - c), "bergman.suita_ratio");
                                    r.decide(1e-6 - std::abs(c2 - c), 0.0);
                                  }));
  }
}

inline void criterion_optimal(RunResult& out) {
  const std::vector<double> a_grid{0.5, 0.1, 0.01, 1e-3, 1e-4};
  for (double delta : {0.5, 1.0, 2.0}) {
    for (double eps : {0.0, 0.1}) run_optimal(delta, eps, a_grid, out);
  }
}

inline void criterion_ode(RunResult& out) {
  const auto grid = log_grid(0.01, 50.0, 200);
  for (double delta : {0.1, 0.5, 1.0, 2.0, 10.0}) out.records.push_back(ode_check(delta, grid));
}

inline void criterion_cutoff(const Tolerances& tol, RunResult& out) {
  for (double t0 : {1.0, 5.0}) {
    for (double eps : {0.2, 0.05}) out.records.push_back(cutoff_property_check(t0, eps, 10000));
    out.records.push_back(cutoff_limit_check(t0, {0.2, 0.1, 0.05, 0.01}, cutoff_samples(t0, 10000), tol));
  }
}

inline void criterion_residual(RunResult& out) {
  for (double psi0 : {0.0, -0.7, 0.3}) {
    for (const char* f : {"1", "1+re"}) out.records.push_back(residual_record(psi0, f, 20.0));
  }
}

inline void criterion_fuchsian(const Tolerances& tol, RunResult& out) {
  const int N = 256;
  const auto grid = default_c_grid();
  std::vector<ReportRecord> recs;
  try {
    recs = inequality_check(grid, N, tol);
  } catch (const Error& e) {
    out.records.push_back(make_record("fuchsian-check", "N=256").fail_with(e.what()));
    return;
  }
  for (const auto& base : recs) {
    out.records.push_back(base);
    // Strict form: positive margin, tail below 1e-8, chain rule = closed form.
    out.records.push_back(guarded(make_record("fuchsian-check", "strict:" + base.input_id, base.inputs),
                                  [&](ReportRecord& r) {
                                    if (!base.error.empty()) throw Error(ErrorKind::NonConvergence, base.error);
                                    const double margin = base.get("sum") - base.get("product");
                                    const double tail = base.get("tail_bound");
                                    const double gap = base.get("max_chain_closed_gap");
                                    r.add("sum_minus_product", margin, "fuchsian.fuchsian_sums");
                                    r.add("tail_bound", tail, "fuchsian.fuchsian_sums");
                                    r.add("max_chain_closed_gap", gap, "fuchsian.fuchsian_sums");
                                    const bool ok = margin > 0.0 && tail < 1e-8 && gap <= 1e-12;
                                    r.decide(ok ? margin : -std::numeric_limits<double>::infinity(), 0.0);
                                  }));
  }
}

inline void criterion_squeeze(const Tolerances& tol, RunResult& out) {
  SuitaOptions options;
  options.tol = tol;
  for (double r : {0.2, 0.04}) {
    const auto d = PlanarDomain::annulus(r);
    for (Complex p : annulus_sample_points(r)) out.records.push_back(sandwich_check(d, p, options));
  }
  run_trend(0.2, 4, options, out);
}

inline void criterion_torus(const Tolerances& tol, RunResult& out) {
  for (Complex tau : {Complex(0.0, 1.0), Complex(0.5, 1.0)}) {
    for (int d : {4, 6}) {
      try {
        const auto recs = torus_check(TorusSpec(tau), d, tol);
        out.records.insert(out.records.end(), recs.begin(), recs.end());
      } catch (const Error& e) {
        out.records.push_back(make_record("torus-check", "d=" + std::to_string(d)).fail_with(e.what()));
      }
    }
  }
}

inline void criterion_extended(const Tolerances& tol, RunResult& out) {
  SuitaOptions options;
  options.tol = tol;
  const auto annulus = PlanarDomain::annulus(0.2);
  const auto pts = annulus_sample_points(0.2);
  for (const WeightSpec& w : {WeightSpec(HarmonicLog{0.3}), WeightSpec(HarmonicRe{0.2})}) {
    for (int k : {0, 2, 4, 6}) out.records.push_back(extended_suita_check(annulus, w, pts[k], options));
  }
  // h = 0: the extended check must reproduce the plain Suita ratio.
  for (int k : {0, 2, 4, 6}) {
    const auto ext = extended_suita_check(annulus, WeightSpec(), pts[k], options);
    out.records.push_back(ext);
    out.records.push_back(guarded(
        make_record("extended-suita-check", "unweighted-reduction:" + annulus.describe() + "@" + point_id(pts[k]),
                    {{"z", complex_json(pts[k])}}),
        [&](ReportRecord& r) {
          if (!ext.error.empty()) throw Error(ErrorKind::Parameter, ext.error);
          const double from_ext = ext.get("capacity_sq") / ext.get("pi_rho_kernel");
          const double plain = suita_ratio(annulus, pts[k], options).ratio;
          r.add("ratio", from_ext, "bergman.extended_suita_check");
          r.add("suita_ratio", plain, "bergman.suita_ratio");
          r.add("difference", std::abs(from_ext - plain), "bergman.extended_suita_check");
          r.decide(1e-9 - std::abs(from_ext - plain), 0.0);
        }));
  }
}

struct CriterionDef {
  int id;
  const char* title;
  double budget;  // seconds
  std::function<void(const Tolerances&, RunResult&)> run;
};

inline const std::vector<CriterionDef>& criteria() {
  static const std::vector<CriterionDef> defs{
      {1, "disc equality", 10, criterion_disc},
      {2, "annulus strict inequality", 30, criterion_annulus},
      {3, "optimality limit", 30, [](const Tolerances&, RunResult& o) { criterion_optimal(o); }},
      {4, "ODE pair", 5, [](const Tolerances&, RunResult& o) { criterion_ode(o); }},
      {5, "cutoff family", 10, criterion_cutoff},
      {6, "residual measure", 10, [](const Tolerances&, RunResult& o) { criterion_residual(o); }},
      {7, "Fuchsian inequality", 5, criterion_fuchsian},
      {8, "squeezing sandwich", 60, criterion_squeeze},
      {9, "torus", 120, criterion_torus},
      {10, "extended Suita", 60, criterion_extended},
  };
  return defs;
}

/// Runs the selected criteria (all when `only` is empty) and appends one
/// "acceptance" summary record per criterion.
inline RunResult run_acceptance(const Tolerances& tol, const std::vector<int>& only = {}) {
  RunResult total;
  for (const auto& def : criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), def.id) == only.end()) continue;
    RunResult part;
    const auto start = std::chrono::steady_clock::now();
    def.run(tol, part);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CriterionSummary s{def.id, def.title, true, seconds, def.budget, static_cast<int>(part.records.size()), 0};
    for (const auto& r : part.records) s.failed += r.pass ? 0 : 1;
    s.pass = s.failed == 0;
    auto summary = make_record("acceptance", "criterion-" + std::to_string(def.id), {{"title", def.title}});
    summary.add("checks", s.checks, "cli.run_acceptance");
    summary.add("failed_checks", s.failed, "cli.run_acceptance");
    summary.decide(-static_cast<double>(s.failed), 0.0);
    total.records.insert(total.records.end(), part.records.begin(), part.records.end());
    total.records.push_back(summary);
    total.plots.insert(total.plots.end(), part.plots.begin(), part.plots.end());
    total.criteria.push_back(s);
  }
  return total;
}

}  // namespace suita::cli

#endif  // SUITA_CLI_ACCEPTANCE_HPP
