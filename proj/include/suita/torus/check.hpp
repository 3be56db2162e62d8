#ifndef SUITA_TORUS_CHECK_HPP
#define SUITA_TORUS_CHECK_HPP

#include "suita/extension/polar.hpp"
#include "suita/report.hpp"
#include "suita/torus/bergman.hpp"
#include "suita/torus/green.hpp"

#include <vector>

namespace suita {

struct DegreeRatio {
  double a = 0.0;       // -Delta_omega g off the pole
  double b = 0.0;       // c_1(L, h) = b omega
  double volume = 0.0;  // int_X omega by quadrature
  double ratio() const { return 2.0 * a / b; }
};

/// a from (i/pi) d d-bar g = -a omega and b from (i/2pi) d d-bar(-log h) =
/// b omega, both by finite differences at the Laplacian samples.
inline DegreeRatio degree_ratio(const ArakelovGreen& g, const ThetaBasis& basis, int grid = 128) {
  const double T = g.torus().im();
  DegreeRatio out;
  const auto samples = g.laplacian_samples();
  const double h = 2.5e-3;
  for (Complex z : samples) {
    out.a += -g.laplacian_omega(z);
    double lap = -60.0 * -basis.log_weight(z);
    for (Complex e : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
      lap += 16.0 * (-basis.log_weight(z + h * e) - basis.log_weight(z - h * e)) -
             (-basis.log_weight(z + 2.0 * h * e) - basis.log_weight(z - 2.0 * h * e));
    }
    out.b += T / (4.0 * kPi) * lap / (12.0 * h * h);
  }
  out.a /= samples.size();
  out.b /= samples.size();
  // Midpoint rule for int density dlambda over the fundamental parallelogram.
  const double cell = T / (static_cast<double>(grid) * grid);
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) out.volume += g.torus().volume_density() * cell;
  }
  return out;
}

/// (2 / Im tau) times the residual measure of Psi = 2g at the pole, which
/// is the omega-mass 2 c_X^{-2} in the (1,1)-form convention.
inline ResidualEstimate torus_residual_mass(const ArakelovGreen& g, double t, const ResidualOptions& opts = {}) {
  PolarSpec p;
  p.pole = {0.0, 0.0};
  p.psi = [&g](Complex z) { return 2.0 * g(z) - std::log(std::norm(z)); };
  const double reach = 0.25 * std::min(1.0, g.torus().im());
  p.inside = [reach](Complex z) { return std::abs(z) < reach; };
  p.description = "torus:2g";
  ResidualEstimate r = residual_measure(p, [](Complex) { return 1.0; }, t, opts);
  const double scale = 2.0 / g.torus().im();
  r.value *= scale;
  r.error_estimate *= scale;
  return r;
}

struct TorusCheckOptions {
  std::vector<Complex> base_points{{0.0, 0.0}, {0.3, 0.0}, {0.1, 0.4}};
  Complex shifted_pole{0.3, 0.1};
  int grid = 128;
  double shell_t = 20.0;
  double kernel_spread_tol = 1e-6;
  double degree_ratio_tol = 1e-6;
};

/// Every torus assertion for one (tau, d), as separate records.
inline std::vector<ReportRecord> torus_check(const TorusSpec& X, int d, const Tolerances& tol = Tolerances(),
                                             const TorusCheckOptions& opt = TorusCheckOptions()) {
  std::vector<ReportRecord> out;
  const std::string id = X.describe() + ",d=" + std::to_string(d);
  const nlohmann::json inputs = {{"tau", {X.tau.real(), X.tau.imag()}}, {"d", d}, {"terms", X.terms}};
  const auto make = [&](const std::string& part) {
    ReportRecord r;
    r.command = "torus-check";
    r.input_id = id + ":" + part;
    r.inputs = inputs;
    return r;
  };

  // Laplacian and kernel: independent of gamma.
  std::optional<ArakelovGreen> g0;
  {
    auto rec = make("laplacian");
    try {
      g0.emplace(X, GreenNormalization::Arakelov, tol, false);
      const double dev = g0->laplacian_deviation();
      rec.add("max_abs_laplacian_plus_one", dev, "torus.arakelov_green");
      rec.decide(-dev, tol.laplacian_tol);
    } catch (const Error& e) {
      rec.fail_with(e.what());
    }
    out.push_back(rec);
  }

  std::optional<TorusBergman> kernel;
  std::vector<double> diag;
  {
    auto rec = make("kernel-constancy");
    try {
      kernel.emplace(X, d, opt.grid);
      rec.add("gram_condition", kernel->gram().condition, "torus.torus_bergman");
      rec.add("gram_hermitian_gap", kernel->gram().hermitian_gap, "torus.torus_bergman");
      rec.add("gram_refinement_gap", kernel->gram().refinement_gap, "torus.torus_bergman");
      for (std::size_t k = 0; k < opt.base_points.size(); ++k) {
        diag.push_back(kernel->diagonal(opt.base_points[k]));
        rec.add("kernel_p" + std::to_string(k), diag.back(), "torus.torus_bergman");
      }
      const auto [lo, hi] = std::minmax_element(diag.begin(), diag.end());
      rec.add("kernel_spread", *hi - *lo, "torus.torus_bergman");
      rec.decide(-(*hi - *lo), opt.kernel_spread_tol);
    } catch (const Error& e) {
      rec.fail_with(e.what());
    }
    out.push_back(rec);
  }

  {
    auto rec = make("degree-ratio");
    try {
      if (!g0) throw Error(ErrorKind::LaplacianVerification, "Green function unavailable");
      const auto dr = degree_ratio(*g0, ThetaBasis(X, d), opt.grid);
      rec.add("a", dr.a, "torus.degree_ratio");
      rec.add("b", dr.b, "torus.degree_ratio");
      rec.add("two_a_over_b", dr.ratio(), "torus.degree_ratio");
      rec.add("two_over_d", 2.0 / d, "torus.degree_ratio");
      rec.add("a_omega_mass", dr.a * dr.volume, "torus.degree_ratio");
      const double gap = std::max(std::abs(dr.ratio() - 2.0 / d), std::abs(dr.a * dr.volume - 1.0));
      rec.decide(-gap, opt.degree_ratio_tol);
    } catch (const Error& e) {
      rec.fail_with(e.what());
    }
    out.push_back(rec);
  }

  const double delta = 0.5 * d - 1.0;
  for (GreenNormalization norm : {GreenNormalization::Arakelov, GreenNormalization::Negative}) {
    const std::string tag = to_string(norm);
    std::optional<ArakelovGreen> g;
    std::optional<TorusCapacity> cap;
    auto rec = make("arak1:" + tag);
    try {
      g.emplace(X, norm, tol);
      cap = torus_capacity(*g);
      const auto shifted = torus_capacity(*g, opt.shifted_pole);
      if (!kernel) throw Error(ErrorKind::SolverSingular, "torus kernel unavailable");
      rec.add("gamma", g->gamma(), "torus.arakelov_green");
      rec.add("capacity", cap->value, "torus.torus_capacity");
      rec.add("capacity_closed_form", cap->closed_form, "torus.torus_capacity");
      rec.add("capacity_shifted_pole", shifted.value, "torus.torus_capacity");
      rec.add("delta", delta, "torus.arak1_check");
      rec.add("factor", kPi * (1.0 + 1.0 / delta), "torus.arak1_check");
      const double rhs = cap->value * cap->value;
      double margin = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < diag.size(); ++k) {
        const double lhs = kPi * (1.0 + 1.0 / delta) * diag[k];
        rec.add("lhs_p" + std::to_string(k), lhs, "torus.arak1_check");
        margin = std::min(margin, lhs - rhs);
      }
      rec.add("rhs_capacity_sq", rhs, "torus.arak1_check");
      if (std::abs(cap->value - cap->closed_form) > tol.cap_tol * cap->closed_form ||
          std::abs(shifted.value - cap->value) > tol.cap_tol * cap->value) {
        rec.warnings.push_back("capacity estimates disagree");
        margin = -std::abs(cap->value - cap->closed_form);
      }
      rec.decide(margin, tol.margin_tol);
    } catch (const Error& e) {
      rec.fail_with(e.what());
    }
    out.push_back(rec);

    auto mass = make("residual-mass:" + tag);
    try {
      if (!g || !cap) throw Error(ErrorKind::NonConvergence, "Green function or capacity unavailable");
      const auto r = torus_residual_mass(*g, opt.shell_t);
      const double expected = 2.0 / (cap->value * cap->value);
      mass.add("residual_mass", r.value, "extension.residual_measure");
      mass.add("residual_error_estimate", r.error_estimate, "extension.residual_measure");
      mass.add("two_over_capacity_sq", expected, "torus.torus_capacity");
      const double diff = std::abs(r.value - expected);
      mass.decide(-std::max(diff, diff / expected), tol.mass_tol);
    } catch (const Error& e) {
      mass.fail_with(e.what());
    }
    out.push_back(mass);
  }
  return out;
}

}  // namespace suita

#endif  // SUITA_TORUS_CHECK_HPP
