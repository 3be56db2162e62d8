#ifndef SUITA_EXTENSION_POLAR_HPP
#define SUITA_EXTENSION_POLAR_HPP

#include "suita/bergman/weight.hpp"
#include "suita/core.hpp"
#include "suita/domains/planar_domain.hpp"
#include "suita/report.hpp"

#include <boost/math/tools/roots.hpp>

#include <functional>
#include <optional>
#include <string>

namespace suita {

/// Psi(z) = log|z - pole|^2 + psi(z) with psi bounded near the pole. `inside`
/// tells where Psi is defined; shells must stay inside it.
struct PolarSpec {
  Complex pole{0.0, 0.0};
  std::function<double(Complex)> psi;
  std::function<bool(Complex)> inside;
  std::string description;

  double operator()(Complex z) const { return std::log(std::norm(z - pole)) + psi(z); }

  /// log|z - pole|^2 + psi0 on a planar domain.
  static PolarSpec log_pole(Complex pole, double psi0, const PlanarDomain& domain) {
    PolarSpec p;
    p.pole = pole;
    p.psi = [psi0](Complex) { return psi0; };
    p.inside = [domain](Complex z) { return domain.contains(z); };
    p.description = "log_pole:psi0=" + std::to_string(psi0);
    return p;
  }
};

struct ResidualEstimate {
  double value = 0.0;
  double error_estimate = 0.0;
  double inner_radius_min = 0.0;
  double outer_radius_max = 0.0;
};

struct ResidualOptions {
  int radial_panels = 26;  // 20-point Gauss panels per ray: 520 nodes
  int angular = 256;
};

namespace detail {

// log r at which Psi(pole + r e^{i theta}) crosses `level`, by bracketing in
// log r and TOMS 748.
inline double shell_crossing(const PolarSpec& p, double theta, double level) {
  const Complex dir = std::polar(1.0, theta);
  const auto g = [&](double x) { return p(p.pole + std::exp(x) * dir) - level; };
  double x0 = 0.5 * (level - p.psi(p.pole + 1e-8 * dir));
  double lo = x0 - 0.5, hi = x0 + 0.5;
  for (int i = 0; i < 60 && g(lo) > 0.0; ++i) lo -= 1.0;
  for (int i = 0; i < 60 && g(hi) < 0.0; ++i) hi += 1.0;
  const double glo = g(lo), ghi = g(hi);
  if (!(glo <= 0.0 && ghi >= 0.0)) throw Error(ErrorKind::NonConvergence, "could not bracket the shell boundary");
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi,
                                                        boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (a + b);
}

inline double residual_pass(const PolarSpec& p, const std::function<double(Complex)>& f, double t, int radial_panels,
                            int angular, ResidualEstimate* geometry) {
  double sum = 0.0;
  double rin = std::numeric_limits<double>::infinity(), rout = 0.0;
  for (int j = 0; j < angular; ++j) {
    const double theta = kTwoPi * j / angular;
    const double xin = shell_crossing(p, theta, -1.0 - t);
    const double xout = shell_crossing(p, theta, -t);
    const Complex dir = std::polar(1.0, theta);
    if (!p.inside(p.pole + std::exp(xout) * dir)) {
      throw Error(ErrorKind::ShellEscape, "the level shell leaves the domain of Psi");
    }
    rin = std::min(rin, std::exp(xin));
    rout = std::max(rout, std::exp(xout));
    // e^{-Psi} dlambda = e^{-psi} d(log r) dtheta.
    const quad::Rule rule = quad::composite_gauss(xin, xout, radial_panels);
    double ray = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const Complex z = p.pole + std::exp(rule.nodes[k]) * dir;
      ray += rule.weights[k] * f(z) * std::exp(-p.psi(z));
    }
    sum += ray;
  }
  if (geometry) {
    geometry->inner_radius_min = rin;
    geometry->outer_radius_max = rout;
  }
  return sum * (kTwoPi / angular) / kPi;
}

}  // namespace detail

/// (1/pi) int_{-1-t < Psi < -t} f e^{-Psi} dlambda. The grid is doubled in
/// both directions for the error estimate; the finer value is returned.
inline ResidualEstimate residual_measure(const PolarSpec& p, const std::function<double(Complex)>& f, double t,
                                         const ResidualOptions& options = ResidualOptions()) {
  if (!p.psi || !p.inside) throw Error(ErrorKind::Parameter, "polar spec is incomplete");
  if (!std::isfinite(t)) throw Error(ErrorKind::Parameter, "shell level must be finite");
  ResidualEstimate est;
  const double coarse = detail::residual_pass(p, f, t, options.radial_panels, options.angular, nullptr);
  est.value = detail::residual_pass(p, f, t, 2 * options.radial_panels, 2 * options.angular, &est);
  est.error_estimate = std::abs(est.value - coarse);
  return est;
}

struct DeltaClassOptions {
  int grid = 25;                          // centers per axis
  std::vector<double> radii{1e-2, 1e-3};  // test circle radii
  int circle_points = 64;
};

/// Sub-mean-value test of phi + Psi and phi + (1 + delta) Psi on a grid of
/// circles. Circles that leave the domain or enclose a singular point are
/// skipped and counted.
inline ReportRecord delta_class_check(const std::function<double(Complex)>& phi,
                                      const std::function<double(Complex)>& psi, std::optional<Complex> pole,
                                      double delta, const PlanarDomain& domain, const std::string& label,
                                      const Tolerances& tol = Tolerances(),
                                      const DeltaClassOptions& options = DeltaClassOptions()) {
  ReportRecord rec;
  rec.command = "delta-class-check";
  rec.input_id = label;
  rec.inputs = {{"domain", domain.describe()}, {"delta", delta}, {"label", label}};
  try {
    if (!(delta > 0.0)) throw Error(ErrorKind::Parameter, "delta must be positive");
    // Bounding box of the domain.
    double x0, x1, y0, y1;
    if (domain.is_jordan()) {
      x0 = y0 = std::numeric_limits<double>::infinity();
      x1 = y1 = -x0;
      for (int k = 0; k < 512; ++k) {
        const Complex z = domain.as_jordan().point(kTwoPi * k / 512);
        x0 = std::min(x0, z.real()), x1 = std::max(x1, z.real());
        y0 = std::min(y0, z.imag()), y1 = std::max(y1, z.imag());
      }
    } else {
      const double R = domain.is_disc() ? domain.as_disc().radius : 1.0;
      x0 = y0 = -R;
      x1 = y1 = R;
    }
    const auto combos = [&](Complex z, double& a, double& b) {
      const double f = phi(z);
      const double g = psi(z);
      a = f + g;
      b = f + (1.0 + delta) * g;
    };
    double worst_a = std::numeric_limits<double>::infinity();
    double worst_b = worst_a;
    int tested = 0, skipped = 0;
    for (int i = 0; i < options.grid; ++i) {
      for (int j = 0; j < options.grid; ++j) {
        // Offset grid so that no center lands on a symmetric singular point.
        const Complex c{x0 + (x1 - x0) * (i + 0.5) / options.grid + 1.7e-3,
                        y0 + (y1 - y0) * (j + 0.5) / options.grid + 1.1e-3};
        if (!domain.contains(c)) continue;
        for (double rho : options.radii) {
          if (domain.distance_to_boundary(c) <= 1.01 * rho || (pole && std::abs(c - *pole) <= 2.0 * rho)) {
            ++skipped;
            continue;
          }
          double ca, cb;
          combos(c, ca, cb);
          double sa = 0.0, sb = 0.0;
          bool finite = std::isfinite(ca) && std::isfinite(cb);
          for (int k = 0; k < options.circle_points && finite; ++k) {
            double a, b;
            combos(c + std::polar(rho, kTwoPi * k / options.circle_points), a, b);
            finite = std::isfinite(a) && std::isfinite(b);
            sa += a;
            sb += b;
          }
          if (!finite) {
            ++skipped;
            continue;
          }
          ++tested;
          worst_a = std::min(worst_a, sa / options.circle_points - ca);
          worst_b = std::min(worst_b, sb / options.circle_points - cb);
        }
      }
    }
    if (tested == 0) throw Error(ErrorKind::Geometry, "no test circle fits in the domain");
    rec.add("worst_smv_phi_plus_psi", worst_a, "extension.delta_class_check");
    rec.add("worst_smv_phi_plus_scaled_psi", worst_b, "extension.delta_class_check");
    rec.add("circles_tested", tested, "extension.delta_class_check");
    rec.add("circles_skipped", skipped, "extension.delta_class_check");
    rec.decide(std::min(worst_a, worst_b), tol.smv_tol);
  } catch (const Error& e) {
    rec.fail_with(e.what());
  }
  return rec;
}

/// Weight form: phi = -log(density).
inline ReportRecord delta_class_check(const WeightSpec& phi, const std::function<double(Complex)>& psi,
                                      std::optional<Complex> pole, double delta, const PlanarDomain& domain,
                                      const std::string& label, const Tolerances& tol = Tolerances(),
                                      const DeltaClassOptions& options = DeltaClassOptions()) {
  return delta_class_check([phi](Complex z) { return -phi.log_density(z); }, psi, pole, delta, domain, label, tol,
                           options);
}

}  // namespace suita

#endif  // SUITA_EXTENSION_POLAR_HPP
