#ifndef SUITA_CORE_HPP
#define SUITA_CORE_HPP

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace suita {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class ErrorKind {
  CoincidentPoints,
  NonConvergence,
  SolverSingular,
  Accuracy,
  ExtrapolationDivergence,
  DivergentIntegral,
  Truncation,
  ZeroKernel,
  Parameter,
  ShellEscape,
  PoleOnCircle,
  Geometry,
  LaplacianVerification,
  DerivativeMismatch,
  Config,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::CoincidentPoints: return "coincident-points";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::SolverSingular: return "solver-singular";
    case ErrorKind::Accuracy: return "accuracy";
    case ErrorKind::ExtrapolationDivergence: return "extrapolation-divergence";
    case ErrorKind::DivergentIntegral: return "divergent-integral";
    case ErrorKind::Truncation: return "truncation";
    case ErrorKind::ZeroKernel: return "zero-kernel";
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::ShellEscape: return "shell-escape";
    case ErrorKind::PoleOnCircle: return "pole-on-circle";
    case ErrorKind::Geometry: return "geometry";
    case ErrorKind::LaplacianVerification: return "laplacian-verification";
    case ErrorKind::DerivativeMismatch: return "derivative-mismatch";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

/// Every numerical failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Numerical thresholds shared by the modules. Defaults are the values the
/// acceptance suite runs with; the CLI may override any of them.
struct Tolerances {
  double sym_tol = 1e-7;
  double bdry_tol = 1e-6;
  double tail_tol = 1e-10;
  double refine_tol = 1e-6;
  double cap_tol = 1e-6;
  double gram_tol = 1e-10;
  double trunc_tol = 1e-6;
  double ratio_tol = 1e-6;
  double margin_tol = 1e-9;
  double smv_tol = 1e-12;
  double limit_tol = 0.05;
  double sandwich_tol = 1e-6;
  double theta_tol = 1e-15;
  double fuchsian_tail_tol = 1e-8;
  double laplacian_tol = 1e-5;
  double mass_tol = 1e-4;
};

namespace quad {

/// A node/weight list for a one-dimensional rule.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

/// 20-point Gauss-Legendre panel mapped onto [a, b], appended to `rule`.
inline void append_gauss_panel(Rule& rule, double a, double b) {
  using G = boost::math::quadrature::gauss<double, 20>;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (std::size_t i = 0; i < x.size(); ++i) {
    rule.nodes.push_back(mid - half * x[i]);
    rule.weights.push_back(half * w[i]);
    rule.nodes.push_back(mid + half * x[i]);
    rule.weights.push_back(half * w[i]);
  }
}

/// Composite Gauss-Legendre rule with `panels` equal panels between each pair
/// of consecutive breakpoints.
inline Rule composite_gauss(const std::vector<double>& breakpoints, int panels) {
  Rule rule;
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    const double a = breakpoints[k];
    const double b = breakpoints[k + 1];
    if (!(b > a)) continue;
    for (int p = 0; p < panels; ++p) {
      append_gauss_panel(rule, a + (b - a) * p / panels, a + (b - a) * (p + 1) / panels);
    }
  }
  return rule;
}

inline Rule composite_gauss(double a, double b, int panels) {
  return composite_gauss(std::vector<double>{a, b}, panels);
}

/// Periodic trapezoid rule on [0, 2pi).
inline Rule trapezoid_periodic(int points) {
  Rule rule;
  rule.nodes.resize(points);
  rule.weights.assign(points, kTwoPi / points);
  for (int k = 0; k < points; ++k) rule.nodes[k] = kTwoPi * k / points;
  return rule;
}

}  // namespace quad

/// Linear Richardson step: given estimates at step sizes h1 > h2 with an
/// error model c*h, returns the extrapolated value.
inline double richardson_linear(double h1, double v1, double h2, double v2) {
  return v2 + (v2 - v1) * h2 / (h1 - h2);
}

/// Extrapolation with a known error exponent p: v(h) = v0 + c*h^p.
inline double richardson_power(double h1, double v1, double h2, double v2, double p) {
  const double r = std::pow(h2 / h1, p);
  return (v2 - r * v1) / (1.0 - r);
}

inline bool almost_zero(double x, double tol = 1e-14) { return std::abs(x) <= tol; }

}  // namespace suita

#endif  // SUITA_CORE_HPP
