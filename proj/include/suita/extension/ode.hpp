#ifndef SUITA_EXTENSION_ODE_HPP
#define SUITA_EXTENSION_ODE_HPP

#include "suita/core.hpp"
#include "suita/report.hpp"

#include <vector>

namespace suita {

/// Closed-form solution of the pair
///   (s + s'^2 / (u'' s - s'')) e^{u - t} = 1,   s' - s u' = 1
/// in the family u = -log(a - e^{-t}), s = (a t + e^{-t} + b) / (a - e^{-t}).
/// Every a > 1 and b solves the pair; the delta selection a = 1 + 1/delta,
/// b = 1/delta^2 - 1 = a^2 - 2a is the member with s(0) = 1/delta.
class OdePair {
 public:
  OdePair(double a, double b) : a_(a), b_(b) {
    if (!(a > 1.0) || !std::isfinite(b)) throw Error(ErrorKind::Parameter, "ODE family needs a > 1");
  }

  double a() const { return a_; }
  double b() const { return b_; }
  /// delta with a = 1 + 1/delta.
  double delta() const { return 1.0 / (a_ - 1.0); }

  double u(double t) const { return -std::log(den(t)); }
  double du(double t) const { return -e(t) / den(t); }
  double d2u(double t) const {
    const double d = den(t);
    return a_ * e(t) / (d * d);
  }

  double s(double t) const { return num(t) / den(t); }
  double ds(double t) const {
    const double d = den(t);
    return 1.0 - num(t) * e(t) / (d * d);
  }
  double d2s(double t) const {
    const double d = den(t);
    const double n = num(t);
    const double x = e(t);
    return -x / d + n * x / (d * d) + 2.0 * n * x * x / (d * d * d);
  }

  /// u'' s - s'', equal to (E / D^3)(D^2 - N E) with E = e^{-t}.
  double convexity_gap(double t) const { return d2u(t) * s(t) - d2s(t); }

  /// lim_{t -> inf} u = -log a.
  double u_limit() const { return -std::log(a_); }

 private:
  double e(double t) const { return std::exp(-t); }
  double den(double t) const { return a_ - std::exp(-t); }
  double num(double t) const { return a_ * t + std::exp(-t) + b_; }

  double a_;
  double b_;
};

inline OdePair ode_pair(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw Error(ErrorKind::Parameter, "ode_pair needs delta > 0");
  return OdePair(1.0 + 1.0 / delta, 1.0 / (delta * delta) - 1.0);
}

inline OdePair ode_family(double a, double b) { return OdePair(a, b); }

struct OdeResidual {
  double r1 = 0.0;
  double r2 = 0.0;
};

namespace detail {

// Central difference of g at t against the analytic value. The allowance is
// 1e-5 relative plus the rounding floor of the difference quotient.
template <class G>
void check_derivative(const char* name, G&& g, double analytic, double t, double h) {
  const double gp = g(t + h);
  const double gm = g(t - h);
  const double fd = (gp - gm) / (2.0 * h);
  const double floor = 16.0 * std::numeric_limits<double>::epsilon() * (std::abs(gp) + std::abs(gm)) / h;
  if (std::abs(fd - analytic) > 1e-5 * std::abs(analytic) + floor) {
    throw Error(ErrorKind::DerivativeMismatch, std::string(name) + " disagrees with its finite difference at t=" +
                                                   std::to_string(t));
  }
}

}  // namespace detail

/// r1 = (s + s'^2 / (u'' s - s'')) e^{u - t} - 1, r2 = s' - s u' - 1, with the
/// analytic derivatives cross-checked by central differences (step 1e-6; the
/// second derivatives are differenced from the analytic first derivatives).
inline OdeResidual ode_residual(const OdePair& p, double t, double h = 1e-6) {
  if (!(t > 0.0)) throw Error(ErrorKind::Parameter, "ode_residual needs t > 0");
  const double step = std::min(h, 0.5 * t);
  detail::check_derivative("u'", [&](double x) { return p.u(x); }, p.du(t), t, step);
  detail::check_derivative("s'", [&](double x) { return p.s(x); }, p.ds(t), t, step);
  detail::check_derivative("u''", [&](double x) { return p.du(x); }, p.d2u(t), t, step);
  detail::check_derivative("s''", [&](double x) { return p.ds(x); }, p.d2s(t), t, step);
  const double s = p.s(t);
  const double ds = p.ds(t);
  OdeResidual r;
  r.r1 = (s + ds * ds / p.convexity_gap(t)) * std::exp(p.u(t) - t) - 1.0;
  r.r2 = ds - s * p.du(t) - 1.0;
  return r;
}

/// Log-spaced grid of `count` points on [lo, hi].
inline std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi > lo) || count < 2) throw Error(ErrorKind::Parameter, "log grid needs 0 < lo < hi, count >= 2");
  std::vector<double> g(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) g[i] = std::exp(a + (b - a) * i / (count - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

/// Residuals and the structural inequalities of the pair on a t-grid.
inline ReportRecord ode_check(double delta, const std::vector<double>& grid, double residual_tol = 1e-9) {
  ReportRecord rec;
  rec.command = "ode-check";
  rec.input_id = "delta=" + std::to_string(delta);
  rec.inputs = {{"delta", delta}, {"t_min", grid.empty() ? 0.0 : grid.front()},
                {"t_max", grid.empty() ? 0.0 : grid.back()}, {"points", grid.size()}};
  try {
    if (grid.empty()) throw Error(ErrorKind::Parameter, "empty t grid");
    const OdePair p = ode_pair(delta);
    double r1 = 0.0, r2 = 0.0;
    double s_margin = std::numeric_limits<double>::infinity();
    double ds_min = std::numeric_limits<double>::infinity();
    double gap_min = std::numeric_limits<double>::infinity();
    for (double t : grid) {
      const auto r = ode_residual(p, t);
      r1 = std::max(r1, std::abs(r.r1));
      r2 = std::max(r2, std::abs(r.r2));
      s_margin = std::min(s_margin, p.s(t) - 1.0 / delta);
      ds_min = std::min(ds_min, p.ds(t));
      gap_min = std::min(gap_min, p.convexity_gap(t));
    }
    const double u_tail = std::abs(p.u(50.0) - p.u_limit());
    rec.add("max_abs_r1", r1, "extension.ode_residual");
    rec.add("max_abs_r2", r2, "extension.ode_residual");
    rec.add("min_s_minus_inv_delta", s_margin, "extension.OdePair");
    rec.add("min_ds", ds_min, "extension.OdePair");
    rec.add("min_convexity_gap", gap_min, "extension.OdePair");
    rec.add("u50_minus_limit", u_tail, "extension.OdePair");
    if (ds_min <= 0.0 || gap_min <= 0.0 || s_margin < 0.0) {
      rec.warnings.push_back("structural inequality violated on the grid");
      rec.decide(-std::numeric_limits<double>::infinity(), residual_tol);
    } else {
      // u(50) must sit within 1e-6 of its limit.
      rec.decide(std::min(residual_tol - std::max(r1, r2), 1e-6 - u_tail), 0.0);
    }
  } catch (const Error& e) {
    rec.fail_with(e.what());
  }
  return rec;
}

}  // namespace suita

#endif  // SUITA_EXTENSION_ODE_HPP
