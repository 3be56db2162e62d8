#ifndef SUITA_EXTENSION_CUTOFF_HPP
#define SUITA_EXTENSION_CUTOFF_HPP

#include "suita/core.hpp"
#include "suita/report.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <sstream>
#include <vector>

namespace suita {

namespace detail {

/// Unnormalized standard bump exp(-1 / (1 - y^2)) on (-1, 1).
inline double bump_raw(double y) {
  const double d = 1.0 - y * y;
  return d > 0.0 ? std::exp(-1.0 / d) : 0.0;
}

/// Partial moments int_{-1}^{u} s^k bump(s) ds for k = 0, 1, 2.
struct BumpPartial {
  double m0 = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
};

inline BumpPartial bump_partial(double u, int panels = 16) {
  BumpPartial p;
  if (!(u > -1.0)) return p;
  const quad::Rule rule = quad::composite_gauss(-1.0, std::min(u, 1.0), panels);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double s = rule.nodes[i];
    const double w = rule.weights[i] * bump_raw(s);
    p.m0 += w;
    p.m1 += w * s;
    p.m2 += w * s * s;
  }
  return p;
}

/// Mass and second moment of the bump on (-1, 1).
inline const BumpPartial& bump_total() {
  static const BumpPartial m = bump_partial(1.0, 64);
  return m;
}

}  // namespace detail

/// Smoothed truncation v_{t0, eps}: v'' is the normalized indicator of an
/// interval convolved with a bump of half-width eta, v' and v are its exact
/// first and second antiderivatives.
///
/// The indicator sits on (-t0 - 1 + eps + eta, -t0 - eps - eta) so that the
/// mollified support stays inside (-t0 - 1 + eps, -t0 - eps). Then v(t) = t
/// above -t0 - eps and v is constant below -t0 - 1 + eps. eta = eps/4 unless
/// that would push the density above 2 (eps > 1/5), where eta is reduced.
class CutoffFamily {
 public:
  CutoffFamily(double t0, double eps) : t0_(t0), eps_(eps) {
    if (!(eps > 0.0 && eps < 0.25)) throw Error(ErrorKind::Parameter, "cutoff needs 0 < eps < 1/4");
    if (!std::isfinite(t0)) throw Error(ErrorKind::Parameter, "cutoff needs a finite t0");
    eta_ = std::min(0.25 * eps, 0.5 * (0.25 - eps));
    lo_ = -t0 - 1.0 + eps + eta_;
    hi_ = -t0 - eps - eta_;
    norm_ = 1.0 / (hi_ - lo_);
  }

  double t0() const { return t0_; }
  double eps() const { return eps_; }
  double mollifier_half_width() const { return eta_; }
  double density_height() const { return norm_; }

  /// Support of v'': (-t0 - 1 + eps, -t0 - eps) up to the closure.
  double support_lo() const { return lo_ - eta_; }
  double support_hi() const { return hi_ + eta_; }

  double d2(double t) const { return norm_ * (cdf(t - lo_) - cdf(t - hi_)); }

  double d1(double t) const { return norm_ * (first(t - lo_) - first(t - hi_)); }

  double value(double t) const {
    if (t >= support_hi()) return t;
    if (t <= support_lo()) return 0.5 * (lo_ + hi_);
    return norm_ * (second(t - lo_) - second(t - hi_)) + 0.5 * (lo_ + hi_);
  }

 private:
  // Antiderivatives of the mollifier rho_eta(y) = bump(y / eta) / (eta Z):
  // cdf = int rho, first = int cdf, second = int first, all vanishing at -inf.
  // With M_k(u) = int_{-1}^u s^k bump / Z: first = eta (u M_0 - M_1),
  // second = eta^2 (u^2 M_0 - 2 u M_1 + M_2) / 2.
  double cdf(double y) const {
    if (y <= -eta_) return 0.0;
    if (y >= eta_) return 1.0;
    return std::clamp(detail::bump_partial(y / eta_).m0 / detail::bump_total().m0, 0.0, 1.0);
  }

  double first(double y) const {
    if (y <= -eta_) return 0.0;
    if (y >= eta_) return y;
    const double u = y / eta_;
    const auto p = detail::bump_partial(u);
    return eta_ * (u * p.m0 - p.m1) / detail::bump_total().m0;
  }

  double second(double y) const {
    const auto& tot = detail::bump_total();
    if (y <= -eta_) return 0.0;
    if (y >= eta_) return 0.5 * (y * y + tot.m2 / tot.m0 * eta_ * eta_);
    const double u = y / eta_;
    const auto p = detail::bump_partial(u);
    return 0.5 * eta_ * eta_ * (u * u * p.m0 - 2.0 * u * p.m1 + p.m2) / tot.m0;
  }

  double t0_;
  double eps_;
  double eta_;
  double lo_;
  double hi_;
  double norm_;
};

inline CutoffFamily make_cutoff(double t0, double eps) { return CutoffFamily(t0, eps); }

/// The eps -> 0 limit of v': the ramp from 0 to 1 on [-t0 - 1, -t0].
inline double cutoff_limit_slope(double t0, double t) { return std::clamp(t + t0 + 1.0, 0.0, 1.0); }

/// Worst violation of the family properties over a sample of t.
struct CutoffPropertyReport {
  double identity_gap = 0.0;      // max |v(t) - t| on t >= -t0 - eps
  double constant_gap = 0.0;      // max |v(t) - v(left end)| on t < -t0 - 1 + eps
  double d1_violation = 0.0;      // max distance of v' from [0, 1]
  double d2_violation = 0.0;      // max distance of v'' from [0, 2]
  double monotone_violation = 0.0;  // max decrease of v' between samples
  int samples = 0;
};

inline CutoffPropertyReport cutoff_properties(const CutoffFamily& v, int samples) {
  CutoffPropertyReport rep;
  rep.samples = samples;
  const double left = -v.t0() - 1.0 + v.eps();
  const double right = -v.t0() - v.eps();
  const double a = left - 1.0;
  const double b = right + 1.0;
  const double base = v.value(a - 1.0);
  double prev_d1 = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = a + (b - a) * i / (samples - 1);
    const double val = v.value(t);
    const double d1 = v.d1(t);
    const double d2 = v.d2(t);
    if (t >= right) rep.identity_gap = std::max(rep.identity_gap, std::abs(val - t));
    if (t < left) rep.constant_gap = std::max(rep.constant_gap, std::abs(val - base));
    rep.d1_violation = std::max({rep.d1_violation, -d1, d1 - 1.0});
    rep.d2_violation = std::max({rep.d2_violation, -d2, d2 - 2.0});
    if (i > 0) rep.monotone_violation = std::max(rep.monotone_violation, prev_d1 - d1);
    prev_d1 = d1;
  }
  return rep;
}

/// int v'' dt by adaptive Gauss-Kronrod, split where v'' stops being smooth.
inline double cutoff_d2_mass(const CutoffFamily& v) {
  using boost::math::quadrature::gauss_kronrod;
  const double eta = v.mollifier_half_width();
  std::vector<double> cuts{v.support_lo() - 1.0};
  for (double c : {v.support_lo(), v.support_lo() + 2 * eta, v.support_hi() - 2 * eta, v.support_hi()}) {
    if (c > cuts.back()) cuts.push_back(c);
  }
  cuts.push_back(v.support_hi() + 1.0);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += gauss_kronrod<double, 61>::integrate([&](double t) { return v.d2(t); }, cuts[i], cuts[i + 1], 10, 1e-13);
  }
  return total;
}

/// Properties (1)-(3) on an even sample plus the unit mass of v''. Violations
/// are held to property_tol, the mass to mass_tol.
inline ReportRecord cutoff_property_check(double t0, double eps, int samples, double property_tol = 1e-12,
                                          double mass_tol = 1e-8) {
  ReportRecord rec;
  rec.command = "cutoff-check";
  std::ostringstream id;
  id.precision(6);
  id << "properties:t0=" << t0 << ",eps=" << eps;
  rec.input_id = id.str();
  rec.inputs = {{"t0", t0}, {"eps", eps}, {"samples", samples}};
  try {
    if (samples < 2) throw Error(ErrorKind::Parameter, "need at least two samples");
    const CutoffFamily v(t0, eps);
    const auto p = cutoff_properties(v, samples);
    const double mass = cutoff_d2_mass(v);
    rec.add("identity_gap", p.identity_gap, "extension.cutoff_properties");
    rec.add("constant_gap", p.constant_gap, "extension.cutoff_properties");
    rec.add("d1_violation", p.d1_violation, "extension.cutoff_properties");
    rec.add("d2_violation", p.d2_violation, "extension.cutoff_properties");
    rec.add("monotone_violation", p.monotone_violation, "extension.cutoff_properties");
    rec.add("d2_mass", mass, "extension.cutoff_d2_mass");
    const double worst = std::max({p.identity_gap, p.constant_gap, p.d1_violation, p.d2_violation,
                                   p.monotone_violation});
    rec.decide(std::min(property_tol - worst, mass_tol - std::abs(mass - 1.0)), 0.0);
  } catch (const Error& e) {
    rec.fail_with(e.what());
  }
  return rec;
}

/// Sup over sample points of |v'_{t0, eps} - b_{t0}| for each eps, skipping
/// the two kinks of b_{t0}. Passes when the gaps decrease and the last one is
/// below limit_tol.
inline ReportRecord cutoff_limit_check(double t0, const std::vector<double>& eps_seq, const std::vector<double>& samples,
                                       const Tolerances& tol = Tolerances()) {
  ReportRecord rec;
  rec.command = "cutoff-check";
  rec.input_id = "limit:t0=" + std::to_string(t0);
  rec.inputs = {{"t0", t0}, {"eps", eps_seq}, {"samples", samples.size()}};
  try {
    if (eps_seq.empty() || samples.empty()) throw Error(ErrorKind::Parameter, "empty eps sequence or sample set");
    double previous = std::numeric_limits<double>::infinity();
    double worst_increase = 0.0;
    double last = 0.0;
    for (std::size_t k = 0; k < eps_seq.size(); ++k) {
      if (k > 0 && !(eps_seq[k] < eps_seq[k - 1])) throw Error(ErrorKind::Parameter, "eps sequence must decrease");
      const CutoffFamily v(t0, eps_seq[k]);
      double gap = 0.0;
      for (double t : samples) {
        if (std::abs(t + t0 + 1.0) < 1e-12 || std::abs(t + t0) < 1e-12) continue;
        gap = std::max(gap, std::abs(v.d1(t) - cutoff_limit_slope(t0, t)));
      }
      rec.add("sup_gap_eps=" + std::to_string(eps_seq[k]), gap, "extension.cutoff_limit_check");
      if (k > 0) worst_increase = std::max(worst_increase, gap - previous);
      previous = gap;
      last = gap;
    }
    rec.add("final_gap", last, "extension.cutoff_limit_check");
    rec.add("worst_increase", worst_increase, "extension.cutoff_limit_check");
    // Both conditions folded into one margin: the final gap must clear
    // limit_tol and no step may increase.
    const double margin = worst_increase > 0.0 ? -worst_increase - tol.limit_tol : tol.limit_tol - last;
    rec.decide(margin, 0.0);
  } catch (const Error& e) {
    rec.fail_with(e.what());
  }
  return rec;
}

}  // namespace suita

#endif  // SUITA_EXTENSION_CUTOFF_HPP
