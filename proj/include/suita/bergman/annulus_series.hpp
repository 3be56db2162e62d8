#ifndef SUITA_BERGMAN_ANNULUS_SERIES_HPP
#define SUITA_BERGMAN_ANNULUS_SERIES_HPP

#include "suita/core.hpp"

#include <boost/math/constants/constants.hpp>

#include <limits>

namespace suita {

/// Robin constant, kernel diagonal and Suita ratio on A(r, 1) at |z| = s,
/// from rapidly convergent q-series (q = r^2). Templated on the real type so
/// the deficit 1 - C can be resolved beyond double precision near the boundary.
template <class Real>
struct AnnulusSeries {
  Real robin;
  Real kernel;
  Real ratio;
  Real deficit;  // 1 - ratio, computed in Real
  int terms = 0;
};

template <class Real>
AnnulusSeries<Real> annulus_suita_series(const Real& r, const Real& s) {
  using std::abs;
  using std::exp;
  using std::log;
  if (!(r > 0 && r < 1)) throw Error(ErrorKind::Parameter, "annulus needs 0 < r < 1");
  if (!(s > r && s < 1)) throw Error(ErrorKind::Parameter, "point must lie inside the annulus");
  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real q = r * r;
  const Real x = s * s;
  const Real y = q / x;

  // log P(x) with P(x) = (1 - x) prod_k (1 - q^k x)(1 - q^k / x), and the
  // Lambert sums sum_k q^k / (1 - x q^k)^2, sum_k y q^k / (1 - y q^k)^2.
  Real log_p = log(1 - x);
  Real log_euler = 0;
  Real lambert_outer = 1 / ((1 - x) * (1 - x));
  Real lambert_inner = y / ((1 - y) * (1 - y));
  Real qk = 1;
  int k = 1;
  for (; k < 1'000'000; ++k) {
    qk *= q;
    log_p += log(1 - qk * x) + log(1 - qk / x);
    log_euler += log(1 - qk);
    const Real a = qk / ((1 - x * qk) * (1 - x * qk));
    const Real b = y * qk / ((1 - y * qk) * (1 - y * qk));
    lambert_outer += a;
    lambert_inner += b;
    if (qk / x < eps * 1e-3 && a < eps * lambert_outer * 1e-3) break;
  }
  if (k >= 1'000'000) throw Error(ErrorKind::NonConvergence, "annulus q-series did not converge");

  const Real pi = boost::math::constants::pi<Real>();
  const Real log_s = log(s);
  AnnulusSeries<Real> out;
  out.terms = k;
  out.robin = 2 * log_euler - log_p - log_s * log_s / log(r);
  out.kernel = (lambert_outer + lambert_inner / x + 1 / (2 * x * log(1 / r))) / pi;
  out.ratio = exp(2 * out.robin) / (pi * out.kernel);
  out.deficit = 1 - out.ratio;
  return out;
}

}  // namespace suita

#endif  // SUITA_BERGMAN_ANNULUS_SERIES_HPP
