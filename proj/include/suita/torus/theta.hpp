#ifndef SUITA_TORUS_THETA_HPP
#define SUITA_TORUS_THETA_HPP

#include "suita/core.hpp"

#include <sstream>

namespace suita {

/// C / (Z + tau Z) with the flat metric (1 / Im tau)|dz|^2 of volume 1.
struct TorusSpec {
  Complex tau{0.0, 1.0};
  int terms = 16;

  TorusSpec() = default;
  explicit TorusSpec(Complex t, int n = 16) : tau(t), terms(n) {
    if (!(t.imag() > 0.0)) throw Error(ErrorKind::Parameter, "torus needs Im tau > 0");
    if (n < 8) throw Error(ErrorKind::Parameter, "theta truncation must be at least 8");
  }

  double im() const { return tau.imag(); }

  /// Density of dV_omega against Lebesgue measure.
  double volume_density() const { return 1.0 / tau.imag(); }

  /// Lattice coordinates: z = u + v tau.
  void coordinates(Complex z, double& u, double& v) const {
    v = z.imag() / tau.imag();
    u = z.real() - v * tau.real();
  }

  /// Representative of z with lattice coordinates in [-1/2, 1/2).
  Complex reduce(Complex z) const {
    double u, v;
    coordinates(z, u, v);
    const double nv = std::floor(v + 0.5);
    const double nu = std::floor(u + 0.5);
    return z - nu - nv * tau;
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(6);
    os << "tau=" << tau.real() << (tau.imag() >= 0 ? "+" : "") << tau.imag() << "i";
    return os.str();
  }
};

struct ThetaValue {
  Complex value;
  double tail_bound = 0.0;  // bound on the dropped terms
};

/// theta_1(z, tau) = 2 sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1) pi z), q = e^{i pi tau}.
/// Dropped terms are bounded with |sin w| <= min(1, |w|) e^{|Im w|}; the
/// bound must stay below theta_tol relative to the value.
inline ThetaValue theta1_with_tail(Complex z, Complex tau, int terms, double theta_tol = Tolerances().theta_tol) {
  if (!(tau.imag() > 0.0)) throw Error(ErrorKind::Parameter, "theta needs Im tau > 0");
  if (terms < 8) throw Error(ErrorKind::Parameter, "theta truncation must be at least 8");
  const Complex ipt(-kPi * tau.imag(), kPi * tau.real());  // i pi tau
  Complex sum(0.0, 0.0);
  for (int n = terms - 1; n >= 0; --n) {
    const double k = n + 0.5;
    const Complex term = std::exp(ipt * (k * k)) * std::sin((2.0 * n + 1.0) * kPi * z);
    sum += (n % 2 == 0) ? term : -term;
  }
  ThetaValue out{2.0 * sum, 0.0};
  const double y = std::abs(z.imag());
  const double az = std::abs(z);
  double tail = 0.0;
  for (int n = terms; n < terms + 64; ++n) {
    const double k = n + 0.5;
    const double w = (2.0 * n + 1.0) * kPi;
    const double b = 2.0 * std::exp(-kPi * tau.imag() * k * k + w * y) * std::min(1.0, w * az);
    tail += b;
    if (b < 1e-30 * tail) break;
  }
  out.tail_bound = tail;
  if (tail > theta_tol * std::abs(out.value)) {
    std::ostringstream msg;
    msg << "theta tail " << tail << " exceeds tolerance at " << terms << " terms";
    throw Error(ErrorKind::Truncation, msg.str());
  }
  return out;
}

inline Complex theta1(Complex z, Complex tau, int terms = 16) { return theta1_with_tail(z, tau, terms).value; }

/// theta_1'(0) = 2 pi sum (-1)^n (2n+1) q^{(n+1/2)^2}.
inline Complex theta1_prime0(Complex tau, int terms = 16) {
  const Complex ipt(-kPi * tau.imag(), kPi * tau.real());
  Complex sum(0.0, 0.0);
  for (int n = terms - 1; n >= 0; --n) {
    const double k = n + 0.5;
    const Complex term = (2.0 * n + 1.0) * std::exp(ipt * (k * k));
    sum += (n % 2 == 0) ? term : -term;
  }
  return kTwoPi * sum;
}

/// log|eta(tau)| = -pi Im tau / 12 + sum_{n>=1} log|1 - e^{2 pi i n tau}|.
inline double log_abs_eta(Complex tau) {
  double s = -kPi * tau.imag() / 12.0;
  for (int n = 1; n < 200; ++n) {
    const Complex qn = std::exp(Complex(0.0, kTwoPi * n) * tau);
    if (std::abs(qn) < 1e-18) break;
    s += std::log(std::abs(1.0 - qn));
  }
  return s;
}

}  // namespace suita

#endif  // SUITA_TORUS_THETA_HPP
