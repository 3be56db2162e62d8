#ifndef SUITA_SQUEEZING_MOEBIUS_HPP
#define SUITA_SQUEEZING_MOEBIUS_HPP

#include "suita/core.hpp"

#include <optional>

namespace suita {

/// z -> (alpha z + beta) / (gamma z + delta) with alpha delta - beta gamma = 1.
class MoebiusMap {
 public:
  MoebiusMap() = default;

  /// Normalizes an arbitrary nonsingular coefficient set.
  MoebiusMap(Complex alpha, Complex beta, Complex gamma, Complex delta) {
    const Complex det = alpha * delta - beta * gamma;
    if (std::abs(det) == 0.0 || !std::isfinite(std::abs(det))) {
      throw Error(ErrorKind::Parameter, "Moebius coefficients are singular");
    }
    const Complex s = 1.0 / std::sqrt(det);
    a_ = alpha * s;
    b_ = beta * s;
    c_ = gamma * s;
    d_ = delta * s;
  }

  static MoebiusMap identity() { return {}; }

  static MoebiusMap rotation(double theta) {
    return {std::polar(1.0, 0.5 * theta), 0.0, 0.0, std::polar(1.0, -0.5 * theta)};
  }

  Complex alpha() const { return a_; }
  Complex beta() const { return b_; }
  Complex gamma() const { return c_; }
  Complex delta() const { return d_; }

  Complex determinant() const { return a_ * d_ - b_ * c_; }
  Complex trace() const { return a_ + d_; }

  Complex operator()(Complex z) const {
    const Complex den = c_ * z + d_;
    if (den == Complex(0.0, 0.0)) throw Error(ErrorKind::PoleOnCircle, "evaluation at the pole");
    return (a_ * z + b_) / den;
  }

  /// Derivative 1 / (gamma z + delta)^2 (unit determinant).
  Complex derivative(Complex z) const {
    const Complex den = c_ * z + d_;
    return 1.0 / (den * den);
  }

  /// Image of infinity.
  std::optional<Complex> at_infinity() const {
    if (c_ == Complex(0.0, 0.0)) return std::nullopt;
    return a_ / c_;
  }

  /// Preimage of infinity.
  std::optional<Complex> pole() const {
    if (c_ == Complex(0.0, 0.0)) return std::nullopt;
    return -d_ / c_;
  }

  MoebiusMap inverse() const { return {d_, -b_, -c_, a_}; }

  /// (this o g)(z) = this(g(z)).
  MoebiusMap compose(const MoebiusMap& g) const {
    return {a_ * g.a_ + b_ * g.c_, a_ * g.b_ + b_ * g.d_, c_ * g.a_ + d_ * g.c_, c_ * g.b_ + d_ * g.d_};
  }

 private:
  Complex a_{1.0, 0.0};
  Complex b_{0.0, 0.0};
  Complex c_{0.0, 0.0};
  Complex d_{1.0, 0.0};
};

/// Disc automorphism (z - p) / (1 - conj(p) z), sending p to 0.
inline MoebiusMap normalizer(Complex p) {
  if (!(std::abs(p) < 1.0)) throw Error(ErrorKind::Parameter, "normalizer needs |p| < 1");
  return {1.0, -p, -std::conj(p), 1.0};
}

struct Circle {
  Complex center{0.0, 0.0};
  double radius = 1.0;
};

/// Exact image of a circle. The reflection of the pole in the circle maps to
/// the image center.
inline Circle image_circle(const MoebiusMap& m, const Circle& c) {
  if (!(c.radius > 0.0)) throw Error(ErrorKind::Parameter, "circle radius must be positive");
  const auto pole = m.pole();
  if (!pole) {
    const Complex w = m(c.center);
    return {w, c.radius * std::abs(m.derivative(c.center))};
  }
  const Complex d = *pole - c.center;
  const double dist = std::abs(d);
  if (std::abs(dist - c.radius) <= 1e-12 * std::max(1.0, c.radius)) {
    throw Error(ErrorKind::PoleOnCircle, "circle passes through the pole");
  }
  Circle out;
  out.center = dist == 0.0 ? *m.at_infinity() : m(c.center + c.radius * c.radius / std::conj(d));
  // Radius from the circle point farthest from the pole.
  const Complex dir = dist == 0.0 ? Complex(1.0, 0.0) : -d / dist;
  out.radius = std::abs(m(c.center + c.radius * dir) - out.center);
  return out;
}

}  // namespace suita

#endif  // SUITA_SQUEEZING_MOEBIUS_HPP
