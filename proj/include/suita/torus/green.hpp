#ifndef SUITA_TORUS_GREEN_HPP
#define SUITA_TORUS_GREEN_HPP

#include "suita/torus/theta.hpp"

#include <boost/math/tools/minima.hpp>

#include <array>

namespace suita {

enum class GreenNormalization {
  Arakelov,  // int_X g dV_omega = 0
  Negative,  // sup_X g = 0
};

inline const char* to_string(GreenNormalization n) {
  return n == GreenNormalization::Arakelov ? "arakelov" : "negative";
}

inline GreenNormalization parse_normalization(const std::string& s) {
  if (s == "arakelov") return GreenNormalization::Arakelov;
  if (s == "negative") return GreenNormalization::Negative;
  throw Error(ErrorKind::Parameter, "unknown Green normalization '" + s + "'");
}

/// g(z) = log|theta_1(z)| - pi (Im z)^2 / Im tau + gamma, pole at 0.
/// Laplacian convention: Delta_omega = (Im tau / 2 pi) Delta, for which
/// (i/pi) d d-bar g = [0] - a omega gives a = -Delta_omega g = 1.
class ArakelovGreen {
 public:
  explicit ArakelovGreen(const TorusSpec& X, GreenNormalization norm = GreenNormalization::Arakelov,
                         const Tolerances& tol = Tolerances(), bool verify = true)
      : X_(X), norm_(norm), tol_(tol) {
    gamma_ = norm == GreenNormalization::Arakelov ? -log_abs_eta(X.tau) : -max_raw();
    if (verify) verify_laplacian();
  }

  const TorusSpec& torus() const { return X_; }
  GreenNormalization normalization() const { return norm_; }
  double gamma() const { return gamma_; }

  /// Without the additive constant.
  double raw(Complex z) const {
    const Complex w = X_.reduce(z);
    const double y = w.imag();
    return std::log(std::abs(theta1_with_tail(w, X_.tau, X_.terms, tol_.theta_tol).value)) - kPi * y * y / X_.im();
  }

  double operator()(Complex z) const { return raw(z) + gamma_; }
  double operator()(Complex p, Complex q) const { return (*this)(p - q); }

  /// Delta_omega g by a fourth-order five-point stencil in each direction.
  double laplacian_omega(Complex z, double h = 2.5e-3) const {
    double lap = -60.0 * raw(z);
    for (Complex e : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
      lap += 16.0 * (raw(z + h * e) + raw(z - h * e)) - (raw(z + 2.0 * h * e) + raw(z - 2.0 * h * e));
    }
    lap /= 12.0 * h * h;
    return X_.im() / kTwoPi * lap;
  }

  /// Off-pole sample points, in lattice coordinates away from the lattice.
  std::vector<Complex> laplacian_samples() const {
    static constexpr std::array<std::array<double, 2>, 6> uv{
        {{0.3, 0.2}, {-0.25, 0.4}, {0.45, -0.35}, {0.1, 0.5}, {-0.4, -0.15}, {0.5, 0.0}}};
    std::vector<Complex> out;
    for (const auto& [u, v] : uv) out.push_back(u + v * X_.tau);
    return out;
  }

  /// max |Delta_omega g + 1| over the samples.
  double laplacian_deviation() const {
    double worst = 0.0;
    for (Complex z : laplacian_samples()) worst = std::max(worst, std::abs(laplacian_omega(z) + 1.0));
    return worst;
  }

  /// Mean of g over X by the n x n midpoint rule in lattice coordinates.
  double mean_quadrature(int n) const {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        s += (*this)((i + 0.5) / n + ((j + 0.5) / n) * X_.tau);
      }
    }
    return s / (static_cast<double>(n) * n);
  }

  /// sup_X of the raw function, from a grid search refined coordinatewise.
  double max_raw() const {
    const int n = 64;
    double best = -std::numeric_limits<double>::infinity();
    double bu = 0.0, bv = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double u = (i + 0.5) / n, v = (j + 0.5) / n;
        const double f = raw(u + v * X_.tau);
        if (f > best) best = f, bu = u, bv = v;
      }
    }
    const double w = 1.0 / n;
    for (int sweep = 0; sweep < 40; ++sweep) {
      const auto fu = [&](double u) { return -raw(u + bv * X_.tau); };
      const auto ru = boost::math::tools::brent_find_minima(fu, bu - w, bu + w, 50);
      bu = ru.first;
      const auto fv = [&](double v) { return -raw(bu + v * X_.tau); };
      const auto rv = boost::math::tools::brent_find_minima(fv, bv - w, bv + w, 50);
      bv = rv.first;
      const double f = -rv.second;
      if (std::abs(f - best) <= 1e-15 * std::max(1.0, std::abs(f)) && sweep > 1) {
        best = std::max(best, f);
        break;
      }
      best = std::max(best, f);
    }
    max_point_ = bu + bv * X_.tau;
    return best;
  }

  Complex max_point() const { return max_point_; }

 private:
  void verify_laplacian() const {
    const double dev = laplacian_deviation();
    if (!(dev <= tol_.laplacian_tol)) {
      throw Error(ErrorKind::LaplacianVerification,
                  "finite-difference Delta_omega g deviates from -1 by " + std::to_string(dev));
    }
  }

  TorusSpec X_;
  GreenNormalization norm_;
  Tolerances tol_;
  double gamma_ = 0.0;
  mutable Complex max_point_{0.0, 0.0};
};

struct TorusCapacity {
  double value = 0.0;        // Richardson estimate of c_X
  double closed_form = 0.0;  // sqrt(Im tau) |theta_1'(0)| e^gamma
  double extrapolation_gap = 0.0;
};

/// c_X = exp lim (g(z, q) - log(|z - q| / sqrt(Im tau))) at base point q, from
/// angle averages at radii rho, rho/2, rho/4 with Richardson in rho^2.
inline TorusCapacity torus_capacity(const ArakelovGreen& g, Complex q = {0.0, 0.0}, double rho = 1e-2,
                                    double gap_tol = 1e-9) {
  const double T = g.torus().im();
  const auto finite_part = [&](double r) {
    double s = 0.0;
    const int m = 8;
    for (int k = 0; k < m; ++k) {
      const Complex p = q + std::polar(r, kTwoPi * (k + 0.125) / m);
      s += g(p, q) - std::log(r / std::sqrt(T));
    }
    return s / m;
  };
  const double l1 = finite_part(rho), l2 = finite_part(0.5 * rho), l3 = finite_part(0.25 * rho);
  const double e12 = (4.0 * l2 - l1) / 3.0;
  const double e23 = (4.0 * l3 - l2) / 3.0;
  TorusCapacity out;
  out.extrapolation_gap = std::abs(e23 - e12);
  if (!(out.extrapolation_gap <= gap_tol) || !(std::abs(l3 - e23) <= std::abs(l1 - e12) + 1e-14)) {
    throw Error(ErrorKind::ExtrapolationDivergence, "capacity extrapolation does not settle");
  }
  out.value = std::exp(e23);
  out.closed_form = std::sqrt(T) * std::abs(theta1_prime0(g.torus().tau, g.torus().terms)) * std::exp(g.gamma());
  return out;
}

}  // namespace suita

#endif  // SUITA_TORUS_GREEN_HPP
