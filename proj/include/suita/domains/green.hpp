#ifndef SUITA_DOMAINS_GREEN_HPP
#define SUITA_DOMAINS_GREEN_HPP

#include "suita/core.hpp"
#include "suita/domains/planar_domain.hpp"

#include <Eigen/Dense>

#include <array>
#include <memory>

namespace suita {

// Convention throughout: G(z, w) = log|z - w| + H(z, w), G < 0 inside and
// G = 0 on the boundary. H is the regular part.

inline void require_distinct(Complex z, Complex w) {
  if (std::abs(z - w) < 1e-14) throw Error(ErrorKind::CoincidentPoints, "Green function evaluated at its pole");
}

/// Closed-form Green function of the disc |z| < radius.
inline double green_disc(Complex z, Complex w, double radius = 1.0) {
  require_distinct(z, w);
  const double r2 = radius * radius;
  if (!(std::norm(z) < r2 && std::norm(w) < r2)) throw Error(ErrorKind::Parameter, "points must lie in the disc");
  return std::log(radius * std::abs(z - w) / std::abs(r2 - std::conj(w) * z));
}

inline double disc_regular_part(Complex z, Complex w, double radius = 1.0) {
  return std::log(radius) - std::log(std::abs(radius * radius - std::conj(w) * z));
}

/// Harmonic correction on r < |z| < 1 that turns the unit-disc Green function
/// into the annulus Green function. It solves the Dirichlet problem with data 0
/// on |z| = 1 and -log|(z - w)/(1 - conj(w) z)| on |z| = r, expanded in
/// {log|z|, Re z^n, Im z^n, Re z^-n, Im z^-n}; every mode has a closed-form
/// coefficient. `tail` receives the geometric bound on the neglected modes.
inline double annulus_correction(double r, Complex z, Complex w, int modes, double* tail = nullptr) {
  const double r2 = r * r;
  const double log_inv_r = -std::log(r);
  double sum = std::log(std::abs(w)) * std::log(std::abs(z)) / log_inv_r;
  const std::array<Complex, 4> bases{r2 * z / w, r2 * std::conj(w) * z, r2 / (std::conj(w) * z), r2 * w / z};
  const std::array<double, 4> signs{-1.0, 1.0, 1.0, -1.0};
  std::array<Complex, 4> powers{Complex(1.0), Complex(1.0), Complex(1.0), Complex(1.0)};
  double r2n = 1.0;
  for (int n = 1; n <= modes; ++n) {
    r2n *= r2;
    Complex mode{0.0, 0.0};
    for (int k = 0; k < 4; ++k) {
      powers[k] *= bases[k];
      mode += signs[k] * powers[k];
    }
    sum += mode.real() / (n * (1.0 - r2n));
  }
  if (tail != nullptr) {
    double q = 0.0;
    for (const auto& b : bases) q = std::max(q, std::abs(b));
    const int next = modes + 1;
    *tail = 4.0 * std::pow(q, next) / (next * (1.0 - std::pow(r2, next)) * (1.0 - q));
  }
  return sum;
}

/// Green function of the annulus r_inner < |z| < 1 by the truncated mode sum.
inline double green_annulus(double r_inner, Complex z, Complex w, int modes, double tail_tol = 1e-10) {
  require_distinct(z, w);
  const auto inside = [&](Complex p) { return std::abs(p) > r_inner && std::abs(p) < 1.0; };
  if (!inside(z) || !inside(w)) throw Error(ErrorKind::Parameter, "points must lie in the annulus");
  double tail = 0.0;
  const double correction = annulus_correction(r_inner, z, w, modes, &tail);
  if (tail > tail_tol) throw Error(ErrorKind::NonConvergence, "annulus mode tail " + std::to_string(tail) + " exceeds tolerance");
  return std::log(std::abs(z - w) / std::abs(1.0 - std::conj(w) * z)) + correction;
}

/// Double-layer Nystrom discretization of the interior Dirichlet problem on a
/// smooth Jordan domain, trapezoid rule in the curve parameter.
class NystromSolver {
 public:
  NystromSolver(const JordanCurve& curve, int points) : n_(points) {
    if (points < 64) throw Error(ErrorKind::Parameter, "Nystrom needs at least 64 quadrature points");
    zeta_.resize(n_);
    dzeta_.resize(n_);
    Eigen::MatrixXd system(n_, n_);
    std::vector<Complex> ddzeta(n_);
    for (int i = 0; i < n_; ++i) {
      const double t = kTwoPi * i / n_;
      zeta_[i] = curve.point(t);
      dzeta_[i] = curve.derivative(t);
      ddzeta[i] = curve.second_derivative(t);
    }
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        if (i == j) {
          system(i, j) = 0.5 + std::imag(ddzeta[i] / dzeta_[i]) / (2.0 * n_);
        } else {
          system(i, j) = std::imag(dzeta_[j] / (zeta_[j] - zeta_[i])) / n_;
        }
      }
    }
    lu_.compute(system);
    const double rcond = lu_.rcond();
    condition_ = rcond > 0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!(condition_ <= 1e12)) throw Error(ErrorKind::SolverSingular, "Nystrom system condition estimate exceeds 1e12");
  }

  int points() const { return n_; }
  double condition() const { return condition_; }

  /// Harmonic extension of the boundary data -log|zeta - w|, evaluated at z.
  double regular(Complex z, Complex w) const {
    Eigen::VectorXd data(n_);
    for (int i = 0; i < n_; ++i) data[i] = -std::log(std::abs(zeta_[i] - w));
    const Eigen::VectorXd density = lu_.solve(data);
    double sum = 0.0;
    for (int j = 0; j < n_; ++j) sum += density[j] * std::imag(dzeta_[j] / (zeta_[j] - z));
    return sum / n_;
  }

 private:
  int n_;
  std::vector<Complex> zeta_;
  std::vector<Complex> dzeta_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double condition_ = 1.0;
};

/// Immutable Green-function evaluator for a planar domain. Safe for concurrent
/// const use after construction.
class GreenEvaluator {
 public:
  enum class Method { ClosedForm, LaurentModes, Nystrom };

  struct Options {
    int annulus_modes = 64;
    int quad_points = 256;
    Tolerances tol{};
  };

  explicit GreenEvaluator(PlanarDomain domain) : GreenEvaluator(std::move(domain), Options()) {}

  GreenEvaluator(PlanarDomain domain, Options options) : domain_(std::move(domain)), options_(options) {
    if (domain_.is_disc()) {
      method_ = Method::ClosedForm;
    } else if (domain_.is_annulus()) {
      method_ = Method::LaurentModes;
    } else {
      method_ = Method::Nystrom;
      coarse_ = std::make_shared<const NystromSolver>(domain_.as_jordan(), options_.quad_points);
      fine_ = std::make_shared<const NystromSolver>(domain_.as_jordan(), 2 * options_.quad_points);
    }
  }

  const PlanarDomain& domain() const { return domain_; }
  Method method() const { return method_; }
  const Options& options() const { return options_; }

  static const char* method_name(Method m) {
    switch (m) {
      case Method::ClosedForm: return "closed_form";
      case Method::LaurentModes: return "laurent_modes";
      case Method::Nystrom: return "nystrom";
    }
    return "?";
  }

  /// H(z, w) = G(z, w) - log|z - w|. Defined also for z == w.
  double regular(Complex z, Complex w) const {
    switch (method_) {
      case Method::ClosedForm:
        return disc_regular_part(z, w, domain_.as_disc().radius);
      case Method::LaurentModes: {
        double tail = 0.0;
        const double r = domain_.as_annulus().r_inner;
        const double value = -std::log(std::abs(1.0 - std::conj(w) * z)) +
                             annulus_correction(r, z, w, options_.annulus_modes, &tail);
        if (tail > options_.tol.tail_tol) {
          throw Error(ErrorKind::NonConvergence, "annulus mode tail exceeds tolerance");
        }
        return value;
      }
      case Method::Nystrom: {
        require_interior(z);
        require_interior(w);
        const double coarse = coarse_->regular(z, w);
        const double fine = fine_->regular(z, w);
        if (std::abs(fine - coarse) > options_.tol.refine_tol) {
          throw Error(ErrorKind::Accuracy, "Nystrom result changed by " + std::to_string(std::abs(fine - coarse)) +
                                               " under quadrature doubling");
        }
        return fine;
      }
    }
    return 0.0;
  }

  double green(Complex z, Complex w) const {
    require_distinct(z, w);
    if (!domain_.contains(z) || !domain_.contains(w)) throw Error(ErrorKind::Parameter, "points must lie in the domain");
    return std::log(std::abs(z - w)) + regular(z, w);
  }

  double nystrom_condition() const { return coarse_ ? coarse_->condition() : 1.0; }

 private:
  void require_interior(Complex z) const {
    if (!domain_.contains(z) || domain_.distance_to_boundary(z) <= 1e-3 * domain_.diameter()) {
      throw Error(ErrorKind::Parameter, "Nystrom evaluation point too close to the boundary");
    }
  }

  PlanarDomain domain_;
  Options options_;
  Method method_ = Method::ClosedForm;
  std::shared_ptr<const NystromSolver> coarse_;
  std::shared_ptr<const NystromSolver> fine_;
};

/// Stand-alone Nystrom Green function (builds its own solver).
inline double green_nystrom(const PlanarDomain& domain, Complex z, Complex w, int quad_points = 256,
                            Tolerances tol = Tolerances()) {
  if (!domain.is_jordan()) throw Error(ErrorKind::Parameter, "Nystrom solver expects a Jordan domain");
  GreenEvaluator::Options options;
  options.quad_points = quad_points;
  options.tol = tol;
  return GreenEvaluator(domain, options).green(z, w);
}

/// Robin-constant estimate H(z, z) together with the raw two-radius values.
struct RobinEstimate {
  double value = 0.0;
  double at_coarse = 0.0;
  double at_fine = 0.0;
};

inline RobinEstimate robin_constant(const GreenEvaluator& g, Complex z) {
  if (!g.domain().contains(z)) throw Error(ErrorKind::Parameter, "capacity point must be interior");
  if (g.method() != GreenEvaluator::Method::Nystrom) {
    const double h = g.regular(z, z);
    return {h, h, h};
  }
  constexpr double eps1 = 1e-4;
  constexpr double eps2 = 1e-5;
  const auto averaged = [&](double eps) {
    double sum = 0.0;
    for (int k = 0; k < 4; ++k) sum += g.regular(z + eps * std::polar(1.0, 0.5 * kPi * k), z);
    return 0.25 * sum;
  };
  const double h1 = averaged(eps1);
  const double h2 = averaged(eps2);
  if (std::abs(h1 - h2) > g.options().tol.cap_tol) {
    throw Error(ErrorKind::ExtrapolationDivergence, "Robin estimates at two radii disagree");
  }
  return {richardson_linear(eps1, h1, eps2, h2), h1, h2};
}

/// Logarithmic capacity c(z) = exp(lim_{xi -> z} (G(xi, z) - log|xi - z|)).
inline double capacity(const GreenEvaluator& g, Complex z) { return std::exp(robin_constant(g, z).value); }

}  // namespace suita

#endif  // SUITA_DOMAINS_GREEN_HPP
