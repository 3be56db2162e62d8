#ifndef SUITA_BERGMAN_GRAM_HPP
#define SUITA_BERGMAN_GRAM_HPP

#include "suita/bergman/weight.hpp"
#include "suita/core.hpp"
#include "suita/domains/planar_domain.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <string>
#include <vector>

namespace suita {

/// Monomial basis z^n, n_min <= n <= n_max.
struct BasisRange {
  int n_min = 0;
  int n_max = 64;

  int size() const { return n_max - n_min + 1; }
  BasisRange halved() const { return {n_min / 2, n_max / 2}; }
  bool operator==(const BasisRange&) const = default;
};

/// log of int_lo^hi s^{e-1} ds.
inline double log_power_moment(double e, double lo, double hi) {
  if (!(hi > lo)) return -std::numeric_limits<double>::infinity();
  if (std::abs(e) < 1e-13) {
    if (lo <= 0.0) throw Error(ErrorKind::DivergentIntegral, "logarithmically divergent radial integral");
    return std::log(std::log(hi / lo));
  }
  if (e > 0.0) {
    const double tail = lo > 0.0 ? std::log(-std::expm1(e * std::log(lo / hi))) : 0.0;
    return e * std::log(hi) + tail - std::log(e);
  }
  if (lo <= 0.0) throw Error(ErrorKind::DivergentIntegral, "radial integral diverges at the origin");
  return e * std::log(lo) + std::log(-std::expm1(e * std::log(hi / lo))) - std::log(-e);
}

inline double log_sum_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

/// log of int_{lo < |z| < hi} |z|^{2n} density dlambda for a radial weight,
/// from the closed-form radial integrals.
inline double log_radial_moment(const WeightSpec& weight, int n, double lo, double hi) {
  const double log2pi = std::log(kTwoPi) + weight.log_factor();
  return std::visit(
      [&](const auto& w) -> double {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, Unweighted>) {
          return log2pi + log_power_moment(2.0 * n + 2.0, lo, hi);
        } else if constexpr (std::is_same_v<T, HarmonicLog>) {
          return log2pi + log_power_moment(2.0 * n + 2.0 - 2.0 * w.alpha, lo, hi);
        } else if constexpr (std::is_same_v<T, MaxPiece>) {
          // Constant density a^{-2(1+delta)} below a, s^{-2(1+delta)} above.
          const double inner = -2.0 * (1.0 + w.delta) * std::log(w.a) +
                               log_power_moment(2.0 * n + 2.0, lo, std::min(hi, w.a));
          const double outer = log_power_moment(2.0 * n - 2.0 * w.delta, std::max(lo, w.a), hi);
          return log2pi + log_sum_exp(inner, outer);
        } else {
          throw Error(ErrorKind::Parameter, "weight is not radial");
        }
      },
      weight.variant());
}

struct RadialBounds {
  double lo = 0.0;
  double hi = 1.0;
};

inline RadialBounds radial_bounds(const PlanarDomain& domain) {
  if (domain.is_disc()) return {0.0, domain.as_disc().radius};
  if (domain.is_annulus()) return {domain.as_annulus().r_inner, 1.0};
  throw Error(ErrorKind::Parameter, "radial bounds need a disc or an annulus");
}

struct GramOptions {
  bool force_quadrature = false;
  int max_refinements = 5;
};

/// Gram matrix of a monomial range. Stored in the normalized basis
/// e_n = z^n / scale_n as the Hermitian form normalized(i, j) = <e_j, e_i>.
/// Disc and annulus use the unweighted monomial norms as scales; Jordan domains
/// use the diagonal of the Gram matrix itself.
struct Gram {
  BasisRange range;
  Eigen::MatrixXcd normalized;
  Eigen::VectorXd log_scale;
  bool diagonal = false;
  double condition = 1.0;
  bool ill_conditioned = false;
  int refinement_levels = 0;
  std::string method;
  std::vector<std::string> warnings;

  /// int z^m conj(z)^n density dlambda.
  Complex entry(int m, int n) const {
    const int i = m - range.n_min;
    const int j = n - range.n_min;
    return std::exp(log_scale[i] + log_scale[j]) * normalized(j, i);
  }

  Eigen::MatrixXcd raw() const {
    Eigen::MatrixXcd out(range.size(), range.size());
    for (int m = range.n_min; m <= range.n_max; ++m) {
      for (int n = range.n_min; n <= range.n_max; ++n) out(m - range.n_min, n - range.n_min) = entry(m, n);
    }
    return out;
  }
};

namespace detail {

inline Eigen::VectorXd reference_log_scale(const PlanarDomain& domain, BasisRange range) {
  const auto b = radial_bounds(domain);
  Eigen::VectorXd s(range.size());
  for (int n = range.n_min; n <= range.n_max; ++n) {
    s[n - range.n_min] = 0.5 * log_radial_moment(WeightSpec(), n, b.lo, b.hi);
  }
  return s;
}

inline void finish_condition(Gram& g) {
  if (g.diagonal) {
    const auto d = g.normalized.diagonal().real();
    g.condition = d.maxCoeff() / d.minCoeff();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(g.normalized, Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();
    g.condition = ev.minCoeff() > 0 ? ev.maxCoeff() / ev.minCoeff() : std::numeric_limits<double>::infinity();
  }
  if (!(g.condition <= 1e10)) {
    g.ill_conditioned = true;
    g.warnings.push_back("Gram condition number exceeds 1e10");
  }
}

inline Gram diagonal_gram(const PlanarDomain& domain, const WeightSpec& weight, BasisRange range) {
  Gram g;
  g.range = range;
  g.diagonal = true;
  g.method = "closed_form_radial";
  g.log_scale = reference_log_scale(domain, range);
  const auto b = radial_bounds(domain);
  g.normalized = Eigen::MatrixXcd::Zero(range.size(), range.size());
  for (int n = range.n_min; n <= range.n_max; ++n) {
    const int i = n - range.n_min;
    g.normalized(i, i) = std::exp(log_radial_moment(weight, n, b.lo, b.hi) - 2.0 * g.log_scale[i]);
  }
  finish_condition(g);
  return g;
}

/// One quadrature pass: radial composite Gauss-Legendre (in s for the disc,
/// in log s for the annulus) times the periodic trapezoid rule in angle.
inline Eigen::MatrixXcd quadrature_pass(const PlanarDomain& domain, const WeightSpec& weight, BasisRange range,
                                        const Eigen::VectorXd& log_scale, int level) {
  const auto b = radial_bounds(domain);
  const bool log_variable = b.lo > 0.0;
  std::vector<double> breaks{log_variable ? std::log(b.lo) : 0.0};
  for (double k : weight.radial_kinks()) {
    if (k > b.lo && k < b.hi) breaks.push_back(log_variable ? std::log(k) : k);
  }
  breaks.push_back(log_variable ? std::log(b.hi) : b.hi);
  const double span = breaks.back() - breaks.front();
  const int base_panels = log_variable ? std::max(8, static_cast<int>(std::ceil(span / 0.2))) : 8;
  const quad::Rule radial = quad::composite_gauss(breaks, base_panels << level);

  const int size = range.size();
  const int band = 2 * (size - 1);
  int angular = 64;
  while (angular < band + 64) angular *= 2;
  angular <<= level;

  // exp(i k theta_j) for k in [-(size-1), size-1].
  const int kmax = size - 1;
  Eigen::MatrixXcd phases(2 * kmax + 1, angular);
  for (int j = 0; j < angular; ++j) {
    const double theta = kTwoPi * j / angular;
    for (int k = -kmax; k <= kmax; ++k) phases(k + kmax, j) = std::polar(1.0, k * theta);
  }

  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(size, size);
  Eigen::VectorXd density(angular);
  Eigen::VectorXcd moments(2 * kmax + 1);
  Eigen::VectorXd amp(size);
  for (std::size_t q = 0; q < radial.size(); ++q) {
    const double s = log_variable ? std::exp(radial.nodes[q]) : radial.nodes[q];
    if (s <= 0.0) continue;
    // dlambda = s ds dtheta = s^2 dx dtheta in the log variable.
    const double jac = log_variable ? s * s : s;
    for (int j = 0; j < angular; ++j) density[j] = weight.density(std::polar(s, kTwoPi * j / angular));
    moments = phases * density.cast<Complex>() * (kTwoPi / angular);
    const double log_s = std::log(s);
    for (int i = 0; i < size; ++i) amp[i] = std::exp((range.n_min + i) * log_s - log_scale[i]);
    const double w = radial.weights[q] * jac;
    // normalized(i, j) = <e_j, e_i> = int s^{m+n} e^{i (n - m) theta} rho.
    for (int i = 0; i < size; ++i) {
      for (int jj = 0; jj < size; ++jj) acc(i, jj) += w * amp[i] * amp[jj] * moments(jj - i + kmax);
    }
  }
  return 0.5 * (acc + acc.adjoint());
}

inline Gram quadrature_gram(const PlanarDomain& domain, const WeightSpec& weight, BasisRange range,
                            const Tolerances& tol, const GramOptions& options) {
  Gram g;
  g.range = range;
  g.method = "product_quadrature";
  g.log_scale = reference_log_scale(domain, range);
  Eigen::MatrixXcd previous = quadrature_pass(domain, weight, range, g.log_scale, 0);
  for (int level = 1; level <= options.max_refinements; ++level) {
    Eigen::MatrixXcd current = quadrature_pass(domain, weight, range, g.log_scale, level);
    const double change = (current - previous).cwiseAbs().maxCoeff();
    previous = std::move(current);
    g.refinement_levels = level;
    if (change < tol.gram_tol) {
      g.normalized = previous;
      finish_condition(g);
      return g;
    }
  }
  throw Error(ErrorKind::Accuracy, "Gram quadrature did not stabilize under refinement");
}

/// Unweighted Gram on a Jordan domain from the boundary identity
/// int z^n conj(z)^m dlambda = (1 / 2i) oint z^n conj(z)^{m+1} / (m+1) dz,
/// which the periodic trapezoid rule integrates exactly for polynomial data.
inline Gram jordan_gram(const JordanCurve& curve, BasisRange range) {
  if (range.n_min < 0) throw Error(ErrorKind::Parameter, "Jordan-domain basis must start at n >= 0");
  Gram g;
  g.range = range;
  g.method = "boundary_integral";
  const int size = range.size();
  const int points = std::max(256, 4 * (range.n_max + 2) * std::max(1, curve.max_frequency()) + 64);
  std::vector<Complex> z(points), dz(points);
  for (int j = 0; j < points; ++j) {
    const double t = kTwoPi * j / points;
    z[j] = curve.point(t);
    dz[j] = curve.derivative(t) * (kTwoPi / points);
  }
  Eigen::MatrixXcd pw(size, points);
  for (int j = 0; j < points; ++j) {
    Complex p = std::pow(z[j], range.n_min);
    for (int i = 0; i < size; ++i) {
      pw(i, j) = p;
      p *= z[j];
    }
  }
  Eigen::MatrixXcd raw(size, size);
  for (int i = 0; i < size; ++i) {
    const int m = range.n_min + i;
    for (int jj = 0; jj < size; ++jj) {
      // raw(i, jj) = <z^{n}, z^{m}> with n = n_min + jj.
      Complex sum{0.0, 0.0};
      for (int j = 0; j < points; ++j) sum += pw(jj, j) * std::conj(pw(i, j) * z[j]) * dz[j];
      raw(i, jj) = sum / (Complex(0.0, 2.0) * static_cast<double>(m + 1));
    }
  }
  raw = 0.5 * (raw + raw.adjoint()).eval();
  g.log_scale.resize(size);
  for (int i = 0; i < size; ++i) g.log_scale[i] = 0.5 * std::log(raw(i, i).real());
  g.normalized.resize(size, size);
  for (int i = 0; i < size; ++i) {
    for (int jj = 0; jj < size; ++jj) g.normalized(i, jj) = raw(i, jj) * std::exp(-g.log_scale[i] - g.log_scale[jj]);
  }
  finish_condition(g);
  return g;
}

}  // namespace detail

inline void validate_basis(const PlanarDomain& domain, BasisRange range) {
  if (range.n_max < range.n_min) throw Error(ErrorKind::Parameter, "empty basis range");
  if ((domain.is_disc() || domain.is_jordan()) && range.n_min < 0) {
    throw Error(ErrorKind::DivergentIntegral, "negative powers are not square-integrable on a disc");
  }
}

/// Gram matrix entry (m, n) = int_Omega z^m conj(z)^n rho dlambda.
inline Gram gram_matrix(const PlanarDomain& domain, const WeightSpec& weight, BasisRange range,
                        const Tolerances& tol = Tolerances(), const GramOptions& options = GramOptions()) {
  validate_basis(domain, range);
  if (domain.is_jordan()) {
    if (!weight.is_unweighted()) {
      throw Error(ErrorKind::Parameter, "weighted kernels on Jordan domains are not supported");
    }
    return detail::jordan_gram(domain.as_jordan(), range);
  }
  if (weight.is_radial() && !options.force_quadrature) return detail::diagonal_gram(domain, weight, range);
  if (domain.is_disc() && weight.singular_at_origin()) {
    throw Error(ErrorKind::Parameter, "quadrature Gram needs a weight that is smooth on the disc");
  }
  return detail::quadrature_gram(domain, weight, range, tol, options);
}

}  // namespace suita

#endif  // SUITA_BERGMAN_GRAM_HPP
