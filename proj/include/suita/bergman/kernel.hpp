#ifndef SUITA_BERGMAN_KERNEL_HPP
#define SUITA_BERGMAN_KERNEL_HPP

#include "suita/bergman/gram.hpp"

#include <Eigen/Cholesky>

#include <memory>
#include <optional>

namespace suita {

/// Kernel diagonal K(z, z) = sup |f(z)|^2 / int |f|^2 rho dlambda over the
/// basis span, with the diagnostics that come with it.
struct KernelEstimate {
  double value = 0.0;
  int basis_size = 0;
  double gram_condition = 1.0;
  double truncation_error_estimate = 0.0;
  bool ill_conditioned = false;
  BasisRange range;
};

/// Basis range large enough that the neglected monomials are below double
/// precision at z. Radial weights get a point-dependent range (cheap: the Gram
/// is diagonal). Other weights on an annulus get the same range capped at 256
/// per side, since their Gram is dense; the disc and Jordan domains use the
/// fixed default.
inline BasisRange default_basis(const PlanarDomain& domain, const WeightSpec& weight, Complex z) {
  constexpr int kDefault = 64;
  const int cap = weight.is_radial() ? 4'000'000 : 256;
  const auto modes_for = [&](double log_ratio) {
    if (!(log_ratio > 0.0)) return kDefault;
    const double n = std::ceil(60.0 / (2.0 * log_ratio));
    return static_cast<int>(std::clamp(n, static_cast<double>(kDefault), static_cast<double>(cap)));
  };
  const double rz = std::abs(z);
  if (domain.is_jordan()) return {0, kDefault};
  if (domain.is_disc()) {
    if (!weight.is_radial()) return {0, kDefault};
    const double R = domain.as_disc().radius;
    return {0, rz > 0 ? modes_for(std::log(R / rz)) : kDefault};
  }
  const double r = domain.as_annulus().r_inner;
  return {-modes_for(std::log(rz / r)), modes_for(-std::log(rz))};
}

/// Immutable weighted Bergman space on a monomial range: the Gram data plus its
/// factorization. Concurrent const use is safe.
class BergmanSpace {
 public:
  BergmanSpace(const PlanarDomain& domain, const WeightSpec& weight, BasisRange range,
               const Tolerances& tol = Tolerances(), const GramOptions& options = GramOptions())
      : domain_(domain), range_(range) {
    validate_basis(domain, range);
    if (!domain.is_jordan() && weight.is_radial() && !options.force_quadrature) {
      // Diagonal Gram: keep only the log-moments, ranges may be very long.
      diagonal_ = true;
      const auto b = radial_bounds(domain);
      log_moments_.resize(range.size());
      double ref_lo = std::numeric_limits<double>::infinity();
      double ref_hi = -ref_lo;
      for (int n = range.n_min; n <= range.n_max; ++n) {
        const double lm = log_radial_moment(weight, n, b.lo, b.hi);
        log_moments_[n - range.n_min] = lm;
        const double rel = lm - log_radial_moment(WeightSpec(), n, b.lo, b.hi);
        ref_lo = std::min(ref_lo, rel);
        ref_hi = std::max(ref_hi, rel);
      }
      condition_ = std::exp(ref_hi - ref_lo);
    } else {
      gram_ = std::make_shared<const Gram>(gram_matrix(domain, weight, range, tol, options));
      condition_ = gram_->condition;
      llt_ = std::make_shared<const Eigen::LLT<Eigen::MatrixXcd>>(gram_->normalized);
      if (llt_->info() != Eigen::Success) throw Error(ErrorKind::SolverSingular, "Gram matrix is not positive definite");
    }
  }

  BasisRange range() const { return range_; }
  bool diagonal() const { return diagonal_; }
  double condition() const { return condition_; }
  bool ill_conditioned() const { return !(condition_ <= 1e10); }
  const Gram* gram() const { return gram_.get(); }

  double kernel(Complex z) const {
    require_inside(z);
    if (diagonal_) {
      const double log_r = std::log(std::abs(z));
      double sum = 0.0;
      for (int n = range_.n_min; n <= range_.n_max; ++n) sum += std::exp(log_term(n, log_r));
      return sum;
    }
    const Eigen::VectorXcd v = evaluation_vector(z);
    return std::real(v.dot(llt_->solve(v)));
  }

  /// Coefficients (in z^n) of the least-norm element with F(z0) = value.
  Eigen::VectorXcd extremal_coefficients(Complex z0, Complex value, double kernel_value) const {
    Eigen::VectorXcd a(range_.size());
    if (diagonal_) {
      // a_n = value conj(z0^n) / (G_nn K).
      for (int n = range_.n_min; n <= range_.n_max; ++n) {
        const int i = n - range_.n_min;
        a[i] = value * conj_power(z0, n) * std::exp(-log_moments_[i]) / kernel_value;
      }
      return a;
    }
    const Eigen::VectorXcd v = evaluation_vector(z0);
    const Eigen::VectorXcd t = llt_->solve(v) * (value / kernel_value);
    for (int i = 0; i < range_.size(); ++i) a[i] = t[i] * std::exp(-gram_->log_scale[i]);
    return a;
  }

 private:
  static Complex conj_power(Complex z, int n) {
    if (n == 0) return {1.0, 0.0};
    return std::pow(std::conj(z), n);
  }

  // log of |z|^{2n} / G_nn for the diagonal case.
  double log_term(int n, double log_r) const {
    const double lm = log_moments_[n - range_.n_min];
    if (n == 0) return -lm;
    return 2.0 * n * log_r - lm;
  }

  // v_i = conj(z^{n_i}) / scale_i.
  Eigen::VectorXcd evaluation_vector(Complex z) const {
    Eigen::VectorXcd v(range_.size());
    const double r = std::abs(z);
    const double phase = std::arg(z);
    for (int i = 0; i < range_.size(); ++i) {
      const int n = range_.n_min + i;
      if (n == 0) {
        v[i] = std::exp(-gram_->log_scale[i]);
      } else if (r == 0.0) {
        v[i] = 0.0;
      } else {
        v[i] = std::polar(std::exp(n * std::log(r) - gram_->log_scale[i]), -n * phase);
      }
    }
    return v;
  }

  void require_inside(Complex z) const {
    if (!domain_.contains(z)) throw Error(ErrorKind::Parameter, "kernel point must lie in the domain");
  }

  PlanarDomain domain_;
  BasisRange range_;
  bool diagonal_ = false;
  double condition_ = 1.0;
  std::vector<double> log_moments_;
  std::shared_ptr<const Gram> gram_;
  std::shared_ptr<const Eigen::LLT<Eigen::MatrixXcd>> llt_;
};

struct KernelOptions {
  std::optional<BasisRange> range;
  Tolerances tol{};
  GramOptions gram{};
};

/// Kernel diagonal with a truncation estimate from halving the basis range.
inline KernelEstimate kernel_diag(const PlanarDomain& domain, const WeightSpec& weight, Complex z,
                                  const KernelOptions& options = KernelOptions()) {
  const BasisRange range = options.range.value_or(default_basis(domain, weight, z));
  const BergmanSpace full(domain, weight, range, options.tol, options.gram);
  const BergmanSpace half(domain, weight, range.halved(), options.tol, options.gram);
  KernelEstimate k;
  k.value = full.kernel(z);
  k.basis_size = range.size();
  k.range = range;
  k.gram_condition = std::max(1.0, full.condition());
  k.ill_conditioned = full.ill_conditioned();
  k.truncation_error_estimate = k.value > 0 ? std::abs(k.value - half.kernel(z)) / k.value : 0.0;
  if (k.truncation_error_estimate > options.tol.trunc_tol) {
    throw Error(ErrorKind::Truncation, "kernel truncation estimate " + std::to_string(k.truncation_error_estimate) +
                                           " exceeds tolerance");
  }
  return k;
}

struct Extension {
  double min_norm = 0.0;
  Eigen::VectorXcd coefficients;
  BasisRange range;
  double kernel = 0.0;
};

/// Minimizer of int |F|^2 rho over the basis span subject to F(z0) = value.
inline Extension least_norm_extension(const PlanarDomain& domain, const WeightSpec& weight, Complex z0, Complex value,
                                      const KernelOptions& options = KernelOptions()) {
  const BasisRange range = options.range.value_or(default_basis(domain, weight, z0));
  const BergmanSpace space(domain, weight, range, options.tol, options.gram);
  Extension e;
  e.range = range;
  e.kernel = space.kernel(z0);
  if (!(e.kernel > 1e-300)) throw Error(ErrorKind::ZeroKernel, "kernel vanishes at the interpolation point");
  if (value == Complex(0.0, 0.0)) {
    e.coefficients = Eigen::VectorXcd::Zero(range.size());
    e.min_norm = 0.0;
    return e;
  }
  e.coefficients = space.extremal_coefficients(z0, value, e.kernel);
  e.min_norm = std::norm(value) / e.kernel;
  return e;
}

}  // namespace suita

#endif  // SUITA_BERGMAN_KERNEL_HPP
