#ifndef SUITA_TORUS_BERGMAN_HPP
#define SUITA_TORUS_BERGMAN_HPP

#include "suita/torus/theta.hpp"

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace suita {

/// Level-d theta functions
///   f_j(z) = sum_n exp(pi i d tau m^2 + 2 pi i d m z),  m = n + j/d,
/// with f_j(z+1) = f_j(z), f_j(z+tau) = e^{-pi i d tau - 2 pi i d z} f_j(z), and
/// the metric h(z) = exp(-2 pi d (Im z)^2 / Im tau). K_X is trivialized by dz.
class ThetaBasis {
 public:
  ThetaBasis(const TorusSpec& X, int d, int terms = 12) : X_(X), d_(d), terms_(terms) {
    if (d < 4 || d % 2 != 0) throw Error(ErrorKind::Parameter, "degree must be even and at least 4");
    if (terms < 6) throw Error(ErrorKind::Parameter, "too few theta terms");
  }

  int degree() const { return d_; }
  int size() const { return d_; }
  const TorusSpec& torus() const { return X_; }

  Complex value(int j, Complex z) const { return eval(j, z, false); }

  /// f_j(z) sqrt(h(z)), with the Gaussian folded into the exponent.
  Complex weighted(int j, Complex z) const { return eval(j, z, true); }

  double log_weight(Complex z) const { return -kTwoPi * d_ * z.imag() * z.imag() / X_.im(); }

  /// Ratio f_j(z + tau) / f_j(z) predicted by the factor of automorphy.
  Complex automorphy_factor(Complex z) const {
    return std::exp(Complex(0.0, -kPi * d_) * X_.tau + Complex(0.0, -kTwoPi * d_) * z);
  }

 private:
  Complex eval(int j, Complex z, bool weighted) const {
    if (j < 0 || j >= d_) throw Error(ErrorKind::Parameter, "basis index out of range");
    // Shift n so the dominant terms (m near -Im z / Im tau) sit mid-range.
    const int centre = static_cast<int>(std::lround(-z.imag() / X_.im()));
    const Complex ipdt = Complex(0.0, kPi * d_) * X_.tau;
    const Complex ipdz = Complex(0.0, kTwoPi * d_) * z;
    const double shift = weighted ? 0.5 * log_weight(z) : 0.0;
    Complex s(0.0, 0.0);
    for (int n = centre - terms_; n <= centre + terms_; ++n) {
      const double m = n + static_cast<double>(j) / d_;
      s += std::exp(ipdt * (m * m) + ipdz * m + shift);
    }
    return s;
  }

  TorusSpec X_;
  int d_;
  int terms_;
};

struct TorusGram {
  Eigen::MatrixXcd matrix;   // G_ij = int conj(f_i) f_j h dV_omega, fine grid
  double refinement_gap = 0.0;  // max |G_fine - G_coarse|
  double hermitian_gap = 0.0;
  double condition = 0.0;
  int grid = 0;
};

/// Periodic trapezoid rule on an n x n grid in lattice coordinates; the
/// integrand conj(f_i) f_j h is doubly periodic and dV_omega = du dv.
inline Eigen::MatrixXcd torus_gram_grid(const ThetaBasis& basis, int n) {
  const int d = basis.size();
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(d, d);
  Eigen::VectorXcd w(d);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Complex z = static_cast<double>(a) / n + (static_cast<double>(b) / n) * basis.torus().tau;
      for (int j = 0; j < d; ++j) w[j] = basis.weighted(j, z);
      G.noalias() += w.conjugate() * w.transpose();
    }
  }
  return G / (static_cast<double>(n) * n);
}

inline TorusGram torus_gram(const ThetaBasis& basis, int grid = 128, double refine_tol = 1e-10) {
  TorusGram out;
  out.grid = 2 * grid;
  const Eigen::MatrixXcd coarse = torus_gram_grid(basis, grid);
  out.matrix = torus_gram_grid(basis, 2 * grid);
  out.refinement_gap = (out.matrix - coarse).cwiseAbs().maxCoeff();
  out.hermitian_gap = (out.matrix - out.matrix.adjoint()).cwiseAbs().maxCoeff();
  if (!(out.refinement_gap <= refine_tol * out.matrix.cwiseAbs().maxCoeff())) {
    throw Error(ErrorKind::Accuracy, "torus Gram quadrature did not settle under grid doubling");
  }
  const Eigen::MatrixXcd herm = 0.5 * (out.matrix + out.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  if (!(ev.minCoeff() > 0.0)) throw Error(ErrorKind::SolverSingular, "torus Gram matrix is not positive definite");
  out.condition = ev.maxCoeff() / ev.minCoeff();
  out.matrix = herm;
  return out;
}

/// Diagonal of the Bergman kernel of K_X (x) L in the omega, h_L pointwise
/// norm: sup |F(p)|^2 h(p) / int |F|^2 h dV_omega.
class TorusBergman {
 public:
  TorusBergman(const TorusSpec& X, int d, int grid = 128, double condition_limit = 1e8)
      : basis_(X, d), gram_(torus_gram(basis_, grid)) {
    if (!(gram_.condition < condition_limit)) throw Error(ErrorKind::SolverSingular, "torus Gram is ill-conditioned");
    llt_ = std::make_shared<const Eigen::LLT<Eigen::MatrixXcd>>(gram_.matrix);
    if (llt_->info() != Eigen::Success) throw Error(ErrorKind::SolverSingular, "torus Gram factorization failed");
  }

  const ThetaBasis& basis() const { return basis_; }
  const TorusGram& gram() const { return gram_; }

  double diagonal(Complex p) const {
    // a_j = conj(f_j(p)) sqrt(h(p)); K = a^H G^{-1} a.
    Eigen::VectorXcd a(basis_.size());
    for (int j = 0; j < basis_.size(); ++j) a[j] = std::conj(basis_.weighted(j, p));
    return std::real(a.dot(llt_->solve(a)));
  }

 private:
  ThetaBasis basis_;
  TorusGram gram_;
  std::shared_ptr<const Eigen::LLT<Eigen::MatrixXcd>> llt_;
};

}  // namespace suita

#endif  // SUITA_TORUS_BERGMAN_HPP
