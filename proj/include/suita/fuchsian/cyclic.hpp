#ifndef SUITA_FUCHSIAN_CYCLIC_HPP
#define SUITA_FUCHSIAN_CYCLIC_HPP

#include "suita/report.hpp"
#include "suita/squeezing/moebius.hpp"

#include <sstream>
#include <vector>

namespace suita {

/// g(z) = (z + c) / (1 + c z), fixing +-1, with g(0) = c.
inline MoebiusMap canonical_generator(double c) {
  if (!(c > 0.0 && c < 1.0)) throw Error(ErrorKind::Parameter, "generator needs 0 < c < 1");
  return {1.0, c, c, 1.0};
}

/// Orbit of 0 under a hyperbolic disc automorphism, |n| <= N.
class CyclicGroup {
 public:
  CyclicGroup(const MoebiusMap& g, int N) : g_(g), N_(N) {
    if (N < 1) throw Error(ErrorKind::Parameter, "truncation must be positive");
    if (!(std::abs(g.trace()) > 2.0)) throw Error(ErrorKind::Parameter, "generator is not hyperbolic");
    // Disc automorphism: |g(z)| = 1 on |z| = 1.
    for (int k = 0; k < 8; ++k) {
      if (std::abs(std::abs(g(std::polar(1.0, kTwoPi * (k + 0.25) / 8))) - 1.0) > 1e-12) {
        throw Error(ErrorKind::Parameter, "generator does not preserve the unit disc");
      }
    }
    orbit_.assign(2 * N + 1, Complex(0.0, 0.0));
    deriv_.assign(2 * N + 1, 1.0);
    walk(g_, +1);
    walk(g_.inverse(), -1);
  }

  int truncation() const { return N_; }
  const MoebiusMap& generator() const { return g_; }

  Complex point(int n) const { return orbit_.at(n + N_); }
  /// |(g^n)'(0)|, accumulated by the chain rule along the orbit.
  double derivative(int n) const { return deriv_.at(n + N_); }

  /// Half translation length A, with |trace| = 2 cosh A.
  double half_translation() const { return std::acosh(0.5 * std::abs(g_.trace())); }

  /// artanh of the Euclidean distance from 0 to the invariant geodesic.
  double axis_offset() const {
    const Complex a = g_.gamma();
    const Complex b = g_.delta() - g_.alpha();
    const Complex c = -g_.beta();
    const Complex disc = std::sqrt(b * b - 4.0 * a * c);
    if (std::abs(a) == 0.0) return 0.0;
    const Complex z1 = (-b + disc) / (2.0 * a);
    const Complex z2 = (-b - disc) / (2.0 * a);
    const double half = 0.5 * std::abs(std::arg(z1 / z2));
    // sec - tan, written without cancellation near half = pi / 2.
    const double mod = std::max(0.0, std::cos(half) / (1.0 + std::sin(half)));
    return std::atanh(std::min(mod, 1.0 - 1e-16));
  }

 private:
  void walk(const MoebiusMap& h, int step) {
    Complex z(0.0, 0.0);
    double d = 1.0;
    for (int k = 1; k <= N_; ++k) {
      d *= std::abs(h.derivative(z));
      z = h(z);
      orbit_[N_ + step * k] = z;
      deriv_[N_ + step * k] = d;
    }
  }

  MoebiusMap g_;
  int N_;
  std::vector<Complex> orbit_;
  std::vector<double> deriv_;
};

struct FuchsianSums {
  double sum = 0.0;          // sum_{|n|<=N} |(g^n)'(0)|
  double product = 0.0;      // prod_{0<|n|<=N} |g^n(0)|^2
  double tail_bound = 0.0;
  double closed_form_sum = 0.0;       // sum sech^2(n artanh c), canonical generator only
  double max_chain_closed_gap = 0.0;  // max_n |chain rule - sech^2(n A)|
};

/// Geometric tail: |(g^n)'(0)| <= 4 e^{-2(n A - 2D)} and -log|g^n(0)|^2 is
/// bounded by the same quantity over 1 - e^{-2(nA - 2D)}; the product is <= 1.
inline double cyclic_tail_bound(double A, double D, int N) {
  const double u = std::exp(-2.0 * ((N + 1) * A - 2.0 * D));
  return 8.0 * u / ((1.0 - std::exp(-2.0 * A)) * (1.0 - std::min(u, 0.5)));
}

inline FuchsianSums fuchsian_sums(const CyclicGroup& group, double tail_tol = Tolerances().fuchsian_tail_tol) {
  const int N = group.truncation();
  FuchsianSums out;
  double log_product = 0.0;
  // Pair +-n from the far end so small terms are added first.
  for (int k = N; k >= 1; --k) {
    out.sum += group.derivative(k) + group.derivative(-k);
    log_product += std::log(std::norm(group.point(k))) + std::log(std::norm(group.point(-k)));
  }
  out.sum += 1.0;
  out.product = std::exp(log_product);
  // The geometric bound is asymptotically tight, so summation roundoff is added.
  out.tail_bound = cyclic_tail_bound(group.half_translation(), group.axis_offset(), N) +
                   4.0 * (2 * N + 1) * std::numeric_limits<double>::epsilon() * out.sum;
  if (!(out.tail_bound <= tail_tol)) {
    std::ostringstream msg;
    msg << "orbit tail bound " << out.tail_bound << " exceeds " << tail_tol << " at N=" << N;
    throw Error(ErrorKind::NonConvergence, msg.str());
  }
  return out;
}

inline FuchsianSums fuchsian_sums(double c, int N, double tail_tol = Tolerances().fuchsian_tail_tol) {
  if (N < 8) throw Error(ErrorKind::Parameter, "truncation must be at least 8");
  const CyclicGroup group(canonical_generator(c), N);
  FuchsianSums out = fuchsian_sums(group, tail_tol);
  const double A = std::atanh(c);
  for (int k = N; k >= 1; --k) {
    const double ch = std::cosh(k * A);
    const double closed = 1.0 / (ch * ch);
    out.closed_form_sum += 2.0 * closed;
    out.max_chain_closed_gap = std::max({out.max_chain_closed_gap, std::abs(group.derivative(k) - closed),
                                         std::abs(group.derivative(-k) - closed)});
  }
  out.closed_form_sum += 1.0;
  return out;
}

/// One record per c: margin = sum - product, tolerance = tail bound.
inline std::vector<ReportRecord> inequality_check(const std::vector<double>& c_grid, int N,
                                                  const Tolerances& tol = Tolerances()) {
  if (c_grid.empty()) throw Error(ErrorKind::Parameter, "empty c grid");
  std::vector<ReportRecord> out;
  for (double c : c_grid) {
    ReportRecord rec;
    rec.command = "fuchsian-check";
    std::ostringstream id;
    id.precision(6);
    id << "c=" << c << ",N=" << N;
    rec.input_id = id.str();
    rec.inputs = {{"c", c}, {"N", N}};
    try {
      const auto s = fuchsian_sums(c, N, tol.fuchsian_tail_tol);
      rec.add("sum", s.sum, "fuchsian.fuchsian_sums");
      rec.add("product", s.product, "fuchsian.fuchsian_sums");
      rec.add("tail_bound", s.tail_bound, "fuchsian.fuchsian_sums");
      rec.add("closed_form_sum", s.closed_form_sum, "fuchsian.fuchsian_sums");
      rec.add("max_chain_closed_gap", s.max_chain_closed_gap, "fuchsian.fuchsian_sums");
      rec.decide(s.sum - s.product, s.tail_bound);
    } catch (const Error& e) {
      rec.fail_with(e.what());
    }
    out.push_back(std::move(rec));
  }
  return out;
}

/// 0.05, 0.10, ..., 0.95.
inline std::vector<double> default_c_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 19; ++k) grid.push_back(0.05 * k);
  return grid;
}

}  // namespace suita

#endif  // SUITA_FUCHSIAN_CYCLIC_HPP
