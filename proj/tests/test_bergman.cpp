#include "suita/bergman/annulus_series.hpp"
#include "suita/bergman/suita.hpp"

#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <random>
#include <thread>

namespace suita {
namespace {

// Unweighted annulus kernel on the diagonal, summed straight from the
// monomial norms 2 pi (1 - r^{2n+2}) / (2n+2) and 2 pi log(1/r) for n = -1.
double annulus_kernel_oracle(double r, double s) {
  double sum = 1.0 / (s * s * kTwoPi * std::log(1.0 / r));
  for (int n = 0; n <= 400000; ++n) {
    sum += (n + 1.0) * std::exp(2.0 * n * std::log(s)) / (kPi * (1.0 - std::pow(r, 2.0 * n + 2.0)));
  }
  // n <= -2, written as powers of r / s to stay finite.
  for (int n = -2; n >= -400000; --n) {
    const double m = -(n + 1.0);
    sum += m * std::exp(-2.0 * n * std::log(r / s) - 2.0 * std::log(r)) / (kPi * (1.0 - std::pow(r, 2.0 * m)));
  }
  return sum;
}

double disc_kernel(Complex z) {
  const double s = 1.0 - std::norm(z);
  return 1.0 / (kPi * s * s);
}

// int_disc e^{-phi} dlambda by adaptive radial quadrature, split at a.
double max_piece_mass(double delta, double a) {
  using boost::math::quadrature::gauss_kronrod;
  const auto f = [&](double s) { return kTwoPi * s * std::exp(-(1.0 + delta) * std::max(std::log(s * s), std::log(a * a))); };
  return gauss_kronrod<double, 31>::integrate(f, 0.0, a, 15, 1e-14) +
         gauss_kronrod<double, 31>::integrate(f, a, 1.0, 15, 1e-14);
}

TEST(Gram, DiscAreaIsPi) {
  const auto g = gram_matrix(PlanarDomain::disc(), WeightSpec(), {0, 4});
  EXPECT_NEAR(g.entry(0, 0).real(), kPi, 1e-14);
  EXPECT_TRUE(g.diagonal);
}

TEST(Gram, AnnulusMinusOneMode) {
  const double r = 0.2;
  const auto g = gram_matrix(PlanarDomain::annulus(r), WeightSpec(), {-3, 3});
  EXPECT_NEAR(g.entry(-1, -1).real(), kTwoPi * std::log(1.0 / r), 1e-12);
}

TEST(Gram, MaxPieceMass) {
  const auto g = gram_matrix(PlanarDomain::disc(), WeightSpec(MaxPiece{1.0, 0.5}), {0, 2});
  EXPECT_NEAR(g.entry(0, 0).real(), 7.0 * kPi, 1e-12);
  EXPECT_NEAR(g.entry(0, 0).real(), max_piece_mass(1.0, 0.5), 1e-10);
}

TEST(Gram, MinusOneOnPuncturedDiscDiverges) {
  try {
    gram_matrix(PlanarDomain::disc(), WeightSpec(), {-1, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DivergentIntegral);
  }
  // Log-divergence of the radial integral itself.
  EXPECT_THROW(log_power_moment(0.0, 0.0, 1.0), Error);
}

TEST(Gram, QuadratureMatchesClosedForm) {
  GramOptions opt;
  opt.force_quadrature = true;
  for (const auto& w : {WeightSpec(), WeightSpec(MaxPiece{1.0, 0.5}), WeightSpec(MaxPiece{0.4, 0.3})}) {
    const auto quad = gram_matrix(PlanarDomain::disc(), w, {0, 12}, Tolerances(), opt);
    const auto exact = gram_matrix(PlanarDomain::disc(), w, {0, 12});
    for (int m = 0; m <= 12; ++m) {
      for (int n = 0; n <= 12; ++n) {
        const double scale = std::abs(exact.entry(m, m)) + std::abs(exact.entry(n, n));
        EXPECT_LT(std::abs(quad.entry(m, n) - exact.entry(m, n)) / scale, 1e-6) << w.describe() << " " << m << "," << n;
      }
    }
  }
}

TEST(Gram, AnnulusQuadratureMatchesClosedForm) {
  GramOptions opt;
  opt.force_quadrature = true;
  const auto d = PlanarDomain::annulus(0.3);
  const WeightSpec w(HarmonicLog{0.3});
  const auto quad = gram_matrix(d, w, {-8, 8}, Tolerances(), opt);
  const auto exact = gram_matrix(d, w, {-8, 8});
  EXPECT_LT((quad.normalized - exact.normalized).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Gram, NonRadialIsHermitianPositive) {
  const auto g = gram_matrix(PlanarDomain::annulus(0.2), WeightSpec(HarmonicRe{0.2}), {-6, 6});
  EXPECT_FALSE(g.diagonal);
  EXPECT_LT((g.normalized - g.normalized.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(g.normalized);
  EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
  // Zeroth entry: int e^{-2 c s cos t} s ds dt = 2 pi int I_0(2 c s) s ds.
  using boost::math::quadrature::gauss_kronrod;
  const double mass = gauss_kronrod<double, 31>::integrate(
      [](double s) { return kTwoPi * s * std::cyl_bessel_i(0.0, 0.4 * s); }, 0.2, 1.0, 15, 1e-14);
  EXPECT_NEAR(g.entry(0, 0).real(), mass, 1e-10);
}

TEST(Gram, JordanCircleAndEllipseMoments) {
  const auto circle = gram_matrix(PlanarDomain::jordan_circle(1.5), WeightSpec(), {0, 6});
  for (int n = 0; n <= 6; ++n) {
    EXPECT_NEAR(circle.entry(n, n).real(), kPi * std::pow(1.5, 2 * n + 2) / (n + 1), 1e-10);
  }
  EXPECT_LT(std::abs(circle.entry(1, 2)), 1e-12);
  const double a = 1.0, b = 0.6;
  const auto ell = gram_matrix(PlanarDomain::jordan_ellipse(a, b), WeightSpec(), {0, 4});
  EXPECT_NEAR(ell.entry(0, 0).real(), kPi * a * b, 1e-12);
  EXPECT_NEAR(ell.entry(1, 1).real(), kPi * a * b * (a * a + b * b) / 4.0, 1e-12);
  // int z^2 = pi a b (a^2 - b^2) / 4.
  EXPECT_NEAR(ell.entry(2, 0).real(), kPi * a * b * (a * a - b * b) / 4.0, 1e-12);
}

TEST(Gram, WeightedJordanRejected) {
  EXPECT_THROW(gram_matrix(PlanarDomain::jordan_circle(1.0), WeightSpec(HarmonicRe{0.1}), {0, 4}), Error);
}

TEST(Kernel, DiscOrigin) {
  const auto k = kernel_diag(PlanarDomain::disc(), WeightSpec(), {0.0, 0.0});
  EXPECT_NEAR(k.value, 1.0 / kPi, 1e-15);
  EXPECT_GE(k.gram_condition, 1.0);
}

TEST(Kernel, DiscClosedForm) {
  const auto k = kernel_diag(PlanarDomain::disc(), WeightSpec(), {0.6, 0.0});
  EXPECT_NEAR(k.value, disc_kernel({0.6, 0.0}), 1e-12);
  EXPECT_LT(k.truncation_error_estimate, 1e-12);
  for (const Complex z : {Complex(0.3, -0.5), Complex(-0.9, 0.1), Complex(0.0, 0.99)}) {
    EXPECT_NEAR(kernel_diag(PlanarDomain::disc(), WeightSpec(), z).value / disc_kernel(z), 1.0, 1e-12);
  }
}

TEST(Kernel, ScaledDisc) {
  const double R = 2.5;
  const Complex z{0.7, 1.1};
  const auto k = kernel_diag(PlanarDomain::disc(R), WeightSpec(), z);
  EXPECT_NEAR(k.value * R * R / disc_kernel(z / R), 1.0, 1e-12);
}

TEST(Kernel, AnnulusStableUnderDoubling) {
  const auto d = PlanarDomain::annulus(0.2);
  const Complex z = std::sqrt(0.2);
  KernelOptions opt;
  opt.range = BasisRange{-64, 64};
  const double k64 = kernel_diag(d, WeightSpec(), z, opt).value;
  opt.range = BasisRange{-128, 128};
  const double k128 = kernel_diag(d, WeightSpec(), z, opt).value;
  EXPECT_LT(std::abs(k128 - k64) / k128, 1e-7);
  EXPECT_NEAR(k128 / annulus_kernel_oracle(0.2, std::sqrt(0.2)), 1.0, 1e-12);
}

TEST(Kernel, AnnulusMatchesSeriesOracle) {
  const auto d = PlanarDomain::annulus(0.35);
  for (const double s : {0.36, 0.5, 0.8, 0.999}) {
    const auto k = kernel_diag(d, WeightSpec(), std::polar(s, 1.2));
    EXPECT_NEAR(k.value / annulus_kernel_oracle(0.35, s), 1.0, 1e-11) << s;
  }
}

TEST(Kernel, OutsideDomainRejected) {
  EXPECT_THROW(kernel_diag(PlanarDomain::annulus(0.3), WeightSpec(), {0.1, 0.0}), Error);
  EXPECT_THROW(kernel_diag(PlanarDomain::disc(), WeightSpec(), {1.2, 0.0}), Error);
}

TEST(Kernel, TruncationReported) {
  KernelOptions opt;
  opt.range = BasisRange{0, 8};
  try {
    kernel_diag(PlanarDomain::disc(), WeightSpec(), {0.9, 0.0}, opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Truncation);
  }
}

TEST(Kernel, JordanCircleMatchesDisc) {
  const auto d = PlanarDomain::jordan_circle(1.0);
  for (const Complex z : {Complex(0.0, 0.0), Complex(0.2, 0.3)}) {
    EXPECT_NEAR(kernel_diag(d, WeightSpec(), z).value / disc_kernel(z), 1.0, 1e-9);
  }
}

TEST(Kernel, BasisMonotone) {
  const auto d = PlanarDomain::annulus(0.25);
  const Complex z{0.1, 0.45};
  const std::vector<BasisRange> nested{{0, 0}, {-1, 1}, {-4, 4}, {-10, 12}, {-40, 40}};
  for (const auto& weight : {WeightSpec(), WeightSpec(HarmonicRe{0.3})}) {
    double previous = 0.0;
    for (const auto& b : nested) {
      const double k = BergmanSpace(d, weight, b).kernel(z);
      EXPECT_GE(k + 1e-12, previous) << weight.describe();
      previous = k;
    }
  }
}

TEST(Kernel, DomainMonotone) {
  const auto ann = PlanarDomain::annulus(0.3);
  const auto disc = PlanarDomain::disc();
  for (const Complex z : {Complex(0.4, 0.0), Complex(-0.2, 0.5), Complex(0.0, -0.95)}) {
    EXPECT_GE(kernel_diag(ann, WeightSpec(), z).value, kernel_diag(disc, WeightSpec(), z).value * (1.0 - 1e-9));
  }
}

TEST(Kernel, WeightScaling) {
  const double lambda = 3.7;
  const auto ann = PlanarDomain::annulus(0.2);
  const Complex z{-0.5, 0.0};
  for (const auto& w : {WeightSpec(), WeightSpec(HarmonicLog{0.3}), WeightSpec(HarmonicRe{0.2})}) {
    const auto ws = w.scaled(lambda);
    const double k = kernel_diag(ann, w, z).value;
    const double ks = kernel_diag(ann, ws, z).value;
    EXPECT_NEAR(ks * lambda / k, 1.0, 1e-12) << w.describe();
    EXPECT_NEAR(ws.density(z) * ks / (w.density(z) * k), 1.0, 1e-12);
  }
}

TEST(Extension, ReciprocalOfKernel) {
  const auto e = least_norm_extension(PlanarDomain::disc(), WeightSpec(), {0.6, 0.0}, {1.0, 0.0});
  EXPECT_NEAR(e.min_norm, kPi * 0.64 * 0.64, 1e-12);
}

TEST(Extension, ZeroValue) {
  const auto e = least_norm_extension(PlanarDomain::disc(), WeightSpec(), {0.0, 0.0}, {0.0, 0.0});
  EXPECT_EQ(e.min_norm, 0.0);
  EXPECT_EQ(e.coefficients.norm(), 0.0);
}

TEST(Extension, MaxPieceConstantMinimizer) {
  const double delta = 1.0, a = 0.5;
  const auto e = least_norm_extension(PlanarDomain::disc(), WeightSpec(MaxPiece{delta, a}), {0.0, 0.0}, {1.0, 0.0});
  EXPECT_NEAR(e.min_norm, max_piece_mass(delta, a), 1e-10);
  EXPECT_NEAR(std::abs(e.coefficients[0] - 1.0), 0.0, 1e-14);
  EXPECT_LT(e.coefficients.tail(e.coefficients.size() - 1).norm(), 1e-14);
}

// The extremal function interpolates and its norm, computed from the Gram
// matrix, equals the reported minimum.
TEST(Extension, CoefficientsRealizeMinimum) {
  const auto d = PlanarDomain::annulus(0.3);
  const Complex z0{0.2, -0.4}, value{0.7, 1.3};
  for (const auto& w : {WeightSpec(HarmonicLog{0.4}), WeightSpec(HarmonicRe{-0.3})}) {
    KernelOptions opt;
    opt.range = BasisRange{-20, 20};
    const auto e = least_norm_extension(d, w, z0, value, opt);
    Complex f{0.0, 0.0};
    for (int n = -20; n <= 20; ++n) f += e.coefficients[n + 20] * std::pow(z0, n);
    EXPECT_NEAR(std::abs(f - value), 0.0, 1e-9) << w.describe();
    GramOptions go;
    go.force_quadrature = true;
    const auto raw = gram_matrix(d, w, {-20, 20}, Tolerances(), go).raw();
    const double norm = std::real(e.coefficients.dot(raw.transpose() * e.coefficients));
    EXPECT_NEAR(norm / e.min_norm, 1.0, 1e-7) << w.describe();
    EXPECT_NEAR(e.min_norm * e.kernel / std::norm(value), 1.0, 1e-9);
  }
}

TEST(Suita, DiscEquality) {
  for (const Complex z : {Complex(0.0, 0.0), Complex(0.6, 0.0), Complex(-0.3, 0.8)}) {
    const auto r = suita_ratio(PlanarDomain::disc(), z);
    EXPECT_NEAR(r.ratio, 1.0, 1e-9);
    EXPECT_FALSE(r.violation);
    EXPECT_NEAR(suita_ratio_disc_closed_form(z), 1.0, 1e-14);
  }
}

TEST(Suita, AnnulusStrict) {
  const auto r = suita_ratio(PlanarDomain::annulus(0.2), std::sqrt(0.2));
  EXPECT_GT(r.ratio, 0.0);
  EXPECT_LT(r.ratio, 1.0 - 1e-5);
}

TEST(Suita, SimplyConnectedJordanEquality) {
  const auto d = PlanarDomain::jordan_ellipse(1.0, 0.7);
  const auto r = suita_ratio(d, {0.1, 0.05});
  EXPECT_NEAR(r.ratio, 1.0, 1e-5);
}

TEST(Suita, SampledPointsBounded) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> rad(0.0, 1.0), ang(0.0, kTwoPi);
  for (const double r : {0.05, 0.2, 0.6}) {
    const auto d = PlanarDomain::annulus(r);
    for (int i = 0; i < 6; ++i) {
      const double s = r + (1.0 - r) * (0.02 + 0.96 * rad(rng));
      const auto res = suita_ratio(d, std::polar(s, ang(rng)));
      EXPECT_LE(res.ratio, 1.0 + 1e-6);
      EXPECT_GT(res.ratio, 0.0);
    }
  }
}

TEST(AnnulusSeries, MatchesPipeline) {
  for (const double r : {0.04, 0.2, 0.5}) {
    for (const double t : {0.05, 0.3, 0.5, 0.8, 0.97}) {
      const double s = r + (1.0 - r) * t;
      const auto series = annulus_suita_series<double>(r, s);
      const auto pipe = suita_ratio(PlanarDomain::annulus(r), s);
      EXPECT_NEAR(series.kernel / pipe.kernel.value, 1.0, 1e-11) << r << " " << s;
      EXPECT_NEAR(std::exp(series.robin) / pipe.capacity, 1.0, 1e-11) << r << " " << s;
      EXPECT_NEAR(series.kernel / annulus_kernel_oracle(r, s), 1.0, 1e-11);
    }
  }
}

// Largest deficit on A(0.2, 1) sits on |z| = sqrt(0.2) and is below 1e-4.
TEST(AnnulusSeries, DeficitProfile) {
  const auto mid = annulus_suita_series<double>(0.2, std::sqrt(0.2));
  EXPECT_NEAR(mid.deficit, 7.5444e-5, 1e-8);
  for (const double s : {0.25, 0.35, 0.55, 0.75}) EXPECT_LT(annulus_suita_series<double>(0.2, s).deficit, mid.deficit);
}

TEST(AnnulusSeries, ExtendedPrecisionTrend) {
  using F50 = boost::multiprecision::cpp_bin_float_50;
  F50 previous = 1;
  for (int k = 1; k <= 4; ++k) {
    const F50 s = 1 - pow(F50(10), -k);
    const auto a = annulus_suita_series<F50>(F50("0.2"), s);
    EXPECT_GT(a.deficit, 0);
    EXPECT_LT(a.deficit, previous);
    previous = a.deficit;
  }
  // Deficit decays like (1 - |z|)^4.
  EXPECT_NEAR(static_cast<double>(previous), 1.0956e-19, 1e-22);
}

TEST(Suita, ConcurrentKernelReads) {
  const BergmanSpace space(PlanarDomain::annulus(0.3), WeightSpec(HarmonicRe{0.2}), {-16, 16});
  const Complex z{0.5, 0.2};
  const double expected = space.kernel(z);
  std::vector<std::thread> pool;
  std::vector<double> got(4);
  for (int t = 0; t < 4; ++t) pool.emplace_back([&, t] { got[t] = space.kernel(z); });
  for (auto& th : pool) th.join();
  for (double g : got) EXPECT_EQ(g, expected);
}

TEST(ExtendedSuita, ZeroWeightEquality) {
  const auto rec = extended_suita_check(PlanarDomain::disc(), WeightSpec(), {0.0, 0.0});
  EXPECT_TRUE(rec.pass);
  EXPECT_NEAR(rec.margin, 0.0, 1e-12);
  EXPECT_TRUE(rec.consistent());
}

TEST(ExtendedSuita, AnnulusHarmonicLog) {
  const auto rec = extended_suita_check(PlanarDomain::annulus(0.2), WeightSpec(HarmonicLog{0.3}), std::sqrt(0.2));
  EXPECT_TRUE(rec.pass) << rec.error;
  EXPECT_GT(rec.margin, 0.0);
}

TEST(ExtendedSuita, AnnulusHarmonicRe) {
  const auto rec = extended_suita_check(PlanarDomain::annulus(0.2), WeightSpec(HarmonicRe{0.2}), {-0.5, 0.0});
  EXPECT_TRUE(rec.pass) << rec.error;
  EXPECT_GT(rec.margin, 0.0);
}

TEST(ExtendedSuita, HarmonicReNearInnerCircle) {
  // |z| / r = 1.196: the negative modes decay slowly and the range must widen.
  const auto d = PlanarDomain::annulus(0.2);
  const WeightSpec w(HarmonicRe{0.2});
  const Complex z{0.2391626349, 0.0};
  const auto range = default_basis(d, w, z);
  EXPECT_LT(range.n_min, -150);
  const auto k = kernel_diag(d, w, z);
  EXPECT_LT(k.truncation_error_estimate, 1e-9);
  KernelOptions wide;
  wide.range = BasisRange{-320, 96};
  EXPECT_NEAR(kernel_diag(d, w, z, wide).value / k.value, 1.0, 1e-10);
  const auto rec = extended_suita_check(d, w, z);
  EXPECT_TRUE(rec.pass) << rec.error;
}

TEST(ExtendedSuita, RejectsNonHarmonic) {
  const auto rec = extended_suita_check(PlanarDomain::disc(), WeightSpec(MaxPiece{1.0, 0.5}), {0.1, 0.0});
  EXPECT_FALSE(rec.pass);
  EXPECT_FALSE(rec.error.empty());
  const auto rec2 = extended_suita_check(PlanarDomain::disc(), WeightSpec(HarmonicLog{0.2}), {0.1, 0.0});
  EXPECT_FALSE(rec2.pass);
}

}  // namespace
}  // namespace suita
