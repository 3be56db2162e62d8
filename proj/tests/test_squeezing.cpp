#include "suita/squeezing/squeeze.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <random>

namespace suita {
namespace {

// Algebraic least-squares circle x^2 + y^2 + Dx + Ey + F = 0 through the
// images of `samples` points of c. Exact when the points lie on a circle.
Circle sampled_fit(const MoebiusMap& m, const Circle& c, int samples = 360) {
  Eigen::MatrixXd A(samples, 3);
  Eigen::VectorXd b(samples);
  for (int k = 0; k < samples; ++k) {
    const Complex w = m(c.center + std::polar(c.radius, kTwoPi * (k + 0.5) / samples));
    A(k, 0) = w.real();
    A(k, 1) = w.imag();
    A(k, 2) = 1.0;
    b(k) = -std::norm(w);
  }
  const Eigen::Vector3d x = A.colPivHouseholderQr().solve(b);
  const Complex center(-0.5 * x(0), -0.5 * x(1));
  return {center, std::sqrt(std::norm(center) - x(2))};
}

TEST(Moebius, DeterminantNormalized) {
  const MoebiusMap m(Complex(2.0, 1.0), Complex(0.3, -0.4), Complex(-1.0, 0.5), Complex(0.7, 0.2));
  EXPECT_NEAR(std::abs(m.determinant() - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(normalizer({0.3, -0.6}).determinant() - 1.0), 0.0, 1e-12);
  EXPECT_THROW(MoebiusMap(1.0, 2.0, 0.5, 1.0), Error);
}

TEST(Moebius, NormalizerAtZeroIsIdentity) {
  const auto m = normalizer(0.0);
  for (Complex z : {Complex(0.1, 0.2), Complex(-0.7, 0.0), Complex(0.0, 0.9)}) {
    EXPECT_EQ(m(z), z);
  }
}

TEST(Moebius, NormalizerSendsPToZero) {
  EXPECT_NEAR(std::abs(normalizer(0.5)(0.5)), 0.0, 1e-15);
  const Complex p(-0.3, 0.55);
  EXPECT_NEAR(std::abs(normalizer(p)(p)), 0.0, 1e-15);
  EXPECT_THROW(normalizer(1.0), Error);
}

TEST(Moebius, NormalizerPreservesUnitCircle) {
  const auto m = normalizer(0.5);
  for (int k = 0; k < 100; ++k) {
    EXPECT_NEAR(std::abs(m(std::polar(1.0, kTwoPi * k / 100))), 1.0, 1e-12);
  }
}

TEST(Moebius, InverseAndComposition) {
  const auto m = normalizer({0.2, 0.4});
  const auto g = MoebiusMap::rotation(0.7).compose(m);
  for (Complex z : {Complex(0.1, 0.2), Complex(-0.5, 0.3)}) {
    EXPECT_NEAR(std::abs(m.inverse()(m(z)) - z), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(g(z) - std::polar(1.0, 0.7) * m(z)), 0.0, 1e-15);
  }
}

TEST(Moebius, DerivativeMatchesDifference) {
  const auto m = normalizer({0.4, -0.1});
  const Complex z(0.2, 0.3);
  const double h = 1e-6;
  const Complex fd = (m(z + h) - m(z - h)) / (2.0 * h);
  EXPECT_NEAR(std::abs(m.derivative(z) - fd), 0.0, 1e-9);
}

TEST(ImageCircle, IdentityKeepsCircle) {
  const Circle c{{0.3, -0.2}, 0.45};
  const Circle out = image_circle(MoebiusMap::identity(), c);
  EXPECT_NEAR(std::abs(out.center - c.center), 0.0, 1e-15);
  EXPECT_NEAR(out.radius, c.radius, 1e-15);
}

TEST(ImageCircle, UnitCircleUnderAutomorphism) {
  const Circle out = image_circle(normalizer(0.5), {{0.0, 0.0}, 1.0});
  EXPECT_NEAR(std::abs(out.center), 0.0, 1e-14);
  EXPECT_NEAR(out.radius, 1.0, 1e-14);
}

TEST(ImageCircle, MatchesSampledFit) {
  const auto m = normalizer(0.5);
  const Circle c{{0.0, 0.0}, 0.2};
  const Circle exact = image_circle(m, c);
  const Circle fit = sampled_fit(m, c);
  EXPECT_NEAR(std::abs(exact.center - fit.center), 0.0, 1e-10);
  EXPECT_NEAR(exact.radius, fit.radius, 1e-10);
}

TEST(ImageCircle, MatchesSampledFitGeneric) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = normalizer({u(rng), u(rng)});
    const Circle c{{u(rng), u(rng)}, 0.05 + 0.3 * std::abs(u(rng))};
    const Circle exact = image_circle(m, c);
    const Circle fit = sampled_fit(m, c);
    EXPECT_NEAR(std::abs(exact.center - fit.center), 0.0, 1e-9);
    EXPECT_NEAR(exact.radius, fit.radius, 1e-9);
  }
}

TEST(ImageCircle, RoundTrip) {
  const auto m = normalizer({-0.35, 0.25});
  for (const Circle& c : {Circle{{0.0, 0.0}, 0.2}, Circle{{0.1, 0.3}, 0.15}, Circle{{0.0, 0.0}, 1.0}}) {
    const Circle back = image_circle(m.inverse(), image_circle(m, c));
    EXPECT_NEAR(std::abs(back.center - c.center), 0.0, 1e-10);
    EXPECT_NEAR(back.radius, c.radius, 1e-10);
  }
}

TEST(ImageCircle, PoleOnCircleRejected) {
  // normalizer(0.5) has its pole at 2.
  try {
    image_circle(normalizer(0.5), {{0.0, 0.0}, 2.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PoleOnCircle);
  }
}

TEST(SqueezeLower, MatchesBoundarySampling) {
  const double r = 0.04;
  const double p = std::sqrt(r);
  // Distance from 0 to the sampled image of |z| = r.
  const auto m = normalizer(p);
  double sampled = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 20000; ++k) sampled = std::min(sampled, std::abs(m(std::polar(r, kTwoPi * k / 20000))));
  const double s = squeeze_lower(r, p);
  EXPECT_NEAR(s, sampled, 1e-9);
  // On the real axis the nearest hole point is the image of r itself.
  EXPECT_NEAR(s, (p - r) / (1.0 - p * r), 1e-15);
}

TEST(SqueezeLower, InUnitInterval) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double r = 1e-4 + 0.9 * u(rng);
    const double mod = r + (1.0 - r) * (0.001 + 0.998 * u(rng));
    const double s = squeeze_lower(r, std::polar(mod, kTwoPi * u(rng)));
    EXPECT_GT(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
  EXPECT_LE(squeeze_lower(1e-6, 0.5), 1.0);
}

TEST(SqueezeLower, RotationInvariant) {
  for (double r : {0.04, 0.2, 0.6}) {
    const double mod = std::sqrt(r);
    const double base = squeeze_lower(r, mod);
    for (int k = 1; k < 16; ++k) {
      EXPECT_NEAR(squeeze_lower(r, std::polar(mod, kTwoPi * k / 16 + 0.1)), base, 1e-12);
    }
    EXPECT_NEAR(squeeze_lower(r, -mod), base, 1e-12);
  }
}

TEST(SqueezeLower, RejectsOutsidePoints) {
  EXPECT_THROW(squeeze_lower(0.2, 0.1), Error);
  EXPECT_THROW(squeeze_lower(0.2, 1.0), Error);
  EXPECT_THROW(squeeze_lower(PlanarDomain::jordan_circle(), 0.1), Error);
  EXPECT_EQ(squeeze_lower(PlanarDomain::disc(), 0.3), 1.0);
}

TEST(Sandwich, DiscEquality) {
  const auto rec = sandwich_check(PlanarDomain::disc(), 0.3);
  EXPECT_TRUE(rec.pass);
  EXPECT_NEAR(rec.get("suita_ratio"), 1.0, 1e-12);
  EXPECT_EQ(rec.get("s_low"), 1.0);
}

TEST(Sandwich, AnnulusStrict) {
  const double r = 0.2;
  const auto rec = sandwich_check(PlanarDomain::annulus(r), std::sqrt(r));
  EXPECT_TRUE(rec.pass) << rec.error;
  EXPECT_LT(rec.get("suita_ratio"), 1.0);
  EXPECT_GT(rec.get("suita_ratio"), rec.get("s_low_sq"));
  EXPECT_TRUE(rec.consistent());
}

TEST(Sandwich, SampledPoints) {
  for (double r : {0.2, 0.04}) {
    for (Complex p : annulus_sample_points(r)) {
      const auto rec = sandwich_check(PlanarDomain::annulus(r), p);
      EXPECT_TRUE(rec.pass) << r << " " << p;
      EXPECT_LE(rec.get("s_low_sq"), rec.get("suita_ratio"));
      EXPECT_LE(rec.get("suita_ratio"), 1.0 + 1e-6);
    }
  }
  EXPECT_TRUE(sandwich_check(PlanarDomain::annulus(0.04), 0.5).pass);
}

TEST(Sandwich, ErrorsBecomeFailures) {
  const auto rec = sandwich_check(PlanarDomain::annulus(0.2), 0.1);
  EXPECT_FALSE(rec.pass);
  EXPECT_FALSE(rec.error.empty());
}

TEST(SamplePoints, Layout) {
  const auto pts = annulus_sample_points(0.2);
  ASSERT_EQ(pts.size(), 8u);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    EXPECT_NEAR(std::abs(pts[k]), std::pow(0.2, (8.0 - k) / 9.0), 1e-15);
    EXPECT_GT(std::abs(pts[k]), 0.2);
    EXPECT_LT(std::abs(pts[k]), 1.0);
  }
}

TEST(BoundaryTrend, IncreasingTowardOne) {
  std::vector<TrendPoint> pts;
  const auto rec = boundary_trend(0.2, 4, &pts);
  EXPECT_TRUE(rec.pass) << rec.error;
  ASSERT_EQ(pts.size(), 4u);
  for (std::size_t k = 1; k < pts.size(); ++k) {
    EXPECT_LT(pts[k].deficit, pts[k - 1].deficit);
    EXPECT_GT(pts[k].deficit, 0.0);
    EXPECT_LE(pts[k].ratio, 1.0 + 1e-6);
  }
  EXPECT_LT(pts.back().deficit, 1e-12);
}

}  // namespace
}  // namespace suita
