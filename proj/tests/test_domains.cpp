#include "suita/domains/green.hpp"

#include <gtest/gtest.h>

#include <random>
#include <thread>

namespace suita {
namespace {

TEST(GreenDisc, OriginPole) { EXPECT_NEAR(green_disc({0.5, 0.0}, {0.0, 0.0}), std::log(0.5), 1e-15); }

TEST(GreenDisc, Symmetric) {
  const Complex z{0.3, 0.4}, w{-0.2, 0.1};
  EXPECT_NEAR(green_disc(z, w), green_disc(w, z), 1e-15);
  EXPECT_LT(green_disc(z, w), 0.0);
}

TEST(GreenDisc, CoincidentPointsRejected) {
  try {
    green_disc({0.2, 0.1}, {0.2, 0.1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CoincidentPoints);
  }
}

TEST(GreenDisc, ConformalCovariance) {
  // Disc automorphism m(z) = e^{i a} (z - p) / (1 - conj(p) z).
  const Complex p{0.25, -0.4};
  const Complex rot = std::polar(1.0, 0.7);
  const auto m = [&](Complex z) { return rot * (z - p) / (1.0 - std::conj(p) * z); };
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-0.65, 0.65);
  for (int i = 0; i < 50; ++i) {
    const Complex z{u(rng), u(rng)}, w{u(rng), u(rng)};
    EXPECT_NEAR(green_disc(m(z), m(w)), green_disc(z, w), 1e-9);
  }
}

TEST(GreenNystrom, MatchesDiscClosedForm) {
  const auto circle = PlanarDomain::jordan_circle();
  EXPECT_NEAR(green_nystrom(circle, {0.5, 0.0}, {0.0, 0.0}), std::log(0.5), 1e-8);
  EXPECT_NEAR(green_nystrom(circle, {0.3, 0.4}, {0.1, 0.0}), green_disc({0.3, 0.4}, {0.1, 0.0}), 1e-8);
}

TEST(GreenNystrom, ScaledDisc) {
  const auto circle = PlanarDomain::jordan_circle(2.0);
  EXPECT_NEAR(green_nystrom(circle, {0.5, 0.0}, {0.0, 0.0}), std::log(0.25), 1e-7);
  EXPECT_NEAR(green_nystrom(circle, {0.5, 0.7}, {-0.3, 0.2}), green_disc({0.5, 0.7}, {-0.3, 0.2}, 2.0), 1e-7);
}

TEST(GreenNystrom, EllipseSymmetry) {
  const GreenEvaluator g(PlanarDomain::jordan_ellipse(1.5, 0.8));
  const Complex z{0.4, 0.2}, w{-0.5, -0.1};
  EXPECT_NEAR(g.green(z, w), g.green(w, z), 1e-7);
  EXPECT_LT(g.green(z, w), 0.0);
}

TEST(GreenNystrom, ConvergesWithQuadrature) {
  // Error against the closed form must drop at least quadratically under doubling.
  const auto circle = PlanarDomain::jordan_ellipse(1.0, 1.0);
  const Complex z{0.55, 0.3}, w{-0.2, 0.35};
  const double exact = green_disc(z, w);
  Tolerances loose;
  loose.refine_tol = 1.0;
  double previous = std::abs(green_nystrom(circle, z, w, 64, loose) - exact);
  for (int n : {128, 256}) {
    const double err = std::abs(green_nystrom(circle, z, w, n, loose) - exact);
    EXPECT_TRUE(err <= previous / 4.0 || err < 1e-13) << n << " " << err << " " << previous;
    previous = err;
  }
}

TEST(GreenNystrom, RejectsNearBoundaryPoints) {
  const GreenEvaluator g(PlanarDomain::jordan_circle());
  EXPECT_THROW(g.green({0.9999, 0.0}, {0.0, 0.0}), Error);
}

TEST(GreenAnnulus, SymmetricNegativeAndVanishing) {
  const double r = 0.2;
  const Complex z{0.3, 0.5}, w{-0.45, 0.1};
  EXPECT_NEAR(green_annulus(r, z, w, 64), green_annulus(r, w, z, 64), 1e-9);
  EXPECT_LT(green_annulus(r, z, w, 64), 0.0);
  EXPECT_LT(std::abs(green_annulus(r, std::polar(1.0 - 1e-8, 0.3), w, 64)), 1e-6);
  EXPECT_LT(std::abs(green_annulus(r, std::polar(r * (1.0 + 1e-8), 2.1), w, 64)), 1e-6);
}

// Independent oracle: Schottky-Klein prime-function form of the annulus Green
// function, G = log|P(z/w) / P(z conj(w))| - log|w| log|z| / log r + log|w| with
// P(x) = (1 - x) prod_k (1 - q^k x)(1 - q^k / x), q = r^2.
double prime_function_green(double r, Complex z, Complex w) {
  const double q = r * r;
  const auto P = [q](Complex x) {
    Complex p = 1.0 - x;
    double qk = 1.0;
    for (int k = 1; k < 200 && qk > 1e-300; ++k) {
      qk *= q;
      p *= (1.0 - qk * x) * (1.0 - qk / x);
    }
    return p;
  };
  return std::log(std::abs(P(z / w) / P(z * std::conj(w)))) -
         std::log(std::abs(w)) * std::log(std::abs(z)) / std::log(r) + std::log(std::abs(w));
}

TEST(GreenAnnulus, MatchesPrimeFunctionOracle) {
  const double r = 0.2;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> radius(0.22, 0.97), angle(0.0, kTwoPi);
  for (int i = 0; i < 40; ++i) {
    const Complex z = std::polar(radius(rng), angle(rng));
    const Complex w = std::polar(radius(rng), angle(rng));
    EXPECT_NEAR(green_annulus(r, z, w, 64), prime_function_green(r, z, w), 1e-7);
  }
}

TEST(GreenAnnulus, TailErrorWhenTooFewModes) {
  EXPECT_THROW(green_annulus(0.9, {0.91, 0.0}, {-0.92, 0.0}, 4), Error);
}

TEST(Capacity, DiscClosedForm) {
  const GreenEvaluator g(PlanarDomain::disc());
  EXPECT_NEAR(capacity(g, {0.0, 0.0}), 1.0, 1e-15);
  EXPECT_NEAR(capacity(g, {0.6, 0.0}), 1.5625, 1e-12);
  for (double rho : {0.1, 0.5, 0.9}) {
    EXPECT_NEAR(capacity(g, std::polar(rho, 1.1)), 1.0 / (1.0 - rho * rho), 1e-9);
  }
}

TEST(Capacity, NystromMatchesDisc) {
  const GreenEvaluator g(PlanarDomain::jordan_circle());
  EXPECT_NEAR(capacity(g, {0.0, 0.0}), 1.0, 1e-8);
  EXPECT_NEAR(capacity(g, {0.3, 0.4}), 1.0 / (1.0 - 0.25), 1e-7);
}

TEST(Capacity, AnnulusStableUnderModeDoubling) {
  const Complex z = std::polar(std::sqrt(0.2), 0.4);
  GreenEvaluator::Options coarse;
  GreenEvaluator::Options fine;
  fine.annulus_modes = 128;
  const double c1 = capacity(GreenEvaluator(PlanarDomain::annulus(0.2), coarse), z);
  const double c2 = capacity(GreenEvaluator(PlanarDomain::annulus(0.2), fine), z);
  EXPECT_NEAR(c1, c2, 1e-7);
  // Smaller domain, larger Robin constant.
  EXPECT_GT(c1, 1.0 / (1.0 - 0.2));
}

TEST(GreenEvaluator, InvariantsOnSampledPairs) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> radius(0.25, 0.9), angle(0.0, kTwoPi);
  const std::vector<GreenEvaluator> evaluators{
      GreenEvaluator(PlanarDomain::disc()), GreenEvaluator(PlanarDomain::annulus(0.2)),
      GreenEvaluator(PlanarDomain::jordan_ellipse(1.2, 1.0))};
  for (const auto& g : evaluators) {
    for (int i = 0; i < 12; ++i) {
      const Complex z = std::polar(radius(rng), angle(rng));
      const Complex w = std::polar(radius(rng), angle(rng));
      if (std::abs(z - w) < 1e-3) continue;
      const double gzw = g.green(z, w);
      EXPECT_NEAR(gzw, g.green(w, z), 1e-7);
      EXPECT_LT(gzw, 0.0);
    }
  }
}

TEST(GreenEvaluator, ConcurrentReads) {
  const GreenEvaluator g(PlanarDomain::jordan_circle());
  const double expected = g.green({0.2, 0.1}, {-0.3, 0.4});
  std::vector<double> results(4);
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) threads.emplace_back([&, t] { results[t] = g.green({0.2, 0.1}, {-0.3, 0.4}); });
  for (auto& th : threads) th.join();
  for (double v : results) EXPECT_EQ(v, expected);
}

TEST(PlanarDomain, RejectsBadGeometry) {
  EXPECT_THROW(PlanarDomain::annulus(1.2), Error);
  EXPECT_THROW(PlanarDomain::annulus(0.0), Error);
  // Negatively oriented circle.
  EXPECT_THROW(PlanarDomain::jordan({{-1, Complex(1.0, 0.0)}}), Error);
  // zeta = e^{it} + 0.9 e^{3it} has inner loops.
  EXPECT_THROW(PlanarDomain::jordan({{1, Complex(1.0, 0.0)}, {3, Complex(0.9, 0.0)}}), Error);
}

TEST(PlanarDomain, ParsesFourierJson) {
  const auto doc = nlohmann::json::parse(R"({"fourier": [{"index": 1, "re": 1.0, "im": 0.0},
                                                           {"index": -1, "re": 0.1, "im": 0.0}]})");
  const auto terms = parse_fourier_terms(doc);
  ASSERT_EQ(terms.size(), 2u);
  EXPECT_EQ(terms[1].index, -1);
  const auto domain = PlanarDomain::jordan(terms);
  EXPECT_TRUE(domain.contains({0.0, 0.0}));
  EXPECT_FALSE(domain.contains({1.5, 0.0}));
}

}  // namespace
}  // namespace suita
