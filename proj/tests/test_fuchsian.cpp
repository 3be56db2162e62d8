#include "suita/fuchsian/cyclic.hpp"

#include <gtest/gtest.h>

namespace suita {
namespace {

// Orbit of 0 under z -> (z + c) / (1 + cz) is tanh(n artanh c).
double orbit_oracle(double c, int n) { return std::tanh(n * std::atanh(c)); }

double product_oracle(double c, int N) {
  double log_p = 0.0;
  for (int n = 1; n <= N; ++n) log_p += 4.0 * std::log(orbit_oracle(c, n));
  return std::exp(log_p);
}

MoebiusMap conjugate(const MoebiusMap& g, double theta) {
  return MoebiusMap::rotation(theta).compose(g).compose(MoebiusMap::rotation(-theta));
}

TEST(Generator, Values) {
  const auto g = canonical_generator(0.5);
  EXPECT_EQ(g(0.0), Complex(0.5, 0.0));
  EXPECT_NEAR(std::abs(g(g(0.0)) - 0.8), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(g.inverse()(g(0.0))), 0.0, 1e-15);
  EXPECT_GT(std::abs(g.trace()), 2.0);
  EXPECT_THROW(canonical_generator(1.0), Error);
  EXPECT_THROW(canonical_generator(0.0), Error);
}

TEST(CyclicGroup, OrbitMatchesTanh) {
  const CyclicGroup group(canonical_generator(0.3), 40);
  for (int n = -40; n <= 40; ++n) {
    EXPECT_NEAR(group.point(n).real(), orbit_oracle(0.3, n), 1e-14);
    EXPECT_NEAR(group.point(n).imag(), 0.0, 1e-15);
  }
}

TEST(CyclicGroup, OrbitModulusNondecreasing) {
  const CyclicGroup group(canonical_generator(0.7), 256);
  for (int n = 1; n <= 256; ++n) {
    EXPECT_GE(std::abs(group.point(n)), std::abs(group.point(n - 1)));
    EXPECT_GE(std::abs(group.point(-n)), std::abs(group.point(-n + 1)));
    EXPECT_LE(std::abs(group.point(n)), 1.0);
  }
  EXPECT_GT(std::abs(group.point(2)), std::abs(group.point(1)));
}

TEST(CyclicGroup, RejectsEllipticAndNonDisc) {
  EXPECT_THROW(CyclicGroup(MoebiusMap::rotation(0.4), 10), Error);
  EXPECT_THROW(CyclicGroup(MoebiusMap(2.0, 0.0, 0.0, 0.5), 10), Error);
}

TEST(CyclicGroup, AxisOffset) {
  EXPECT_NEAR(CyclicGroup(canonical_generator(0.4), 10).axis_offset(), 0.0, 1e-15);
  EXPECT_NEAR(CyclicGroup(canonical_generator(0.4), 10).half_translation(), std::atanh(0.4), 1e-14);
  // Conjugating by a disc automorphism moving the axis off the origin.
  const auto m = normalizer(0.3);
  const CyclicGroup shifted(m.compose(canonical_generator(0.4)).compose(m.inverse()), 10);
  // The axis is the geodesic through m(+-1) = +-1 in this case (m fixes +-1).
  EXPECT_NEAR(shifted.axis_offset(), 0.0, 1e-12);
  const auto mi = normalizer({0.0, 0.3});
  const CyclicGroup lifted(mi.compose(canonical_generator(0.4)).compose(mi.inverse()), 10);
  EXPECT_NEAR(std::tanh(lifted.axis_offset()), 0.3, 1e-12);
}

TEST(FuchsianSums, ChainRuleMatchesClosedForm) {
  const auto s = fuchsian_sums(0.5, 64);
  EXPECT_LT(s.max_chain_closed_gap, 1e-12);
  EXPECT_NEAR(s.sum, s.closed_form_sum, 1e-12);
  EXPECT_GT(s.sum, s.product);
  EXPECT_NEAR(s.product, product_oracle(0.5, 64), 1e-14);
}

TEST(FuchsianSums, SumAtLeastOne) {
  for (double c : {0.2, 0.5, 0.95}) EXPECT_GE(fuchsian_sums(c, 64, 1.0).sum, 1.0);
}

TEST(FuchsianSums, GridMarginsPositive) {
  for (double c : default_c_grid()) {
    const auto s = fuchsian_sums(c, 256);
    EXPECT_GT(s.sum - s.product, 0.0) << c;
    EXPECT_LT(s.tail_bound, 1e-8) << c;
    EXPECT_LT(s.max_chain_closed_gap, 1e-12) << c;
  }
}

TEST(FuchsianSums, DoublingWithinTailBound) {
  for (double c : {0.1, 0.3, 0.6}) {
    const auto a = fuchsian_sums(c, 32, 1.0);
    const auto b = fuchsian_sums(c, 64, 1.0);
    EXPECT_LE(std::abs(b.sum - a.sum), a.tail_bound) << c;
    EXPECT_LE(std::abs(b.product - a.product), a.tail_bound) << c;
  }
}

TEST(FuchsianSums, RotationConjugateInvariant) {
  const auto base = fuchsian_sums(CyclicGroup(canonical_generator(0.4), 64));
  for (double theta : {0.3, 1.7, 3.0}) {
    const CyclicGroup group(conjugate(canonical_generator(0.4), theta), 64);
    const auto s = fuchsian_sums(group);
    EXPECT_NEAR(s.sum, base.sum, 1e-12);
    EXPECT_NEAR(s.product, base.product, 1e-12);
    for (int n = -64; n <= 64; n += 7) {
      EXPECT_NEAR(std::abs(group.point(n)), orbit_oracle(0.4, std::abs(n)), 1e-12);
    }
  }
}

TEST(FuchsianSums, TailTooLarge) {
  try {
    fuchsian_sums(0.05, 16);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonConvergence);
  }
  EXPECT_THROW(fuchsian_sums(0.5, 4), Error);
}

TEST(InequalityCheck, Records) {
  const auto recs = inequality_check({0.1, 0.9}, 256);
  ASSERT_EQ(recs.size(), 2u);
  for (const auto& r : recs) {
    EXPECT_TRUE(r.pass) << r.error;
    EXPECT_GT(r.margin, 0.0);
    EXPECT_TRUE(r.consistent());
  }
  const auto all = inequality_check(default_c_grid(), 256);
  for (const auto& r : all) EXPECT_TRUE(r.pass) << r.input_id;
  // Too small a truncation is reported, not thrown.
  EXPECT_FALSE(inequality_check({0.05}, 16).front().pass);
}

}  // namespace
}  // namespace suita
