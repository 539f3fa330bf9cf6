#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "sphds/coords.hpp"

using namespace sphds;

TEST(Sph2Car, AxisPoints) {
  const auto n = sph2car({0.0, 0.0});
  EXPECT_DOUBLE_EQ(n.z, 1.0);
  EXPECT_NEAR(n.x, 0.0, 1e-16);
  const auto x = sph2car({half_pi, 0.0});
  EXPECT_NEAR(x.x, 1.0, 1e-16);
  EXPECT_NEAR(x.z, 0.0, 1e-16);
  const auto y = sph2car({half_pi, half_pi});
  EXPECT_NEAR(y.x, 0.0, 1e-16);
  EXPECT_NEAR(y.y, 1.0, 1e-16);
}

TEST(Car2Sph, PolesAndNormalization) {
  const auto n = car2sph({0, 0, 1});
  EXPECT_EQ(n.theta, 0.0);
  EXPECT_EQ(n.phi, 0.0);
  const auto s = car2sph({0, 0, -5});
  EXPECT_DOUBLE_EQ(s.theta, pi);
  EXPECT_EQ(s.phi, 0.0);
  const auto w = car2sph({0, -3, 0});
  EXPECT_DOUBLE_EQ(w.theta, half_pi);
  EXPECT_DOUBLE_EQ(w.phi, 1.5 * pi);
}

TEST(Car2Sph, ZeroVectorIsDomainError) {
  try {
    car2sph({0, 0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::domain);
  }
}

TEST(Car2Sph, RoundtripAndUnitNorm) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    const SphCoord a = oracle::uniform_point(rng);
    const CartCoord c = sph2car(a);
    ASSERT_NEAR(c.norm(), 1.0, 1e-12);
    const SphCoord b = car2sph(c);
    ASSERT_NEAR(b.theta, a.theta, 1e-12);
    // azimuth is compared on the circle
    ASSERT_NEAR(std::remainder(b.phi - a.phi, two_pi), 0.0, 1e-12);
  }
}

TEST(Geo2Sph, PiecewiseMap) {
  const auto a = geo2sph({0.0, 0.0});
  EXPECT_DOUBLE_EQ(a.theta, half_pi);
  EXPECT_EQ(a.phi, 0.0);
  const auto b = geo2sph({-half_pi, 0.0});
  EXPECT_DOUBLE_EQ(b.phi, 1.5 * pi);
  const auto c = geo2sph({0.0, half_pi});
  EXPECT_EQ(c.theta, 0.0);
  EXPECT_EQ(c.phi, 0.0);
  // longitudes outside the canonical range are folded
  EXPECT_NEAR(geo2sph({3.0 * pi, 0.1}).phi, pi, 1e-12);
  EXPECT_NEAR(geo2sph({-5.0 * half_pi, 0.1}).phi, 1.5 * pi, 1e-12);

  const auto g = sph2geo({half_pi, 1.5 * pi});
  EXPECT_DOUBLE_EQ(g.lon, -half_pi);
  EXPECT_EQ(sph2geo({1.0, pi}).lon, pi);
}

TEST(Geo2Sph, RoundtripOnDegreeGrid) {
  const double deg = pi / 180.0;
  for (int lat = -90; lat <= 90; ++lat) {
    for (int lon = -179; lon <= 180; ++lon) {
      const GeoCoord g{lon * deg, lat * deg};
      const SphCoord s = geo2sph(g);
      ASSERT_TRUE(is_valid(s));
      const GeoCoord back = sph2geo(s);
      ASSERT_NEAR(back.lat, g.lat, 1e-12);
      if (std::abs(lat) != 90) {
        ASSERT_NEAR(back.lon, g.lon, 1e-12) << lon << "," << lat;
      }
    }
  }
  for (int th = 0; th <= 180; ++th) {
    for (int ph = 0; ph < 360; ++ph) {
      const SphCoord s{th * deg, (th == 0 || th == 180) ? 0.0 : ph * deg};
      const SphCoord back = geo2sph(sph2geo(s));
      ASSERT_NEAR(back.theta, s.theta, 1e-12);
      ASSERT_NEAR(back.phi, s.phi, 1e-12);
    }
  }
  // range endpoints
  EXPECT_NEAR(sph2geo(geo2sph({pi, 0.0})).lon, pi, 1e-12);
  EXPECT_NEAR(geo2sph(sph2geo({pi, 0.0})).theta, pi, 1e-12);
}

TEST(Geodesic, BasicDistances) {
  const SphCoord a{0.7, 2.0};
  EXPECT_EQ(geodesic(a, a), 0.0);
  EXPECT_DOUBLE_EQ(geodesic(SphCoord{0.0, 0.0}, SphCoord{pi, 0.0}), pi);
  EXPECT_DOUBLE_EQ(geodesic(SphCoord{half_pi, 0.0}, SphCoord{half_pi, half_pi}), half_pi);
}

TEST(Geodesic, SymmetryAndTriangleInequality) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10000; ++i) {
    const auto a = oracle::uniform_point(rng);
    const auto b = oracle::uniform_point(rng);
    const auto c = oracle::uniform_point(rng);
    const double ab = geodesic(a, b);
    ASSERT_EQ(ab, geodesic(b, a));
    ASSERT_GE(ab, 0.0);
    ASSERT_LE(ab, pi);
    ASSERT_LE(ab, geodesic(a, c) + geodesic(c, b) + 1e-12);
  }
}

TEST(SampleMeanDirection, Cases) {
  const std::vector<CartCoord> one = {{0, 0, 1}};
  EXPECT_EQ(sample_mean_direction(one), (CartCoord{0, 0, 1}));

  const std::vector<CartCoord> two = {{1, 0, 0}, {0, 1, 0}};
  const auto m = sample_mean_direction(two);
  EXPECT_DOUBLE_EQ(m.x, 1.0 / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(m.y, 1.0 / std::sqrt(2.0));
  EXPECT_EQ(m.z, 0.0);

  const std::vector<CartCoord> opposite = {{0, 0, 1}, {0, 0, -1}};
  try {
    sample_mean_direction(opposite);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::undefined_direction);
  }
  EXPECT_THROW(sample_mean_direction(std::vector<CartCoord>{}), Error);
}
