#include <gtest/gtest.h>

#include <boost/math/tools/roots.hpp>
#include <array>
#include <cmath>

#include "qclab/spaceform.hpp"

using namespace qclab;

namespace {

// Independent oracle: spherical law of cosines solved for the angle by bisection in long double.
long double spherical_angle_oracle(long double pq, long double pr, long double qr) {
  auto f = [&](long double a) { return std::cos(pq) * std::cos(pr) + std::sin(pq) * std::sin(pr) * std::cos(a) - std::cos(qr); };
  boost::math::tools::eps_tolerance<long double> tol(60);
  auto [lo, hi] = boost::math::tools::bisect(f, 0.0L, static_cast<long double>(pi), tol);
  return (lo + hi) / 2;
}

long double planar_angle(long double ax, long double ay, long double bx, long double by) {
  return std::atan2(std::abs(ax * by - ay * bx), ax * bx + ay * by);
}

}  // namespace

TEST(SideFromAngle, EuclideanRightTriangle) {
  EXPECT_NEAR(side_from_angle(CurvatureBound(0), 3, 4, Angle(half_pi)), 5.0, 1e-14);
}

TEST(SideFromAngle, SphereOctant) {
  EXPECT_NEAR(side_from_angle(CurvatureBound(1), half_pi, half_pi, Angle(half_pi)), half_pi, 1e-15);
}

TEST(SideFromAngle, HyperbolicRightAngle) {
  const long double expected = std::acosh(std::cosh(1.0L) * std::cosh(1.0L));
  EXPECT_NEAR(side_from_angle(CurvatureBound(-1), 1, 1, Angle(half_pi)), static_cast<double>(expected), 1e-14);
}

TEST(SideFromAngle, ExtremeAngles) {
  for (double k : {-1.0, 0.0, 1.0}) {
    const CurvatureBound kb(k);
    EXPECT_NEAR(side_from_angle(kb, 0.7, 0.2, Angle(0.0)), 0.5, 1e-14);
    EXPECT_NEAR(side_from_angle(kb, 0.7, 0.2, Angle(pi)), 0.9, 1e-14);
  }
}

TEST(SideFromAngle, RejectsSidesBeyondDiameter) {
  EXPECT_THROW(side_from_angle(CurvatureBound(1), 3.5, 0.1, Angle(1.0)), GeometryError);
  EXPECT_THROW(side_from_angle(CurvatureBound(4), 1.6, 0.1, Angle(1.0)), GeometryError);
  EXPECT_NO_THROW(side_from_angle(CurvatureBound(-1), 30.0, 0.1, Angle(1.0)));
}

TEST(ComparisonAngle, Equilateral) {
  EXPECT_NEAR(comparison_angle(CurvatureBound(0), 1, 1, 1).value(), pi / 3, 1e-15);
}

TEST(ComparisonAngle, CollinearOnMaximalGeodesic) {
  EXPECT_DOUBLE_EQ(comparison_angle(CurvatureBound(1), half_pi, half_pi, pi).value(), pi);
  // q between p and r on the geodesic: the angle at p is 0.
  EXPECT_DOUBLE_EQ(comparison_angle(CurvatureBound(1), 1.0, pi - 1.0, pi).value(), pi);
  EXPECT_DOUBLE_EQ(comparison_angle(CurvatureBound(1), 1.0, pi, pi - 1.0).value(), 0.0);
}

TEST(ComparisonAngle, SphericalAgainstRootFinder) {
  const long double oracle = spherical_angle_oracle(0.3L, 0.4L, 0.5L);
  EXPECT_NEAR(comparison_angle(CurvatureBound(1), 0.3, 0.4, 0.5).value(), static_cast<double>(oracle), 1e-13);
  const long double oracle2 = spherical_angle_oracle(1.1L, 2.0L, 1.5L);
  EXPECT_NEAR(comparison_angle(CurvatureBound(1), 1.1, 2.0, 1.5).value(), static_cast<double>(oracle2), 1e-12);
}

TEST(ComparisonAngle, ScaledCurvature) {
  // Curvature 4 is the unit-sphere picture shrunk by 1/2.
  EXPECT_NEAR(comparison_angle(CurvatureBound(4), 0.15, 0.2, 0.25).value(),
              comparison_angle(CurvatureBound(1), 0.3, 0.4, 0.5).value(), 1e-13);
}

TEST(ComparisonAngle, RejectsInvalidTriangles) {
  EXPECT_THROW(comparison_angle(CurvatureBound(0), 1, 1, 2.5), GeometryError);
  EXPECT_THROW(comparison_angle(CurvatureBound(0), 0, 1, 1), GeometryError);
  EXPECT_THROW(comparison_angle(CurvatureBound(1), 2.0, 2.0, 2.5), GeometryError);
  EXPECT_THROW(comparison_angle(CurvatureBound(0), -1, 1, 1), GeometryError);
}

TEST(ComparisonAngle, ClampsRoundingNoise) {
  EXPECT_DOUBLE_EQ(comparison_angle(CurvatureBound(0), 1, 1, 2 + 1e-13).value(), pi);
  EXPECT_DOUBLE_EQ(comparison_angle(CurvatureBound(0), 1, 0.5, 0.5 - 1e-13).value(), 0.0);
}

TEST(ComparisonAngle, RoundTripGrid) {
  double worst = 0.0;
  for (double k : {-1.0, 0.0, 1.0}) {
    const CurvatureBound kb(k);
    for (int i = 1; i <= 30; ++i) {
      for (int j = 1; j <= 30; ++j) {
        for (int l = 0; l <= 30; ++l) {
          const double b = half_pi * i / 30, c = half_pi * j / 30, a = pi * l / 30;
          const double side = side_from_angle(kb, b, c, Angle(a));
          if (side == 0.0) continue;
          worst = std::max(worst, std::abs(comparison_angle(kb, b, c, side).value() - a));
        }
      }
    }
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(ComparisonAngle, IncreasingInOppositeSide) {
  for (double k : {-1.0, 0.0, 1.0}) {
    double prev = -1.0;
    for (int i = 1; i < 50; ++i) {
      const double qr = 0.2 + 0.6 * i / 50.0;
      const double a = comparison_angle(CurvatureBound(k), 0.5, 0.6, qr).value();
      EXPECT_GT(a, prev);
      prev = a;
    }
  }
}

TEST(ComparisonAngle, NondecreasingInCurvature) {
  for (double pq : {0.2, 0.7, 1.2}) {
    for (double pr : {0.3, 0.9}) {
      const double qr = 0.8 * (pq + pr);
      if (qr < std::abs(pq - pr)) continue;
      double prev = -1.0;
      for (int i = 0; i <= 40; ++i) {
        const double k = -2.0 + 3.0 * i / 40.0;
        const double a = comparison_angle(CurvatureBound(k), pq, pr, qr).value();
        EXPECT_GE(a, prev - 1e-15);
        prev = a;
      }
    }
  }
}

TEST(ComparisonAngle, DegenerateLimits) {
  for (double k : {-1.0, 0.0, 1.0}) {
    EXPECT_NEAR(comparison_angle(CurvatureBound(k), 0.9, 0.4, 0.5).value(), 0.0, 1e-7);
    EXPECT_NEAR(comparison_angle(CurvatureBound(k), 0.9, 0.4, 1.3).value(), pi, 1e-7);
  }
}

TEST(ComparisonAngle, SmallCurvatureMatchesEuclidean) {
  const double euclid = comparison_angle(CurvatureBound(0), 0.8, 1.1, 1.3).value();
  for (double k : {1e-4, -1e-4, 1e-6, -1e-6}) {
    EXPECT_NEAR(comparison_angle(CurvatureBound(k), 0.8, 1.1, 1.3).value(), euclid, 1e-4 * 0.5);
  }
  // Euclidean law of cosines evaluated directly.
  const double direct = std::acos((0.8 * 0.8 + 1.1 * 1.1 - 1.3 * 1.3) / (2 * 0.8 * 1.1));
  EXPECT_NEAR(euclid, direct, 1e-12);
  EXPECT_NEAR(comparison_angle(CurvatureBound(1e-8), 0.8, 1.1, 1.3).value(), euclid, 1e-7);
}

TEST(RightAngleBound, Examples) {
  EXPECT_TRUE(right_angle_bound_check(Angle(half_pi), Angle(half_pi), Angle(1.234)));
  EXPECT_TRUE(right_angle_bound_check(Angle(pi / 4), Angle(pi / 4), Angle(0)));
  EXPECT_FALSE(right_angle_bound_check(Angle(3 * pi / 4), Angle(pi / 3), Angle(pi / 3)));
  EXPECT_NEAR(right_angle_bound_margin(3 * pi / 4, pi / 3, pi / 3), -std::sqrt(0.5) - 0.25, 1e-15);
}

TEST(RightAngleBound, MatchesComparisonAngleAtXi) {
  // The bound says the unit-sphere comparison angle at xi is at most pi/2.
  for (double ez : {0.4, 1.2, 2.0}) {
    for (double ex : {0.5, 1.0, 1.5}) {
      for (double zx : {0.3, 0.9, 1.4}) {
        if (ez > ex + zx || ez < std::abs(ex - zx) || ex + zx + ez > two_pi) continue;
        const bool acute = comparison_angle(CurvatureBound(1), ex, zx, ez).value() <= half_pi + 1e-12;
        EXPECT_EQ(right_angle_bound_check(Angle(ez), Angle(ex), Angle(zx)), acute);
      }
    }
  }
}

TEST(AlexandrovLemma, StraightGluingIsEquality) {
  const auto r = alexandrov_lemma_compare(CurvatureBound(0), {1.0, 0.8, 1.5}, {Angle(1.0), Angle(pi - 1.0)});
  EXPECT_EQ(r.at_shared, Ordering::equal);
  EXPECT_EQ(r.at_end, Ordering::equal);
}

TEST(AlexandrovLemma, PlanarCoordinatesOracle) {
  // z1 at the origin, p on the positive x-axis, o and z2 further counter-clockwise.
  const long double x = 1.0L, w = 2.5L, y = 1.3L, a1 = 1.1L, a2 = 1.4L;  // a1 + a2 < pi
  const long double px = x, py = 0;
  const long double ox = w * std::cos(a1), oy = w * std::sin(a1);
  const long double zx = y * std::cos(a1 + a2), zy = y * std::sin(a1 + a2);
  const long double glued_o = planar_angle(px - ox, py - oy, -ox, -oy) + planar_angle(-ox, -oy, zx - ox, zy - oy);
  const long double glued_p = planar_angle(-px, -py, ox - px, oy - py);
  const long double po = std::hypot(px - ox, py - oy), oz = std::hypot(zx - ox, zy - oy), pz = x + y;
  const long double straight_o = std::acos((po * po + oz * oz - pz * pz) / (2 * po * oz));
  const long double straight_p = std::acos((po * po + pz * pz - oz * oz) / (2 * po * pz));

  const auto r = alexandrov_lemma_compare(CurvatureBound(0), {1.0, 2.5, 1.3}, {Angle(1.1), Angle(1.4)});
  EXPECT_NEAR(r.glued_shared, static_cast<double>(glued_o), 1e-12);
  EXPECT_NEAR(r.straight_shared, static_cast<double>(straight_o), 1e-12);
  EXPECT_NEAR(r.glued_end, static_cast<double>(glued_p), 1e-12);
  EXPECT_NEAR(r.straight_end, static_cast<double>(straight_p), 1e-12);
  EXPECT_LT(glued_o, straight_o);
  EXPECT_LT(straight_p, glued_p);
  EXPECT_EQ(r.at_shared, Ordering::less);
  EXPECT_EQ(r.at_end, Ordering::less);
}

TEST(AlexandrovLemma, SphericalCoordinatesOracle) {
  // z1 at the north pole; p, o, z2 along meridians at azimuths 0, a1, a1 + a2 (sum > pi).
  const long double x = 0.6L, w = 0.5L, y = 0.9L, a1 = 1.9L, a2 = 1.6L;
  auto pt = [](long double d, long double az) {
    return std::array<long double, 3>{std::sin(d) * std::cos(az), std::sin(d) * std::sin(az), std::cos(d)};
  };
  auto dot = [](const auto& u, const auto& v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; };
  auto tangent_angle = [&](const auto& at, const auto& u, const auto& v) {
    std::array<long double, 3> tu, tv;
    for (int i = 0; i < 3; ++i) {
      tu[i] = u[i] - dot(u, at) * at[i];
      tv[i] = v[i] - dot(v, at) * at[i];
    }
    return std::acos(dot(tu, tv) / std::sqrt(dot(tu, tu) * dot(tv, tv)));
  };
  const auto P = pt(x, 0), O = pt(w, a1), Z = pt(y, a1 + a2), N = pt(0, 0);
  const long double glued_p = tangent_angle(P, N, O);
  const long double po = std::acos(dot(P, O)), oz = std::acos(dot(O, Z)), pz = x + y;
  const long double straight_p = std::acos((std::cos(oz) - std::cos(po) * std::cos(pz)) / (std::sin(po) * std::sin(pz)));

  const auto r = alexandrov_lemma_compare(CurvatureBound(1), {0.6, 0.5, 0.9}, {Angle(1.9), Angle(1.6)});
  EXPECT_NEAR(r.glued_end, static_cast<double>(glued_p), 1e-11);
  EXPECT_NEAR(r.straight_end, static_cast<double>(straight_p), 1e-11);
  EXPECT_GT(straight_p, glued_p);
  EXPECT_EQ(r.at_end, Ordering::greater);
  EXPECT_LE(r.glued_shared, r.straight_shared);
}

TEST(AlexandrovLemma, HyperbolicDichotomy) {
  const CurvatureBound k(-1);
  const auto small = alexandrov_lemma_compare(k, {0.8, 2.0, 1.0}, {Angle(1.0), Angle(1.2)});
  EXPECT_EQ(small.at_end, Ordering::less);
  const auto large = alexandrov_lemma_compare(k, {0.8, 0.6, 1.0}, {Angle(2.0), Angle(1.9)});
  EXPECT_EQ(large.at_end, Ordering::greater);
}

TEST(AlexandrovLemma, MissingStraightenedTriangle) {
  // o close to z1 with a sharp hinge: |po| + |o z2| < |p z1| + |z1 z2|.
  EXPECT_THROW(alexandrov_lemma_compare(CurvatureBound(0), {1.0, 0.01, 1.0}, {Angle(0.5), Angle(0.5)}),
               GeometryError);
}
