#include <gtest/gtest.h>

#include <cmath>

#include "qclab/direction_geometry.hpp"
#include "qclab/isometry.hpp"
#include "qclab/subset.hpp"
#include "zoo.hpp"

using namespace qclab;
using qclab::testing::zoo;

namespace {

struct Named {
  ModelSpace X;
  SubsetSpec F;
};

std::vector<Named> analytic_subsets() {
  const auto S = ModelSpace::sphere(2);
  const auto S3 = ModelSpace::sphere(3);
  const auto E = ModelSpace::euclidean(2);
  const auto E3 = ModelSpace::euclidean(3);
  const auto C = ModelSpace::cone(pi);
  const auto C2 = ModelSpace::cone(3 * pi / 2);
  const auto Z = ModelSpace::spindle(pi);
  const auto Z2 = ModelSpace::spindle(two_pi);
  return {
      {S, great_circle(S, {0, 0, 1})},
      {S, great_circle(S, {1, 2, 3})},
      {S, small_circle(S, {0, 0, 1}, pi / 4)},
      {S, antipodal_pair(S, make_point(S, 1, 0, 0))},
      {S3, great_subsphere(S3, {Eigen::Vector4d(1, 0, 0, 0), Eigen::Vector4d(0, 1, 0, 0)})},
      {E, line(E, {0, 1, 0, 0}, {1, 1, 0, 0})},
      {E, lines_through_origin(E, {{1, 0, 0, 0}, {0, 1, 0, 0}})},
      {E3, affine_subspace(E3, {0, 0, 1, 0}, {{1, 0, 0, 0}})},
      {C, ray_set(C, {0, half_pi})},
      {C2, ray_set(C2, {0.3, 2.0, 4.0})},
      {C, apex_singleton(C)},
      {Z, meridian_set(Z, {0, half_pi})},
      {Z, equator(Z)},
      {Z2, tilted_great_circle(Z2, {1, 0, 1})},
  };
}

}  // namespace

TEST(Isometry, PreservesDistance) {
  for (const auto& X : zoo()) {
    Rng rng(derive_seed(3, X.describe()));
    for (const auto& g : builtin_isometries(X)) {
      for (int i = 0; i < 2000; ++i) {
        const auto x = sample_point(X, rng), y = sample_point(X, rng);
        EXPECT_NEAR(distance(X, g.apply(X, x), g.apply(X, y)), distance(X, x, y), 1e-12)
            << X.describe() << " " << g.name();
      }
    }
  }
}

TEST(Isometry, RejectsWrongSpace) {
  const auto S = ModelSpace::sphere(2);
  EXPECT_THROW(builtin_isometries(ModelSpace::cone(pi)).front().validate(S), GeometryError);
  EXPECT_THROW(Isometry::linear("shear", Eigen::Matrix4d::Identity() * 2.0).validate(S), GeometryError);
  EXPECT_THROW(Isometry::angular("swap", 1, 0.0, true).validate(ModelSpace::cone(1.0)), GeometryError);
}

TEST(FixedPointSet, Examples) {
  const auto S = ModelSpace::sphere(2);
  const auto F = fixed_point_set(S, builtin_isometries(S)[0]);  // reflect z
  EXPECT_TRUE(subset_contains(S, F, make_point(S, 1, 0, 0)));
  EXPECT_TRUE(subset_contains(S, F, make_point(S, 0.6, -0.8, 0)));
  EXPECT_NEAR(distance_to_subset(S, F, make_point(S, 0, 0, 1)), half_pi, 1e-15);

  const double theta = 1.3;
  const auto C = ModelSpace::cone(theta);
  const auto R = fixed_point_set(C, builtin_isometries(C)[0]);  // phi -> -phi
  EXPECT_TRUE(subset_contains(C, R, cone_apex()));
  EXPECT_TRUE(subset_contains(C, R, make_point(C, 2.0, 0.0)));
  EXPECT_TRUE(subset_contains(C, R, make_point(C, 2.0, theta / 2)));
  EXPECT_FALSE(subset_contains(C, R, make_point(C, 2.0, theta / 4)));

  const auto E = ModelSpace::euclidean(2);
  const auto O = fixed_point_set(E, builtin_isometries(E)[2]);  // rotate by pi
  ASSERT_TRUE(O.finite_points.has_value());
  ASSERT_EQ(O.finite_points->size(), 1u);
  EXPECT_EQ(O.finite_points->front().c.norm(), 0.0);

  const auto T = fixed_point_set(ModelSpace::euclidean(1), builtin_isometries(ModelSpace::euclidean(1))[2]);
  EXPECT_TRUE(T.empty);
}

TEST(FixedPointSet, ExactlyTheFixedPoints) {
  // Members are fixed; random points are fixed only when they are members.
  for (const auto& X : zoo()) {
    for (const auto& g : builtin_isometries(X)) {
      const auto F = fixed_point_set(X, g);
      if (!F.empty) {
        for (const auto& x : F.sample(300, 5)) {
          EXPECT_LT(distance(X, g.apply(X, x), x), 1e-12) << X.describe() << " " << g.name();
        }
      }
      Rng rng(derive_seed(8, X.describe() + g.name()));
      for (int i = 0; i < 2000; ++i) {
        const auto y = sample_point(X, rng);
        const double moved = distance(X, g.apply(X, y), y);
        if (moved < 1e-12) {
          EXPECT_TRUE(subset_contains(X, F, y, 1e-9)) << X.describe() << " " << g.name();
        }
        if (!F.empty && distance_to_subset(X, F, y) > 1e-6) {
          EXPECT_GT(moved, 0.0);
        }
      }
    }
  }
}

TEST(SubsetSpec, NearestBeatsDenseSampling) {
  for (const auto& [X, F] : analytic_subsets()) {
    const auto dense = F.sample(20000, 1);
    Rng rng(derive_seed(4, F.description));
    for (int i = 0; i < 100; ++i) {
      const auto q = sample_point(X, rng);
      const auto near = F.nearest(q);
      ASSERT_FALSE(near.empty());
      const double d = distance(X, q, near.front());
      double best = std::numeric_limits<double>::infinity();
      double covered = std::numeric_limits<double>::infinity();
      for (const auto& x : dense) {
        best = std::min(best, distance(X, q, x));
        covered = std::min(covered, distance(X, near.front(), x));
      }
      EXPECT_LE(d, best + 1e-12) << F.description;
      // dense samples only cover the bounded part of noncompact subsets
      if (covered < 0.01) {
        EXPECT_GE(d, best - 0.02) << F.description;
      }
      for (const auto& p : near) EXPECT_NEAR(distance(X, q, p), d, 1e-8 * std::max(1.0, d));
    }
  }
}

TEST(SubsetSpec, SamplesAreMembers) {
  for (const auto& [X, F] : analytic_subsets()) {
    for (const auto& x : F.sample(500, 2)) EXPECT_TRUE(subset_contains(X, F, x, 1e-12)) << F.description;
    const auto c = F.sample(1, 3).front();
    for (const auto& x : F.sample_near(c, 0.05, 200, 4)) {
      EXPECT_TRUE(subset_contains(X, F, x, 1e-12)) << F.description;
      EXPECT_LE(distance(X, c, x), 0.05);
    }
  }
}

TEST(SubsetSpec, NearestTiesAtSymmetricPoints) {
  const auto E = ModelSpace::euclidean(2);
  const auto L = lines_through_origin(E, {{1, 0, 0, 0}, {0, 1, 0, 0}});
  EXPECT_EQ(L.nearest(make_point(E, 1, 1)).size(), 2u);

  const auto S = ModelSpace::sphere(2);
  const auto G = great_circle(S, {0, 0, 1});
  const auto all = G.nearest(make_point(S, 0, 0, 1));
  EXPECT_GE(all.size(), 8u);
  for (const auto& p : all) EXPECT_NEAR(distance(S, make_point(S, 0, 0, 1), p), half_pi, 1e-15);

  const auto Z = ModelSpace::spindle(pi);
  const auto M = meridian_set(Z, {0, half_pi});
  EXPECT_EQ(M.nearest(make_point(Z, 1.0, pi / 4)).size(), 2u);
  EXPECT_EQ(M.nearest(make_point(Z, half_pi, 3 * pi / 4)).size(), 2u);  // poles, tie
}

TEST(Tangent, AnalyticExamples) {
  const auto S = ModelSpace::sphere(2);
  const auto G = great_circle(S, {0, 0, 1});
  const auto p = make_point(S, 1, 0, 0);
  const auto t = G.tangent(p);
  ASSERT_EQ(t.points().size(), 2u);
  EXPECT_NEAR(sigma_distance(DirectionSpace::circle(two_pi), t.points()[0], t.points()[1]), pi, 1e-15);

  EXPECT_TRUE(single_point(S, p).tangent(p).is_empty());

  const auto C = ModelSpace::cone(pi);
  const auto R = ray_set(C, {0, half_pi});
  const auto at_apex = R.tangent(cone_apex());
  ASSERT_EQ(at_apex.points().size(), 2u);
  EXPECT_DOUBLE_EQ(at_apex.points()[1].angle(), half_pi);
}

TEST(Tangent, EstimateMatchesAnalytic) {
  // Hausdorff distance at most 1e-2 at 50 base points, for every subset with a
  // finite tangent cone.
  for (const auto& [X, F] : analytic_subsets()) {
    auto base = F.sample(50, 6);
    base.insert(base.end(), F.landmarks.begin(), F.landmarks.end());
    TangentEstimateConfig cfg;
    for (const auto& p : base) {
      const auto exact = F.tangent(p);
      if (exact.is_continuum()) continue;
      const auto est = estimate_tangent_cone(X, F, p, cfg);
      EXPECT_LE(hausdorff(direction_space_at(X, p), exact, est), 1e-2) << F.description << " at " << to_string(X, p);
    }
  }
}

TEST(Tangent, InducedFixedDirectionsMatchFixedSets) {
  for (const auto& X : zoo()) {
    for (const auto& g : builtin_isometries(X)) {
      const auto F = fixed_point_set(X, g);
      if (F.empty) continue;
      auto base = F.sample(20, 7);
      base.insert(base.end(), F.landmarks.begin(), F.landmarks.end());
      for (const auto& p : base) {
        const auto fixed = induced_fixed_directions(X, g, p);
        const auto sigma = direction_space_at(X, p);
        EXPECT_LE(hausdorff(sigma, fixed, F.tangent(p), 1e-2), 1e-9) << X.describe() << " " << g.name();
      }
    }
  }
}

TEST(Tangent, OutsidePointThrows) {
  const auto S = ModelSpace::sphere(2);
  const auto G = without_tangent(great_circle(S, {0, 0, 1}));
  EXPECT_THROW(tangent_cone_estimate(S, G, make_point(S, 0, 0, 1)), GeometryError);
}

TEST(Intersection, GreatCircles) {
  const auto S = ModelSpace::sphere(2);
  const auto H = intersection(S, great_circle(S, {0, 0, 1}), great_circle(S, {1, 0, 0}));
  const auto pts = H.sample(100, 1);
  for (const auto& p : pts) EXPECT_NEAR(std::abs(p.c[1]), 1.0, 1e-15);
  EXPECT_TRUE(H.tangent(make_point(S, 0, 1, 0)).is_empty());
  const auto same = intersection(S, great_circle(S, {0, 0, 1}), great_circle(S, {0, 0, 1}));
  EXPECT_EQ(same.tangent(make_point(S, 1, 0, 0)).points().size(), 2u);
}

TEST(Intersection, SpindleMeridiansShareOnlyPoles) {
  const auto Z = ModelSpace::spindle(pi);
  const auto H = intersection(Z, meridian_set(Z, {0, half_pi}), meridian_set(Z, {pi / 4, 3 * pi / 4}));
  EXPECT_TRUE(subset_contains(Z, H, spindle_pole(1)));
  EXPECT_TRUE(subset_contains(Z, H, spindle_pole(2)));
  EXPECT_NEAR(distance_to_subset(Z, H, make_point(Z, half_pi, 0)), half_pi, 1e-15);
}

TEST(Intersection, NumericFallback) {
  // small circle of colatitude pi/4 about z against the great circle x = 0
  const auto S = ModelSpace::sphere(2);
  const auto H = intersection(S, small_circle(S, {0, 0, 1}, pi / 4), great_circle(S, {1, 0, 0}), 3);
  ASSERT_TRUE(H.finite_points.has_value());
  ASSERT_EQ(H.finite_points->size(), 2u);
  for (const auto& p : *H.finite_points) {
    EXPECT_NEAR(p.c[0], 0.0, 1e-9);
    EXPECT_NEAR(std::abs(p.c[1]), std::sin(pi / 4), 1e-9);
    EXPECT_NEAR(p.c[2], std::cos(pi / 4), 1e-9);
  }
}

TEST(Intersection, AffineAndRays) {
  const auto E = ModelSpace::euclidean(3);
  const auto H = intersection(E, affine_subspace(E, {0, 0, 1, 0}, {{1, 0, 0, 0}, {0, 1, 0, 0}}),
                              affine_subspace(E, {0, 0, 0, 0}, {{0, 1, 0, 0}, {0, 0, 1, 0}}));
  EXPECT_TRUE(subset_contains(E, H, make_point(E, 0, 5, 1)));
  EXPECT_NEAR(distance_to_subset(E, H, make_point(E, 1, 0, 1)), 1.0, 1e-15);

  const auto C = ModelSpace::cone(pi);
  const auto A = intersection(C, ray_set(C, {0, half_pi}), apex_singleton(C));
  ASSERT_TRUE(A.shape.has_value());
  EXPECT_NEAR(distance_to_subset(C, A, make_point(C, 2, 0)), 2.0, 1e-15);
}
