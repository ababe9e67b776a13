#include <gtest/gtest.h>

#include <cmath>

#include "qclab/direction.hpp"

using namespace qclab;

TEST(SigmaDistance, Examples) {
  const auto full = DirectionSpace::circle(two_pi);
  EXPECT_DOUBLE_EQ(sigma_distance(full, Direction::on_circle(0), Direction::on_circle(pi)), pi);
  EXPECT_DOUBLE_EQ(sigma_distance(DirectionSpace::circle(pi), Direction::on_circle(0), Direction::on_circle(half_pi)), half_pi);
  EXPECT_NEAR(sigma_distance(DirectionSpace::circle(pi), Direction::on_circle(0.1), Direction::on_circle(2.9)),
              pi - 2.8, 1e-15);
  EXPECT_NEAR(sigma_distance(DirectionSpace::sphere(), Direction::on_sphere({1, 0, 0}), Direction::on_sphere({0, 1, 0})),
              half_pi, 1e-15);
  EXPECT_DOUBLE_EQ(sigma_distance(DirectionSpace::pair(), Direction::in_pair(1), Direction::in_pair(-1)), pi);
}

TEST(SigmaDistance, DiameterBound) {
  Rng rng(5);
  for (double l : {0.3, 1.0, pi, 5.0, two_pi}) {
    const auto sigma = DirectionSpace::circle(l);
    EXPECT_LE(sigma.diameter(), pi);
    for (int i = 0; i < 1000; ++i) {
      const double d = sigma_distance(sigma, random_direction(sigma, rng), random_direction(sigma, rng));
      EXPECT_LE(d, sigma.diameter() + 1e-15);
    }
  }
}

TEST(SetDistance, Examples) {
  const auto sigma = DirectionSpace::circle(two_pi);
  const auto a = DirectionSet::single(Direction::on_circle(0));
  EXPECT_DOUBLE_EQ(set_distance(sigma, a, a), 0.0);
  EXPECT_DOUBLE_EQ(set_distance(sigma, a, DirectionSet::full()), 0.0);
  const auto b = DirectionSet::finite({Direction::on_circle(half_pi), Direction::on_circle(3 * half_pi)});
  EXPECT_NEAR(set_distance(sigma, a, b), half_pi, 1e-15);
  EXPECT_THROW(set_distance(sigma, a, DirectionSet::empty()), GeometryError);
}

TEST(SetDistance, ArcsAndGreatCircles) {
  const auto circ = DirectionSpace::circle(two_pi);
  const auto arc = DirectionSet::arc(1.0, 0.5);
  EXPECT_DOUBLE_EQ(distance_to_set(circ, Direction::on_circle(1.2), arc), 0.0);
  EXPECT_NEAR(distance_to_set(circ, Direction::on_circle(0.4), arc), 0.6, 1e-15);
  EXPECT_NEAR(distance_to_set(circ, Direction::on_circle(2.0), arc), 0.5, 1e-15);

  const auto sph = DirectionSpace::sphere();
  const auto eq = DirectionSet::great_circle({0, 0, 1});
  const Eigen::Vector3d u = Eigen::Vector3d(1, 0, 1).normalized();
  EXPECT_NEAR(distance_to_set(sph, Direction::on_sphere(u), eq), pi / 4, 1e-15);
  EXPECT_NEAR(distance_to_set(sph, Direction::on_sphere({0, 0, -1}), eq), half_pi, 1e-15);
}

TEST(SetDistance, MinimumOverSampledPairs) {
  Rng rng(11);
  const auto sph = DirectionSpace::sphere();
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Direction> a, b;
    for (int i = 0; i < 5; ++i) a.push_back(random_direction(sph, rng));
    for (int i = 0; i < 4; ++i) b.push_back(random_direction(sph, rng));
    const double d = set_distance(sph, DirectionSet::finite(a), DirectionSet::finite(b));
    double best = 10;
    for (const auto& x : a)
      for (const auto& y : b) {
        EXPECT_LE(d, sigma_distance(sph, x, y) + 1e-15);
        best = std::min(best, sigma_distance(sph, x, y));
      }
    EXPECT_NEAR(d, best, 1e-9);
  }
}

TEST(FarthestDirection, CircleExamples) {
  auto f = farthest_direction(DirectionSpace::circle(two_pi), DirectionSet::single(Direction::on_circle(0)));
  EXPECT_NEAR(f.direction.angle(), pi, 1e-15);
  EXPECT_NEAR(f.value, pi, 1e-15);
  EXPECT_TRUE(f.unique);

  f = farthest_direction(DirectionSpace::circle(pi), DirectionSet::single(Direction::on_circle(0)));
  EXPECT_NEAR(f.direction.angle(), half_pi, 1e-15);
  EXPECT_NEAR(f.value, half_pi, 1e-15);
  EXPECT_FALSE(f.unique);

  f = farthest_direction(DirectionSpace::circle(two_pi), DirectionSet::arc(0.0, 1.0));
  EXPECT_NEAR(f.value, pi - 0.5, 1e-15);
  EXPECT_NEAR(f.direction.angle(), 0.5 + pi, 1e-15);
}

TEST(FarthestDirection, CircleAgainstBruteForce) {
  Rng rng(3);
  for (double l : {2.0, pi, 5.5, two_pi}) {
    const auto sigma = DirectionSpace::circle(l);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Direction> pts;
      const int n = 1 + static_cast<int>(rng.below(4));
      for (int i = 0; i < n; ++i) pts.push_back(random_direction(sigma, rng));
      const auto set = DirectionSet::finite(pts);
      double brute = 0.0;
      for (const auto& d : direction_grid(sigma, 20000)) brute = std::max(brute, distance_to_set(sigma, d, set));
      const auto f = farthest_direction(sigma, set);
      EXPECT_NEAR(f.value, brute, l / 20000);
      EXPECT_NEAR(distance_to_set(sigma, f.direction, set), f.value, 1e-12);
    }
  }
}

TEST(FarthestDirection, SpherePoles) {
  const auto sph = DirectionSpace::sphere();
  const auto f = farthest_direction(
      sph, DirectionSet::finite({Direction::on_sphere({0, 0, 1}), Direction::on_sphere({0, 0, -1})}));
  EXPECT_NEAR(f.value, half_pi, 1e-6);
  EXPECT_NEAR(f.direction.unit().z(), 0.0, 1e-6);
  EXPECT_FALSE(f.unique);
}

TEST(FarthestDirection, SphereTwoPointsExact) {
  // For two non-antipodal unit vectors the farthest direction is -(u+v)/|u+v|
  // at distance pi - |uv|/2.
  Rng rng(17);
  const auto sph = DirectionSpace::sphere();
  for (int trial = 0; trial < 10; ++trial) {
    const Direction u = random_direction(sph, rng);
    const Direction v = random_direction(sph, rng);
    const auto f = farthest_direction(sph, DirectionSet::finite({u, v}));
    const Eigen::Vector3d expected = -(u.unit() + v.unit()).normalized();
    EXPECT_NEAR(f.value, pi - sigma_distance(sph, u, v) / 2, 1e-6);
    EXPECT_LT((f.direction.unit() - expected).norm(), 1e-5);
    EXPECT_TRUE(f.unique);
  }
}

TEST(FarthestDirection, UniqueMaximizerIsStable) {
  // Re-solving in 16 seeded rotated frames gives the same maximizer when the value exceeds pi/2.
  const auto sph = DirectionSpace::sphere();
  const std::vector<Eigen::Vector3d> base = {{1, 0.2, 0}, {0.1, 1, 0.3}, {0.5, 0.5, 0.9}, {0.7, -0.2, 0.4}};
  std::vector<Direction> pts;
  for (const auto& b : base) pts.push_back(Direction::on_sphere(b));
  const auto f = farthest_direction(sph, DirectionSet::finite(pts));
  ASSERT_GT(f.value, half_pi + 1e-3);
  Rng rng(2);
  for (int i = 0; i < 16; ++i) {
    const Eigen::Quaterniond rot = Eigen::Quaterniond(rng.normal(), rng.normal(), rng.normal(), rng.normal()).normalized();
    std::vector<Direction> turned;
    for (const auto& b : base) turned.push_back(Direction::on_sphere(rot * b.normalized()));
    const auto g = farthest_direction(sph, DirectionSet::finite(turned));
    EXPECT_NEAR(g.value, f.value, 1e-12);
    EXPECT_LT((rot.inverse() * g.direction.unit() - f.direction.unit()).norm(), 1e-5);
  }
}

TEST(FarthestDirection, SphereAgainstLattice) {
  Rng rng(23);
  const auto sph = DirectionSpace::sphere();
  const auto lattice = fibonacci_lattice(40000);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Direction> pts;
    for (int i = 0; i < 2 + trial; ++i) pts.push_back(random_direction(sph, rng));
    const auto set = DirectionSet::finite(pts);
    double brute = 0.0;
    for (const auto& u : lattice) brute = std::max(brute, distance_to_set(sph, Direction::on_sphere(u), set));
    const auto f = farthest_direction(sph, set);
    EXPECT_GE(f.value, brute - 1e-12);
    EXPECT_LT(f.value, brute + 0.02);
  }
}

TEST(FarthestDirection, PairAndFull) {
  auto f = farthest_direction(DirectionSpace::pair(), DirectionSet::single(Direction::in_pair(1)));
  EXPECT_EQ(f.direction.sign(), -1);
  EXPECT_DOUBLE_EQ(f.value, pi);
  f = farthest_direction(DirectionSpace::circle(two_pi), DirectionSet::full());
  EXPECT_DOUBLE_EQ(f.value, 0.0);
  EXPECT_THROW(farthest_direction(DirectionSpace::circle(two_pi), DirectionSet::empty()), GeometryError);
}

TEST(Intersect, Basics) {
  const auto sph = DirectionSpace::sphere();
  const auto a = DirectionSet::great_circle({0, 0, 1});
  const auto b = DirectionSet::great_circle({1, 0, 0});
  const auto c = intersect(sph, a, b, 1e-9);
  ASSERT_EQ(c.points().size(), 2u);
  EXPECT_NEAR(std::abs(c.points()[0].unit().y()), 1.0, 1e-15);

  const auto circ = DirectionSpace::circle(two_pi);
  const auto d = intersect(circ, DirectionSet::finite({Direction::on_circle(0), Direction::on_circle(pi)}),
                           DirectionSet::finite({Direction::on_circle(half_pi), Direction::on_circle(pi)}), 1e-9);
  ASSERT_EQ(d.points().size(), 1u);
  EXPECT_DOUBLE_EQ(d.points()[0].angle(), pi);
}

TEST(Hausdorff, Conventions) {
  const auto circ = DirectionSpace::circle(two_pi);
  EXPECT_EQ(hausdorff(circ, DirectionSet::empty(), DirectionSet::empty()), 0.0);
  EXPECT_TRUE(std::isinf(hausdorff(circ, DirectionSet::empty(), DirectionSet::full())));
  EXPECT_NEAR(hausdorff(circ, DirectionSet::single(Direction::on_circle(0)),
                        DirectionSet::finite({Direction::on_circle(0), Direction::on_circle(0.3)})),
              0.3, 1e-15);
}

TEST(FibonacciLattice, CoversSphere) {
  const auto pts = fibonacci_lattice(20000);
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Vector3d u = random_direction(DirectionSpace::sphere(), rng).unit();
    double best = 10;
    for (const auto& p : pts) best = std::min(best, (p - u).norm());
    EXPECT_LT(best, 0.03);
  }
}
