#include <gtest/gtest.h>

#include <cmath>

#include "qclab/catalog.hpp"
#include "qclab/isometry.hpp"
#include "qclab/qc_check.hpp"
#include "zoo.hpp"

using namespace qclab;
using qclab::testing::zoo;

namespace {

constexpr std::size_t budget = 300;

const CatalogEntry& entry(const std::string& name) {
  static const auto cat = subset_catalog();
  return catalog_entry(cat, name);
}

CheckReport check(const std::string& criterion, const std::string& name, std::uint64_t seed = 1) {
  const auto& e = entry(name);
  return run_check(criterion, e.space, e.subset, budget, seed);
}

void expect_replays(const ModelSpace& X, const SubsetSpec& F, const CheckReport& r) {
  ASSERT_TRUE(r.witness.has_value()) << r.criterion;
  const double m = replay_witness(X, F, r);
  EXPECT_GT(m, violation_tol) << r.criterion << " " << F.description;
  EXPECT_NEAR(m, r.witness->margin, 1e-12) << r.criterion;
}

}  // namespace

TEST(Def01, Examples) {
  EXPECT_EQ(check("def01", "sphere_greatcircle").verdict, Verdict::pass);
  EXPECT_EQ(check("def01", "sphere_point").verdict, Verdict::pass);
  const auto two = check("def01", "plane_two_lines");
  EXPECT_EQ(two.verdict, Verdict::fail);
  expect_replays(entry("plane_two_lines").space, entry("plane_two_lines").subset, two);
  // the witness: a triangle with an obtuse comparison angle at the nearest point
  const auto& w = *two.witness;
  const auto& E = entry("plane_two_lines").space;
  EXPECT_GT(comparison_angle(E.lower_bound(), distance(E, w.point("p"), w.point("q")),
                             distance(E, w.point("p"), w.point("r")), distance(E, w.point("q"), w.point("r")))
                .value(),
            half_pi);
}

TEST(TheoremA, Examples) {
  EXPECT_EQ(check("theoremA", "sphere_greatcircle").verdict, Verdict::pass);
  EXPECT_EQ(check("theoremA", "cone_two_rays").verdict, Verdict::pass);
  const auto small = check("theoremA", "sphere_smallcircle");
  EXPECT_EQ(small.verdict, Verdict::fail);
  expect_replays(entry("sphere_smallcircle").space, entry("sphere_smallcircle").subset, small);
}

TEST(TheoremA, TangentEtaIsItsOwnXi) {
  const auto& e = entry("sphere_greatcircle");
  const auto p = make_point(e.space, 1, 0, 0);
  const auto r = make_point(e.space, 0, 1, 0);
  const auto L = detail::local_at(e.space, e.subset, p, r);
  for (const auto& eta : L.tangent.points()) EXPECT_LE(theoremA_margin(L, eta).violation, 1e-15);
}

TEST(CorollaryC, Examples) {
  EXPECT_EQ(check("corollaryC", "sphere_greatcircle").verdict, Verdict::pass);
  EXPECT_EQ(check("corollaryC", "spindle_meridians").verdict, Verdict::pass);
  const auto two = check("corollaryC", "plane_two_lines");
  EXPECT_EQ(two.verdict, Verdict::fail);
  expect_replays(entry("plane_two_lines").space, entry("plane_two_lines").subset, two);
}

TEST(Prop21, Examples) {
  EXPECT_EQ(check("prop21", "plane_line").verdict, Verdict::pass);
  EXPECT_EQ(check("prop21", "sphere_greatcircle").verdict, Verdict::pass);
  const auto small = check("prop21", "sphere_smallcircle");
  EXPECT_EQ(small.verdict, Verdict::fail);
  expect_replays(entry("sphere_smallcircle").space, entry("sphere_smallcircle").subset, small);

  // perpendicular eta at a point of a line: nothing to check
  const auto& e = entry("plane_line");
  const auto L = detail::local_at(e.space, e.subset, make_point(e.space, 0, 0), make_point(e.space, 1, 0));
  EXPECT_FALSE(prop21_margin(L, Direction::on_circle(half_pi)).has_value());
}

TEST(Gradient, Examples) {
  EXPECT_EQ(check("gradient", "spindle_meridians").verdict, Verdict::pass);
  EXPECT_EQ(check("gradient", "sphere_greatcircle").verdict, Verdict::pass);
  const auto two = check("gradient", "plane_two_lines");
  EXPECT_EQ(two.verdict, Verdict::fail);
  expect_replays(entry("plane_two_lines").space, entry("plane_two_lines").subset, two);
}

TEST(Extremal, ApexDiameterRule) {
  for (double theta : {pi / 2, pi, 3 * pi / 2, pi + 0.01}) {
    const auto C = ModelSpace::cone(theta);
    const auto r = check_extremal(C, apex_singleton(C), budget, 1);
    EXPECT_EQ(r.verdict == Verdict::pass, theta <= pi + 1e-3) << theta;
    if (r.verdict == Verdict::fail) expect_replays(C, apex_singleton(C), r);
  }
}

TEST(Extremal, GreatCircleIsNotExtremal) {
  const auto r = check("extremal", "sphere_greatcircle");
  EXPECT_EQ(r.verdict, Verdict::fail);
  expect_replays(entry("sphere_greatcircle").space, entry("sphere_greatcircle").subset, r);
}

TEST(Equivalence, CatalogVerdictsAgree) {
  for (const auto& e : subset_catalog()) {
    for (const auto& c : qc_criteria()) {
      const auto r = run_check(c, e.space, e.subset, budget, 2);
      EXPECT_EQ(r.verdict, e.quasi_convex ? Verdict::pass : Verdict::fail) << e.name << " " << c;
      if (r.verdict == Verdict::fail) expect_replays(e.space, e.subset, r);
    }
  }
}

TEST(Equivalence, ExtremalImpliesQuasiConvex) {
  for (const auto& e : subset_catalog()) {
    const auto ex = check_extremal(e.space, e.subset, budget, 3);
    if (ex.verdict != Verdict::pass) continue;
    for (const auto& c : qc_criteria()) {
      EXPECT_EQ(run_check(c, e.space, e.subset, budget, 3).verdict, Verdict::pass) << e.name << " " << c;
    }
  }
}

TEST(FixedSets, PassEveryCriterion) {
  for (const auto& X : zoo()) {
    for (const auto& g : builtin_isometries(X)) {
      const auto F = fixed_point_set(X, g);
      for (const auto& c : qc_criteria()) {
        const auto r = run_check(c, X, F, 120, 5);
        EXPECT_EQ(r.verdict, Verdict::pass) << X.describe() << " " << g.name() << " " << c << "\n"
                                            << format_report(X, r);
      }
    }
  }
}

TEST(Suspect, EstimatedConesDoNotFail) {
  const auto& e = entry("sphere_smallcircle");
  const auto F = without_tangent(e.subset);
  const auto r = check_theoremA(e.space, F, 60, 1);
  EXPECT_TRUE(r.estimated);
  EXPECT_EQ(r.verdict, Verdict::suspect);
  // the Sigma-free criteria still fail outright
  EXPECT_EQ(check_def01(e.space, F, 60, 1).verdict, Verdict::fail);
}

TEST(Intersection, Examples) {
  const auto S = ModelSpace::sphere(2);
  const auto F = great_circle(S, Eigen::Vector3d::UnitZ());
  const auto G = great_circle(S, Eigen::Vector3d::UnitX());
  const auto fg = verify_intersection(S, F, G, budget, 1);
  EXPECT_EQ(fg.verdict, Verdict::pass) << format_report(S, fg);
  const auto ff = verify_intersection(S, F, F, budget, 1);
  EXPECT_EQ(ff.verdict, Verdict::pass) << format_report(S, ff);

  const auto Z = ModelSpace::spindle(pi);
  const auto a = meridian_set(Z, {0.0, half_pi});
  const auto b = meridian_set(Z, {pi / 4, 3 * pi / 4});
  const auto ab = verify_intersection(Z, a, b, budget, 1);
  EXPECT_EQ(ab.verdict, Verdict::pass) << format_report(Z, ab);

  const auto E = ModelSpace::euclidean(2);
  const auto two = lines_through_origin(E, {Eigen::Vector4d(1, 0, 0, 0), Eigen::Vector4d(0, 1, 0, 0)});
  EXPECT_EQ(verify_intersection(E, two, line(E, Eigen::Vector4d::Zero(), Eigen::Vector4d(1, 0, 0, 0)), budget, 1).verdict,
            Verdict::fail);
}

TEST(Suspension, Branches) {
  const auto Z = ModelSpace::spindle(pi);
  const auto m = verify_suspension_structure(Z, meridian_set(Z, {0.0, half_pi}), budget, 1);
  EXPECT_EQ(m.verdict, Verdict::pass) << format_report(Z, m);
  EXPECT_NE(m.notes.front().find("join"), std::string::npos);
  const auto eq = verify_suspension_structure(Z, equator(Z), budget, 1);
  EXPECT_EQ(eq.verdict, Verdict::pass);
  EXPECT_NE(eq.notes.front().find("equator"), std::string::npos);

  // round spindle: a tilted great circle has its own pole pair
  const auto R = ModelSpace::spindle(two_pi);
  const auto t = verify_suspension_structure(R, tilted_great_circle(R, Eigen::Vector3d(1, 0, 1)), budget, 1);
  EXPECT_EQ(t.verdict, Verdict::pass) << format_report(R, t);
  EXPECT_NE(t.notes.front().find("join"), std::string::npos);

  // an off-equator set with no pole pair
  EXPECT_EQ(verify_suspension_structure(Z, point_set(Z, {make_point(Z, 1.0, 0.0), make_point(Z, 1.2, 0.5)}), budget, 1)
                .verdict,
            Verdict::fail);
}

TEST(JoinEpsilon, Examples) {
  EXPECT_GE(estimate_join_epsilon(ModelSpace::sphere(2), 500, 1), 0.9);
  EXPECT_GE(estimate_join_epsilon(ModelSpace::euclidean(2), 500, 1), 0.95);
  EXPECT_GT(estimate_join_epsilon(ModelSpace::spindle(pi), 500, 1), 0.0);
}

TEST(Reports, Deterministic) {
  const auto& e = entry("plane_two_lines");
  const auto a = format_report(e.space, check_def01(e.space, e.subset, budget, 9));
  const auto b = format_report(e.space, check_def01(e.space, e.subset, budget, 9));
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("witness.point.q: "), std::string::npos);
  EXPECT_NE(a.find("verdict: fail"), std::string::npos);
}
