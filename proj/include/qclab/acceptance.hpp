#ifndef QCLAB_ACCEPTANCE_HPP
#define QCLAB_ACCEPTANCE_HPP

// The acceptance matrix: twelve numbered experiments with pass/fail rows.
// Shared by the acceptance test binary and the `suite` command.

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qclab/catalog.hpp"
#include "qclab/direction_geometry.hpp"
#include "qclab/gradient_flow.hpp"
#include "qclab/isometry.hpp"
#include "qclab/qc_check.hpp"
#include "qclab/scene.hpp"
#include "qclab/spaceform.hpp"

namespace qclab {

struct AcceptanceRow {
  int id = 0;
  std::string title;
  bool pass = true;
  std::string summary;
  std::vector<std::string> details;
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::size_t budget = 2000;
};

namespace acceptance {

/// Every kind of space, in a few shapes.
inline std::vector<ModelSpace> spaces_by_kind() {
  return {ModelSpace::sphere(1), ModelSpace::sphere(2), ModelSpace::sphere(3, 1.5), ModelSpace::euclidean(1),
          ModelSpace::euclidean(2), ModelSpace::euclidean(3), ModelSpace::cone(pi / 2), ModelSpace::cone(3 * pi / 2),
          ModelSpace::cone(two_pi), ModelSpace::spindle(pi / 2), ModelSpace::spindle(pi), ModelSpace::spindle(two_pi)};
}

/// One two-dimensional space per kind.
inline std::vector<ModelSpace> representatives() {
  return {ModelSpace::sphere(2), ModelSpace::euclidean(2), ModelSpace::cone(3 * pi / 2), ModelSpace::spindle(pi)};
}

inline std::string num(double v) { return fmt::format("{:.17g}", v); }

inline AcceptanceRow kernel_round_trip() {
  AcceptanceRow row{1, "kernel round-trip", true, "", {}};
  double worst = 0.0;
  std::size_t n = 0;
  for (double k : {-1.0, 0.0, 1.0}) {
    const CurvatureBound kb(k);
    double w = 0.0;
    for (int i = 1; i <= 50; ++i) {
      for (int j = 1; j <= 50; ++j) {
        for (int l = 1; l <= 50; ++l) {
          const double b = half_pi * i / 50, c = half_pi * j / 50, a = pi * l / 50;
          const double side = side_from_angle(kb, b, c, Angle(a));
          w = std::max(w, std::abs(comparison_angle(kb, b, c, side).value() - a));
          ++n;
        }
      }
    }
    row.details.push_back(fmt::format("k={} worst |angle error| {}", k, num(w)));
    worst = std::max(worst, w);
  }
  const double octant = comparison_angle(CurvatureBound(1.0), half_pi, half_pi, half_pi).value();
  row.details.push_back(fmt::format("octant angle - pi/2 = {}", num(octant - half_pi)));
  row.pass = worst <= 1e-9 && std::abs(octant - half_pi) <= 1e-12;
  row.summary = fmt::format("{} triangles, worst error {:.3g} (<= 1e-9), octant off by {:.3g} (<= 1e-12)", n, worst,
                            std::abs(octant - half_pi));
  return row;
}

inline AcceptanceRow small_triangle_defect(std::uint64_t seed) {
  AcceptanceRow row{2, "small-triangle angle defect", true, "", {}};
  double lo_all = 1, hi_all = -1;
  for (const auto& X : spaces_by_kind()) {
    Rng rng(derive_seed(seed, "a2-" + X.describe()));
    const auto k = X.lower_bound();
    double lo = 1, hi = -1;
    int done = 0;
    while (done < 1000) {
      const auto p = sample_point(X, rng);
      const auto q = sample_near(X, p, 4.5e-4, rng), r = sample_near(X, p, 4.5e-4, rng);
      const double pq = distance(X, p, q), pr = distance(X, p, r);
      if (pq < 1e-8 || pr < 1e-8) continue;
      const auto sigma = direction_space_at(X, p);
      const double measured = set_distance(sigma, directions_to(X, p, q), directions_to(X, p, r));
      const double defect = measured - comparison_angle(k, pq, pr, distance(X, q, r)).value();
      lo = std::min(lo, defect);
      hi = std::max(hi, defect);
      ++done;
    }
    row.details.push_back(fmt::format("{}: defect in [{}, {}]", X.describe(), num(lo), num(hi)));
    lo_all = std::min(lo_all, lo);
    hi_all = std::max(hi_all, hi);
  }
  row.pass = lo_all >= -1e-9 && hi_all <= 1e-4;
  row.summary = fmt::format("1000 triangles per space, defect in [{:.3g}, {:.3g}] (inside [-1e-9, 1e-4])", lo_all, hi_all);
  return row;
}

namespace detail {

// Did the step q -> qh cross the cut locus of p? Then dist_p switches branch
// inside the step. Seen from p the two branches can look alike (q next to a
// spindle pole), but dist_p has a kink there: its slope jumps by O(1).
inline bool crosses_cut_locus(const ModelSpace& X, const SpacePoint& p, const SpacePoint& q, const SpacePoint& qh) {
  if (set_distance(direction_space_at(X, p), directions_to(X, p, q), directions_to(X, p, qh)) > 0.05) return true;
  const double h = distance(X, q, qh);
  const auto eta = directions_to(X, q, qh);
  if (eta.points().empty()) return false;
  const int m = 32;
  std::vector<double> f;
  for (int i = 0; i <= m; ++i) f.push_back(distance(X, p, exp_step(X, q, eta.points().front(), h * i / m)));
  for (int i = 1; i < m; ++i) {
    if (std::abs((f[i + 1] - f[i]) - (f[i] - f[i - 1])) * m / h > 0.1) return true;
  }
  return false;
}

}  // namespace detail

inline AcceptanceRow derivative_agreement(std::uint64_t seed) {
  AcceptanceRow row{3, "first variation vs finite differences", true, "", {}};
  double worst_ratio = 0.0;
  for (const auto& X : spaces_by_kind()) {
    Rng rng(derive_seed(seed, "a3-" + X.describe()));
    const double far = X.compact() ? diameter(X) - 0.2 * X.radius() : 1e300;
    int checked = 0, crossings = 0, compared = 0;
    double ratio = 0.0;
    while (checked < 1000) {
      const auto p = sample_point(X, rng);
      const auto q = sample_point(X, rng);
      const double d = distance(X, p, q);
      if (d < 0.2 || d > far) continue;
      const auto eta = random_direction(direction_space_at(X, q), rng);
      const double exact = dist_derivative(X, p, q, eta);
      for (double h : {1e-3, 1e-4}) {
        if (cut_distance(X, q, eta) < 2 * h) continue;
                const auto qh = exp_step(X, q, eta, h);
        if (detail::crosses_cut_locus(X, p, q, qh)) {
          ++crossings;
          continue;
        }
        const double fd = (distance(X, qh, p) - d) / h;
        ratio = std::max(ratio, std::abs(fd - exact) / (5 * h));
        ++compared;
      }
      ++checked;
    }
    row.details.push_back(fmt::format("{}: {} comparisons, worst |error|/(5h) {}, cut-locus crossings skipped {}",
                                      X.describe(), compared, num(ratio), crossings));
    worst_ratio = std::max(worst_ratio, ratio);
    row.pass = row.pass && crossings < 20;
  }
  row.pass = row.pass && worst_ratio <= 1.0;
  row.summary = fmt::format("1000 configurations per space, worst |error| = {:.3g} x 5h", worst_ratio);
  return row;
}

inline AcceptanceRow equivalence_matrix(const SuiteOptions& o) {
  AcceptanceRow row{4, "equivalence matrix", true, "", {}};
  std::size_t cells = 0, bad = 0;
  for (const auto& e : subset_catalog()) {
    for (std::uint64_t seed : {std::uint64_t{1}, std::uint64_t{2}, std::uint64_t{3}}) {
      const std::uint64_t s = seed + (o.seed - 1) * 3;
      std::string line = fmt::format("{} seed {}:", e.name, s);
      for (const auto& c : qc_criteria()) {
        const auto r = run_check(c, e.space, e.subset, o.budget, s);
        const bool ok = r.verdict == (e.quasi_convex ? Verdict::pass : Verdict::fail) &&
                        (r.verdict != Verdict::fail || replay_witness(e.space, e.subset, r) > violation_tol);
        line += fmt::format(" {}={}", c, to_string(r.verdict));
        ++cells;
        if (!ok) ++bad;
      }
      row.details.push_back(line);
    }
  }
  row.pass = bad == 0;
  row.summary = fmt::format("{} cells at budget {}, {} disagree with the expected verdict", cells, o.budget, bad);
  return row;
}

inline AcceptanceRow extremality(const SuiteOptions& o) {
  AcceptanceRow row{5, "extremality", true, "", {}};
  const auto apex_passes = [&](double theta) {
    const auto C = ModelSpace::cone(theta);
    return check_extremal(C, apex_singleton(C), o.budget, o.seed).verdict == Verdict::pass;
  };
  for (double theta : {pi / 3, pi / 2, 2 * pi / 3, pi - 1e-3, pi, pi + 5e-3, pi + 0.1, 3 * pi / 2, two_pi}) {
    const bool got = apex_passes(theta);
    const bool want = theta <= pi + 1e-3;
    row.details.push_back(fmt::format("apex of cone({}): {}", num(theta), got ? "extremal" : "not extremal"));
    row.pass = row.pass && got == want;
  }
  // the switch itself, by bisection on theta
  double lo = pi - 0.01, hi = pi + 0.01;
  for (int i = 0; i < 40; ++i) {
    const double mid = (lo + hi) / 2;
    (apex_passes(mid) ? lo : hi) = mid;
  }
  row.details.push_back(fmt::format("verdict switches at theta - pi = {}", num(lo - pi)));
  const bool switch_ok = lo >= pi - 1e-9 && lo <= pi + 1e-3;
  const auto cat = subset_catalog();
  const auto& gc = catalog_entry(cat, "sphere_greatcircle");
  bool qc = true;
  for (const auto& c : qc_criteria()) qc = qc && run_check(c, gc.space, gc.subset, o.budget, o.seed).verdict == Verdict::pass;
  const auto ex = check_extremal(gc.space, gc.subset, o.budget, o.seed);
  row.details.push_back(fmt::format("great circle: quasi-convex {}, extremal {}", qc ? "yes" : "no", to_string(ex.verdict)));
  row.pass = row.pass && switch_ok && qc && ex.verdict == Verdict::fail;
  row.summary = fmt::format("apex extremal iff theta <= pi (switch at pi + {:.3g}); great circle quasi-convex, not extremal",
                            lo - pi);
  return row;
}

namespace detail {

// Hausdorff distance between a curve (piecewise geodesic through its samples)
// and the meridian arc of the unit 2-sphere in the half-plane y = 0, x >= 0,
// colatitudes [c0, c1]. Samples are assumed monotone in colatitude.
inline double meridian_hausdorff(const ModelSpace& S, const Curve& c, double c0, double c1) {
  const auto arc_point = [&](double colat) { return make_point(S, std::sin(colat), 0.0, std::cos(colat)); };
  const auto colat_of = [](const SpacePoint& x) { return std::atan2(std::abs(x.c[0]), x.c[2]); };
  double worst = 0.0;
  std::vector<double> colats;
  for (const auto& s : c.samples) {
    const double colat = colat_of(s.point);
    colats.push_back(colat);
    worst = std::max(worst, distance(S, s.point, arc_point(std::clamp(colat, c0, c1))));
  }
  // exact distance from a to the great-circle arc x..y (shorter than pi)
  const auto to_segment = [&](std::size_t i, const SpacePoint& a) {
    const Eigen::Vector3d x = c.samples[i].point.c.head<3>(), y = c.samples[i + 1].point.c.head<3>();
    const Eigen::Vector3d u = a.c.head<3>();
    const double ends = std::min(distance(S, a, c.samples[i].point), distance(S, a, c.samples[i + 1].point));
    const Eigen::Vector3d n = x.cross(y);
    if (n.norm() < 1e-15) return ends;
    const Eigen::Vector3d m = n.normalized();
    const Eigen::Vector3d foot = u - u.dot(m) * m;
    if (foot.norm() < 1e-15) return ends;
    const Eigen::Vector3d f = foot.normalized();
    const bool inside = x.cross(f).dot(n) >= 0 && f.cross(y).dot(n) >= 0;
    return inside ? std::asin(std::min(1.0, std::abs(u.dot(m)))) : ends;
  };
  const int n = 4000;
  for (int i = 0; i <= n; ++i) {
    const double colat = c0 + (c1 - c0) * i / n;
    const auto a = arc_point(colat);
    const auto it = std::lower_bound(colats.begin(), colats.end(), colat);
    const std::size_t j = static_cast<std::size_t>(it - colats.begin());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = (j >= 2 ? j - 2 : 0); k + 1 < c.samples.size() && k <= j + 1; ++k) {
      best = std::min(best, to_segment(k, a));
    }
    if (c.samples.size() == 1) best = distance(S, a, c.start());
    worst = std::max(worst, best);
  }
  return worst;
}

inline FlowConfig flow_with(double h, int steps) {
  FlowConfig cfg;
  cfg.step = h;
  cfg.max_steps = steps;
  return cfg;
}

}  // namespace detail

inline AcceptanceRow gradient_accuracy() {
  AcceptanceRow row{6, "gradient flow vs meridian", true, "", {}};
  const auto S = ModelSpace::sphere(2);
  const auto p = make_point(S, 0, 0, 1);
  const double c0 = 0.3;
  const auto r = make_point(S, std::sin(c0), 0, std::cos(c0));
  std::vector<double> dev;
  for (double h : {1e-2, 1e-3}) {
    const auto c = gradient_curve(S, p, r, detail::flow_with(h, 20000));
    const double d = detail::meridian_hausdorff(S, c, c0, pi);
    const double end = distance(S, c.end(), make_point(S, 0, 0, -1));
    row.details.push_back(fmt::format("h={}: {} samples, Hausdorff to meridian {}, end at {} from -p, terminal {}", num(h),
                                      c.samples.size(), num(d), num(end), to_string(c.terminal)));
    row.pass = row.pass && d < 10 * h && end < 10 * h && c.terminal == Terminal::stationary;
    dev.push_back(d);
  }
  row.summary = fmt::format("Hausdorff {:.3g} (h=1e-2), {:.3g} (h=1e-3), both < 10h", dev[0], dev[1]);
  return row;
}

inline AcceptanceRow spindle_flow(std::uint64_t seed) {
  AcceptanceRow row{7, "spindle flow from z1 ends at z2", true, "", {}};
  const double h = 1e-2;
  double worst = 0.0;
  for (double L : {half_pi, pi, two_pi}) {
    const auto Z = ModelSpace::spindle(L);
    Rng rng(derive_seed(seed, fmt::format("a7-{}", L)));
    double w = 0.0;
    int done = 0;
    while (done < 100) {
      const auto r = sample_point(Z, rng);
      if (is_chart_pole(Z, r)) continue;
      const auto c = gradient_curve(Z, spindle_pole(1), r, detail::flow_with(h, 2000));
      w = std::max(w, distance(Z, c.end(), spindle_pole(2)));
      row.pass = row.pass && c.terminal == Terminal::stationary;
      ++done;
    }
    row.details.push_back(fmt::format("L={}: 100 flows, farthest end from z2 {}", num(L), num(w)));
    worst = std::max(worst, w);
  }
  row.pass = row.pass && worst < 10 * h;
  row.summary = fmt::format("300 flows, every end within {:.3g} of z2 (< 10h = 0.1)", worst);
  return row;
}

inline AcceptanceRow fixed_point_sets(const SuiteOptions& o) {
  AcceptanceRow row{8, "fixed point sets", true, "", {}};
  std::size_t sets = 0, bases = 0;
  double worst_tan = 0.0;
  for (const auto& X : representatives()) {
    for (const auto& g : builtin_isometries(X)) {
      const auto F = fixed_point_set(X, g);
      ++sets;
      std::string line = fmt::format("{} {} ({}):", X.describe(), g.name(), F.description);
      for (const auto& c : qc_criteria()) {
        const auto r = run_check(c, X, F, o.budget, o.seed);
        line += fmt::format(" {}={}", c, to_string(r.verdict));
        row.pass = row.pass && r.verdict == Verdict::pass;
      }
      std::vector<SpacePoint> base = F.finite_points ? *F.finite_points : std::vector<SpacePoint>{};
      if (!F.finite_points) {
        base = F.landmarks;
        const auto more = F.sample(50 - base.size(), derive_seed(o.seed, "a8-" + g.name()));
        base.insert(base.end(), more.begin(), more.end());
      }
      double w = 0.0;
      for (const auto& p : base) {
        const auto sigma = direction_space_at(X, p);
        const auto est = estimate_tangent_cone(X, F, p);
        const auto fixed = induced_fixed_directions(X, g, p);
        const double hd = hausdorff(sigma, est, fixed);
        w = std::max(w, hd);
        ++bases;
      }
      worst_tan = std::max(worst_tan, w);
      line += fmt::format("; estimated cone vs fixed directions at {} points: worst Hausdorff {}", base.size(), num(w));
      row.details.push_back(line);
    }
  }
  row.pass = row.pass && worst_tan <= 1e-2;
  row.summary = fmt::format("{} fixed sets pass all five criteria; estimated cones within {:.3g} of the fixed directions "
                            "({} base points)",
                            sets, worst_tan, bases);
  return row;
}

inline AcceptanceRow intersections(const SuiteOptions& o) {
  AcceptanceRow row{9, "intersections", true, "", {}};
  std::vector<std::tuple<ModelSpace, SubsetSpec, SubsetSpec, std::string>> pairs;
  const auto cat = subset_catalog();
  for (std::size_t i = 0; i < cat.size(); ++i) {
    for (std::size_t j = i; j < cat.size(); ++j) {
      if (!cat[i].quasi_convex || !cat[j].quasi_convex) continue;
      if (cat[i].space.describe() != cat[j].space.describe()) continue;
      pairs.emplace_back(cat[i].space, cat[i].subset, cat[j].subset, cat[i].name + " & " + cat[j].name);
    }
  }
  const auto S = ModelSpace::sphere(2);
  pairs.emplace_back(S, great_circle(S, Eigen::Vector3d::UnitZ()), great_circle(S, Eigen::Vector3d::UnitX()),
                     "two great circles");
  const auto Z = ModelSpace::spindle(pi);
  pairs.emplace_back(Z, meridian_set(Z, {0.0, half_pi}), meridian_set(Z, {pi / 4, 3 * pi / 4}), "two meridian pairs");
  for (const auto& [X, F, G, name] : pairs) {
    const auto r = verify_intersection(X, F, G, o.budget, o.seed);
    std::string line = fmt::format("{}: {}", name, to_string(r.verdict));
    for (const auto& part : r.parts) line += fmt::format(" {}={}", part.criterion, to_string(part.verdict));
    for (const auto& n : r.notes) line += " (" + n + ")";
    row.details.push_back(line);
    row.pass = row.pass && r.verdict == Verdict::pass;
  }
  row.summary = fmt::format("{} pairs, including two great circles (empty cones at both crossing points)", pairs.size());
  return row;
}

inline AcceptanceRow join_bound(const SuiteOptions& o) {
  AcceptanceRow row{10, "joining curves", true, "", {}};
  const auto S = ModelSpace::sphere(2);
  const auto G = great_circle(S, Eigen::Vector3d::UnitZ());
  const double eps = estimate_join_epsilon(S, o.budget, o.seed);
  row.details.push_back(fmt::format("estimated epsilon {}", num(eps)));
  std::string sum = fmt::format("epsilon {}", eps);
  for (double gap : {0.05, 0.1}) {
    const auto p = make_point(S, 1, 0, 0);
    const auto q = make_point(S, std::cos(gap), std::sin(gap), 0);
    const auto c = join_in_subset(S, G, p, q, eps, detail::flow_with(1e-2, 1000));
    const double len = c.length(S);
    bool members = true;
    for (const auto& s : c.samples) members = members && subset_contains(S, G, s.point, 1e-9);
    const bool ok = std::abs(len - gap) <= 1e-3 && len <= gap / eps && members;
    row.details.push_back(fmt::format("|pq|={}: length {}, bound |pq|/epsilon {}", num(gap), num(len), num(gap / eps)));
    row.pass = row.pass && ok;
    sum += fmt::format("; |pq|={} length {:.6f}", gap, len);
  }
  row.summary = sum;
  return row;
}

inline AcceptanceRow tangency(std::uint64_t seed) {
  AcceptanceRow row{11, "tangent curves", true, "", {}};
  const auto cfg = detail::flow_with(1e-3, 300);
  std::size_t curves = 0;
  double worst_ratio = 0.0;
  for (const auto& e : subset_catalog()) {
    if (!e.quasi_convex) continue;
    const auto& X = e.space;
    const auto& F = e.subset;
    std::vector<SpacePoint> base = F.finite_points ? *F.finite_points : F.sample(3, derive_seed(seed, "a11-" + e.name));
    if (!F.finite_points) base.insert(base.end(), F.landmarks.begin(), F.landmarks.end());
    std::size_t here = 0;
    for (const auto& p : base) {
      const auto cone = tangent_cone_estimate(X, F, p);
      for (const auto& xi : cone.points()) {
        const auto c = tangent_curve(X, F, p, xi, cfg);
        bool members = true;
        for (const auto& s : c.samples) members = members && subset_contains(X, F, s.point, 1e-9);
        for (const auto& rung : tangency_rungs(X, p, xi, c, {0.1, 0.01})) {
          row.pass = row.pass && rung.ok && rung.samples > 0;
          worst_ratio = std::max(worst_ratio, rung.worst / rung.delta);
        }
        row.pass = row.pass && members;
        ++curves;
        ++here;
      }
    }
    row.details.push_back(fmt::format("{}: {} curves", e.name, here));
  }
  row.summary = fmt::format("{} curves; worst angle/delta on the rungs {:.3g} (< 1)", curves, worst_ratio);
  return row;
}

}  // namespace acceptance

/// Rows 1..11 (12 checks the others and is run separately).
inline AcceptanceRow run_acceptance_row(int id, const SuiteOptions& o) {
  using namespace acceptance;
  switch (id) {
    case 1: return kernel_round_trip();
    case 2: return small_triangle_defect(o.seed);
    case 3: return derivative_agreement(o.seed);
    case 4: return equivalence_matrix(o);
    case 5: return extremality(o);
    case 6: return gradient_accuracy();
    case 7: return spindle_flow(o.seed);
    case 8: return fixed_point_sets(o);
    case 9: return intersections(o);
    case 10: return join_bound(o);
    case 11: return tangency(o.seed);
  }
  throw GeometryError(fmt::format("no acceptance row {}", id));
}

inline std::string row_line(const AcceptanceRow& r) {
  return fmt::format("A{:02} {} {}: {}", r.id, r.pass ? "PASS" : "FAIL", r.title, r.summary);
}

inline void write_rows(std::ostream& os, const std::vector<AcceptanceRow>& rows, bool details) {
  for (const auto& r : rows) {
    os << row_line(r) << "\n";
    if (details) {
      for (const auto& d : r.details) os << "    " << d << "\n";
    }
  }
}

/// Row 12: rows 1..11 twice at one seed must print the same bytes, and their
/// verdicts must not depend on the seed.
inline AcceptanceRow determinism_row(const SuiteOptions& o, const std::vector<AcceptanceRow>& first,
                                     const std::function<void(const std::string&)>& progress = nullptr) {
  AcceptanceRow row{12, "determinism", true, "", {}};
  const auto text = [](const std::vector<AcceptanceRow>& rows) {
    std::ostringstream os;
    write_rows(os, rows, true);
    return os.str();
  };
  const auto run_all = [&](std::uint64_t seed) {
    SuiteOptions s = o;
    s.seed = seed;
    std::vector<AcceptanceRow> rows;
    for (int id = 1; id <= 11; ++id) {
      if (progress) progress(fmt::format("row {} seed {}", id, seed));
      rows.push_back(run_acceptance_row(id, s));
    }
    return rows;
  };
  const auto again = run_all(o.seed);
  const bool same = text(first) == text(again);
  row.details.push_back(fmt::format("seed {} twice: {} bytes, {}", o.seed, text(first).size(), same ? "identical" : "DIFFERENT"));
  bool verdicts = true;
  for (std::uint64_t s : {std::uint64_t{1}, std::uint64_t{2}, std::uint64_t{3}}) {
    if (s == o.seed) continue;
    const auto other = run_all(s);
    std::string v;
    for (std::size_t i = 0; i < other.size(); ++i) {
      v += other[i].pass ? 'P' : 'F';
      verdicts = verdicts && other[i].pass == first[i].pass;
    }
    row.details.push_back(fmt::format("seed {} verdicts {}", s, v));
  }
  std::string v;
  for (const auto& r : first) v += r.pass ? 'P' : 'F';
  row.details.push_back(fmt::format("seed {} verdicts {}", o.seed, v));
  row.pass = same && verdicts;
  row.summary = fmt::format("rerun {}, verdicts {} across seeds 1, 2, 3", same ? "byte-identical" : "differs",
                            verdicts ? "identical" : "differ");
  return row;
}

/// All twelve rows.
inline std::vector<AcceptanceRow> run_acceptance(const SuiteOptions& o,
                                                 const std::function<void(const std::string&)>& progress = nullptr) {
  std::vector<AcceptanceRow> rows;
  for (int id = 1; id <= 11; ++id) {
    if (progress) progress(fmt::format("row {}", id));
    rows.push_back(run_acceptance_row(id, o));
  }
  rows.push_back(determinism_row(o, rows, progress));
  return rows;
}

/// Scene suite: the five criteria on every labelled subset of a scene, against its label.
inline std::vector<AcceptanceRow> scene_suite(const Scene& sc, const SuiteOptions& o) {
  std::vector<AcceptanceRow> rows;
  int id = 0;
  for (const auto& [name, F] : sc.subsets) {
    const auto label = sc.expected.find(name);
    if (label == sc.expected.end()) continue;
    for (const auto& c : qc_criteria()) {
      const auto r = run_check(c, sc.space, F, o.budget, o.seed);
      AcceptanceRow row{++id, name + " " + c, true, "", {}};
      const Verdict want = label->second ? Verdict::pass : Verdict::fail;
      row.pass = r.verdict == want || r.verdict == Verdict::suspect;
      row.summary = fmt::format("labelled {}, checker says {}", label->second ? "quasi-convex" : "not quasi-convex",
                                to_string(r.verdict));
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace qclab

#endif
