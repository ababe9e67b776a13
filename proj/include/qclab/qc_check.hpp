#ifndef QCLAB_QC_CHECK_HPP
#define QCLAB_QC_CHECK_HPP

// Falsification checkers for quasi-convexity. Each criterion is sampled at a
// budget; "pass" only means no violating configuration was found. A failure
// carries a witness that replay_witness() re-evaluates from scratch.

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qclab/direction_geometry.hpp"
#include "qclab/gradient_flow.hpp"
#include "qclab/model_space.hpp"
#include "qclab/spaceform.hpp"
#include "qclab/subset.hpp"

namespace qclab {

enum class Verdict { pass, fail, suspect };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::suspect: return "suspect";
  }
  return "?";
}

struct Witness {
  std::vector<std::pair<std::string, SpacePoint>> points;
  std::vector<std::pair<std::string, Direction>> directions;
  /// Which inequality broke, with the numbers that matter.
  std::string detail;
  /// Size of the violation (> 0).
  double margin = 0.0;

  const SpacePoint& point(const std::string& name) const {
    for (const auto& [n, p] : points) {
      if (n == name) return p;
    }
    throw GeometryError("witness has no point " + name);
  }
  const Direction& direction(const std::string& name) const {
    for (const auto& [n, d] : directions) {
      if (n == name) return d;
    }
    throw GeometryError("witness has no direction " + name);
  }
};

struct CheckReport {
  std::string criterion;
  std::string space;
  std::string subset;
  Verdict verdict = Verdict::pass;
  std::optional<Witness> witness;
  std::size_t budget = 0;
  std::uint64_t seed = 0;
  /// Configurations actually tested (vacuous ones excluded).
  std::size_t evaluated = 0;
  /// Tangent cones came from the sample-based estimator.
  bool estimated = false;
  /// Largest violation seen; negative is slack. NaN when nothing was evaluated.
  double worst = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> notes;
  std::vector<CheckReport> parts;
  /// Flow settings of the gradient criterion (replay needs them).
  FlowConfig flow;
};

/// Violations at or below this are rounding.
inline constexpr double violation_tol = 1e-6;

/// The five criteria that are equivalent to quasi-convexity.
inline const std::vector<std::string>& qc_criteria() {
  static const std::vector<std::string> names = {"def01", "theoremA", "corollaryC", "prop21", "gradient"};
  return names;
}

inline const std::vector<std::string>& all_criteria() {
  static const std::vector<std::string> names = {"def01", "theoremA", "corollaryC", "prop21", "gradient", "extremal"};
  return names;
}

namespace detail {

// ----- sampling ------------------------------------------------------------

inline std::vector<SpacePoint> member_landmarks(const ModelSpace& X, const SubsetSpec& F) {
  std::vector<SpacePoint> out;
  auto add = [&](const SpacePoint& p) {
    if (!subset_contains(X, F, p, 1e-12)) return;
    for (const auto& o : out) {
      if (same_point(X, o, p)) return;
    }
    out.push_back(p);
  };
  for (const auto& p : F.landmarks) add(p);
  for (const auto& p : singular_points(X)) add(p);
  return out;
}

/// n points of F: most drawn across F, a fifth at or near its landmarks and
/// the singular points it contains.
inline std::vector<SpacePoint> member_pool(const ModelSpace& X, const SubsetSpec& F, std::size_t n,
                                           std::uint64_t seed) {
  if (F.empty || n == 0) return {};
  if (F.finite_points) {
    std::vector<SpacePoint> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back((*F.finite_points)[i % F.finite_points->size()]);
    return out;
  }
  const auto marks = member_landmarks(X, F);
  const std::size_t special = marks.empty() ? 0 : n / 5;
  auto out = F.sample(n - special, derive_seed(seed, "members"));
  for (std::size_t i = 0; i < special; ++i) {
    const SpacePoint& m = marks[i % marks.size()];
    if (i % 2 == 0) {
      out.push_back(m);
      continue;
    }
    const auto near = F.sample_near(m, 0.05, 1, derive_seed(seed + i, "members-near"));
    out.push_back(near.empty() ? m : near.front());
  }
  return out;
}

/// n points off F: uniform, near F, and near landmarks / singular points.
inline std::vector<SpacePoint> outside_pool(const ModelSpace& X, const SubsetSpec& F, std::size_t n,
                                            std::uint64_t seed) {
  std::vector<SpacePoint> out;
  if (F.empty) return out;
  Rng rng(derive_seed(seed, "outside"));
  const auto members = member_pool(X, F, std::max<std::size_t>(n, 1), derive_seed(seed, "outside-base"));
  auto marks = member_landmarks(X, F);
  for (const auto& s : singular_points(X)) marks.push_back(s);
  const double reach = 0.3 * (X.kind() == SpaceKind::sphere ? X.radius() : 1.0);
  for (std::size_t i = 0; out.size() < n && i < 20 * n + 100; ++i) {
    SpacePoint q;
    const std::size_t mode = i % 5;
    if (mode < 2 || (mode == 4 && marks.empty())) {
      q = sample_point(X, rng);
    } else if (mode < 4) {
      q = sample_near(X, members[rng.below(members.size())], reach, rng);
    } else {
      q = sample_near(X, marks[rng.below(marks.size())], reach, rng);
    }
    if (distance_to_subset(X, F, q) > 1e-9) out.push_back(q);
  }
  return out;
}

/// Pairs of distinct points of F: the second point global, near the first, or a landmark.
inline std::vector<std::pair<SpacePoint, SpacePoint>> member_pairs(const ModelSpace& X, const SubsetSpec& F,
                                                                   std::size_t n, std::uint64_t seed) {
  std::vector<std::pair<SpacePoint, SpacePoint>> out;
  if (F.empty) return out;
  const auto first = member_pool(X, F, n, derive_seed(seed, "pair-first"));
  const auto second = member_pool(X, F, n, derive_seed(seed, "pair-second"));
  const auto marks = member_landmarks(X, F);
  for (std::size_t i = 0; i < first.size(); ++i) {
    const SpacePoint& p = first[i];
    std::vector<SpacePoint> choices;
    const std::size_t mode = i % 10;
    if (mode >= 8 && !marks.empty()) choices.push_back(marks[i % marks.size()]);
    if (mode >= 5 && mode < 8) {
      const auto near = F.sample_near(p, 0.3, 1, derive_seed(seed + i, "pair-near"));
      choices.insert(choices.end(), near.begin(), near.end());
    }
    choices.push_back(second[i]);
    choices.push_back(second[(i + 1) % second.size()]);
    for (const auto& r : choices) {
      if (!same_point(X, p, r)) {
        out.emplace_back(p, r);
        break;
      }
    }
  }
  return out;
}

// ----- direction data at a base point ----------------------------------------

struct Local {
  DirectionSpace sigma = DirectionSpace::pair();
  /// Sigma_p F.
  DirectionSet tangent;
  /// Directions to r (empty when no r is involved).
  DirectionSet up;
};

inline Local local_at(const ModelSpace& X, const SubsetSpec& F, const SpacePoint& p,
                      const std::optional<SpacePoint>& r = std::nullopt) {
  Local L;
  L.sigma = direction_space_at(X, p);
  L.tangent = tangent_cone_estimate(X, F, p);
  if (r) L.up = directions_to(X, p, *r);
  return L;
}

/// Finite stand-ins for a direction set: the set itself when finite, else a
/// discretization at `res` plus the points of the set nearest to `anchors`.
inline std::vector<Direction> probe(const DirectionSpace& sigma, const DirectionSet& set,
                                    const std::vector<Direction>& anchors, double res) {
  if (set.is_empty()) return {};
  if (!set.is_continuum()) return set.points();
  std::vector<Direction> out;
  if (set.kind() != DirectionSet::Kind::full) out = discretize(sigma, set, res);
  for (const auto& a : anchors) out.push_back(nearest_in_set(sigma, a, set).element);
  return out;
}

inline bool any_continuum(const Local& L) { return L.tangent.is_continuum() || L.up.is_continuum(); }

/// Directions probed at p: a quasi-uniform grid plus the directions where
/// the inequalities are tight.
inline std::vector<Direction> eta_grid(const Local& L, std::size_t circle_n, std::size_t sphere_n) {
  const std::size_t n = L.sigma.kind() == DirectionSpaceKind::sphere ? sphere_n : circle_n;
  auto out = direction_grid(L.sigma, n);
  if (!L.up.is_continuum()) {
    out.insert(out.end(), L.up.points().begin(), L.up.points().end());
  }
  if (!L.up.is_empty()) out.push_back(farthest_direction(L.sigma, L.up).direction);
  if (!L.tangent.is_continuum()) {
    out.insert(out.end(), L.tangent.points().begin(), L.tangent.points().end());
  }
  return out;
}

/// Least violation, over zeta in `zetas` and xi in `xis`, of
/// "|eta xi| <= pi/2 and cos|eta zeta| >= cos|eta xi| cos|zeta xi|".
/// With no xi at all the requirement is cos|eta zeta| >= 0.
inline double right_angle_violation(const DirectionSpace& sigma, const Direction& eta,
                                    const std::vector<Direction>& zetas, const std::vector<Direction>& xis) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& z : zetas) {
    const double ez = sigma_distance(sigma, eta, z);
    if (xis.empty()) {
      best = std::min(best, -std::cos(ez));
      continue;
    }
    for (const auto& x : xis) {
      const double ex = sigma_distance(sigma, eta, x);
      const double v = std::max(ex - half_pi, std::cos(ex) * std::cos(sigma_distance(sigma, z, x)) - std::cos(ez));
      best = std::min(best, v);
    }
  }
  return best;
}

// Continuous sets are probed coarsely first and again finely before a
// violation is believed.
template <class Eval>
double refined(const Local& L, Eval eval) {
  const double coarse = eval(0.05);
  if (coarse <= violation_tol || !any_continuum(L)) return coarse;
  return std::min(coarse, eval(1e-3));
}

struct Evaluation {
  double violation = -std::numeric_limits<double>::infinity();
  std::string detail;
};

}  // namespace detail

// ----- per-configuration margins (positive = violated) ------------------------

/// Comparison angle at p of (q, p, r) minus pi/2.
inline double def01_margin(const ModelSpace& X, const SpacePoint& q, const SpacePoint& p, const SpacePoint& r) {
  return comparison_angle(X.lower_bound(), distance(X, p, q), distance(X, p, r), distance(X, q, r)).value() -
         half_pi;
}

inline detail::Evaluation theoremA_margin(const detail::Local& L, const Direction& eta) {
  const double v = detail::refined(L, [&](double res) {
    const auto zetas = detail::probe(L.sigma, L.up, {eta}, 0.1 * res / 0.05);
    auto anchors = zetas;
    anchors.push_back(eta);
    return detail::right_angle_violation(L.sigma, eta, zetas, detail::probe(L.sigma, L.tangent, anchors, res));
  });
  return {v, fmt::format("no zeta, xi with |eta xi| <= pi/2 and cos|eta zeta| >= cos|eta xi| cos|zeta xi|")};
}

/// The stronger form with set distances to the whole of up_p^r.
inline double theoremA_strong_margin(const detail::Local& L, const Direction& eta) {
  const double e_up = distance_to_set(L.sigma, eta, L.up);
  return detail::refined(L, [&](double res) {
    const auto xis = detail::probe(L.sigma, L.tangent, {eta}, res);
    if (xis.empty()) return -std::cos(e_up);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& x : xis) {
      const double ex = sigma_distance(L.sigma, eta, x);
      best = std::min(best, std::max(ex - half_pi, std::cos(ex) * std::cos(distance_to_set(L.sigma, x, L.up)) -
                                                       std::cos(e_up)));
    }
    return best;
  });
}

/// With f the direction farthest from up_p^r: vacuous unless |f up| > pi/2;
/// then f must lie in Sigma_p F (an estimated cone is matched at 1e-2).
inline std::optional<detail::Evaluation> corollaryC_margin(const detail::Local& L, bool estimated) {
  const auto f = farthest_direction(L.sigma, L.up);
  if (f.value <= half_pi + violation_tol) return std::nullopt;
  if (L.tangent.is_empty()) return detail::Evaluation{f.value - half_pi, fmt::format("empty tangent cone but |f up| = {:.17g}", f.value)};
  const double d = distance_to_set(L.sigma, f.direction, L.tangent);
  return detail::Evaluation{d - (estimated ? 1e-2 : 0.0),
                            fmt::format("farthest direction (|f up| = {:.17g}) at {:.17g} from the tangent cone", f.value, d)};
}

/// Vacuous unless c = -cos|up eta| > 0. Then Sigma_p F needs xi with
/// -cos|up xi| >= c, one such xi also with cos|eta xi| >= c, and xi' with
/// cos|up xi'| >= c.
inline std::optional<detail::Evaluation> prop21_margin(const detail::Local& L, const Direction& eta) {
  const double c = -std::cos(distance_to_set(L.sigma, eta, L.up));
  if (c <= 1e-9) return std::nullopt;
  double first = 0.0, aligned = 0.0, second = 0.0;
  const double v = detail::refined(L, [&](double res) {
    std::vector<Direction> anchors{eta, farthest_direction(L.sigma, L.up).direction};
    if (!L.up.is_continuum()) anchors.insert(anchors.end(), L.up.points().begin(), L.up.points().end());
    const auto xis = detail::probe(L.sigma, L.tangent, anchors, res);
    double best_a = -std::numeric_limits<double>::infinity();
    double best_al = std::numeric_limits<double>::infinity();
    double best_b = -std::numeric_limits<double>::infinity();
    for (const auto& x : xis) {
      const double ux = distance_to_set(L.sigma, x, L.up);
      const double a = -std::cos(ux);
      best_a = std::max(best_a, a);
      best_al = std::min(best_al, std::max(c - a, c - std::cos(sigma_distance(L.sigma, eta, x))));
      best_b = std::max(best_b, std::cos(ux));
    }
    first = xis.empty() ? c : c - best_a;
    aligned = xis.empty() ? c : best_al;
    second = xis.empty() ? c : c - best_b;
    return std::max({first, aligned, second});
  });
  std::string which = first >= aligned && first >= second ? "ascent" : aligned >= second ? "ascent-aligned" : "descent";
  return detail::Evaluation{v, fmt::format("c = {:.17g}; ascent {:.17g}, ascent-aligned {:.17g}, descent {:.17g}; worst: {}",
                                           c, first, aligned, second, which)};
}

/// For fixed eta and zeta anywhere in Sigma_p X: some xi in Sigma_p F with
/// |eta xi| <= pi/2 and cos|eta zeta| >= cos|eta xi| cos|zeta xi|.
inline double extremal_margin(const detail::Local& L, const Direction& eta, const Direction& zeta) {
  const detail::Local just_tangent{L.sigma, L.tangent, DirectionSet::empty()};
  return detail::refined(just_tangent, [&](double res) {
    return detail::right_angle_violation(L.sigma, eta, {zeta}, detail::probe(L.sigma, L.tangent, {eta, zeta}, res));
  });
}

/// Distance from F of the first flow sample farther than 10 h, less 10 h; the
/// largest excess when none escapes. Returns the offending sample too.
inline std::pair<double, SpacePoint> gradient_escape(const ModelSpace& X, const SubsetSpec& F, const SpacePoint& p,
                                                     const SpacePoint& r, const FlowConfig& cfg) {
  const auto c = gradient_curve(X, p, r, cfg);
  const double tol = 10.0 * cfg.step;
  double worst = -std::numeric_limits<double>::infinity();
  SpacePoint at = r;
  for (const auto& s : c.samples) {
    const double v = distance_to_subset(X, F, s.point) - tol;
    if (v > violation_tol) return {v, s.point};
    if (v > worst) {
      worst = v;
      at = s.point;
    }
  }
  return {worst, at};
}

/// Flow settings used by the gradient criterion.
inline FlowConfig checker_flow() {
  FlowConfig cfg;
  cfg.step = 1e-2;
  cfg.max_steps = 300;
  return cfg;
}

// ----- checkers -----------------------------------------------------------------

namespace detail {

inline CheckReport start_report(const std::string& criterion, const ModelSpace& X, const SubsetSpec& F,
                                std::size_t budget, std::uint64_t seed) {
  CheckReport rep;
  rep.criterion = criterion;
  rep.space = X.describe();
  rep.subset = F.description;
  rep.budget = budget;
  rep.seed = seed;
  return rep;
}

/// Records one evaluated configuration; keeps the witness of the worst one.
template <class MakeWitness>
void record(CheckReport& rep, double violation, MakeWitness make) {
  ++rep.evaluated;
  if (std::isnan(rep.worst) || violation > rep.worst) {
    rep.worst = violation;
    if (violation > violation_tol) {
      rep.witness = make();
      rep.witness->margin = violation;
    }
  }
}

inline void finish(CheckReport& rep, bool estimation_involved) {
  if (rep.witness) rep.verdict = estimation_involved ? Verdict::suspect : Verdict::fail;
  if (rep.evaluated == 0) rep.notes.push_back("no configuration met the hypotheses: vacuous pass");
}

inline bool small(const SubsetSpec& F) { return F.empty || (F.finite_points && F.finite_points->size() < 2); }

}  // namespace detail

/// Nearest points p in F of outside points q, against r in F: the comparison
/// angle at p may not exceed pi/2.
inline CheckReport check_def01(const ModelSpace& X, const SubsetSpec& F, std::size_t budget, std::uint64_t seed) {
  auto rep = detail::start_report("def01", X, F, budget, seed);
  if (detail::small(F)) {
    rep.notes.push_back("empty sets and single points are quasi-convex");
    return rep;
  }
  const auto qs = detail::outside_pool(X, F, budget, seed);
  const auto marks = detail::member_landmarks(X, F);
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const SpacePoint& q = qs[i];
    const auto ps = F.nearest(q);
    // r: global, near p, landmarks
    auto rs = detail::member_pool(X, F, 8, derive_seed(seed + i, "def01-r"));
    for (const auto& p : ps) {
      auto local = rs;
      const auto near = F.sample_near(p, 0.3, 4, derive_seed(seed + i, "def01-near"));
      local.insert(local.end(), near.begin(), near.end());
      local.insert(local.end(), marks.begin(), marks.end());
      for (const auto& r : local) {
        if (same_point(X, p, r)) continue;
        double m;
        try {
          m = def01_margin(X, q, p, r);
        } catch (const GeometryError&) {
          ++skipped;
          continue;
        }
        detail::record(rep, m, [&] {
          return Witness{{{"q", q}, {"p", p}, {"r", r}}, {}, fmt::format("comparison angle {:.17g}", m + half_pi), 0.0};
        });
      }
    }
  }
  if (skipped) rep.notes.push_back(fmt::format("{} triangles outside the comparison range skipped", skipped));
  detail::finish(rep, false);
  return rep;
}

inline CheckReport check_theoremA(const ModelSpace& X, const SubsetSpec& F, std::size_t budget, std::uint64_t seed) {
  auto rep = detail::start_report("theoremA", X, F, budget, seed);
  rep.estimated = !F.has_tangent();
  if (detail::small(F)) {
    rep.notes.push_back("empty sets and single points are quasi-convex");
    return rep;
  }
  std::size_t strong_fail = 0, strong_total = 0;
  for (const auto& [p, r] : detail::member_pairs(X, F, budget, seed)) {
    const auto L = detail::local_at(X, F, p, r);
    for (const auto& eta : detail::eta_grid(L, 720, 500)) {
      const auto e = theoremA_margin(L, eta);
      detail::record(rep, e.violation, [&] {
        return Witness{{{"p", p}, {"r", r}}, {{"eta", eta}}, e.detail, 0.0};
      });
      ++strong_total;
      if (theoremA_strong_margin(L, eta) > violation_tol) ++strong_fail;
    }
  }
  rep.notes.push_back(strong_fail == 0 ? fmt::format("strong form (set distances to up_p^r) holds at all {} configurations", strong_total)
                                       : fmt::format("strong form fails at {} of {} configurations", strong_fail, strong_total));
  detail::finish(rep, rep.estimated);
  return rep;
}

inline CheckReport check_corollaryC(const ModelSpace& X, const SubsetSpec& F, std::size_t budget,
                                    std::uint64_t seed) {
  auto rep = detail::start_report("corollaryC", X, F, budget, seed);
  rep.estimated = !F.has_tangent();
  if (detail::small(F)) {
    rep.notes.push_back("empty sets and single points are quasi-convex");
    return rep;
  }
  for (const auto& [p, r] : detail::member_pairs(X, F, budget, seed)) {
    const auto L = detail::local_at(X, F, p, r);
    const auto e = corollaryC_margin(L, rep.estimated);
    if (!e) continue;
    detail::record(rep, e->violation, [&] { return Witness{{{"p", p}, {"r", r}}, {}, e->detail, 0.0}; });
  }
  detail::finish(rep, rep.estimated);
  return rep;
}

inline CheckReport check_prop21(const ModelSpace& X, const SubsetSpec& F, std::size_t budget, std::uint64_t seed) {
  auto rep = detail::start_report("prop21", X, F, budget, seed);
  rep.estimated = !F.has_tangent();
  if (detail::small(F)) {
    rep.notes.push_back("empty sets and single points are quasi-convex");
    return rep;
  }
  for (const auto& [p, r] : detail::member_pairs(X, F, budget, seed)) {
    const auto L = detail::local_at(X, F, p, r);
    for (const auto& eta : detail::eta_grid(L, 360, 300)) {
      const auto e = prop21_margin(L, eta);
      if (!e) continue;
      detail::record(rep, e->violation, [&] {
        return Witness{{{"p", p}, {"r", r}}, {{"eta", eta}}, e->detail, 0.0};
      });
    }
  }
  detail::finish(rep, rep.estimated);
  return rep;
}

/// Gradient curves of dist_p from r in F must stay in F (within 10 h).
inline CheckReport check_gradient_invariance(const ModelSpace& X, const SubsetSpec& F, std::size_t budget,
                                             std::uint64_t seed, const FlowConfig& cfg = checker_flow()) {
  auto rep = detail::start_report("gradient", X, F, budget, seed);
  rep.flow = cfg;
  if (detail::small(F)) {
    rep.notes.push_back("empty sets and single points are quasi-convex");
    return rep;
  }
  const std::size_t flows = std::max<std::size_t>(1, budget / 10);
  for (const auto& [p, r] : detail::member_pairs(X, F, flows, seed)) {
    const auto [v, at] = gradient_escape(X, F, p, r, cfg);
    detail::record(rep, v, [&, at = at] {
      return Witness{{{"p", p}, {"r", r}, {"escape", at}}, {},
                     fmt::format("flow sample at {:.17g} from F (allowed {:.17g})", v + 10.0 * cfg.step, 10.0 * cfg.step),
                     0.0};
    });
  }
  rep.notes.push_back(fmt::format("{} flows, step {:.17g}, at most {} steps", rep.evaluated, cfg.step, cfg.max_steps));
  detail::finish(rep, false);
  return rep;
}

/// Extremality: the right-angle bound with zeta anywhere in Sigma_p X.
inline CheckReport check_extremal(const ModelSpace& X, const SubsetSpec& F, std::size_t budget, std::uint64_t seed) {
  auto rep = detail::start_report("extremal", X, F, budget, seed);
  rep.estimated = !F.has_tangent();
  if (F.empty) {
    rep.notes.push_back("the empty set is extremal");
    return rep;
  }
  const std::size_t bases = std::max<std::size_t>(1, budget / 16);
  auto ps = detail::member_pool(X, F, bases, derive_seed(seed, "extremal"));
  if (F.finite_points) ps = *F.finite_points;
  for (const auto& p : ps) {
    const auto L = detail::local_at(X, F, p);
    auto etas = direction_grid(L.sigma, 128);
    if (!L.tangent.is_continuum()) etas.insert(etas.end(), L.tangent.points().begin(), L.tangent.points().end());
    const auto zeta_grid = direction_grid(L.sigma, 128);
    for (const auto& eta : etas) {
      auto zetas = zeta_grid;
      zetas.push_back(farthest_direction(L.sigma, DirectionSet::single(eta)).direction);
      for (const auto& zeta : zetas) {
        const double v = extremal_margin(L, eta, zeta);
        detail::record(rep, v, [&] {
          return Witness{{{"p", p}}, {{"eta", eta}, {"zeta", zeta}},
                         fmt::format("|eta zeta| = {:.17g}", sigma_distance(L.sigma, eta, zeta)), 0.0};
        });
      }
    }
  }
  detail::finish(rep, rep.estimated);
  return rep;
}

inline CheckReport run_check(const std::string& criterion, const ModelSpace& X, const SubsetSpec& F,
                             std::size_t budget, std::uint64_t seed) {
  if (criterion == "def01") return check_def01(X, F, budget, seed);
  if (criterion == "theoremA") return check_theoremA(X, F, budget, seed);
  if (criterion == "corollaryC") return check_corollaryC(X, F, budget, seed);
  if (criterion == "prop21") return check_prop21(X, F, budget, seed);
  if (criterion == "gradient") return check_gradient_invariance(X, F, budget, seed);
  if (criterion == "extremal") return check_extremal(X, F, budget, seed);
  throw GeometryError("unknown criterion: " + criterion);
}

/// Re-evaluates the witness of a failed report in isolation; returns its margin.
inline double replay_witness(const ModelSpace& X, const SubsetSpec& F, const CheckReport& rep) {
  if (!rep.witness) throw GeometryError("report has no witness to replay");
  const Witness& w = *rep.witness;
  const auto& c = rep.criterion;
  if (c == "def01") return def01_margin(X, w.point("q"), w.point("p"), w.point("r"));
  if (c == "gradient") return gradient_escape(X, F, w.point("p"), w.point("r"), rep.flow).first;
  if (c == "extremal") return extremal_margin(detail::local_at(X, F, w.point("p")), w.direction("eta"), w.direction("zeta"));
  const auto L = detail::local_at(X, F, w.point("p"), w.point("r"));
  if (c == "theoremA") return theoremA_margin(L, w.direction("eta")).violation;
  if (c == "corollaryC") {
    const auto e = corollaryC_margin(L, !F.has_tangent());
    return e ? e->violation : -std::numeric_limits<double>::infinity();
  }
  if (c == "prop21") {
    const auto e = prop21_margin(L, w.direction("eta"));
    return e ? e->violation : -std::numeric_limits<double>::infinity();
  }
  throw GeometryError("no replay for criterion " + c);
}

// ----- structural verifiers ----------------------------------------------------

namespace detail {

inline Verdict combine(const std::vector<CheckReport>& parts) {
  Verdict v = Verdict::pass;
  for (const auto& p : parts) {
    if (p.verdict == Verdict::fail) return Verdict::fail;
    if (p.verdict == Verdict::suspect) v = Verdict::suspect;
  }
  return v;
}

}  // namespace detail

/// F & G must pass the five criteria, and its tangent cones (estimated from
/// samples) must be the intersections of those of F and G.
inline CheckReport verify_intersection(const ModelSpace& X, const SubsetSpec& F, const SubsetSpec& G,
                                       std::size_t budget, std::uint64_t seed) {
  CheckReport rep;
  rep.criterion = "intersection";
  rep.space = X.describe();
  rep.subset = "(" + F.description + ") & (" + G.description + ")";
  rep.budget = budget;
  rep.seed = seed;
  for (const auto* S : {&F, &G}) {
    auto pre = check_def01(X, *S, budget, seed);
    pre.criterion = "def01(operand)";
    rep.parts.push_back(std::move(pre));
  }
  if (detail::combine(rep.parts) == Verdict::fail) {
    rep.verdict = Verdict::fail;
    rep.notes.push_back("an operand is not quasi-convex");
    return rep;
  }
  const auto H = intersection(X, F, G, seed);
  if (H.empty) {
    rep.notes.push_back("empty intersection: vacuous pass");
    return rep;
  }
  for (const auto& c : qc_criteria()) rep.parts.push_back(run_check(c, X, H, budget, seed));

  auto tan = detail::start_report("tangent-intersection", X, H, budget, seed);
  tan.estimated = true;
  std::vector<SpacePoint> pts = H.finite_points ? *H.finite_points : H.sample(40, derive_seed(seed, "tangent-bases"));
  if (!H.finite_points) {
    const auto marks = detail::member_landmarks(X, H);
    pts.insert(pts.end(), marks.begin(), marks.end());
  }
  if (pts.size() > 50) pts.resize(50);
  const double tol = 1e-2;
  for (const auto& p : pts) {
    const auto sigma = direction_space_at(X, p);
    const auto want = intersect(sigma, tangent_cone_estimate(X, F, p), tangent_cone_estimate(X, G, p), 1e-6);
    const auto got = estimate_tangent_cone(X, H, p);
    double gap;
    if (want.is_empty() || got.is_empty()) {
      gap = want.is_empty() && got.is_empty() ? 0.0 : pi;
    } else if (want.is_continuum()) {
      gap = 0.0;
      for (const auto& d : got.points()) gap = std::max(gap, distance_to_set(sigma, d, want));
    } else {
      gap = hausdorff(sigma, got, want);
    }
    detail::record(tan, gap - tol, [&] {
      return Witness{{{"p", p}}, {}, fmt::format("estimated cone at Hausdorff {:.17g} from the intersected cones", gap), 0.0};
    });
  }
  detail::finish(tan, false);
  rep.parts.push_back(std::move(tan));
  rep.verdict = detail::combine(rep.parts);
  return rep;
}

/// On a spindle: F lies in the equator, or F is the join of a pair of points
/// at distance pi with the part of F they see, every geodesic from one pole of
/// the pair through a point of F to the other staying in F.
inline CheckReport verify_suspension_structure(const ModelSpace& X, const SubsetSpec& F, std::size_t budget,
                                               std::uint64_t seed) {
  if (X.kind() != SpaceKind::spindle) throw GeometryError("suspension structure needs a spindle");
  auto rep = detail::start_report("suspension", X, F, budget, seed);
  const auto pts = detail::member_pool(X, F, std::max<std::size_t>(budget / 10, 8), derive_seed(seed, "suspension"));
  if (pts.empty()) throw GeometryError("suspension structure needs a nonempty subset");
  bool in_equator = true;
  for (const auto& x : pts) in_equator = in_equator && std::abs(x.c[0] - half_pi) <= 1e-6;
  if (in_equator) {
    rep.notes.push_back("branch: F lies in the equator");
    rep.evaluated = pts.size();
    return rep;
  }

  std::optional<std::pair<SpacePoint, SpacePoint>> poles;
  if (subset_contains(X, F, spindle_pole(1)) && subset_contains(X, F, spindle_pole(2))) {
    poles = {spindle_pole(1), spindle_pole(2)};
  } else {
    // flows of dist_x inside F end at a point at distance pi from x
    const auto cfg = checker_flow();
    const auto pairs = detail::member_pairs(X, F, std::min<std::size_t>(64, std::max<std::size_t>(budget / 10, 8)), seed);
    for (const auto& [x, y] : pairs) {
      const auto c = gradient_curve(X, x, y, FlowConfig{cfg.step, cfg.angle_tol, 1000});
      const SpacePoint e = project_to_subset(X, F, c.end());
      if (distance(X, x, e) >= pi - 1e-6) {
        poles = {x, e};
        break;
      }
    }
  }
  if (!poles) {
    rep.verdict = Verdict::fail;
    rep.notes.push_back("F leaves the equator but no pair of points of F at distance pi was found");
    return rep;
  }
  const auto& [z1, z2] = *poles;
  rep.notes.push_back(fmt::format("branch: join; poles {} and {} at distance {:.17g}", to_string(X, z1),
                                  to_string(X, z2), distance(X, z1, z2)));
  std::size_t crossing = 0;
  for (const auto& w : pts) {
    if (same_point(X, w, z1, 1e-9) || same_point(X, w, z2, 1e-9)) continue;
    if (std::abs(w.c[0] - half_pi) <= 1e-6) ++crossing;
    double worst = -std::numeric_limits<double>::infinity();
    SpacePoint at = w;
    for (const auto& [a, b] : {std::pair{z1, w}, std::pair{w, z2}}) {
      const double len = distance(X, a, b);
      if (len == 0.0) continue;
      const auto seg = geodesic_segments(X, a, b, 1).front();
      for (int i = 1; i < 32; ++i) {
        const SpacePoint y = seg.at(X, len * i / 32.0);
        const double v = distance_to_subset(X, F, y) - violation_tol;
        if (v > worst) {
          worst = v;
          at = y;
        }
      }
    }
    detail::record(rep, worst, [&] {
      return Witness{{{"z1", z1}, {"z2", z2}, {"w", w}, {"off", at}}, {}, "geodesic through w leaves F", 0.0};
    });
  }
  rep.notes.push_back(fmt::format("{} sampled points of F on the equator", crossing));
  detail::finish(rep, false);
  return rep;
}

/// Largest epsilon on a ladder for which every sampled close pair (p, q) with
/// |pq| < epsilon^2 has max(-cos f_q, -cos f_p) > epsilon, f_x being the
/// largest angle at x between a direction and the directions to the other point.
inline double estimate_join_epsilon(const ModelSpace& X, std::size_t budget, std::uint64_t seed) {
  const std::vector<double> ladder = {0.99, 0.95, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1, 0.05};
  for (double eps : ladder) {
    Rng rng(derive_seed(seed, fmt::format("join-eps-{}", eps)));
    bool holds = true;
    for (std::size_t i = 0; i < budget && holds; ++i) {
      const SpacePoint p = sample_point(X, rng);
      const SpacePoint q = sample_near(X, p, 0.999 * eps * eps, rng);
      if (same_point(X, p, q, 0.0)) continue;
      const double at_q = -std::cos(steepest_ascent(X, p, q).value);
      const double at_p = -std::cos(steepest_ascent(X, q, p).value);
      holds = std::max(at_q, at_p) > eps;
    }
    if (holds) return eps;
  }
  throw GeometryError("no trial epsilon survived; raise the budget");
}

// ----- text output ---------------------------------------------------------------

namespace detail {

inline std::string direction_text(const Direction& d) {
  const auto& v = d.raw();
  return fmt::format("({:.17g},{:.17g},{:.17g})", v[0], v[1], v[2]);
}

inline void write_report(std::ostream& os, const ModelSpace* X, const CheckReport& r, const std::string& indent) {
  const auto num = [](double v) { return std::isnan(v) ? std::string("none") : fmt::format("{:.17g}", v); };
  os << indent << "[report]\n";
  os << indent << "criterion: " << r.criterion << "\n";
  os << indent << "space: " << r.space << "\n";
  os << indent << "subset: " << r.subset << "\n";
  os << indent << "verdict: " << to_string(r.verdict) << "\n";
  os << indent << "budget: " << r.budget << "\n";
  os << indent << "seed: " << r.seed << "\n";
  os << indent << "evaluated: " << r.evaluated << "\n";
  os << indent << "estimated: " << (r.estimated ? "yes" : "no") << "\n";
  os << indent << "worst: " << num(r.worst) << "\n";
  if (r.witness) {
    const auto& w = *r.witness;
    os << indent << "witness.margin: " << fmt::format("{:.17g}", w.margin) << "\n";
    for (const auto& [n, p] : w.points) {
      os << indent << "witness.point." << n << ": "
         << (X ? to_string(*X, p) : fmt::format("({:.17g},{:.17g},{:.17g},{:.17g})", p.c[0], p.c[1], p.c[2], p.c[3]))
         << "\n";
    }
    for (const auto& [n, d] : w.directions) os << indent << "witness.direction." << n << ": " << direction_text(d) << "\n";
    os << indent << "witness.detail: " << w.detail << "\n";
  }
  for (const auto& n : r.notes) os << indent << "note: " << n << "\n";
  for (const auto& p : r.parts) write_report(os, X, p, indent + "  ");
  os << indent << "[end]\n";
}

}  // namespace detail

/// Stable text record: one "key: value" per line, numbers at full precision.
inline void write_report(std::ostream& os, const ModelSpace& X, const CheckReport& r) {
  detail::write_report(os, &X, r, "");
}

inline std::string format_report(const ModelSpace& X, const CheckReport& r) {
  std::ostringstream os;
  write_report(os, X, r);
  return os.str();
}

}  // namespace qclab

#endif
