#ifndef QCLAB_GRADIENT_FLOW_HPP
#define QCLAB_GRADIENT_FLOW_HPP

// Discrete gradient curves of distance functions, radial curves, curves
// tangent to a direction of a subset, and joining two nearby points inside a
// subset by a curve of controlled length.

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "qclab/direction_geometry.hpp"
#include "qclab/model_space.hpp"
#include "qclab/subset.hpp"

namespace qclab {

enum class Terminal { stationary, budget, boundary };

inline const char* to_string(Terminal t) {
  switch (t) {
    case Terminal::stationary: return "stationary";
    case Terminal::budget: return "budget";
    case Terminal::boundary: return "boundary";
  }
  return "?";
}

struct CurveSample {
  double t = 0.0;
  SpacePoint point;
};

struct Curve {
  std::vector<CurveSample> samples;
  double step_size = 0.0;
  Terminal terminal = Terminal::budget;

  const SpacePoint& start() const { return samples.front().point; }
  const SpacePoint& end() const { return samples.back().point; }

  /// Point at parameter t, along the minimal geodesic between neighbouring
  /// samples. Past the last sample the curve stays put (a stationary curve is
  /// constant from then on).
  SpacePoint at(const ModelSpace& X, double t) const {
    if (t <= samples.front().t) return start();
    if (t >= samples.back().t) return end();
    const auto it = std::upper_bound(samples.begin(), samples.end(), t,
                                     [](double v, const CurveSample& s) { return v < s.t; });
    const CurveSample& b = *it;
    const CurveSample& a = *(it - 1);
    const double len = distance(X, a.point, b.point);
    if (len == 0.0) return a.point;
    const auto seg = geodesic_segments(X, a.point, b.point, 1).front();
    return seg.at(X, len * (t - a.t) / (b.t - a.t));
  }

  double length(const ModelSpace& X) const {
    double l = 0.0;
    for (std::size_t i = 1; i < samples.size(); ++i) l += distance(X, samples[i - 1].point, samples[i].point);
    return l;
  }
};

struct FlowConfig {
  double step = 1e-2;
  /// Margin above pi/2 below which a point counts as stationary.
  double angle_tol = 1e-6;
  int max_steps = 1000;
  /// Offset of the first start point of a radial curve.
  double radial_offset = 1e-2;
  /// Endpoint gap at which join_in_subset stops.
  double join_tol = 1e-9;

  void validate() const {
    if (!(step > 0.0) || !std::isfinite(step)) throw GeometryError("flow step must be positive");
    if (max_steps < 1) throw GeometryError("flow needs max_steps >= 1");
    if (!(angle_tol >= 0.0)) throw GeometryError("flow angle tolerance must be >= 0");
    if (!(radial_offset > 0.0)) throw GeometryError("radial offset must be positive");
    if (!(join_tol > 0.0)) throw GeometryError("join tolerance must be positive");
  }
};

/// No admissible direction at either endpoint, or no progress within budget.
class JoinError : public GeometryError {
 public:
  explicit JoinError(const std::string& what) : GeometryError(what) {}
};

namespace detail {

enum class StepOutcome { moved, stationary, boundary };

struct AscentStep {
  StepOutcome outcome = StepOutcome::stationary;
  SpacePoint next;
  /// Parameter advance: h for a full step, length/speed for one cut short.
  double dt = 0.0;
};

/// One explicit step of the gradient flow of dist_p from x.
///
/// The step runs along the farthest direction for h times the speed. When the
/// gain falls well short of the first-order prediction (a maximum of dist_p
/// was passed: the antipode of p, or a ridge where two geodesics to p tie) the
/// step is shortened to the best point on the segment. Steps cut short (also
/// by the cut distance) advance the parameter only by the time that length
/// takes at this speed. A gain below angle_tol*h means there is nothing left
/// to climb.
inline AscentStep ascent_step(const ModelSpace& X, const SpacePoint& p, const SpacePoint& x, double h,
                              double angle_tol) {
  const auto far = steepest_ascent(X, p, x);
  if (far.value <= half_pi + angle_tol) return {StepOutcome::stationary, x};
  const double speed = -std::cos(far.value);
  const double cut = cut_distance(X, x, far.direction);
  if (!(cut > 1e-15)) return {StepOutcome::boundary, x};
  const double len = std::min(h * speed, cut);
  const double d0 = distance(X, p, x);
  const auto along = [&](double t) { return exp_step(X, x, far.direction, t); };
  SpacePoint y;
  try {
    y = along(len);
  } catch (const StepTooLarge&) {
    return {StepOutcome::boundary, x};
  }
  double gain = distance(X, p, y) - d0;
  double used = len;
  if (gain < 0.5 * speed * len) {
    const auto best =
        boost::math::tools::brent_find_minima([&](double t) { return -distance(X, p, along(t)); }, 0.0, len, 52);
    if (-best.second - d0 > gain) {
      y = along(best.first);
      gain = -best.second - d0;
      used = best.first;
    }
  }
  if (gain <= angle_tol * h) return {StepOutcome::stationary, x};
  return {StepOutcome::moved, y, used >= h * speed ? h : used / speed};
}

using Projector = std::function<SpacePoint(const SpacePoint&)>;

/// Gradient flow of dist_p from `start`, parameter starting at t0. With a
/// projector every step is pulled back onto a subset, and a pull longer than
/// 10 h^2 is an error.
inline Curve flow(const ModelSpace& X, const SpacePoint& p, const SpacePoint& start, double t0,
                  const FlowConfig& cfg, const Projector& project = nullptr) {
  const double h = cfg.step;
  Curve c;
  c.step_size = project ? h * (1.0 + 10.0 * h) : h;
  c.samples.push_back({t0, start});
  SpacePoint x = start;
  double t = t0;
  for (int i = 0; i < cfg.max_steps; ++i) {
    const auto st = ascent_step(X, p, x, h, cfg.angle_tol);
    if (st.outcome == StepOutcome::stationary) {
      c.terminal = Terminal::stationary;
      return c;
    }
    if (st.outcome == StepOutcome::boundary) {
      c.terminal = Terminal::boundary;
      return c;
    }
    SpacePoint y = st.next;
    if (project) {
      const SpacePoint z = project(y);
      const double pulled = distance(X, y, z);
      if (pulled > 10.0 * h * h) {
        throw GeometryError(fmt::format("projection onto the subset moved a flow step by {:.3g} > 10 h^2 at {}", pulled,
                                        to_string(X, y)));
      }
      y = z;
      if (distance(X, p, y) <= distance(X, p, x)) {
        c.terminal = Terminal::stationary;
        return c;
      }
    }
    x = y;
    t += st.dt;
    c.samples.push_back({t, x});
  }
  c.terminal = Terminal::budget;
  return c;
}

/// Prepends p and geodesic points from p to the curve's start, spaced at most h.
inline Curve prepend_origin(const ModelSpace& X, const SpacePoint& p, const Direction& xi, double offset, Curve c) {
  const int pieces = std::max(1, static_cast<int>(std::ceil(offset / c.step_size - 1e-12)));
  std::vector<CurveSample> head;
  for (int i = 0; i < pieces; ++i) {
    const double t = offset * static_cast<double>(i) / pieces;
    head.push_back({t, exp_step(X, p, xi, t)});
  }
  c.samples.insert(c.samples.begin(), head.begin(), head.end());
  return c;
}

/// Directed Hausdorff distance between sample sets of two gradient curves of
/// the same dist_p. Points at distance e differ by at most e in dist_p, so the
/// search around each sample only scans a window of that key.
inline double directed_keyed_hausdorff(const ModelSpace& X, const SpacePoint& p, const Curve& a, const Curve& b) {
  std::vector<std::pair<double, std::size_t>> keys;
  for (std::size_t j = 0; j < b.samples.size(); ++j) keys.emplace_back(distance(X, p, b.samples[j].point), j);
  std::sort(keys.begin(), keys.end());
  double worst = 0.0;
  for (const auto& s : a.samples) {
    const double k = distance(X, p, s.point);
    const auto mid = std::lower_bound(keys.begin(), keys.end(), std::make_pair(k, std::size_t{0}));
    double best = std::numeric_limits<double>::infinity();
    for (auto it = mid; it != keys.end() && it->first - k <= best; ++it) {
      best = std::min(best, distance(X, s.point, b.samples[it->second].point));
    }
    for (auto it = mid; it != keys.begin();) {
      --it;
      if (k - it->first > best) break;
      best = std::min(best, distance(X, s.point, b.samples[it->second].point));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace detail

/// Hausdorff distance between the sample sets of two curves.
inline double curve_hausdorff(const ModelSpace& X, const Curve& a, const Curve& b) {
  const auto directed = [&](const Curve& u, const Curve& v) {
    double worst = 0.0;
    for (const auto& s : u.samples) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& r : v.samples) best = std::min(best, distance(X, s.point, r.point));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

/// Gradient curve of dist_p starting from r.
inline Curve gradient_curve(const ModelSpace& X, const SpacePoint& p, const SpacePoint& r, const FlowConfig& cfg = {}) {
  cfg.validate();
  if (same_point(X, p, r, 0.0)) throw GeometryError("gradient curve of dist_p cannot start at p");
  return detail::flow(X, p, r, 0.0, cfg);
}

/// Radial curve from p in direction xi: the limit of gradient curves of dist_p
/// started at exp_p(e xi) as e -> 0, taken from e = e0, e0/2, e0/4.
inline Curve radial_curve(const ModelSpace& X, const SpacePoint& p, const Direction& xi, const FlowConfig& cfg = {}) {
  cfg.validate();
  const Direction d = canonical(direction_space_at(X, p), xi);
  const double cut = cut_distance(X, p, d);
  std::vector<Curve> family;
  std::vector<double> offsets;
  for (int k = 0; k < 3; ++k) {
    const double e = std::min(std::ldexp(cfg.radial_offset, -k), cut / 2.0);
    offsets.push_back(e);
    family.push_back(detail::flow(X, p, exp_step(X, p, d, e), e, cfg));
  }
  const double allowed = 2.0 * cfg.radial_offset + 10.0 * cfg.step;
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      const double hd = std::max(detail::directed_keyed_hausdorff(X, p, family[i], family[j]),
                                 detail::directed_keyed_hausdorff(X, p, family[j], family[i]));
      if (hd > allowed) {
        throw GeometryError(fmt::format("radial curve family does not settle: Hausdorff {:.3g} > {:.3g}", hd, allowed));
      }
    }
  }
  return detail::prepend_origin(X, p, d, offsets.back(), family.back());
}

/// Curve in F starting at p tangent to xi in Sigma_p F: the radial curve
/// with every step projected back to F.
inline Curve tangent_curve(const ModelSpace& X, const SubsetSpec& F, const SpacePoint& p, const Direction& xi,
                           const FlowConfig& cfg = {}) {
  cfg.validate();
  const auto sigma = direction_space_at(X, p);
  const auto cone = tangent_cone_estimate(X, F, p);
  const double slack = F.has_tangent() ? 1e-9 : 1e-2;
  if (!contains(sigma, cone, xi, slack)) throw GeometryError("tangent curve needs a direction of the tangent cone");
  const Direction d = canonical(sigma, xi);
  const double e = std::min(cfg.radial_offset / 4.0, cut_distance(X, p, d) / 2.0);
  const SpacePoint off = exp_step(X, p, d, e);
  const SpacePoint start = project_to_subset(X, F, off);
  const double pulled = distance(X, off, start);
  if (pulled > 10.0 * e * e) {
    throw GeometryError(fmt::format("subset leaves direction {} at first order (pull {:.3g})", d.raw()[0], pulled));
  }
  const auto project = [&](const SpacePoint& y) { return project_to_subset(X, F, y); };
  return detail::prepend_origin(X, p, d, e, detail::flow(X, p, start, e, cfg, project));
}

struct TangencyRung {
  double delta = 0.0;
  double horizon = 0.0;
  /// Largest |up_p^alpha(t) xi| over samples with 0 < t <= horizon.
  double worst = 0.0;
  std::size_t samples = 0;
  bool ok = true;
};

/// Tangency test on the ladder of deltas: every sample with 0 < t <= delta
/// must be seen from p within angle delta of xi. A rung without samples is vacuous.
inline std::vector<TangencyRung> tangency_rungs(const ModelSpace& X, const SpacePoint& p, const Direction& xi,
                                                const Curve& c, const std::vector<double>& deltas = {0.1, 0.01, 0.001}) {
  const auto sigma = direction_space_at(X, p);
  std::vector<TangencyRung> out;
  for (double delta : deltas) {
    TangencyRung r;
    r.delta = delta;
    r.horizon = delta;
    for (const auto& s : c.samples) {
      if (s.t <= 0.0 || s.t > r.horizon || same_point(X, p, s.point, 0.0)) continue;
      const auto seen = directions_to(X, p, s.point);
      r.worst = std::max(r.worst, distance_to_set(sigma, xi, seen));
      ++r.samples;
    }
    r.ok = r.worst < delta;
    out.push_back(r);
  }
  return out;
}

/// Curve in F from p to q of length at most |pq|/epsilon.
///
/// Each round moves one endpoint by at most h along a direction of the
/// subset's tangent cone that shortens the gap at rate better than epsilon,
/// projects back to F, and keeps the step only if the gap shrank by more than
/// epsilon times the step. The two endpoint paths are glued at the end; the
/// parameter is arclength.
inline Curve join_in_subset(const ModelSpace& X, const SubsetSpec& F, const SpacePoint& p, const SpacePoint& q,
                            double epsilon, const FlowConfig& cfg = {}) {
  cfg.validate();
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw GeometryError("join epsilon must lie in (0, 1]");
  if (!subset_contains(X, F, p) || !subset_contains(X, F, q)) throw GeometryError("join endpoints must lie in F");
  double gap = distance(X, p, q);
  if (gap == 0.0) throw GeometryError("join needs two distinct points");
  if (gap >= epsilon * epsilon) {
    throw GeometryError(fmt::format("join needs |pq| = {:.6g} < epsilon^2 = {:.6g}", gap, epsilon * epsilon));
  }
  const double h = cfg.step;
  std::vector<SpacePoint> from_p{p};
  std::vector<SpacePoint> from_q{q};

  const auto advance = [&](std::vector<SpacePoint>& path, const SpacePoint& other) {
    const SpacePoint x = path.back();
    const auto sigma = direction_space_at(X, x);
    const auto cone = tangent_cone_estimate(X, F, x);
    if (cone.is_empty()) return false;
    const auto toward = minimal_geodesics(X, x, other);
    NearestInSet pick;
    if (toward.continuum) {
      pick = {0.0, discretize(sigma, cone, 1e-2).front()};
    } else {
      for (const auto& z : toward.initial) {
        const auto n = nearest_in_set(sigma, z, cone);
        if (n.distance < pick.distance) pick = n;
      }
    }
    if (!(-std::cos(pick.distance) < -epsilon)) return false;
    const double cut = cut_distance(X, x, pick.element);
    const double s = std::min({h, gap, cut});
    if (!(s > 0.0)) return false;
    SpacePoint y;
    try {
      y = exp_step(X, x, pick.element, s);
    } catch (const StepTooLarge&) {
      return false;
    }
    const SpacePoint w = project_to_subset(X, F, y);
    if (distance(X, y, w) > 10.0 * s * s) return false;
    const double moved = distance(X, x, w);
    const double next_gap = distance(X, w, other);
    if (!(moved > 0.0) || !(gap - next_gap > epsilon * moved)) return false;
    path.push_back(w);
    gap = next_gap;
    return true;
  };

  const double rounds = std::max(static_cast<double>(cfg.max_steps), 4.0 * std::ceil(gap / (epsilon * h)) + 64.0);
  for (int i = 0; gap > cfg.join_tol; ++i) {
    if (i >= rounds) throw JoinError(fmt::format("join did not close the gap within {} rounds", rounds));
    const bool q_first = i % 2 == 0;
    const bool moved = q_first ? (advance(from_q, from_p.back()) || advance(from_p, from_q.back()))
                               : (advance(from_p, from_q.back()) || advance(from_q, from_p.back()));
    if (!moved) {
      throw JoinError(fmt::format("no admissible direction at either endpoint with gap {:.6g} (epsilon {:.6g})", gap,
                                  epsilon));
    }
  }

  Curve c;
  c.step_size = h * (1.0 + 10.0 * h);
  // the endpoints met: nothing is left to move
  c.terminal = Terminal::stationary;
  std::vector<SpacePoint> path = from_p;
  for (auto it = from_q.rbegin(); it != from_q.rend(); ++it) {
    if (same_point(X, path.back(), *it, 0.0)) continue;
    path.push_back(*it);
  }
  double t = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i > 0) t += distance(X, path[i - 1], path[i]);
    if (i > 0 && !(t > c.samples.back().t)) continue;
    c.samples.push_back({t, path[i]});
  }
  return c;
}

/// Plain-text curve table: a header and one "t c0 c1 ..." row per sample.
inline void write_curve(std::ostream& os, const ModelSpace& X, const Curve& c) {
  const int n = coordinate_count(X);
  os << "# " << X.describe() << " terminal=" << to_string(c.terminal) << " step=" << fmt::format("{:.17g}", c.step_size)
     << "\n# t";
  for (int i = 0; i < n; ++i) os << " c" << i;
  os << "\n";
  for (const auto& s : c.samples) {
    os << fmt::format("{:.17g}", s.t);
    for (int i = 0; i < n; ++i) os << fmt::format(" {:.17g}", s.point.c[i]);
    os << "\n";
  }
}

}  // namespace qclab

#endif
