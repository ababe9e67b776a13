// qclab: command-line front end. Parses a scene, runs one experiment, writes
// a report or a curve table. Exit 0 pass, 1 fail, 2 usage/configuration error.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qclab/qclab.hpp"

using namespace qclab;

namespace {

struct Plan {
  std::string command;
  std::string scene;
  std::string subset;
  std::string criterion = "all";
  std::string with;
  std::string from, to, to_pole, at, direction;
  std::string out;
  std::size_t budget = 2000;
  std::uint64_t seed = 1;
  double step = 1e-2;
  int max_steps = 0;
  double epsilon = 0.0;
  bool details = false;
  bool verbose = false;
};

struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

struct Outcome {
  std::string text;
  bool pass = true;
  std::string summary;
};

Direction parse_direction(const DirectionSpace& sigma, const std::string& text) {
  if (text.empty()) throw UsageError("--direction is required here");
  switch (sigma.kind()) {
    case DirectionSpaceKind::pair:
      if (text == "+" || text == "+1" || text == "1") return Direction::in_pair(1);
      if (text == "-" || text == "-1") return Direction::in_pair(-1);
      throw UsageError("directions in a pair are + or -: " + text);
    case DirectionSpaceKind::circle: return Direction::on_circle(parse_real(text));
    case DirectionSpaceKind::sphere: {
      if (text.size() < 2 || text.front() != '(' || text.back() != ')') {
        throw UsageError("directions on the sphere look like (x,y,z): " + text);
      }
      std::vector<double> v;
      std::stringstream ss(text.substr(1, text.size() - 2));
      for (std::string item; std::getline(ss, item, ',');) v.push_back(parse_real(item));
      if (v.size() != 3) throw UsageError("directions on the sphere have 3 components: " + text);
      const Eigen::Vector3d u(v[0], v[1], v[2]);
      if (u.norm() == 0.0) throw UsageError("zero direction vector");
      return Direction::on_sphere(u);
    }
  }
  throw UsageError("bad direction " + text);
}

std::string direction_text(const DirectionSpace& sigma, const Direction& d) {
  switch (sigma.kind()) {
    case DirectionSpaceKind::pair: return d.sign() > 0 ? "+" : "-";
    case DirectionSpaceKind::circle: return fmt::format("{:.17g}", d.angle());
    case DirectionSpaceKind::sphere: return fmt::format("({:.17g},{:.17g},{:.17g})", d.unit()[0], d.unit()[1], d.unit()[2]);
  }
  return "?";
}

std::string set_text(const DirectionSpace& sigma, const DirectionSet& s) {
  switch (s.kind()) {
    case DirectionSet::Kind::full: return "all directions";
    case DirectionSet::Kind::arc: return fmt::format("arc from {:.17g} of length {:.17g}", s.arc_start(), s.arc_length());
    case DirectionSet::Kind::great_circle:
      return fmt::format("great circle with normal ({:.17g},{:.17g},{:.17g})", s.normal()[0], s.normal()[1], s.normal()[2]);
    case DirectionSet::Kind::finite: break;
  }
  if (s.is_empty()) return "empty";
  std::string out = "{";
  for (std::size_t i = 0; i < s.points().size(); ++i) {
    out += (i ? ", " : "") + direction_text(sigma, s.points()[i]);
  }
  return out + "}";
}

FlowConfig flow_config(const Plan& plan, const ModelSpace& X) {
  FlowConfig cfg;
  cfg.step = plan.step;
  if (plan.max_steps > 0) {
    cfg.max_steps = plan.max_steps;
  } else {
    // enough to cross the space twice at unit speed
    const double span = X.compact() ? std::max(10.0, 2.0 * diameter(X)) : 10.0;
    cfg.max_steps = static_cast<int>(std::ceil(span / plan.step));
  }
  cfg.validate();
  return cfg;
}

// the base point p of dist_p: --to POINT or --to-pole NAME
SpacePoint base_point(const Plan& plan, const ModelSpace& X) {
  if (!plan.to.empty() && !plan.to_pole.empty()) throw UsageError("give --to or --to-pole, not both");
  if (!plan.to_pole.empty()) {
    if (plan.to_pole != "z1" && plan.to_pole != "z2") throw UsageError("--to-pole is z1 or z2");
    if (X.kind() != SpaceKind::spindle) throw UsageError("--to-pole needs a spindle");
    return parse_point(X, plan.to_pole);
  }
  if (plan.to.empty()) throw UsageError("--to or --to-pole is required here");
  return parse_point(X, plan.to);
}

SpacePoint required_point(const ModelSpace& X, const std::string& text, const std::string& flag) {
  if (text.empty()) throw UsageError(flag + " is required here");
  return parse_point(X, text);
}

std::string curve_text(const ModelSpace& X, const Curve& c) {
  std::ostringstream os;
  write_curve(os, X, c);
  return os.str();
}

Outcome run_check_command(const Plan& plan, const Scene& sc) {
  const auto& X = sc.space;
  const auto& F = sc.subset(plan.subset);
  std::vector<CheckReport> reports;
  if (plan.criterion == "all") {
    for (const auto& c : qc_criteria()) reports.push_back(run_check(c, X, F, plan.budget, plan.seed));
  } else if (plan.criterion == "intersection") {
    if (plan.with.empty()) throw UsageError("--criterion intersection needs --with SUBSET");
    reports.push_back(verify_intersection(X, F, sc.subset(plan.with), plan.budget, plan.seed));
  } else if (plan.criterion == "suspension") {
    reports.push_back(verify_suspension_structure(X, F, plan.budget, plan.seed));
  } else {
    const auto known = all_criteria();
    if (std::find(known.begin(), known.end(), plan.criterion) == known.end()) {
      throw UsageError("unknown criterion " + plan.criterion);
    }
    reports.push_back(run_check(plan.criterion, X, F, plan.budget, plan.seed));
  }
  Outcome o;
  std::ostringstream os;
  std::string summary;
  for (const auto& r : reports) {
    write_report(os, X, r);
    o.pass = o.pass && r.verdict != Verdict::fail;
    summary += fmt::format("{}{}={}", summary.empty() ? "" : " ", r.criterion, to_string(r.verdict));
  }
  os << "summary: " << summary << "\n";
  o.text = os.str();
  o.summary = summary;
  return o;
}

Outcome run_trace_gradient(const Plan& plan, const Scene& sc) {
  const auto& X = sc.space;
  const auto p = base_point(plan, X);
  const auto r = required_point(X, plan.from, "--from");
  const auto c = gradient_curve(X, p, r, flow_config(plan, X));
  return {curve_text(X, c), true,
          fmt::format("{} samples, terminal {}, end {}", c.samples.size(), to_string(c.terminal), to_string(X, c.end()))};
}

Outcome run_trace_radial(const Plan& plan, const Scene& sc) {
  const auto& X = sc.space;
  const auto p = required_point(X, plan.at, "--at");
  const auto xi = parse_direction(direction_space_at(X, p), plan.direction);
  const auto c = radial_curve(X, p, xi, flow_config(plan, X));
  return {curve_text(X, c), true,
          fmt::format("{} samples, terminal {}, end {}", c.samples.size(), to_string(c.terminal), to_string(X, c.end()))};
}

Outcome run_join(const Plan& plan, const Scene& sc) {
  const auto& X = sc.space;
  const auto& F = sc.subset(plan.subset);
  const auto p = required_point(X, plan.from, "--from");
  const auto q = required_point(X, plan.to, "--to");
  const double eps = plan.epsilon > 0.0 ? plan.epsilon : estimate_join_epsilon(X, plan.budget, plan.seed);
  const auto c = join_in_subset(X, F, p, q, eps, flow_config(plan, X));
  const double gap = distance(X, p, q), len = c.length(X);
  std::ostringstream os;
  os << fmt::format("# epsilon {:.17g}\n# distance {:.17g}\n# length {:.17g}\n# bound {:.17g}\n", eps, gap, len, gap / eps);
  write_curve(os, X, c);
  Outcome o{os.str(), len <= gap / eps * (1 + 1e-12), ""};
  o.summary = fmt::format("length {:.17g}, bound {:.17g}", len, gap / eps);
  return o;
}

Outcome run_tangent(const Plan& plan, const Scene& sc) {
  const auto& X = sc.space;
  const auto& F = sc.subset(plan.subset);
  const auto p = required_point(X, plan.at, "--at");
  const auto sigma = direction_space_at(X, p);
  const auto cone = tangent_cone_estimate(X, F, p);
  std::vector<Direction> xis;
  if (!plan.direction.empty()) {
    xis.push_back(parse_direction(sigma, plan.direction));
  } else {
    if (cone.is_continuum()) throw UsageError("the tangent cone here is a continuum; pick one with --direction");
    xis = cone.points();
  }
  Outcome o;
  std::ostringstream os;
  os << "# tangent cone " << set_text(sigma, cone) << "\n";
  std::size_t rungs_ok = 0, rungs = 0;
  for (const auto& xi : xis) {
    const auto c = tangent_curve(X, F, p, xi, flow_config(plan, X));
    os << "# direction " << direction_text(sigma, xi) << "\n";
    for (const auto& r : tangency_rungs(X, p, xi, c)) {
      os << fmt::format("# rung delta {:.17g}: {} samples, worst angle {:.17g}, {}\n", r.delta, r.samples, r.worst,
                        r.ok ? "ok" : "FAIL");
      ++rungs;
      if (r.ok) ++rungs_ok;
      o.pass = o.pass && r.ok;
    }
    write_curve(os, X, c);
  }
  o.text = os.str();
  o.summary = fmt::format("{} curves, {}/{} rungs ok", xis.size(), rungs_ok, rungs);
  return o;
}

Outcome run_farthest(const Plan& plan, const Scene& sc) {
  const auto& X = sc.space;
  const auto x = required_point(X, plan.at, "--at");
  const auto p = base_point(plan, X);
  if (same_point(X, x, p)) throw UsageError("--at and the base point coincide");
  const auto sigma = direction_space_at(X, x);
  const auto up = directions_to(X, x, p);
  const auto far = farthest_direction(sigma, up);
  Outcome o;
  std::ostringstream os;
  os << "point: " << to_string(X, x) << "\n";
  os << "toward: " << to_string(X, p) << "\n";
  os << "directions to base: " << set_text(sigma, up) << "\n";
  os << "farthest: " << direction_text(sigma, far.direction) << "\n";
  os << fmt::format("angle: {:.17g}\n", far.value);
  os << "unique: " << (far.unique ? "yes" : "no") << "\n";
  if (!sc.subsets.empty()) {
    const auto& F = sc.subset(plan.subset);
    if (subset_contains(X, F, x)) {
      // beyond a right angle the farthest direction has to be tangent to F
      const auto cone = tangent_cone_estimate(X, F, x);
      const bool inside = !cone.is_empty() && contains(sigma, cone, far.direction, F.has_tangent() ? 1e-6 : 1e-2);
      os << "in tangent cone: " << (inside ? "yes" : "no") << "\n";
      if (far.value > half_pi + violation_tol && !inside) o.pass = false;
    } else {
      os << "in tangent cone: point not in subset\n";
    }
  }
  o.text = os.str();
  o.summary = fmt::format("farthest {} at angle {:.17g}", direction_text(sigma, far.direction), far.value);
  return o;
}

Outcome run_suite(const Plan& plan) {
  SuiteOptions s;
  s.seed = plan.seed;
  s.budget = plan.budget;
  std::vector<AcceptanceRow> rows;
  if (plan.scene.empty()) {
    std::function<void(const std::string&)> progress;
    if (plan.verbose) progress = [](const std::string& m) { std::cerr << "suite: " << m << "\n"; };
    rows = run_acceptance(s, progress);
  } else {
    rows = scene_suite(load_scene(plan.scene), s);
    if (rows.empty()) throw UsageError("scene has no subsets labelled quasi_convex true/false");
  }
  std::ostringstream os;
  write_rows(os, rows, plan.details);
  Outcome o;
  std::size_t passed = 0;
  for (const auto& r : rows) {
    o.pass = o.pass && r.pass;
    if (r.pass) ++passed;
  }
  os << fmt::format("suite: {}/{} rows pass\n", passed, rows.size());
  o.text = os.str();
  o.summary = fmt::format("{}/{} rows pass", passed, rows.size());
  return o;
}

std::string output_path(const Plan& plan) {
  if (!plan.out.empty()) return plan.out;
  const char* dir = std::getenv("QCLAB_OUT_DIR");
  if (!dir || !*dir) return "";
  std::string stem = plan.scene.empty() ? "acceptance" : std::filesystem::path(plan.scene).stem().string();
  if (!plan.subset.empty()) stem += "-" + plan.subset;
  return (std::filesystem::path(dir) / (plan.command + "-" + stem + ".txt")).string();
}

int run(const Plan& plan) {
  Outcome o;
  if (plan.command == "suite") {
    o = run_suite(plan);
  } else {
    if (plan.scene.empty()) throw UsageError("--scene is required");
    const auto sc = load_scene(plan.scene);
    if (plan.command == "check") o = run_check_command(plan, sc);
    else if (plan.command == "trace-gradient") o = run_trace_gradient(plan, sc);
    else if (plan.command == "trace-radial") o = run_trace_radial(plan, sc);
    else if (plan.command == "join") o = run_join(plan, sc);
    else if (plan.command == "tangent") o = run_tangent(plan, sc);
    else if (plan.command == "farthest") o = run_farthest(plan, sc);
    else throw UsageError("unknown command " + plan.command);
  }
  const auto path = output_path(plan);
  if (path.empty()) {
    std::cout << o.text;
  } else {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + path);
    f << o.text;
    std::cout << plan.command << ": " << (o.pass ? "pass" : "fail") << ", " << o.summary << "; wrote " << path << "\n";
  }
  return o.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qclab: quasi-convex subsets of model Alexandrov spaces"};
  app.require_subcommand(1);
  Plan plan;

  const auto common = [&](CLI::App* c, bool scene_required) {
    auto* s = c->add_option("--scene", plan.scene, "scene file or preset name");
    if (scene_required) s->required();
    c->add_option("--out", plan.out, "output file (default: stdout, or a file in $QCLAB_OUT_DIR)");
    c->add_option("--seed", plan.seed, "random seed")->capture_default_str();
  };
  const auto flow = [&](CLI::App* c) {
    c->add_option("--step", plan.step, "flow step size h")->capture_default_str()->check(CLI::PositiveNumber);
    c->add_option("--max-steps", plan.max_steps, "flow step budget (default: enough to cross the space twice)");
  };

  auto* check = app.add_subcommand("check", "run a quasi-convexity criterion on a subset");
  common(check, true);
  check->add_option("--subset", plan.subset, "subset name (default: the first)");
  check->add_option("--criterion", plan.criterion,
                    "def01, theoremA, corollaryC, prop21, gradient, extremal, intersection, suspension or all")
      ->capture_default_str();
  check->add_option("--with", plan.with, "second subset for --criterion intersection");
  check->add_option("--budget", plan.budget, "samples per criterion")->capture_default_str();

  auto* tg = app.add_subcommand("trace-gradient", "gradient curve of dist_p from a point");
  common(tg, true);
  flow(tg);
  tg->add_option("--from", plan.from, "start point r")->required();
  tg->add_option("--to", plan.to, "base point p");
  tg->add_option("--to-pole", plan.to_pole, "base point p as a spindle pole (z1 or z2)");

  auto* tr = app.add_subcommand("trace-radial", "radial curve from p in direction xi");
  common(tr, true);
  flow(tr);
  tr->add_option("--at", plan.at, "base point p")->required();
  tr->add_option("--direction", plan.direction, "xi: angle, + or -, or (x,y,z)")->required();

  auto* jn = app.add_subcommand("join", "curve inside a subset between two of its points");
  common(jn, true);
  flow(jn);
  jn->add_option("--subset", plan.subset, "subset name (default: the first)");
  jn->add_option("--from", plan.from, "p")->required();
  jn->add_option("--to", plan.to, "q")->required();
  jn->add_option("--epsilon", plan.epsilon, "join constant (default: estimated)")->check(CLI::Range(0.0, 1.0));
  jn->add_option("--budget", plan.budget, "samples for the epsilon estimate")->capture_default_str();

  auto* tn = app.add_subcommand("tangent", "curves in a subset tangent to its tangent-cone directions");
  common(tn, true);
  flow(tn);
  tn->add_option("--subset", plan.subset, "subset name (default: the first)");
  tn->add_option("--at", plan.at, "base point p in the subset")->required();
  tn->add_option("--direction", plan.direction, "one direction xi (default: every direction of the cone)");

  auto* fr = app.add_subcommand("farthest", "farthest direction from the directions toward p");
  common(fr, true);
  fr->add_option("--subset", plan.subset, "subset name (default: the first)");
  fr->add_option("--at", plan.at, "point x")->required();
  fr->add_option("--to", plan.to, "base point p");
  fr->add_option("--to-pole", plan.to_pole, "base point p as a spindle pole (z1 or z2)");

  auto* su = app.add_subcommand("suite", "acceptance matrix, or the labelled subsets of one scene");
  common(su, false);
  su->add_option("--budget", plan.budget, "samples per criterion")->capture_default_str();
  su->add_flag("--details", plan.details, "print measurements under each row");
  su->add_flag("--verbose", plan.verbose, "progress on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  for (auto* c : app.get_subcommands()) plan.command = c->get_name();

  try {
    return run(plan);
  } catch (const UsageError& e) {
    std::cerr << "qclab: " << e.what() << "\n";
    return 2;
  } catch (const SceneError& e) {
    std::cerr << "qclab: scene: " << e.what() << "\n";
    return 2;
  } catch (const JoinError& e) {
    std::cerr << "qclab: join failed: " << e.what() << "\n";
    return 1;
  } catch (const GeometryError& e) {
    std::cerr << "qclab: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qclab: " << e.what() << "\n";
    return 2;
  }
}
