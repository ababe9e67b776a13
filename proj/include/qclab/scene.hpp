#ifndef QCLAB_SCENE_HPP
#define QCLAB_SCENE_HPP

// Scene files: one model space, named subsets and named isometries, in JSON.
// Numbers may be JSON numbers or strings with pi arithmetic ("3*pi/4").
//
// {
//   "space": {"kind": "spindle", "equator": "pi"},
//   "isometries": {"g": {"builtin": "reflect-0"}},
//   "subsets": {
//     "F": {"shape": "meridians", "angles": ["0", "pi/2"]},
//     "G": {"shape": "fixed", "isometry": "g", "quasi_convex": true}
//   }
// }
//
// Space kinds: sphere {dimension, radius}, euclidean {dimension},
// cone {angle}, spindle {equator}.
// Shapes: empty, whole, points {points}, point {point}, antipodal_pair {point},
// great_circle {normal}, great_subsphere {span}, small_circle {axis, rho},
// line {origin, direction}, affine {origin, span}, lines {directions},
// rays {angles}, apex, meridians {angles}, equator, tilted_circle {normal},
// fixed {isometry}, intersection {of: [a, b]}.
// Any subset may carry "estimated": true (tangent cones from samples) and
// "quasi_convex": true/false (the label the suite checks against).
// Points are chart coordinates: [x, y, z] on spheres and planes, [r, phi] on
// cones, [s, phi] on spindles, or the names "apex", "z1", "z2".

#include <json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qclab/isometry.hpp"
#include "qclab/model_space.hpp"
#include "qclab/subset.hpp"

namespace qclab {

using Json = nlohmann::ordered_json;

class SceneError : public std::runtime_error {
 public:
  explicit SceneError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

// expr := term (('+'|'-') term)*; term := factor (('*'|'/') factor)*;
// factor := ('+'|'-') factor | number | "pi" | '(' expr ')'
class RealParser {
 public:
  explicit RealParser(std::string_view s) : s_(s) {}

  double parse() {
    const double v = expr();
    skip();
    if (i_ != s_.size()) fail("trailing characters");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw SceneError("bad number '" + std::string(s_) + "': " + why);
  }
  void skip() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t')) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  double expr() {
    double v = term();
    for (;;) {
      if (eat('+')) {
        v += term();
      } else if (eat('-')) {
        v -= term();
      } else {
        return v;
      }
    }
  }
  double term() {
    double v = factor();
    for (;;) {
      if (eat('*')) {
        v *= factor();
      } else if (eat('/')) {
        v /= factor();
      } else {
        return v;
      }
    }
  }
  double factor() {
    if (eat('-')) return -factor();
    if (eat('+')) return factor();
    if (eat('(')) {
      const double v = expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    skip();
    if (s_.substr(i_, 2) == "pi") {
      i_ += 2;
      return pi;
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s_.data() + i_, s_.data() + s_.size(), v);
    if (ec != std::errc()) fail("expected a number or pi");
    i_ = static_cast<std::size_t>(ptr - s_.data());
    return v;
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace detail

/// Decimal number with optional pi arithmetic: "1e-3", "-pi/2", "3*pi/4".
inline double parse_real(std::string_view s) { return detail::RealParser(s).parse(); }

inline double json_real(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_real(std::string_view(j.get_ref<const std::string&>()));
  throw SceneError("expected a number, got " + j.dump());
}

inline std::vector<double> parse_reals(const Json& j) {
  if (!j.is_array()) throw SceneError("expected an array of numbers, got " + j.dump());
  std::vector<double> out;
  for (const auto& v : j) out.push_back(json_real(v));
  return out;
}

inline Eigen::Vector4d parse_vector(const Json& j) {
  const auto v = parse_reals(j);
  if (v.empty() || v.size() > 4) throw SceneError("vectors have 1 to 4 entries: " + j.dump());
  Eigen::Vector4d out = Eigen::Vector4d::Zero();
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<int>(i)] = v[i];
  return out;
}

inline void require_chart(const ModelSpace& X, std::size_t n, const std::string& text) {
  const std::size_t want = static_cast<std::size_t>(coordinate_count(X));
  if (n != want) throw SceneError(fmt::format("{} needs {} coordinates: {}", X.describe(), want, text));
}

namespace detail {

inline std::optional<SpacePoint> named_point(const ModelSpace& X, std::string_view name) {
  if (name == "apex" && X.kind() == SpaceKind::cone) return cone_apex();
  if (name == "z1" && X.kind() == SpaceKind::spindle) return spindle_pole(1);
  if (name == "z2" && X.kind() == SpaceKind::spindle) return spindle_pole(2);
  if (name == "origin" && X.kind() == SpaceKind::euclidean) return SpacePoint{};
  return std::nullopt;
}

}  // namespace detail

/// A point from a scene file: coordinate array or a named point.
inline SpacePoint parse_point(const ModelSpace& X, const Json& j) {
  if (j.is_string()) {
    if (auto p = detail::named_point(X, j.get<std::string>())) return *p;
    throw SceneError("unknown point name " + j.dump() + " in " + X.describe());
  }
  const auto v = parse_reals(j);
  require_chart(X, v.size(), j.dump());
  const auto c = parse_vector(j);
  return make_point(X, c[0], c[1], c[2], c[3]);
}

/// A point typed on the command line: "(s=1.0,phi=0)", "(1,0,0)", "z1".
inline SpacePoint parse_point(const ModelSpace& X, std::string_view text) {
  std::string t(text);
  while (!t.empty() && t.front() == ' ') t.erase(t.begin());
  while (!t.empty() && t.back() == ' ') t.pop_back();
  if (auto p = detail::named_point(X, t)) return *p;
  if (t.size() < 2 || t.front() != '(' || t.back() != ')') throw SceneError("points look like (a,b,...): " + t);
  std::vector<std::string> items;
  std::stringstream ss(t.substr(1, t.size() - 2));
  for (std::string item; std::getline(ss, item, ',');) items.push_back(item);
  require_chart(X, items.size(), t);
  std::vector<std::string> names;
  if (X.kind() == SpaceKind::cone) names = {"r", "phi"};
  if (X.kind() == SpaceKind::spindle) names = {"s", "phi"};
  if (X.kind() == SpaceKind::sphere || X.kind() == SpaceKind::euclidean) names = {"x", "y", "z", "w"};
  Eigen::Vector4d c = Eigen::Vector4d::Zero();
  for (std::size_t i = 0; i < items.size(); ++i) {
    std::string item = items[i];
    const auto eq = item.find('=');
    if (eq != std::string::npos) {
      std::string key = item.substr(0, eq);
      key.erase(0, key.find_first_not_of(' '));
      key.erase(key.find_last_not_of(' ') + 1);
      if (i >= names.size() || key != names[i]) {
        throw SceneError(fmt::format("coordinate {} of {} is '{}', got '{}'", i, X.describe(),
                                     i < names.size() ? names[i] : "?", key));
      }
      item = item.substr(eq + 1);
    }
    c[static_cast<int>(i)] = parse_real(std::string_view(item));
  }
  return make_point(X, c[0], c[1], c[2], c[3]);
}

inline SpacePoint parse_point(const ModelSpace& X, const std::string& text) {
  return parse_point(X, std::string_view(text));
}
inline SpacePoint parse_point(const ModelSpace& X, const char* text) { return parse_point(X, std::string_view(text)); }

inline ModelSpace parse_space(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) throw SceneError("space needs a kind");
  const auto kind = j.at("kind").get<std::string>();
  const auto dim = [&] { return j.contains("dimension") ? j.at("dimension").get<int>() : 2; };
  try {
    if (kind == "sphere") return ModelSpace::sphere(dim(), j.contains("radius") ? json_real(j.at("radius")) : 1.0);
    if (kind == "euclidean") return ModelSpace::euclidean(dim());
    if (kind == "cone") return ModelSpace::cone(json_real(j.at("angle")));
    if (kind == "spindle") return ModelSpace::spindle(json_real(j.at("equator")));
  } catch (const nlohmann::json::exception& e) {
    throw SceneError(std::string("space: ") + e.what());
  } catch (const GeometryError& e) {
    throw SceneError(std::string("space: ") + e.what());
  }
  throw SceneError("unknown space kind '" + kind + "'");
}

inline Isometry parse_isometry(const ModelSpace& X, const std::string& name, const Json& j) {
  if (j.contains("builtin")) {
    const auto want = j.at("builtin").get<std::string>();
    for (const auto& g : builtin_isometries(X)) {
      if (g.name() == want) return g;
    }
    throw SceneError("no builtin isometry '" + want + "' on " + X.describe());
  }
  if (j.contains("angular")) {
    const auto& a = j.at("angular");
    return Isometry::angular(name, a.value("sign", 1), a.contains("shift") ? json_real(a.at("shift")) : 0.0,
                             a.value("swap_poles", false));
  }
  if (j.contains("linear")) {
    const auto& a = j.at("linear");
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    const auto& rows = a.at("matrix");
    for (std::size_t i = 0; i < rows.size() && i < 4; ++i) {
      const auto r = parse_reals(rows[i]);
      for (std::size_t k = 0; k < r.size() && k < 4; ++k) m(static_cast<int>(i), static_cast<int>(k)) = r[k];
    }
    return Isometry::linear(name, m, a.contains("offset") ? parse_vector(a.at("offset")) : Eigen::Vector4d::Zero());
  }
  throw SceneError("isometry '" + name + "' needs builtin, angular or linear");
}

struct Scene {
  std::string name;
  ModelSpace space = ModelSpace::euclidean(2);
  std::vector<std::pair<std::string, SubsetSpec>> subsets;
  std::vector<std::pair<std::string, Isometry>> isometries;
  /// Labels from the file: is the subset expected to be quasi-convex.
  std::map<std::string, bool> expected;

  /// The named subset, or the first one when name is empty.
  const SubsetSpec& subset(const std::string& which = "") const {
    if (subsets.empty()) throw SceneError("scene '" + name + "' declares no subsets");
    if (which.empty()) return subsets.front().second;
    for (const auto& [n, F] : subsets) {
      if (n == which) return F;
    }
    throw SceneError("scene '" + name + "' has no subset '" + which + "'");
  }
  const Isometry& isometry(const std::string& which) const {
    for (const auto& [n, g] : isometries) {
      if (n == which) return g;
    }
    for (const auto& [n, g] : isometries) {
      if (g.name() == which) return g;
    }
    throw SceneError("scene '" + name + "' has no isometry '" + which + "'");
  }
};

namespace detail {

inline SubsetSpec parse_subset(const Scene& sc, const std::string& name, const Json& j) {
  const ModelSpace& X = sc.space;
  const auto shape = j.at("shape").get<std::string>();
  const auto points = [&](const Json& arr) {
    std::vector<SpacePoint> out;
    for (const auto& p : arr) out.push_back(parse_point(X, p));
    return out;
  };
  const auto vectors = [&](const Json& arr) {
    std::vector<Eigen::Vector4d> out;
    for (const auto& v : arr) out.push_back(parse_vector(v));
    return out;
  };
  if (shape == "empty") return empty_subset(X);
  if (shape == "whole") return whole_space(X);
  if (shape == "points") return point_set(X, points(j.at("points")));
  if (shape == "point") return single_point(X, parse_point(X, j.at("point")));
  if (shape == "antipodal_pair") return antipodal_pair(X, parse_point(X, j.at("point")));
  if (shape == "great_circle") return great_circle(X, parse_vector(j.at("normal")).head<3>());
  if (shape == "great_subsphere") return great_subsphere(X, vectors(j.at("span")));
  if (shape == "small_circle") return small_circle(X, parse_vector(j.at("axis")).head<3>(), json_real(j.at("rho")));
  if (shape == "line") return line(X, parse_vector(j.at("origin")), parse_vector(j.at("direction")));
  if (shape == "affine") return affine_subspace(X, parse_vector(j.at("origin")), vectors(j.at("span")));
  if (shape == "lines") return lines_through_origin(X, vectors(j.at("directions")));
  if (shape == "rays") return ray_set(X, parse_reals(j.at("angles")));
  if (shape == "apex") return apex_singleton(X);
  if (shape == "meridians") return meridian_set(X, parse_reals(j.at("angles")));
  if (shape == "equator") return equator(X);
  if (shape == "tilted_circle") return tilted_great_circle(X, parse_vector(j.at("normal")).head<3>());
  if (shape == "fixed") return fixed_point_set(X, sc.isometry(j.at("isometry").get<std::string>()));
  if (shape == "intersection") {
    const auto& of = j.at("of");
    if (!of.is_array() || of.size() != 2) throw SceneError("intersection '" + name + "' needs two subset names");
    return intersection(X, sc.subset(of[0].get<std::string>()), sc.subset(of[1].get<std::string>()));
  }
  throw SceneError("unknown shape '" + shape + "' for subset '" + name + "'");
}

}  // namespace detail

inline Scene parse_scene(const Json& j, const std::string& name) {
  if (!j.is_object() || !j.contains("space")) throw SceneError("scene '" + name + "' needs a space");
  Scene sc;
  sc.name = name;
  sc.space = parse_space(j.at("space"));
  try {
    if (j.contains("isometries")) {
      for (const auto& [n, g] : j.at("isometries").items()) sc.isometries.emplace_back(n, parse_isometry(sc.space, n, g));
    }
    if (j.contains("subsets")) {
      // file order: intersections refer back to earlier subsets
      for (const auto& [n, s] : j.at("subsets").items()) {
        SubsetSpec F = detail::parse_subset(sc, n, s);
        if (s.value("estimated", false)) F = without_tangent(std::move(F));
        if (s.contains("quasi_convex")) sc.expected[n] = s.at("quasi_convex").template get<bool>();
        F.description = n + ": " + F.description;
        sc.subsets.emplace_back(n, std::move(F));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw SceneError("scene '" + name + "': " + e.what());
  } catch (const GeometryError& e) {
    throw SceneError("scene '" + name + "': " + e.what());
  }
  return sc;
}

inline Scene parse_scene_text(const std::string& text, const std::string& name) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SceneError("scene '" + name + "' is not valid JSON: " + e.what());
  }
  return parse_scene(j, name);
}

/// Built-in scenes, also shipped as scenes/<name>.json.
inline const std::map<std::string, std::string>& scene_presets() {
  static const std::map<std::string, std::string> presets = {
      {"sphere_greatcircle", R"({
  "space": {"kind": "sphere", "dimension": 2, "radius": 1},
  "subsets": {
    "great_circle": {"shape": "great_circle", "normal": [0, 0, 1], "quasi_convex": true}
  }
})"},
      {"sphere_smallcircle", R"({
  "space": {"kind": "sphere", "dimension": 2, "radius": 1},
  "subsets": {
    "small_circle": {"shape": "small_circle", "axis": [0, 0, 1], "rho": "pi/4", "quasi_convex": false}
  }
})"},
      {"sphere_points", R"({
  "space": {"kind": "sphere", "dimension": 2, "radius": 1},
  "subsets": {
    "point": {"shape": "point", "point": [1, 0, 0], "quasi_convex": true},
    "antipodal_pair": {"shape": "antipodal_pair", "point": [1, 0, 0], "quasi_convex": true}
  }
})"},
      {"sphere_two_greatcircles", R"({
  "space": {"kind": "sphere", "dimension": 2, "radius": 1},
  "subsets": {
    "F": {"shape": "great_circle", "normal": [0, 0, 1], "quasi_convex": true},
    "G": {"shape": "great_circle", "normal": [1, 0, 0], "quasi_convex": true},
    "F_and_G": {"shape": "intersection", "of": ["F", "G"], "quasi_convex": true}
  }
})"},
      {"plane_line", R"({
  "space": {"kind": "euclidean", "dimension": 2},
  "subsets": {
    "line": {"shape": "line", "origin": [0, 0], "direction": [1, 0], "quasi_convex": true}
  }
})"},
      {"plane_two_lines", R"({
  "space": {"kind": "euclidean", "dimension": 2},
  "subsets": {
    "two_lines": {"shape": "lines", "directions": [[1, 0], [0, 1]], "quasi_convex": false}
  }
})"},
      {"cone_pi", R"({
  "space": {"kind": "cone", "angle": "pi"},
  "isometries": {"reflect": {"builtin": "reflect-0"}},
  "subsets": {
    "two_rays": {"shape": "fixed", "isometry": "reflect", "quasi_convex": true},
    "apex": {"shape": "apex", "quasi_convex": true}
  }
})"},
      {"cone_three_halves", R"({
  "space": {"kind": "cone", "angle": "3*pi/2"},
  "subsets": {
    "apex": {"shape": "apex", "quasi_convex": true}
  }
})"},
      {"spindle_pi", R"({
  "space": {"kind": "spindle", "equator": "pi"},
  "isometries": {"reflect": {"builtin": "reflect-0"}},
  "subsets": {
    "meridians": {"shape": "meridians", "angles": ["0", "pi/2"], "quasi_convex": true},
    "equator": {"shape": "equator", "quasi_convex": true},
    "fixed": {"shape": "fixed", "isometry": "reflect", "quasi_convex": true},
    "other_meridians": {"shape": "meridians", "angles": ["pi/4", "3*pi/4"], "quasi_convex": true}
  }
})"},
      {"corrupted_smallcircle", R"({
  "space": {"kind": "sphere", "dimension": 2, "radius": 1},
  "subsets": {
    "small_circle": {"shape": "small_circle", "axis": [0, 0, 1], "rho": "pi/4", "quasi_convex": true}
  }
})"},
  };
  return presets;
}

/// A scene by file path, or by preset name (scenes/<name>.json or built in).
inline Scene load_scene(const std::string& ref) {
  namespace fs = std::filesystem;
  const auto read = [](const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw SceneError("cannot read scene file " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  if (fs::is_regular_file(ref)) return parse_scene_text(read(ref), fs::path(ref).stem().string());
  const auto& presets = scene_presets();
  if (const auto it = presets.find(ref); it != presets.end()) return parse_scene_text(it->second, ref);
  throw SceneError("no scene file or preset named '" + ref + "'");
}

}  // namespace qclab

#endif
