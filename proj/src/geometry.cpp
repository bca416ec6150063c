#include "spacenorm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace spacenorm {

using nlohmann::json;

double Box::max_extent() const {
  double m = 0.0;
  for (int i = 0; i < dim(); ++i) m = std::max(m, extent(i));
  return m;
}

double Box::diameter() const {
  double s = 0.0;
  for (int i = 0; i < dim(); ++i) s += extent(i) * extent(i);
  return std::sqrt(s);
}

bool Box::contains_strict(std::span<const double> y) const {
  for (int i = 0; i < dim(); ++i)
    if (!(y[i] > lo[i] && y[i] < hi[i])) return false;
  return true;
}

bool Box::contains_closed(std::span<const double> y) const {
  for (int i = 0; i < dim(); ++i)
    if (!(y[i] >= lo[i] && y[i] <= hi[i])) return false;
  return true;
}

DomainSpec DomainSpec::full_space(Box window) {
  DomainSpec d;
  d.kind = DomainKind::FullSpace;
  d.window = std::move(window);
  return d;
}

DomainSpec DomainSpec::special_lipschitz_1d(double threshold, Box window) {
  DomainSpec d;
  d.kind = DomainKind::SpecialLipschitz;
  d.window = std::move(window);
  d.graph_y = {threshold};
  d.lipschitz_constant = 0.0;
  return d;
}

DomainSpec DomainSpec::special_lipschitz(std::vector<double> bx, std::vector<double> by,
                                         double lipschitz_constant, Box window) {
  DomainSpec d;
  d.kind = DomainKind::SpecialLipschitz;
  d.window = std::move(window);
  d.graph_x = std::move(bx);
  d.graph_y = std::move(by);
  d.lipschitz_constant = lipschitz_constant;
  d.check_invariants();
  return d;
}

DomainSpec DomainSpec::bounded_convex(std::vector<HalfSpace> hs,
                                      std::vector<std::vector<double>> verts, Box window) {
  DomainSpec d;
  d.kind = DomainKind::BoundedConvex;
  d.window = std::move(window);
  d.halfspaces = std::move(hs);
  d.vertices = std::move(verts);
  d.check_invariants();
  return d;
}

DomainSpec DomainSpec::convex_polygon(std::vector<std::vector<double>> verts, Box window) {
  if (verts.size() < 3) throw ConfigError("convex_polygon needs at least 3 vertices");
  for (const auto& v : verts)
    if (v.size() != 2) throw ConfigError("convex_polygon is 2-D only");

  // Andrew monotone chain, CCW hull.
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  auto cross = [](const std::vector<double>& o, const std::vector<double>& a,
                  const std::vector<double>& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<std::vector<double>> hull;
  for (const auto& p : verts) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0) hull.pop_back();
    hull.push_back(p);
  }
  const std::size_t lower = hull.size() + 1;
  for (auto it = verts.rbegin(); it != verts.rend(); ++it) {
    while (hull.size() >= lower && cross(hull[hull.size() - 2], hull.back(), *it) <= 0)
      hull.pop_back();
    hull.push_back(*it);
  }
  hull.pop_back();
  if (hull.size() < 3) throw ConfigError("degenerate polygon");

  std::vector<HalfSpace> hs;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& p = hull[i];
    const auto& q = hull[(i + 1) % hull.size()];
    const double dx = q[0] - p[0], dy = q[1] - p[1];
    HalfSpace h;
    h.normal = {dy, -dx};  // outward for CCW
    h.offset = h.normal[0] * p[0] + h.normal[1] * p[1];
    hs.push_back(std::move(h));
  }
  return bounded_convex(std::move(hs), std::move(hull), std::move(window));
}

DomainSpec DomainSpec::box_window(Box inner, Box window) {
  DomainSpec d;
  d.kind = DomainKind::BoxWindow;
  d.window = std::move(window);
  d.box = std::move(inner);
  return d;
}

double DomainSpec::graph_value(double yprime) const {
  if (graph_x.empty()) return graph_y.at(0);
  if (graph_x.size() == 1) return graph_y[0];
  // Locate segment; extrapolate with the end slopes outside the breakpoints.
  auto it = std::upper_bound(graph_x.begin(), graph_x.end(), yprime);
  std::size_t i1 = static_cast<std::size_t>(it - graph_x.begin());
  if (i1 == 0) i1 = 1;
  if (i1 == graph_x.size()) i1 = graph_x.size() - 1;
  const std::size_t i0 = i1 - 1;
  const double slope = (graph_y[i1] - graph_y[i0]) / (graph_x[i1] - graph_x[i0]);
  return graph_y[i0] + slope * (yprime - graph_x[i0]);
}

double DomainSpec::graph_min_on(double a, double b) const {
  double m = std::min(graph_value(a), graph_value(b));
  if (graph_x.size() > 1) {
    auto lo = std::lower_bound(graph_x.begin(), graph_x.end(), a);
    auto hi = std::upper_bound(graph_x.begin(), graph_x.end(), b);
    for (auto it = lo; it != hi; ++it)
      m = std::min(m, graph_y[static_cast<std::size_t>(it - graph_x.begin())]);
  }
  return m;
}

void DomainSpec::check_invariants() const {
  if (window.lo.size() != window.hi.size()) throw ConfigError("window dims mismatch");
  for (int i = 0; i < window.dim(); ++i)
    if (!(window.lo[i] < window.hi[i])) throw ConfigError("window must have positive extent");

  if (kind == DomainKind::SpecialLipschitz) {
    if (graph_y.empty()) throw ConfigError("special_lipschitz graph is empty");
    if (graph_x.size() > 1) {
      if (graph_x.size() != graph_y.size())
        throw ConfigError("graph breakpoint arrays must have equal length");
      for (std::size_t i = 0; i + 1 < graph_x.size(); ++i) {
        const double dx = graph_x[i + 1] - graph_x[i];
        if (!(dx > 0)) throw ConfigError("graph breakpoints must be strictly increasing");
        const double slope = std::abs(graph_y[i + 1] - graph_y[i]) / dx;
        if (slope > lipschitz_constant * (1.0 + 1e-12) + 1e-12)
          throw ConfigError("graph violates the stored Lipschitz constant");
      }
    }
  }
  if (kind == DomainKind::BoundedConvex) {
    if (halfspaces.empty()) throw ConfigError("bounded_convex needs half-spaces");
    for (const auto& v : vertices) {
      for (const auto& h : halfspaces) {
        double val = -h.offset;
        for (std::size_t i = 0; i < h.normal.size(); ++i) val += h.normal[i] * v[i];
        double scale = std::abs(h.offset);
        for (double c : h.normal) scale = std::max(scale, std::abs(c));
        if (val > 1e-12 * std::max(1.0, scale))
          throw ConfigError("vertex violates half-space representation");
      }
    }
  }
}

bool contains(const DomainSpec& dom, std::span<const double> y) {
  switch (dom.kind) {
    case DomainKind::FullSpace:
      return true;
    case DomainKind::SpecialLipschitz: {
      const int d = dom.dim();
      const double graph = (d == 1) ? dom.graph_y[0] : dom.graph_value(y[0]);
      return y[d - 1] > graph;
    }
    case DomainKind::BoundedConvex: {
      for (const auto& h : dom.halfspaces) {
        double val = 0.0;
        for (std::size_t i = 0; i < h.normal.size(); ++i) val += h.normal[i] * y[i];
        if (!(val < h.offset)) return false;
      }
      return true;
    }
    case DomainKind::BoxWindow:
      return dom.box.contains_strict(y);
  }
  return false;
}

double DyadicCube::side() const { return std::ldexp(1.0, -level); }

double DyadicCube::volume() const {
  return std::ldexp(1.0, -level * static_cast<int>(index.size()));
}

double DyadicCube::corner_lo(int axis) const {
  return std::ldexp(static_cast<double>(index[axis]), -level);
}

double DyadicCube::corner_hi(int axis) const {
  return std::ldexp(static_cast<double>(index[axis] + 1), -level);
}

std::vector<std::vector<int>> v_set_sample(const DomainSpec& dom, std::span<const double> x,
                                           double t, int N, double lattice_spacing) {
  if (!(t > 0)) throw ConfigError("v_set_sample: t must be positive");
  if (!(lattice_spacing > 0)) throw ConfigError("v_set_sample: lattice spacing must be positive");
  const int d = dom.dim();
  const int M = static_cast<int>(std::floor(t / lattice_spacing));
  const double t2 = t * t;

  std::vector<std::vector<int>> out;
  std::vector<int> m(d, -M);
  std::vector<double> y(d);
  while (true) {
    double norm2 = 0.0;
    for (int i = 0; i < d; ++i) {
      const double hi = m[i] * lattice_spacing;
      norm2 += hi * hi;
    }
    if (norm2 < t2) {
      bool ok = true;
      if (dom.kind != DomainKind::FullSpace) {
        for (int l = 0; l <= N && ok; ++l) {
          for (int i = 0; i < d; ++i) y[i] = x[i] + l * m[i] * lattice_spacing;
          ok = contains(dom, y);
        }
      }
      if (ok) out.push_back(m);
    }
    int axis = d - 1;
    while (axis >= 0 && m[axis] == M) {
      m[axis] = -M;
      --axis;
    }
    if (axis < 0) break;
    ++m[axis];
  }
  return out;
}

namespace {

// Closure of the cube intersects Omega (window handled separately).
bool cube_meets_domain(const DomainSpec& dom, const DyadicCube& c) {
  const int d = dom.dim();
  switch (dom.kind) {
    case DomainKind::FullSpace:
      return true;
    case DomainKind::SpecialLipschitz: {
      const double top = c.corner_hi(d - 1);
      const double graph_min =
          (d == 1) ? dom.graph_y[0] : dom.graph_min_on(c.corner_lo(0), c.corner_hi(0));
      return top > graph_min;
    }
    case DomainKind::BoundedConvex: {
      // Separating-axis test against the half-spaces and the vertex bounding
      // box; exact for d <= 2, inclusive otherwise.
      for (const auto& h : dom.halfspaces) {
        double mn = 0.0;
        for (int i = 0; i < d; ++i) {
          const double a = h.normal[i];
          mn += a * (a >= 0 ? c.corner_lo(i) : c.corner_hi(i));
        }
        if (mn > h.offset) return false;
      }
      if (!dom.vertices.empty()) {
        for (int i = 0; i < d; ++i) {
          double vlo = std::numeric_limits<double>::infinity(), vhi = -vlo;
          for (const auto& v : dom.vertices) {
            vlo = std::min(vlo, v[i]);
            vhi = std::max(vhi, v[i]);
          }
          if (c.corner_lo(i) > vhi || c.corner_hi(i) < vlo) return false;
        }
      }
      return true;
    }
    case DomainKind::BoxWindow: {
      for (int i = 0; i < d; ++i)
        if (c.corner_lo(i) > dom.box.hi[i] || c.corner_hi(i) < dom.box.lo[i]) return false;
      return true;
    }
  }
  return false;
}

}  // namespace

void for_each_cube(const DomainSpec& dom, int j_min, int j_max,
                   const std::function<void(const DyadicCube&)>& visit, std::int64_t cap) {
  if (j_min > j_max) throw ConfigError("for_each_cube: j_min > j_max");
  const int d = dom.dim();
  std::int64_t visited = 0;

  for (int j = j_min; j <= j_max; ++j) {
    const double scale = std::ldexp(1.0, j);  // 2^j
    std::vector<int64_t> klo(d), khi(d);
    std::int64_t level_count = 1;
    for (int i = 0; i < d; ++i) {
      // [k 2^-j, (k+1) 2^-j) meets the open window iff
      // (k+1) 2^-j > lo and k 2^-j < hi.
      klo[i] = static_cast<int64_t>(std::floor(dom.window.lo[i] * scale)) - 1;
      khi[i] = static_cast<int64_t>(std::ceil(dom.window.hi[i] * scale)) + 1;
      while (!(std::ldexp(static_cast<double>(klo[i] + 1), -j) > dom.window.lo[i])) ++klo[i];
      while (!(std::ldexp(static_cast<double>(khi[i]), -j) < dom.window.hi[i])) --khi[i];
      if (khi[i] < klo[i]) {
        level_count = 0;
        break;
      }
      level_count *= (khi[i] - klo[i] + 1);
    }
    if (level_count == 0) continue;
    if (visited + level_count > cap)
      throw CapExceeded("level " + std::to_string(j) + " would exceed " + std::to_string(cap));
    visited += level_count;

    DyadicCube c;
    c.level = j;
    c.index = klo;
    while (true) {
      if (cube_meets_domain(dom, c)) visit(c);
      int axis = d - 1;
      while (axis >= 0 && c.index[axis] == khi[axis]) {
        c.index[axis] = klo[axis];
        --axis;
      }
      if (axis < 0) break;
      ++c.index[axis];
    }
  }
}

std::vector<DyadicCube> cubes_touching(const DomainSpec& dom, int j_min, int j_max,
                                       std::int64_t cap) {
  std::vector<DyadicCube> out;
  for_each_cube(dom, j_min, j_max, [&](const DyadicCube& c) { out.push_back(c); }, cap);
  return out;
}

namespace {

json box_to_json(const Box& b) { return json{{"lo", b.lo}, {"hi", b.hi}}; }

Box box_from_json(const json& j) {
  Box b;
  b.lo = j.at("lo").get<std::vector<double>>();
  b.hi = j.at("hi").get<std::vector<double>>();
  return b;
}

}  // namespace

std::string DomainSpec::to_json() const {
  json j;
  j["window"] = box_to_json(window);
  switch (kind) {
    case DomainKind::FullSpace:
      j["kind"] = "full_space";
      j["parameters"] = json::object();
      break;
    case DomainKind::SpecialLipschitz:
      j["kind"] = "special_lipschitz";
      j["parameters"] = {{"breakpoints_x", graph_x},
                         {"breakpoints_y", graph_y},
                         {"lipschitz_constant", lipschitz_constant}};
      break;
    case DomainKind::BoundedConvex: {
      json hs = json::array();
      for (const auto& h : halfspaces) hs.push_back({{"normal", h.normal}, {"offset", h.offset}});
      j["kind"] = "bounded_convex";
      j["parameters"] = {{"halfspaces", hs}, {"vertices", vertices}};
      break;
    }
    case DomainKind::BoxWindow:
      j["kind"] = "box_window";
      j["parameters"] = {{"box", box_to_json(box)}};
      break;
  }
  return j.dump();
}

DomainSpec DomainSpec::from_json(const std::string& text) {
  json j = json::parse(text);
  const std::string kind = j.at("kind").get<std::string>();
  Box window = box_from_json(j.at("window"));
  const json& p = j.at("parameters");
  if (kind == "full_space") return full_space(std::move(window));
  if (kind == "special_lipschitz")
    return special_lipschitz(p.value("breakpoints_x", std::vector<double>{}),
                             p.at("breakpoints_y").get<std::vector<double>>(),
                             p.value("lipschitz_constant", 0.0), std::move(window));
  if (kind == "bounded_convex") {
    std::vector<HalfSpace> hs;
    for (const auto& h : p.at("halfspaces")) {
      HalfSpace x;
      x.normal = h.at("normal").get<std::vector<double>>();
      x.offset = h.at("offset").get<double>();
      hs.push_back(std::move(x));
    }
    return bounded_convex(std::move(hs),
                          p.value("vertices", std::vector<std::vector<double>>{}),
                          std::move(window));
  }
  if (kind == "box_window") return box_window(box_from_json(p.at("box")), std::move(window));
  throw ConfigError("unknown domain kind: " + kind);
}

}  // namespace spacenorm
