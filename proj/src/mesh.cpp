#include "wlspec/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <unordered_map>

#include "wlspec/error.hpp"

namespace wlspec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMinArea = 1e-14;

double orient(ConformalPoint a, ConformalPoint b, ConformalPoint c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

void orient_ccw(TriMesh& m) {
  for (auto& t : m.triangles) {
    if (orient(m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]) < 0) std::swap(t[1], t[2]);
  }
}

// ---------------------------------------------------------------------------
// Structured generators

// Concentric-ring triangulation of the unit disk: ring k carries 6k points.
TriMesh unit_ring_disk(int rings) {
  TriMesh m;
  m.vertices.push_back({0.0, 0.0});
  std::vector<int> prev{0};
  std::vector<double> prev_angle{0.0};
  for (int k = 1; k <= rings; ++k) {
    const double r = static_cast<double>(k) / rings;
    const int n = 6 * k;
    std::vector<int> cur(n);
    std::vector<double> cur_angle(n);
    for (int i = 0; i < n; ++i) {
      const double th = 2 * kPi * i / n;
      cur[i] = static_cast<int>(m.vertices.size());
      cur_angle[i] = th;
      m.vertices.push_back(k == rings ? ConformalPoint{std::cos(th), std::sin(th)}
                                      : ConformalPoint{r * std::cos(th), r * std::sin(th)});
    }
    if (k == 1) {
      for (int i = 0; i < n; ++i) m.triangles.push_back({0, cur[i], cur[(i + 1) % n]});
    } else {
      // March around both rings by angle.
      const int np = static_cast<int>(prev.size());
      int i = 0, j = 0;
      while (i < np || j < n) {
        const double next_prev = i < np ? (i + 1 < np ? prev_angle[i + 1] : 2 * kPi) : 1e9;
        const double next_cur = j < n ? (j + 1 < n ? cur_angle[j + 1] : 2 * kPi) : 1e9;
        if (j < n && (next_cur <= next_prev || i >= np)) {
          m.triangles.push_back({prev[i % np], cur[j], cur[(j + 1) % n]});
          ++j;
        } else {
          m.triangles.push_back({prev[i % np], cur[j % n], prev[(i + 1) % np]});
          ++i;
        }
      }
    }
    prev = std::move(cur);
    prev_angle = std::move(cur_angle);
  }
  m.boundary_vertices = prev;
  std::sort(m.boundary_vertices.begin(), m.boundary_vertices.end());
  orient_ccw(m);
  return m;
}

TriMesh ellipse_mesh(double a, double b, double angle, ConformalPoint c, double h) {
  const int rings = std::max(2, static_cast<int>(std::ceil(std::max(a, b) / h)));
  TriMesh m = unit_ring_disk(rings);
  const double ca = std::cos(angle), sa = std::sin(angle);
  for (auto& v : m.vertices) {
    const double x = a * v.x, y = b * v.y;
    v = {c.x + ca * x - sa * y, c.y + sa * x + ca * y};
  }
  orient_ccw(m);
  return m;
}

TriMesh rectangle_mesh(double w, double hgt, ConformalPoint c, double h) {
  const int nx = std::max(1, static_cast<int>(std::ceil(w / h)));
  const int ny = std::max(1, static_cast<int>(std::ceil(hgt / h)));
  TriMesh m;
  auto id = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.vertices.push_back({c.x - w / 2 + w * i / nx, c.y - hgt / 2 + hgt * j / ny});
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = id(i, j), b = id(i + 1, j), cc = id(i + 1, j + 1), d = id(i, j + 1);
      // Alternate the diagonal so the mesh has no preferred direction.
      if ((i + j) % 2 == 0) {
        m.triangles.push_back({a, b, cc});
        m.triangles.push_back({a, cc, d});
      } else {
        m.triangles.push_back({a, b, d});
        m.triangles.push_back({b, cc, d});
      }
    }
  }
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      if (i == 0 || j == 0 || i == nx || j == ny) m.boundary_vertices.push_back(id(i, j));
  std::sort(m.boundary_vertices.begin(), m.boundary_vertices.end());
  return m;
}

void append(TriMesh& into, const TriMesh& part) {
  const int off = static_cast<int>(into.vertices.size());
  into.vertices.insert(into.vertices.end(), part.vertices.begin(), part.vertices.end());
  for (auto t : part.triangles) into.triangles.push_back({t[0] + off, t[1] + off, t[2] + off});
  for (int b : part.boundary_vertices) into.boundary_vertices.push_back(b + off);
  std::sort(into.boundary_vertices.begin(), into.boundary_vertices.end());
}

// ---------------------------------------------------------------------------
// Unstructured generator: boundary sampling + lattice interior + Delaunay with
// boundary recovery by curve-midpoint insertion.

using Curve = std::function<ConformalPoint(double)>;  // s in [0,1]

struct CurvePiece {
  Curve at;
  double length;
};

struct Delaunay {
  struct Tri {
    int v[3];
    double cx, cy, r2;
    bool alive = true;
  };
  std::vector<ConformalPoint> pts;
  std::vector<Tri> tris;

  Tri make(int a, int b, int c) const {
    const auto &A = pts[a], &B = pts[b], &C = pts[c];
    const double d = 2 * (A.x * (B.y - C.y) + B.x * (C.y - A.y) + C.x * (A.y - B.y));
    const double a2 = A.x * A.x + A.y * A.y, b2 = B.x * B.x + B.y * B.y, c2 = C.x * C.x + C.y * C.y;
    Tri t;
    t.v[0] = a;
    t.v[1] = b;
    t.v[2] = c;
    t.cx = (a2 * (B.y - C.y) + b2 * (C.y - A.y) + c2 * (A.y - B.y)) / d;
    t.cy = (a2 * (C.x - B.x) + b2 * (A.x - C.x) + c2 * (B.x - A.x)) / d;
    t.r2 = (A.x - t.cx) * (A.x - t.cx) + (A.y - t.cy) * (A.y - t.cy);
    return t;
  }

  // Bowyer-Watson over all points; the first three are the super-triangle.
  void triangulate() {
    tris.clear();
    tris.push_back(make(0, 1, 2));
    for (int p = 3; p < static_cast<int>(pts.size()); ++p) {
      const auto P = pts[p];
      std::map<std::uint64_t, std::pair<int, int>> boundary;  // edge -> (a,b), count via erase
      for (auto& t : tris) {
        if (!t.alive) continue;
        const double dx = P.x - t.cx, dy = P.y - t.cy;
        if (dx * dx + dy * dy < t.r2 * (1 - 1e-12)) {
          t.alive = false;
          for (int e = 0; e < 3; ++e) {
            const int a = t.v[e], b = t.v[(e + 1) % 3];
            const auto key = edge_key(a, b);
            auto it = boundary.find(key);
            if (it == boundary.end()) boundary.emplace(key, std::make_pair(a, b));
            else boundary.erase(it);
          }
        }
      }
      std::erase_if(tris, [](const Tri& t) { return !t.alive; });
      for (const auto& [key, e] : boundary) tris.push_back(make(e.first, e.second, p));
    }
  }
};

bool point_in_loops(ConformalPoint p, const std::vector<std::vector<ConformalPoint>>& loops) {
  bool inside = false;
  for (const auto& loop : loops) {
    const std::size_t n = loop.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const auto &a = loop[i], &b = loop[j];
      if ((a.y > p.y) != (b.y > p.y)) {
        const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
        if (p.x < x) inside = !inside;
      }
    }
  }
  return inside;
}

double dist_to_segment(ConformalPoint p, ConformalPoint a, ConformalPoint b) {
  const double vx = b.x - a.x, vy = b.y - a.y;
  const double L2 = vx * vx + vy * vy;
  double s = L2 > 0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / L2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return std::hypot(p.x - a.x - s * vx, p.y - a.y - s * vy);
}

TriMesh unstructured_mesh(const std::vector<CurvePiece>& pieces, double h) {
  // Boundary points, each tagged with (piece, parameter).
  struct BPoint {
    int piece;
    double s;
  };
  std::vector<BPoint> bparams;
  for (int p = 0; p < static_cast<int>(pieces.size()); ++p) {
    const int n = std::max(1, static_cast<int>(std::ceil(pieces[p].length / h)));
    for (int i = 0; i < n; ++i) bparams.push_back({p, static_cast<double>(i) / n});
  }

  for (int attempt = 0; attempt < 12; ++attempt) {
    std::vector<ConformalPoint> bpts;
    for (auto bp : bparams) bpts.push_back(pieces[bp.piece].at(bp.s));
    const int nb = static_cast<int>(bpts.size());
    std::vector<std::vector<ConformalPoint>> loops{bpts};

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (auto q : bpts) {
      xmin = std::min(xmin, q.x);
      xmax = std::max(xmax, q.x);
      ymin = std::min(ymin, q.y);
      ymax = std::max(ymax, q.y);
    }

    Delaunay dt;
    const double span = std::max(xmax - xmin, ymax - ymin);
    const double mx = 0.5 * (xmin + xmax), my = 0.5 * (ymin + ymax);
    dt.pts.push_back({mx - 20 * span, my - 20 * span});
    dt.pts.push_back({mx + 20 * span, my - 20 * span});
    dt.pts.push_back({mx, my + 20 * span});
    for (auto q : bpts) dt.pts.push_back(q);

    // Triangular lattice interior, kept away from the boundary.
    const double dy = h * std::sqrt(3.0) / 2;
    int row = 0;
    for (double y = ymin + dy / 2; y < ymax; y += dy, ++row) {
      const double shift = (row % 2) ? h / 2 : 0.0;
      for (double x = xmin + shift; x < xmax; x += h) {
        const ConformalPoint q{x, y};
        if (!point_in_loops(q, loops)) continue;
        double dmin = 1e300;
        for (int i = 0; i < nb && dmin >= 0.55 * h; ++i)
          dmin = std::min(dmin, dist_to_segment(q, bpts[i], bpts[(i + 1) % nb]));
        if (dmin >= 0.55 * h) dt.pts.push_back(q);
      }
    }
    dt.triangulate();

    std::set<std::uint64_t> edges;
    for (const auto& t : dt.tris)
      for (int e = 0; e < 3; ++e) edges.insert(edge_key(t.v[e], t.v[(e + 1) % 3]));

    std::vector<BPoint> refined;
    bool missing = false;
    for (int i = 0; i < nb; ++i) {
      refined.push_back(bparams[i]);
      const int j = (i + 1) % nb;
      if (!edges.count(edge_key(i + 3, j + 3))) {
        missing = true;
        const BPoint a = bparams[i];
        const BPoint b = bparams[j];
        if (a.piece == b.piece) refined.push_back({a.piece, 0.5 * (a.s + b.s)});
        else refined.push_back({a.piece, 0.5 * (a.s + 1.0)});
      }
    }
    if (missing) {
      bparams = std::move(refined);
      continue;
    }

    TriMesh m;
    std::vector<int> remap(dt.pts.size(), -1);
    auto use = [&](int v) {
      if (remap[v] < 0) {
        remap[v] = static_cast<int>(m.vertices.size());
        m.vertices.push_back(dt.pts[v]);
      }
      return remap[v];
    };
    // Boundary vertices first so they keep their order.
    for (int i = 0; i < nb; ++i) use(i + 3);
    for (const auto& t : dt.tris) {
      if (t.v[0] < 3 || t.v[1] < 3 || t.v[2] < 3) continue;
      const auto &A = dt.pts[t.v[0]], &B = dt.pts[t.v[1]], &C = dt.pts[t.v[2]];
      const ConformalPoint g{(A.x + B.x + C.x) / 3, (A.y + B.y + C.y) / 3};
      if (!point_in_loops(g, loops)) continue;
      if (std::abs(orient(A, B, C)) < 2 * kMinArea) continue;
      m.triangles.push_back({use(t.v[0]), use(t.v[1]), use(t.v[2])});
    }
    for (int i = 0; i < nb; ++i) m.boundary_vertices.push_back(i);
    orient_ccw(m);
    return m;
  }
  fail(ErrorCode::InvalidMesh, "boundary recovery did not converge");
}

bool segments_cross(ConformalPoint a, ConformalPoint b, ConformalPoint c, ConformalPoint d) {
  const double d1 = orient(a, b, c), d2 = orient(a, b, d);
  const double d3 = orient(c, d, a), d4 = orient(c, d, b);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 &&
         d4 != 0;
}

std::vector<CurvePiece> polygon_pieces(std::vector<ConformalPoint> poly) {
  const std::size_t n = poly.size();
  if (n < 3) fail(ErrorCode::Domain, "polygon needs at least 3 vertices");
  double area = 0;
  for (std::size_t i = 0; i < n; ++i) area += orient({0, 0}, poly[i], poly[(i + 1) % n]);
  if (std::abs(area) < kMinArea) fail(ErrorCode::Domain, "degenerate polygon");
  if (area < 0) std::reverse(poly.begin(), poly.end());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_cross(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]))
        fail(ErrorCode::Domain, "self-intersecting polygon");
    }
  std::vector<CurvePiece> pieces;
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = poly[i], b = poly[(i + 1) % n];
    pieces.push_back({[a, b](double s) {
                        return ConformalPoint{a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)};
                      },
                      std::hypot(b.x - a.x, b.y - a.y)});
  }
  return pieces;
}

std::vector<CurvePiece> dumbbell_pieces(const ShapeSpec& s) {
  const double r = s.radius, w = s.neck_width;
  if (!(w > 0) || !(w < 2 * r)) fail(ErrorCode::Domain, "dumbbell neck must be narrower than the lobes");
  const double inset = std::sqrt(r * r - w * w / 4);
  double half_neck = s.neck_length / 2;
  if (s.separation > 0) {
    const double derived = s.separation / 2 - inset;
    if (s.neck_length > 0 && std::abs(derived - half_neck) > 1e-9)
      fail(ErrorCode::Domain, "dumbbell separation inconsistent with neck length");
    half_neck = derived;
  }
  if (!(half_neck > 0)) fail(ErrorCode::Domain, "dumbbell lobes overlap");
  const double d = half_neck + inset;
  const double beta = std::asin(w / (2 * r));
  const ConformalPoint c = s.center;
  auto arc = [r](ConformalPoint ctr, double t0, double t1) {
    return CurvePiece{[=](double u) {
                        const double th = t0 + u * (t1 - t0);
                        return ConformalPoint{ctr.x + r * std::cos(th), ctr.y + r * std::sin(th)};
                      },
                      r * std::abs(t1 - t0)};
  };
  auto seg = [](ConformalPoint a, ConformalPoint b) {
    return CurvePiece{[=](double u) {
                        return ConformalPoint{a.x + u * (b.x - a.x), a.y + u * (b.y - a.y)};
                      },
                      std::hypot(b.x - a.x, b.y - a.y)};
  };
  std::vector<CurvePiece> pieces;
  pieces.push_back(arc({c.x + d, c.y}, kPi + beta, 3 * kPi - beta));
  pieces.push_back(seg({c.x + half_neck, c.y + w / 2}, {c.x - half_neck, c.y + w / 2}));
  pieces.push_back(arc({c.x - d, c.y}, beta, 2 * kPi - beta));
  pieces.push_back(seg({c.x - half_neck, c.y - w / 2}, {c.x + half_neck, c.y - w / 2}));
  return pieces;
}

double parse_number(const std::string& s, const std::string& ctx) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    fail(ErrorCode::Domain, "malformed number '" + s + "' in shape '" + ctx + "'");
  return v;
}

std::vector<double> parse_list(const std::string& s, char sep, const std::string& ctx) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(parse_number(item, ctx));
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void check_fits(const TriMesh& m, const SpaceFormModel& model) {
  for (auto v : m.vertices) {
    const double r = v.norm();
    if (model.kappa() == Curvature::Hyperbolic && !(r < 1.0))
      fail(ErrorCode::Domain, "shape leaves the Poincare disk");
    if (model.kappa() == Curvature::Spherical && r > 1.0 + 1e-12)
      fail(ErrorCode::Domain, "shape leaves the hemisphere");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

double TriMesh::triangle_area(std::size_t i) const {
  const auto& t = triangles[i];
  return 0.5 * orient(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
}

void TriMesh::recompute_h_max() {
  h_max = 0.0;
  for (const auto& t : triangles)
    for (int e = 0; e < 3; ++e) {
      const auto &a = vertices[t[e]], &b = vertices[t[(e + 1) % 3]];
      h_max = std::max(h_max, std::hypot(a.x - b.x, a.y - b.y));
    }
}

std::vector<bool> TriMesh::boundary_mask() const {
  std::vector<bool> mask(vertices.size(), false);
  for (int b : boundary_vertices) mask[b] = true;
  return mask;
}

void TriMesh::validate() const {
  const int nv = static_cast<int>(vertices.size());
  if (nv < 3 || triangles.empty()) fail(ErrorCode::InvalidMesh, "empty mesh");
  std::unordered_map<std::uint64_t, int> edge_count;
  for (std::size_t i = 0; i < triangles.size(); ++i) {
    const auto& t = triangles[i];
    for (int v : t)
      if (v < 0 || v >= nv) fail(ErrorCode::InvalidMesh, "triangle index out of range");
    if (!(triangle_area(i) > kMinArea))
      fail(ErrorCode::InvalidMesh, "triangle " + std::to_string(i) + " degenerate or clockwise");
    for (int e = 0; e < 3; ++e) ++edge_count[edge_key(t[e], t[(e + 1) % 3])];
  }
  std::vector<bool> on_boundary_edge(nv, false);
  for (const auto& [key, count] : edge_count) {
    if (count > 2) fail(ErrorCode::InvalidMesh, "non-conforming edge shared by more than two triangles");
    if (count == 1) {
      on_boundary_edge[key >> 32] = true;
      on_boundary_edge[key & 0xffffffffu] = true;
    }
  }
  const auto mask = boundary_mask();
  for (int v = 0; v < nv; ++v)
    if (mask[v] != on_boundary_edge[v])
      fail(ErrorCode::InvalidMesh, "boundary set does not match boundary edges at vertex " + std::to_string(v));
}

ModelDisk geodesic_disk_in_model(const SpaceFormModel& model, double center_distance,
                                 double geodesic_radius) {
  if (!(geodesic_radius > 0)) fail(ErrorCode::Domain, "geodesic radius must be positive");
  if (!(center_distance >= 0)) fail(ErrorCode::Domain, "negative cap center distance");
  // Endpoints of the diameter along the x-axis; the model maps geodesic
  // circles to Euclidean circles symmetric about that axis.
  auto signed_radius = [&](double t) {
    return t >= 0 ? model.model_radius(t) : -model.model_radius(-t);
  };
  const double far = center_distance + geodesic_radius;
  if (far > model.max_radius() + 1e-15) fail(ErrorCode::Domain, "cap leaves the hemisphere");
  const double lo = signed_radius(center_distance - geodesic_radius);
  const double hi = signed_radius(far);
  return {{0.5 * (lo + hi), 0.0}, 0.5 * (hi - lo)};
}

TriMesh generate_mesh(const ShapeSpec& shape, double target_h, const SpaceFormModel& model) {
  if (!(target_h > 0)) fail(ErrorCode::Domain, "mesh size must be positive");
  TriMesh m;
  switch (shape.kind) {
    case ShapeKind::Disk:
      if (!(shape.radius > 0)) fail(ErrorCode::Domain, "disk radius must be positive");
      m = ellipse_mesh(shape.radius, shape.radius, 0.0, shape.center, target_h);
      break;
    case ShapeKind::GeodesicCap: {
      const auto d = geodesic_disk_in_model(model, shape.center_distance, shape.radius);
      m = ellipse_mesh(d.radius, d.radius, 0.0, d.center, target_h);
      break;
    }
    case ShapeKind::Ellipse:
      if (!(shape.a > 0 && shape.b > 0)) fail(ErrorCode::Domain, "ellipse axes must be positive");
      m = ellipse_mesh(shape.a, shape.b, shape.angle_deg * kPi / 180, shape.center, target_h);
      break;
    case ShapeKind::Rectangle:
      if (!(shape.width > 0 && shape.height > 0)) fail(ErrorCode::Domain, "rectangle sides must be positive");
      m = rectangle_mesh(shape.width, shape.height, shape.center, target_h);
      break;
    case ShapeKind::TwoDisjointDisks: {
      if (!(shape.radius > 0 && shape.gap > 0)) fail(ErrorCode::Domain, "two_disks needs positive radius and gap");
      const double off = shape.radius + shape.gap / 2;
      m = ellipse_mesh(shape.radius, shape.radius, 0.0, {shape.center.x - off, shape.center.y}, target_h);
      // Mirror image of the left disk keeps the two halves identical.
      TriMesh right = m;
      for (auto& v : right.vertices) v.x = 2 * shape.center.x - v.x;
      orient_ccw(right);
      append(m, right);
      break;
    }
    case ShapeKind::Dumbbell:
      m = unstructured_mesh(dumbbell_pieces(shape), target_h);
      break;
    case ShapeKind::Polygon:
      m = unstructured_mesh(polygon_pieces(shape.polygon), target_h);
      break;
  }
  check_fits(m, model);
  m.recompute_h_max();
  m.validate();
  return m;
}

ShapeSpec ShapeSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
  ShapeSpec s;
  if (name == "polygon") {
    s.kind = ShapeKind::Polygon;
    std::stringstream ss(args);
    std::string pt;
    while (std::getline(ss, pt, ';')) {
      const auto xy = parse_list(pt, ',', text);
      if (xy.size() != 2) fail(ErrorCode::Domain, "polygon vertex needs x,y in '" + text + "'");
      s.polygon.push_back({xy[0], xy[1]});
    }
    return s;
  }
  const auto v = parse_list(args, ',', text);
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (v.size() < lo || v.size() > hi)
      fail(ErrorCode::Domain, "wrong number of parameters for shape '" + text + "'");
  };
  if (name == "disk") {
    need(1, 3);
    s.kind = ShapeKind::Disk;
    s.radius = v[0];
    if (v.size() == 3) s.center = {v[1], v[2]};
  } else if (name == "ellipse") {
    need(2, 5);
    if (v.size() == 4) fail(ErrorCode::Domain, "ellipse center needs both coordinates");
    s.kind = ShapeKind::Ellipse;
    s.a = v[0];
    s.b = v[1];
    if (v.size() >= 3) s.angle_deg = v[2];
    if (v.size() == 5) s.center = {v[3], v[4]};
  } else if (name == "rectangle" || name == "square") {
    s.kind = ShapeKind::Rectangle;
    if (name == "square") {
      need(1, 3);
      s.width = s.height = v[0];
      if (v.size() == 3) s.center = {v[1], v[2]};
    } else {
      need(2, 4);
      s.width = v[0];
      s.height = v[1];
      if (v.size() == 4) s.center = {v[2], v[3]};
    }
  } else if (name == "dumbbell") {
    need(3, 4);
    s.kind = ShapeKind::Dumbbell;
    s.radius = v[0];
    s.neck_width = v[1];
    s.neck_length = v[2];
    if (v.size() == 4) s.separation = v[3];
  } else if (name == "two_disks") {
    need(2, 2);
    s.kind = ShapeKind::TwoDisjointDisks;
    s.radius = v[0];
    s.gap = v[1];
  } else if (name == "cap") {
    need(2, 2);
    s.kind = ShapeKind::GeodesicCap;
    s.center_distance = v[0];
    s.radius = v[1];
  } else {
    fail(ErrorCode::Domain, "unknown shape '" + name + "'");
  }
  return s;
}

std::string ShapeSpec::describe() const {
  auto with_center = [&](std::string s) {
    if (center.x != 0.0 || center.y != 0.0) s += "," + fmt(center.x) + "," + fmt(center.y);
    return s;
  };
  switch (kind) {
    case ShapeKind::Disk: return with_center("disk:" + fmt(radius));
    case ShapeKind::Ellipse: {
      std::string s = "ellipse:" + fmt(a) + "," + fmt(b);
      if (angle_deg != 0.0 || center.x != 0.0 || center.y != 0.0) s += "," + fmt(angle_deg);
      return with_center(s);
    }
    case ShapeKind::Rectangle: return with_center("rectangle:" + fmt(width) + "," + fmt(height));
    case ShapeKind::Dumbbell:
      return "dumbbell:" + fmt(radius) + "," + fmt(neck_width) + "," + fmt(neck_length) +
             (separation != 0.0 ? "," + fmt(separation) : "");
    case ShapeKind::TwoDisjointDisks: return "two_disks:" + fmt(radius) + "," + fmt(gap);
    case ShapeKind::GeodesicCap: return "cap:" + fmt(center_distance) + "," + fmt(radius);
    case ShapeKind::Polygon: {
      std::string s = "polygon:";
      for (std::size_t i = 0; i < polygon.size(); ++i)
        s += (i ? ";" : "") + fmt(polygon[i].x) + "," + fmt(polygon[i].y);
      return s;
    }
  }
  return "?";
}

bool ShapeSpec::is_centered_ball() const {
  if (kind == ShapeKind::Disk) return center.x == 0.0 && center.y == 0.0;
  if (kind == ShapeKind::GeodesicCap) return center_distance == 0.0;
  return false;
}

bool ShapeSpec::is_single_disk() const {
  return kind == ShapeKind::Disk || kind == ShapeKind::GeodesicCap;
}

// ---------------------------------------------------------------------------
// Text I/O

void write_mesh(std::ostream& out, const TriMesh& mesh) {
  char buf[64];
  auto put = [&](double v) {
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, res.ptr - buf);
  };
  out << mesh.vertices.size() << ' ' << mesh.triangles.size() << '\n';
  for (auto v : mesh.vertices) {
    put(v.x);
    out << ' ';
    put(v.y);
    out << '\n';
  }
  for (auto t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "boundary\n";
  for (int b : mesh.boundary_vertices) out << b << '\n';
}

TriMesh read_mesh(std::istream& in) {
  TriMesh m;
  std::string line;
  int lineno = 0;
  auto next = [&]() -> std::string {
    if (!std::getline(in, line)) fail(ErrorCode::Io, "unexpected end of mesh file after line " + std::to_string(lineno));
    ++lineno;
    return line;
  };
  auto bad = [&](const std::string& why) {
    fail(ErrorCode::Io, "mesh line " + std::to_string(lineno) + ": " + why);
  };
  std::size_t nv = 0, nt = 0;
  {
    std::istringstream ss(next());
    if (!(ss >> nv >> nt)) bad("expected 'nv nt'");
  }
  m.vertices.resize(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    const std::string s = next();
    const char* p = s.data();
    const char* end = s.data() + s.size();
    double xy[2];
    for (double& c : xy) {
      while (p < end && *p == ' ') ++p;
      auto res = std::from_chars(p, end, c);
      if (res.ec != std::errc()) bad("expected 'x y'");
      p = res.ptr;
    }
    m.vertices[i] = {xy[0], xy[1]};
  }
  m.triangles.resize(nt);
  for (std::size_t i = 0; i < nt; ++i) {
    std::istringstream ss(next());
    auto& t = m.triangles[i];
    if (!(ss >> t[0] >> t[1] >> t[2])) bad("expected 'i j k'");
  }
  if (next() != "boundary") bad("expected 'boundary'");
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    int b = -1;
    const auto res = std::from_chars(line.data(), line.data() + line.size(), b);
    if (res.ec != std::errc()) bad("expected a boundary vertex index");
    if (b < 0 || static_cast<std::size_t>(b) >= nv) bad("boundary index out of range");
    m.boundary_vertices.push_back(b);
  }
  std::sort(m.boundary_vertices.begin(), m.boundary_vertices.end());
  m.recompute_h_max();
  m.validate();
  return m;
}

void save_mesh(const std::string& path, const TriMesh& mesh) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);
  write_mesh(out, mesh);
}

TriMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot read " + path);
  return read_mesh(in);
}

TriMesh rotated(const TriMesh& mesh, double radians) {
  TriMesh out = mesh;
  const double c = std::cos(radians), s = std::sin(radians);
  for (auto& v : out.vertices) v = {c * v.x - s * v.y, s * v.x + c * v.y};
  return out;
}

}  // namespace wlspec
