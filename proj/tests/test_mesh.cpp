#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "wlspec/error.hpp"
#include "wlspec/mesh.hpp"

using namespace wlspec;
constexpr double pi = std::numbers::pi;

namespace {

double area(const TriMesh& m) {
  double a = 0;
  for (std::size_t i = 0; i < m.num_triangles(); ++i) a += m.triangle_area(i);
  return a;
}

const SpaceFormModel E(Curvature::Euclidean, 2);

}  // namespace

TEST_CASE("generated shapes are valid with the expected area") {
  struct Case {
    const char* shape;
    double area;
  };
  const Case cases[] = {
      {"disk:1", pi},
      {"disk:0.5,0.3,-0.2", pi * 0.25},
      {"ellipse:1.4,0.7", pi * 1.4 * 0.7},
      {"ellipse:1,0.5,30,0.1,0.1", pi * 0.5},
      {"square:1.5", 2.25},
      {"rectangle:2,0.5", 1.0},
      {"two_disks:0.5,0.4", 2 * pi * 0.25},
      {"polygon:0,0;1,0;1,1;0,1", 1.0},
      {"polygon:0,0;2,0;2,1;1,1;1,2;0,2", 3.0},
  };
  for (const auto& c : cases) {
    CAPTURE(c.shape);
    const auto m = generate_mesh(ShapeSpec::parse(c.shape), 0.05, E);
    CHECK_NOTHROW(m.validate());
    CHECK(area(m) == doctest::Approx(c.area).epsilon(5e-3));
    CHECK(m.h_max < 0.05 * 1.8);
    CHECK(std::is_sorted(m.boundary_vertices.begin(), m.boundary_vertices.end()));
  }
}

TEST_CASE("dumbbell is connected and lies between its lobes and their hull") {
  const auto m = generate_mesh(ShapeSpec::parse("dumbbell:0.6,0.2,0.5"), 0.04, E);
  CHECK_NOTHROW(m.validate());
  const double lobes = 2 * pi * 0.36;
  CHECK(area(m) > lobes);
  CHECK(area(m) < lobes + 0.2 * 0.5 + 0.1);
}

TEST_CASE("shape parsing and description") {
  const auto s = ShapeSpec::parse("ellipse:2,1,45,0.5,0");
  CHECK(s.kind == ShapeKind::Ellipse);
  CHECK(s.a == 2.0);
  CHECK(s.angle_deg == 45.0);
  CHECK(s.center.x == 0.5);
  CHECK(ShapeSpec::parse("disk:1").is_centered_ball());
  CHECK_FALSE(ShapeSpec::parse("disk:1,0.1,0").is_centered_ball());
  CHECK(ShapeSpec::parse("disk:1,0.1,0").is_single_disk());
  CHECK(ShapeSpec::parse("cap:0,0.5").is_centered_ball());
  CHECK_FALSE(ShapeSpec::parse("cap:0.2,0.5").is_centered_ball());
  CHECK_FALSE(ShapeSpec::parse("square:1").is_single_disk());
  const auto d = ShapeSpec::parse("dumbbell:0.6,0.2,0.5,2");
  CHECK(d.separation == 2.0);
  CHECK(ShapeSpec::parse(d.describe()).separation == 2.0);
  for (const char* bad : {"", "blob:1", "disk:", "disk:a", "ellipse:1", "ellipse:1,1,0,3", "polygon:0,0;1"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(ShapeSpec::parse(bad), Error);
  }
}

TEST_CASE("invalid geometry is rejected") {
  CHECK_THROWS_AS(generate_mesh(ShapeSpec::parse("disk:-1"), 0.1, E), Error);
  CHECK_THROWS_AS(generate_mesh(ShapeSpec::parse("disk:1"), 0.0, E), Error);
  CHECK_THROWS_AS(generate_mesh(ShapeSpec::parse("polygon:0,0;1,1;1,0;0,1"), 0.1, E), Error);
  CHECK_THROWS_AS(generate_mesh(ShapeSpec::parse("dumbbell:0.3,0.7,0.5"), 0.1, E), Error);
  const SpaceFormModel H(Curvature::Hyperbolic, 2), S(Curvature::Spherical, 2);
  CHECK_THROWS_AS(generate_mesh(ShapeSpec::parse("disk:1.2"), 0.05, H), Error);
  CHECK_THROWS_AS(generate_mesh(ShapeSpec::parse("cap:1,0.8"), 0.05, S), Error);
  CHECK_NOTHROW(generate_mesh(ShapeSpec::parse("disk:0.9"), 0.05, H));
}

TEST_CASE("geodesic disks in the models") {
  const SpaceFormModel H(Curvature::Hyperbolic, 2), S(Curvature::Spherical, 2);
  for (const auto* m : {&H, &E, &S}) {
    const auto d = geodesic_disk_in_model(*m, 0.4, 0.7);
    // The nearest and farthest model points sit at distances 0.4 -/+ 0.7 from the origin.
    const double near = m->geodesic_distance_to_origin({d.center.x - d.radius, 0});
    const double far = m->geodesic_distance_to_origin({d.center.x + d.radius, 0});
    CHECK(near == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(far == doctest::Approx(1.1).epsilon(1e-12));
  }
  CHECK_THROWS_AS(geodesic_disk_in_model(S, 0.0, -1.0), Error);
}

TEST_CASE("write then read is bit exact") {
  const auto m = generate_mesh(ShapeSpec::parse("ellipse:1.3,0.6,17"), 0.07, E);
  std::stringstream a;
  write_mesh(a, m);
  const auto back = read_mesh(a);
  REQUIRE(back.num_vertices() == m.num_vertices());
  for (std::size_t i = 0; i < m.num_vertices(); ++i) {
    CHECK(back.vertices[i].x == m.vertices[i].x);
    CHECK(back.vertices[i].y == m.vertices[i].y);
  }
  CHECK(back.triangles == m.triangles);
  CHECK(back.boundary_vertices == m.boundary_vertices);
  std::stringstream b;
  write_mesh(b, back);
  CHECK(a.str() == b.str());
}

TEST_CASE("malformed mesh files") {
  const char* bad[] = {
      "",
      "3 1\n0 0\n1 0\n",
      "3 1\n0 0\n1 0\n0 1\n0 1 5\nboundary\n0\n1\n2\n",
      "3 1\n0 0\n1 0\n0 1\n0 2 1\nboundary\n0\n1\n2\n",
      "3 1\n0 0\n1 0\n0 x\n0 1 2\nboundary\n0\n1\n2\n",
      "3 1\n0 0\n1 0\n0 1\n0 1 2\nboundary\n0\n1\n",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    std::istringstream in(text);
    CHECK_THROWS_AS(read_mesh(in), Error);
  }
  std::istringstream ok("3 1\n0 0\n1 0\n0 1\n0 1 2\nboundary\n0\n1\n2\n");
  CHECK(read_mesh(ok).num_triangles() == 1);
  CHECK_THROWS_AS(load_mesh("/nonexistent/mesh.txt"), Error);
}

TEST_CASE("rotation preserves area and validity") {
  const auto m = generate_mesh(ShapeSpec::parse("rectangle:1.2,0.4,0.3,0.1"), 0.05, E);
  const auto r = rotated(m, 0.7);
  CHECK_NOTHROW(r.validate());
  CHECK(area(r) == doctest::Approx(area(m)).epsilon(1e-12));
  CHECK(r.vertices[0].norm() == doctest::Approx(m.vertices[0].norm()));
}

TEST_CASE("meshing is deterministic") {
  const auto a = generate_mesh(ShapeSpec::parse("dumbbell:0.6,0.2,0.5"), 0.05, E);
  const auto b = generate_mesh(ShapeSpec::parse("dumbbell:0.6,0.2,0.5"), 0.05, E);
  std::stringstream sa, sb;
  write_mesh(sa, a);
  write_mesh(sb, b);
  CHECK(sa.str() == sb.str());
}
