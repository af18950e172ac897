#pragma once

// Planar triangulations of 2-D domains in model coordinates.

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "wlspec/spaceform.hpp"

namespace wlspec {

struct TriMesh {
  std::vector<ConformalPoint> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> boundary_vertices;  // sorted ascending
  double h_max = 0.0;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_triangles() const { return triangles.size(); }

  // Signed area of triangle i in model coordinates.
  double triangle_area(std::size_t i) const;
  void recompute_h_max();
  std::vector<bool> boundary_mask() const;

  // Throws InvalidMesh when an invariant is violated: orientation, minimum
  // area, conformity, boundary set equal to the vertices of boundary edges.
  void validate() const;
};

enum class ShapeKind {
  Disk,
  Ellipse,
  Rectangle,
  Dumbbell,
  TwoDisjointDisks,
  Polygon,
  GeodesicCap,
};

// A domain description. Unused fields are ignored for a given kind.
struct ShapeSpec {
  ShapeKind kind = ShapeKind::Disk;
  ConformalPoint center{};
  double radius = 1.0;        // disk, dumbbell lobes, two disks; geodesic radius for caps
  double a = 1.0, b = 1.0;    // ellipse semi-axes
  double angle_deg = 0.0;     // ellipse rotation
  double width = 1.0, height = 1.0;  // rectangle
  double neck_width = 0.2, neck_length = 0.5;  // dumbbell
  double separation = 0.0;    // dumbbell lobe center distance (0: derived from neck)
  double gap = 0.5;           // two disks
  double center_distance = 0.0;  // geodesic cap: distance of the cap center from the origin
  std::vector<ConformalPoint> polygon;

  // Parses "disk:r[,cx,cy]", "ellipse:a,b[,deg,cx,cy]", "rectangle:w,h[,cx,cy]",
  // "square:s", "dumbbell:r,neck_w,neck_len[,separation]", "two_disks:r,gap",
  // "cap:center_distance,geodesic_radius", "polygon:x,y;x,y;...".
  static ShapeSpec parse(const std::string& text);
  // Canonical short form used in reports.
  std::string describe() const;

  // Centered disk (or centered geodesic cap): the ball itself.
  bool is_centered_ball() const;
  // A single disk or cap, possibly off-center.
  bool is_single_disk() const;
};

// Model-coordinate disk realising a geodesic cap / geodesic disk in `model`.
struct ModelDisk {
  ConformalPoint center;
  double radius;
};
ModelDisk geodesic_disk_in_model(const SpaceFormModel& model, double center_distance,
                                 double geodesic_radius);

TriMesh generate_mesh(const ShapeSpec& shape, double target_h,
                      const SpaceFormModel& model = SpaceFormModel(Curvature::Euclidean, 2));

// Plain-text format: "nv nt", nv lines "x y", nt lines "i j k", a line
// "boundary", then one boundary index per line. Doubles use shortest
// round-trip formatting so write -> read is bit exact.
void write_mesh(std::ostream& out, const TriMesh& mesh);
TriMesh read_mesh(std::istream& in);
void save_mesh(const std::string& path, const TriMesh& mesh);
TriMesh load_mesh(const std::string& path);

// Rigid rotation about the model origin.
TriMesh rotated(const TriMesh& mesh, double radians);

}  // namespace wlspec
