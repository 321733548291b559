#pragma once

#include <array>
#include <string>
#include <vector>

namespace substatic {

struct DomainShape {
  enum class Kind { disk, ellipse, square, polygon };
  Kind kind = Kind::polygon;
  double a = 0.0;  // disk radius / ellipse x semi-axis / square side
  double b = 0.0;  // ellipse y semi-axis
  bool smooth() const { return kind == Kind::disk || kind == Kind::ellipse; }
};

struct PlanarMesh {
  std::vector<std::array<double, 2>> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> boundary;                 // closed loop, counterclockwise
  std::vector<double> boundary_curvature;    // per boundary vertex, smooth curve
  DomainShape shape;
};

PlanarMesh make_disk_mesh(double radius, int rings);
PlanarMesh make_ellipse_mesh(double a, double b, int rings);
PlanarMesh make_square_mesh(double side, int cells);

/// Curvature of the ellipse x = a cos t, y = b sin t.
double ellipse_curvature(double a, double b, double t);

double triangle_area(const PlanarMesh& mesh, int t);  // signed
double min_angle_degrees(const PlanarMesh& mesh);

/// Throws invalid_mesh / degenerate_triangle on failure.
void validate_mesh(const PlanarMesh& mesh, int min_triangles = 200, double min_angle = 5.0);

void write_mesh(const PlanarMesh& mesh, const std::string& path);
PlanarMesh read_mesh(const std::string& path);

}  // namespace substatic
