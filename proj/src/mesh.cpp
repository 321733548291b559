#include "substatic/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>

#include "substatic/errors.hpp"

namespace substatic {

namespace {

constexpr double kPi = std::numbers::pi;

// Concentric rings with 6j vertices on ring j, stitched ring to ring by angle.
PlanarMesh ring_mesh(int rings) {
  if (rings < 1) throw Error(ErrorCode::invalid_argument, "need at least one ring");
  PlanarMesh m;
  m.vertices.push_back({0.0, 0.0});
  std::vector<int> first(rings + 1, 0);
  std::vector<std::vector<double>> angles(rings + 1);
  angles[0] = {0.0};
  for (int j = 1; j <= rings; ++j) {
    first[j] = static_cast<int>(m.vertices.size());
    const int count = 6 * j;
    const double r = static_cast<double>(j) / rings;
    for (int i = 0; i < count; ++i) {
      const double th = 2.0 * kPi * i / count;
      angles[j].push_back(th);
      m.vertices.push_back({r * std::cos(th), r * std::sin(th)});
    }
  }
  for (int i = 0; i < 6; ++i) m.triangles.push_back({0, first[1] + i, first[1] + (i + 1) % 6});
  for (int j = 2; j <= rings; ++j) {
    const int ni = 6 * (j - 1), no = 6 * j;
    int a = 0, b = 0;  // steps taken on the inner / outer ring
    while (a < ni || b < no) {
      const int ia = first[j - 1] + a % ni, ia1 = first[j - 1] + (a + 1) % ni;
      const int ib = first[j] + b % no, ib1 = first[j] + (b + 1) % no;
      const double ta = a < ni ? 2.0 * kPi * (a + 1) / ni : 1e300;
      const double tb = b < no ? 2.0 * kPi * (b + 1) / no : 1e300;
      // Advance the ring whose next vertex comes first (ties go outward).
      if (tb <= ta) {
        m.triangles.push_back({ia, ib, ib1});
        ++b;
      } else {
        m.triangles.push_back({ia, ib, ia1});
        ++a;
      }
    }
  }
  for (int i = 0; i < 6 * rings; ++i) m.boundary.push_back(first[rings] + i);
  return m;
}

}  // namespace

double ellipse_curvature(double a, double b, double t) {
  const double s = std::sin(t), c = std::cos(t);
  return a * b / std::pow(a * a * s * s + b * b * c * c, 1.5);
}

PlanarMesh make_disk_mesh(double radius, int rings) {
  if (!(radius > 0.0)) throw Error(ErrorCode::invalid_argument, "disk radius must be positive");
  PlanarMesh m = ring_mesh(rings);
  for (auto& v : m.vertices) {
    v[0] *= radius;
    v[1] *= radius;
  }
  m.boundary_curvature.assign(m.boundary.size(), 1.0 / radius);
  m.shape = {DomainShape::Kind::disk, radius, radius};
  return m;
}

PlanarMesh make_ellipse_mesh(double a, double b, int rings) {
  if (!(a > 0.0 && b > 0.0)) throw Error(ErrorCode::invalid_argument, "ellipse semi-axes must be positive");
  PlanarMesh m = ring_mesh(rings);
  for (auto& v : m.vertices) {
    v[0] *= a;
    v[1] *= b;
  }
  const int count = static_cast<int>(m.boundary.size());
  for (int i = 0; i < count; ++i) {
    m.boundary_curvature.push_back(ellipse_curvature(a, b, 2.0 * kPi * i / count));
  }
  m.shape = {DomainShape::Kind::ellipse, a, b};
  return m;
}

PlanarMesh make_square_mesh(double side, int cells) {
  if (cells < 2) throw Error(ErrorCode::invalid_argument, "square mesh needs at least 2 cells");
  PlanarMesh m;
  const int p = cells + 1;
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < p; ++i) m.vertices.push_back({side * i / cells, side * j / cells});
  auto id = [p](int i, int j) { return j * p + i; };
  for (int j = 0; j < cells; ++j) {
    for (int i = 0; i < cells; ++i) {
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  for (int i = 0; i < cells; ++i) m.boundary.push_back(id(i, 0));
  for (int j = 0; j < cells; ++j) m.boundary.push_back(id(cells, j));
  for (int i = cells; i > 0; --i) m.boundary.push_back(id(i, cells));
  for (int j = cells; j > 0; --j) m.boundary.push_back(id(0, j));
  m.boundary_curvature.assign(m.boundary.size(), 0.0);
  m.shape = {DomainShape::Kind::square, side, side};
  return m;
}

double triangle_area(const PlanarMesh& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  const auto& p = mesh.vertices[tri[0]];
  const auto& q = mesh.vertices[tri[1]];
  const auto& r = mesh.vertices[tri[2]];
  return 0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]));
}

double min_angle_degrees(const PlanarMesh& mesh) {
  double worst = 180.0;
  for (const auto& tri : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      const auto& p = mesh.vertices[tri[k]];
      const auto& q = mesh.vertices[tri[(k + 1) % 3]];
      const auto& r = mesh.vertices[tri[(k + 2) % 3]];
      const double ux = q[0] - p[0], uy = q[1] - p[1], vx = r[0] - p[0], vy = r[1] - p[1];
      const double cosang = (ux * vx + uy * vy) / (std::hypot(ux, uy) * std::hypot(vx, vy));
      worst = std::min(worst, std::acos(std::clamp(cosang, -1.0, 1.0)) * 180.0 / kPi);
    }
  }
  return worst;
}

void validate_mesh(const PlanarMesh& mesh, int min_triangles, double min_angle) {
  const int nv = static_cast<int>(mesh.vertices.size());
  if (static_cast<int>(mesh.triangles.size()) < min_triangles) {
    throw Error(ErrorCode::invalid_mesh, "mesh has " + std::to_string(mesh.triangles.size()) +
                                             " triangles, need at least " + std::to_string(min_triangles));
  }
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    for (int k : mesh.triangles[t]) {
      if (k < 0 || k >= nv) throw Error(ErrorCode::invalid_mesh, "triangle references a missing vertex");
    }
    if (!(triangle_area(mesh, static_cast<int>(t)) > 0.0)) {
      throw Error(ErrorCode::invalid_mesh, "triangle " + std::to_string(t) + " is not positively oriented");
    }
  }
  const double ang = min_angle_degrees(mesh);
  if (ang < min_angle) {
    throw Error(ErrorCode::degenerate_triangle, "minimum angle " + std::to_string(ang) + " degrees");
  }
  if (mesh.boundary.size() < 3 || mesh.boundary_curvature.size() != mesh.boundary.size()) {
    throw Error(ErrorCode::invalid_mesh, "boundary loop missing or curvature count mismatch");
  }
  // Boundary edges of the triangulation must be exactly the loop edges, oriented ccw.
  std::map<std::pair<int, int>, int> edges;
  for (const auto& tri : mesh.triangles) {
    for (int k = 0; k < 3; ++k) edges[{tri[k], tri[(k + 1) % 3]}]++;
  }
  std::size_t boundary_edges = 0;
  for (const auto& [e, count] : edges) {
    if (!edges.count({e.second, e.first})) ++boundary_edges;
    if (count > 1) throw Error(ErrorCode::invalid_mesh, "edge used twice with the same orientation");
  }
  if (boundary_edges != mesh.boundary.size()) {
    throw Error(ErrorCode::invalid_mesh, "boundary loop does not match the triangulation boundary");
  }
  for (std::size_t i = 0; i < mesh.boundary.size(); ++i) {
    const int a = mesh.boundary[i], b = mesh.boundary[(i + 1) % mesh.boundary.size()];
    if (!edges.count({a, b}) || edges.count({b, a})) {
      throw Error(ErrorCode::invalid_mesh, "boundary loop is not closed and counterclockwise");
    }
  }
}

void write_mesh(const PlanarMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path);
  out << std::setprecision(17);
  out << "# planar mesh: " << mesh.vertices.size() << " vertices, " << mesh.triangles.size()
      << " triangles\n";
  for (const auto& v : mesh.vertices) out << "v " << v[0] << ' ' << v[1] << '\n';
  for (const auto& t : mesh.triangles) out << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (std::size_t i = 0; i < mesh.boundary.size(); ++i) {
    out << "b " << mesh.boundary[i] << ' ' << mesh.boundary_curvature[i] << '\n';
  }
}

PlanarMesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot read " + path);
  PlanarMesh m;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;
    bool ok = true;
    if (tag == "v") {
      std::array<double, 2> v{};
      ok = static_cast<bool>(ss >> v[0] >> v[1]);
      m.vertices.push_back(v);
    } else if (tag == "t") {
      std::array<int, 3> t{};
      ok = static_cast<bool>(ss >> t[0] >> t[1] >> t[2]);
      m.triangles.push_back(t);
    } else if (tag == "b") {
      int i = 0;
      double k = 0.0;
      ok = static_cast<bool>(ss >> i >> k);
      m.boundary.push_back(i);
      m.boundary_curvature.push_back(k);
    } else {
      ok = false;
    }
    std::string extra;
    if (!ok || (ss >> extra)) {
      throw Error(ErrorCode::invalid_mesh, path + ":" + std::to_string(lineno) + ": malformed line");
    }
  }
  m.shape.kind = DomainShape::Kind::polygon;
  return m;
}

}  // namespace substatic
