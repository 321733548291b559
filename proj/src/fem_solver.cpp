#include "substatic/fem_solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "substatic/errors.hpp"

namespace substatic {

int conjugate_gradient(const kernels::Csr& a, const std::vector<double>& b, std::vector<double>& x,
                       double rel_tol, int max_iter, kernels::Exec exec, double* final_rel) {
  const std::size_t n = b.size();
  x.assign(n, 0.0);
  std::vector<double> diag(n, 1.0);
  for (int i = 0; i < a.rows; ++i) {
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      if (a.col[k] == i) diag[i] = a.val[k];
    }
    if (!(diag[i] > 0.0)) throw Error(ErrorCode::singular_matrix, "nonpositive diagonal in CG");
  }
  std::vector<double> r = b, z(n), p(n), q(n);
  const double bnorm = std::sqrt(kernels::dot(exec, n, b.data(), b.data()));
  if (bnorm == 0.0) {
    if (final_rel) *final_rel = 0.0;
    return 0;
  }
  for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  p = z;
  double rz = kernels::dot(exec, n, r.data(), z.data());
  for (int it = 1; it <= max_iter; ++it) {
    kernels::spmv(exec, a, p.data(), q.data());
    const double pq = kernels::dot(exec, n, p.data(), q.data());
    if (!(pq > 0.0)) throw Error(ErrorCode::cg_nonconvergence, "CG breakdown: matrix not positive definite");
    const double alpha = rz / pq;
    kernels::axpy(exec, n, alpha, p.data(), x.data());
    kernels::axpy(exec, n, -alpha, q.data(), r.data());
    const double rel = std::sqrt(kernels::dot(exec, n, r.data(), r.data())) / bnorm;
    if (rel <= rel_tol) {
      if (final_rel) *final_rel = rel;
      return it;
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    const double rz_new = kernels::dot(exec, n, r.data(), z.data());
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw Error(ErrorCode::cg_nonconvergence,
              "CG did not reach relative residual " + std::to_string(rel_tol) + " in " +
                  std::to_string(max_iter) + " iterations");
}

void recover_derivatives(const PlanarMesh& mesh, const std::vector<double>& values,
                         std::vector<std::array<double, 2>>& gradient,
                         std::vector<std::array<double, 3>>& hessian, kernels::Exec exec) {
  const std::size_t nv = mesh.vertices.size();
  std::vector<std::set<int>> adj(nv);
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      adj[t[k]].insert(t[(k + 1) % 3]);
      adj[t[k]].insert(t[(k + 2) % 3]);
    }
  }
  gradient.assign(nv, {0.0, 0.0});
  hessian.assign(nv, {0.0, 0.0, 0.0});
  kernels::for_each_index(exec, nv, [&](std::size_t v) {
    std::set<int> patch(adj[v].begin(), adj[v].end());
    for (int w : adj[v]) patch.insert(adj[w].begin(), adj[w].end());
    patch.erase(static_cast<int>(v));
    // grow until there are comfortably more samples than coefficients
    while (patch.size() < 9) {
      std::set<int> grown = patch;
      for (int w : patch) grown.insert(adj[w].begin(), adj[w].end());
      grown.erase(static_cast<int>(v));
      if (grown.size() == patch.size()) break;
      patch = std::move(grown);
    }
    if (patch.size() < 6) throw Error(ErrorCode::invalid_mesh, "patch too small for a quadratic fit");
    const auto& c = mesh.vertices[v];
    double scale = 0.0;
    for (int w : patch) {
      scale = std::max(scale, std::hypot(mesh.vertices[w][0] - c[0], mesh.vertices[w][1] - c[1]));
    }
    const int m = static_cast<int>(patch.size()) + 1;
    Eigen::MatrixXd A(m, 6);
    Eigen::VectorXd rhs(m);
    A.row(0) << 1, 0, 0, 0, 0, 0;
    rhs(0) = values[v];
    int row = 1;
    for (int w : patch) {
      const double x = (mesh.vertices[w][0] - c[0]) / scale;
      const double y = (mesh.vertices[w][1] - c[1]) / scale;
      A.row(row) << 1, x, y, 0.5 * x * x, x * y, 0.5 * y * y;
      rhs(row) = values[w];
      ++row;
    }
    const Eigen::VectorXd coef = A.householderQr().solve(rhs);
    gradient[v] = {coef(1) / scale, coef(2) / scale};
    hessian[v] = {coef(3) / (scale * scale), coef(4) / (scale * scale), coef(5) / (scale * scale)};
  });
}

std::array<double, 2> boundary_normal(const PlanarMesh& mesh, int k) {
  const int nb = static_cast<int>(mesh.boundary.size());
  const auto& prev = mesh.vertices[mesh.boundary[(k + nb - 1) % nb]];
  const auto& next = mesh.vertices[mesh.boundary[(k + 1) % nb]];
  // ccw loop: outward normal is the tangent rotated clockwise
  const double tx = next[0] - prev[0], ty = next[1] - prev[1];
  const double len = std::hypot(tx, ty);
  return {ty / len, -tx / len};
}

FemSolution solve_flat_fem(const PlanarMesh& mesh, const FemOptions& options) {
  validate_mesh(mesh, options.min_triangles, 5.0);
  const int nv = static_cast<int>(mesh.vertices.size());
  std::vector<int> index(nv, -1);
  std::vector<char> on_boundary(nv, 0);
  for (int b : mesh.boundary) on_boundary[b] = 1;
  int unknowns = 0;
  for (int v = 0; v < nv; ++v) {
    if (!on_boundary[v]) index[v] = unknowns++;
  }
  if (unknowns == 0) throw Error(ErrorCode::invalid_mesh, "mesh has no interior vertices");

  std::vector<std::map<int, double>> rows(unknowns);
  std::vector<double> load(unknowns, 0.0);
  const std::size_t nt = mesh.triangles.size();
  std::vector<std::array<std::array<double, 2>, 3>> grads(nt);
  std::vector<double> areas(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    const double area = triangle_area(mesh, static_cast<int>(t));
    areas[t] = area;
    for (int k = 0; k < 3; ++k) {
      const auto& q = mesh.vertices[tri[(k + 1) % 3]];
      const auto& r = mesh.vertices[tri[(k + 2) % 3]];
      grads[t][k] = {(q[1] - r[1]) / (2.0 * area), (r[0] - q[0]) / (2.0 * area)};
    }
    for (int i = 0; i < 3; ++i) {
      const int gi = index[tri[i]];
      if (gi < 0) continue;
      load[gi] += area / 3.0;
      for (int j = 0; j < 3; ++j) {
        const int gj = index[tri[j]];
        if (gj < 0) continue;
        rows[gi][gj] += area * (grads[t][i][0] * grads[t][j][0] + grads[t][i][1] * grads[t][j][1]);
      }
    }
  }
  kernels::Csr a;
  a.rows = unknowns;
  a.row_ptr.push_back(0);
  for (const auto& row : rows) {
    for (const auto& [col, val] : row) {
      a.col.push_back(col);
      a.val.push_back(val);
    }
    a.row_ptr.push_back(static_cast<int>(a.col.size()));
  }

  FemSolution sol;
  sol.mesh = mesh;
  std::vector<double> x;
  sol.cg_iterations = conjugate_gradient(a, load, x, options.cg_tol, 20 * unknowns + 100, options.exec,
                                         &sol.cg_relative_residual);
  sol.u.assign(nv, 0.0);
  for (int v = 0; v < nv; ++v) {
    if (index[v] >= 0) sol.u[v] = x[index[v]];
  }
  double ax = 0.0, fx = 0.0;
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    std::array<double, 2> g{0.0, 0.0};
    for (int k = 0; k < 3; ++k) {
      g[0] += sol.u[tri[k]] * grads[t][k][0];
      g[1] += sol.u[tri[k]] * grads[t][k][1];
    }
    sol.tri_gradient.push_back(g);
    ax += areas[t] * (g[0] * g[0] + g[1] * g[1]);
    fx += areas[t] * (sol.u[tri[0]] + sol.u[tri[1]] + sol.u[tri[2]]) / 3.0;
  }
  sol.energy = 0.5 * ax - fx;

  recover_derivatives(mesh, sol.u, sol.nodal_gradient, sol.nodal_hessian, options.exec);
  for (std::size_t k = 0; k < mesh.boundary.size(); ++k) {
    const auto& g = sol.nodal_gradient[mesh.boundary[k]];
    const auto nrm = boundary_normal(mesh, static_cast<int>(k));
    sol.boundary_grad_norm.push_back(std::hypot(g[0], g[1]));
    sol.boundary_normal_derivative.push_back(g[0] * nrm[0] + g[1] * nrm[1]);
  }
  return sol;
}

Diagnostics hopf_positivity_check(const FemSolution& sol) {
  Diagnostics d;
  std::vector<char> on_boundary(sol.mesh.vertices.size(), 0);
  for (int b : sol.mesh.boundary) on_boundary[b] = 1;
  d.min_interior_u = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < sol.u.size(); ++v) {
    if (!on_boundary[v] && sol.u[v] < d.min_interior_u) {
      d.min_interior_u = sol.u[v];
      d.min_u_location = static_cast<double>(v);
    }
  }
  d.max_boundary_normal_derivative = -std::numeric_limits<double>::infinity();
  for (double g : sol.boundary_normal_derivative) {
    d.max_boundary_normal_derivative = std::max(d.max_boundary_normal_derivative, g);
  }
  d.positivity_ok = d.min_interior_u > 0.0;
  d.hopf_ok = d.max_boundary_normal_derivative < 0.0;
  return d;
}

}  // namespace substatic
