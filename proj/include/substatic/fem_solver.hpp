#pragma once

#include <array>
#include <vector>

#include "substatic/kernels.hpp"
#include "substatic/mesh.hpp"
#include "substatic/radial_solver.hpp"

namespace substatic {

struct FemSolution {
  PlanarMesh mesh;
  std::vector<double> u;
  std::vector<std::array<double, 2>> tri_gradient;     // constant per triangle
  std::vector<std::array<double, 2>> nodal_gradient;   // patch recovered
  std::vector<std::array<double, 3>> nodal_hessian;    // (uxx, uxy, uyy), patch recovered
  std::vector<double> boundary_grad_norm;              // per boundary vertex
  std::vector<double> boundary_normal_derivative;      // per boundary vertex, outward
  int cg_iterations = 0;
  double cg_relative_residual = 0.0;
  double energy = 0.0;  // (1/2) a(u,u) - (1,u)
};

struct FemOptions {
  kernels::Exec exec = kernels::Exec::parallel;
  double cg_tol = 1e-12;
  int min_triangles = 200;
};

/// P1 Galerkin solution of Delta u = -1 with u = 0 on the boundary.
FemSolution solve_flat_fem(const PlanarMesh& mesh, const FemOptions& options = {});

/// Jacobi-preconditioned conjugate gradients; returns iterations, throws on failure.
int conjugate_gradient(const kernels::Csr& a, const std::vector<double>& b, std::vector<double>& x,
                       double rel_tol, int max_iter, kernels::Exec exec, double* final_rel = nullptr);

/// Quadratic least-squares patch fit of nodal values around every vertex.
/// Returns gradients and Hessians (xx, xy, yy).
void recover_derivatives(const PlanarMesh& mesh, const std::vector<double>& values,
                         std::vector<std::array<double, 2>>& gradient,
                         std::vector<std::array<double, 3>>& hessian,
                         kernels::Exec exec = kernels::Exec::parallel);

/// Outward unit normal at boundary vertex k (average of adjacent edge normals).
std::array<double, 2> boundary_normal(const PlanarMesh& mesh, int k);

Diagnostics hopf_positivity_check(const FemSolution& sol);

}  // namespace substatic
