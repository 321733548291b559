// Serial vs OpenMP kernels on the FEM stiffness pattern of a disk mesh.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <omp.h>

#include "substatic/fem_solver.hpp"
#include "substatic/kernels.hpp"
#include "substatic/mesh.hpp"

using namespace substatic;
using Clock = std::chrono::steady_clock;

namespace {

template <class F>
double best_of(int reps, F&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(Clock::now() - t0).count());
  }
  return best;
}

// 5-point Laplacian on an m x m grid; same sparsity class as P1 stiffness.
kernels::Csr grid_laplacian(int m) {
  kernels::Csr a;
  a.rows = m * m;
  a.row_ptr.push_back(0);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      auto put = [&](int ii, int jj, double v) {
        if (ii < 0 || jj < 0 || ii >= m || jj >= m) return;
        a.col.push_back(ii * m + jj);
        a.val.push_back(v);
      };
      put(i - 1, j, -1.0);
      put(i, j - 1, -1.0);
      put(i, j, 4.0);
      put(i, j + 1, -1.0);
      put(i + 1, j, -1.0);
      a.row_ptr.push_back(static_cast<int>(a.col.size()));
    }
  }
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  const int m = argc > 1 ? std::atoi(argv[1]) : 1000;
  const int rings = argc > 2 ? std::atoi(argv[2]) : 96;
  std::printf("threads: %d\n", omp_get_max_threads());

  const kernels::Csr a = grid_laplacian(m);
  const std::size_t n = static_cast<std::size_t>(a.rows);
  std::vector<double> x(n, 1.0), y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 / (1.0 + i % 97);

  double sink = 0.0;
  const double s_spmv = best_of(5, [&] { kernels::serial::spmv(a, x.data(), y.data()); });
  const double p_spmv = best_of(5, [&] { kernels::omp::spmv(a, x.data(), y.data()); });
  const double s_dot = best_of(5, [&] { sink += kernels::serial::dot(n, x.data(), y.data()); });
  const double p_dot = best_of(5, [&] { sink += kernels::omp::dot(n, x.data(), y.data()); });
  const double s_axpy = best_of(5, [&] { kernels::serial::axpy(n, 1e-9, x.data(), y.data()); });
  const double p_axpy = best_of(5, [&] { kernels::omp::axpy(n, 1e-9, x.data(), y.data()); });
  std::printf("%-8s %12s %12s %8s   (n = %zu)\n", "kernel", "serial [s]", "omp [s]", "ratio", n);
  std::printf("%-8s %12.6f %12.6f %8.2f\n", "spmv", s_spmv, p_spmv, s_spmv / p_spmv);
  std::printf("%-8s %12.6f %12.6f %8.2f\n", "dot", s_dot, p_dot, s_dot / p_dot);
  std::printf("%-8s %12.6f %12.6f %8.2f\n", "axpy", s_axpy, p_axpy, s_axpy / p_axpy);

  const PlanarMesh mesh = make_ellipse_mesh(1.5, 1.0, rings);
  FemOptions serial_opt, par_opt;
  serial_opt.exec = kernels::Exec::serial;
  par_opt.exec = kernels::Exec::parallel;
  FemSolution s1, s2;
  const double s_fem = best_of(1, [&] { s1 = solve_flat_fem(mesh, serial_opt); });
  const double p_fem = best_of(1, [&] { s2 = solve_flat_fem(mesh, par_opt); });
  double diff = 0.0;
  for (std::size_t i = 0; i < s1.u.size(); ++i) diff = std::max(diff, std::abs(s1.u[i] - s2.u[i]));
  std::printf("%-8s %12.6f %12.6f %8.2f   (%zu triangles, max |u_serial - u_omp| = %.3g)\n", "fem", s_fem, p_fem,
              s_fem / p_fem, mesh.triangles.size(), diff);
  std::printf("checksum %.6g\n", sink);
  return 0;
}
