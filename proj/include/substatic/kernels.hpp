#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace substatic::kernels {

enum class Exec { serial, parallel };

/// Compressed sparse row matrix.
struct Csr {
  int rows = 0;
  std::vector<int> row_ptr;  // rows + 1
  std::vector<int> col;
  std::vector<double> val;
};

// Reductions are summed over fixed chunks and combined in chunk order, so the
// parallel result does not depend on the thread count.
inline constexpr std::size_t kReduceChunk = 2048;

namespace serial {
void spmv(const Csr& a, const double* x, double* y);
double dot(std::size_t n, const double* a, const double* b);
void axpy(std::size_t n, double alpha, const double* x, double* y);
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& fn);
}  // namespace serial

namespace omp {
void spmv(const Csr& a, const double* x, double* y);
double dot(std::size_t n, const double* a, const double* b);
void axpy(std::size_t n, double alpha, const double* x, double* y);
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& fn);
}  // namespace omp

void spmv(Exec exec, const Csr& a, const double* x, double* y);
double dot(Exec exec, std::size_t n, const double* a, const double* b);
void axpy(Exec exec, std::size_t n, double alpha, const double* x, double* y);
void for_each_index(Exec exec, std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace substatic::kernels
