#include "substatic/kernels.hpp"

#include <algorithm>
#include <exception>

namespace substatic::kernels {

namespace serial {

void spmv(const Csr& a, const double* x, double* y) {
  for (int i = 0; i < a.rows; ++i) {
    double s = 0.0;
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) s += a.val[k] * x[a.col[k]];
    y[i] = s;
  }
}

double dot(std::size_t n, const double* a, const double* b) {
  double total = 0.0;
  for (std::size_t start = 0; start < n; start += kReduceChunk) {
    const std::size_t end = std::min(n, start + kReduceChunk);
    double s = 0.0;
    for (std::size_t i = start; i < end; ++i) s += a[i] * b[i];
    total += s;
  }
  return total;
}

void axpy(std::size_t n, double alpha, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& fn) {
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace serial

namespace omp {

void spmv(const Csr& a, const double* x, double* y) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < a.rows; ++i) {
    double s = 0.0;
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) s += a.val[k] * x[a.col[k]];
    y[i] = s;
  }
}

double dot(std::size_t n, const double* a, const double* b) {
  const std::size_t chunks = (n + kReduceChunk - 1) / kReduceChunk;
  std::vector<double> partial(chunks, 0.0);
  const long long nc = static_cast<long long>(chunks);
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < nc; ++c) {
    const std::size_t start = static_cast<std::size_t>(c) * kReduceChunk;
    const std::size_t end = std::min(n, start + kReduceChunk);
    double s = 0.0;
    for (std::size_t i = start; i < end; ++i) s += a[i] * b[i];
    partial[c] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

void axpy(std::size_t n, double alpha, const double* x, double* y) {
  const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < nn; ++i) y[i] += alpha * x[i];
}

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const long long nn = static_cast<long long>(n);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
  for (long long i = 0; i < nn; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(substatic_for_each_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace omp

void spmv(Exec exec, const Csr& a, const double* x, double* y) {
  exec == Exec::parallel ? omp::spmv(a, x, y) : serial::spmv(a, x, y);
}

double dot(Exec exec, std::size_t n, const double* a, const double* b) {
  return exec == Exec::parallel ? omp::dot(n, a, b) : serial::dot(n, a, b);
}

void axpy(Exec exec, std::size_t n, double alpha, const double* x, double* y) {
  exec == Exec::parallel ? omp::axpy(n, alpha, x, y) : serial::axpy(n, alpha, x, y);
}

void for_each_index(Exec exec, std::size_t n, const std::function<void(std::size_t)>& fn) {
  exec == Exec::parallel ? omp::for_each_index(n, fn) : serial::for_each_index(n, fn);
}

}  // namespace substatic::kernels
