#include "rwlap/kernels.hpp"

#include <cmath>

namespace rwlap::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double max_abs_scalar(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::fabs(x[i]));
  return m;
}

void mul_scalar(const double* x, const double* w, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * w[i];
}

void sub_shift_scalar(const double* x, const double* c, double shift, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - c[i] + shift;
}

void diff_shift_mul_scalar(const double* x, const double* y, double shift, const double* w,
                           double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = ((x[i] - y[i]) + shift) * w[i];
}

constexpr Table kScalar{Isa::scalar,      dot_scalar,       axpy_scalar,          sum_scalar,
                        max_abs_scalar,   mul_scalar,       sub_shift_scalar,     diff_shift_mul_scalar};

}  // namespace

const Table& scalar_table() { return kScalar; }

}  // namespace rwlap::kernels
