#pragma once

// Data-parallel inner loops used by the dense linear algebra.
//
// Every kernel exists as a scalar reference and, where the build and the CPU
// allow it, an AVX2/FMA variant. The variant is chosen once at startup from
// CPUID and can be overridden (tests pin both and compare them).

#include <cstddef>
#include <string_view>

namespace rwlap::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

struct Table {
  Isa isa;

  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // sum_i x[i]
  double (*sum)(const double* x, std::size_t n);
  // max_i |x[i]|
  double (*max_abs)(const double* x, std::size_t n);
  // out[i] = x[i] * w[i]
  void (*mul)(const double* x, const double* w, double* out, std::size_t n);
  // out[i] = x[i] - c[i] + shift
  void (*sub_shift)(const double* x, const double* c, double shift, double* out, std::size_t n);
  // out[i] = ((x[i] - y[i]) + shift) * w[i]
  void (*diff_shift_mul)(const double* x, const double* y, double shift, const double* w,
                         double* out, std::size_t n);
};

const Table& scalar_table();

// nullptr when the AVX2 variant was not compiled in.
const Table* avx2_table();

bool cpu_supports(Isa isa);

// Best variant that is both compiled and supported by the running CPU.
Isa detect();

const Table& active();

// Throws std::invalid_argument if the variant is unavailable on this machine.
void select(Isa isa);

// Restores the previously active variant on destruction.
class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa);
  ~ScopedIsa();
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  Isa previous_;
};

inline double dot(const double* x, const double* y, std::size_t n) { return active().dot(x, y, n); }
inline void axpy(double a, const double* x, double* y, std::size_t n) { active().axpy(a, x, y, n); }
inline double sum(const double* x, std::size_t n) { return active().sum(x, n); }
inline double max_abs(const double* x, std::size_t n) { return active().max_abs(x, n); }
inline void mul(const double* x, const double* w, double* out, std::size_t n) {
  active().mul(x, w, out, n);
}
inline void sub_shift(const double* x, const double* c, double shift, double* out, std::size_t n) {
  active().sub_shift(x, c, shift, out, n);
}
inline void diff_shift_mul(const double* x, const double* y, double shift, const double* w,
                           double* out, std::size_t n) {
  active().diff_shift_mul(x, y, shift, w, out, n);
}

}  // namespace rwlap::kernels
