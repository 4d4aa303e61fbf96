#pragma once

// Data-parallel inner loops shared by the analytic solver and the Monte Carlo
// estimators. Every kernel has a scalar reference implementation; wider
// variants are compiled per ISA and picked once at runtime.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace freevec::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// Sums of the Cauchy kernel and its square: sum w/(x - z) and sum w/(x - z)^2.
struct CauchyPair {
  std::complex<double> first;
  std::complex<double> second;
};

struct KernelTable {
  Isa isa;
  std::complex<double> (*cauchy_sum)(const double* w, const double* x,
                                     std::size_t n, std::complex<double> z);
  CauchyPair (*cauchy_sum2)(const double* w, const double* x, std::size_t n,
                            std::complex<double> z);
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*square)(const double* in, double* out, std::size_t n);
  double (*sum_squares)(const double* a, std::size_t n);
};

bool supported(Isa isa);

/// Kernel table for a specific ISA. Throws std::runtime_error when the CPU
/// (or the build) does not provide it.
const KernelTable& table(Isa isa);

/// Table chosen at first use: the widest supported ISA, unless the
/// FREEVEC_ISA environment variable names another one ("scalar", "avx2").
const KernelTable& active();

namespace scalar {
std::complex<double> cauchy_sum(const double* w, const double* x, std::size_t n,
                                std::complex<double> z);
CauchyPair cauchy_sum2(const double* w, const double* x, std::size_t n,
                       std::complex<double> z);
double dot(const double* a, const double* b, std::size_t n);
void square(const double* in, double* out, std::size_t n);
double sum_squares(const double* a, std::size_t n);
}  // namespace scalar

#if defined(FREEVEC_HAVE_AVX2)
namespace avx2 {
std::complex<double> cauchy_sum(const double* w, const double* x, std::size_t n,
                                std::complex<double> z);
CauchyPair cauchy_sum2(const double* w, const double* x, std::size_t n,
                       std::complex<double> z);
double dot(const double* a, const double* b, std::size_t n);
void square(const double* in, double* out, std::size_t n);
double sum_squares(const double* a, std::size_t n);
}  // namespace avx2
#endif

// Span front ends over active().

inline std::complex<double> cauchy_sum(std::span<const double> w,
                                       std::span<const double> x,
                                       std::complex<double> z) {
  return active().cauchy_sum(w.data(), x.data(), std::min(w.size(), x.size()), z);
}

inline CauchyPair cauchy_sum2(std::span<const double> w, std::span<const double> x,
                              std::complex<double> z) {
  return active().cauchy_sum2(w.data(), x.data(), std::min(w.size(), x.size()), z);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), std::min(a.size(), b.size()));
}

inline void square(std::span<const double> in, std::span<double> out) {
  active().square(in.data(), out.data(), std::min(in.size(), out.size()));
}

inline double sum_squares(std::span<const double> a) {
  return active().sum_squares(a.data(), a.size());
}

}  // namespace freevec::kernels
