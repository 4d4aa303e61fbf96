#include "freevec/kernels.hpp"

namespace freevec::kernels::scalar {

std::complex<double> cauchy_sum(const double* w, const double* x, std::size_t n,
                                std::complex<double> z) {
  const double zr = z.real();
  const double zi = z.imag();
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    // w / (d - i*zi) with d = x - zr
    const double d = x[k] - zr;
    const double s = w[k] / (d * d + zi * zi);
    re += s * d;
    im += s * zi;
  }
  return {re, im};
}

CauchyPair cauchy_sum2(const double* w, const double* x, std::size_t n,
                       std::complex<double> z) {
  const double zr = z.real();
  const double zi = z.imag();
  double re1 = 0.0, im1 = 0.0, re2 = 0.0, im2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = x[k] - zr;
    const double inv = 1.0 / (d * d + zi * zi);
    const double cr = d * inv;   // Re 1/(x - z)
    const double ci = zi * inv;  // Im 1/(x - z)
    re1 += w[k] * cr;
    im1 += w[k] * ci;
    re2 += w[k] * (cr * cr - ci * ci);
    im2 += w[k] * (2.0 * cr * ci);
  }
  return {{re1, im1}, {re2, im2}};
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

void square(const double* in, double* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = in[k] * in[k];
}

double sum_squares(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += a[k] * a[k];
  return s;
}

}  // namespace freevec::kernels::scalar
