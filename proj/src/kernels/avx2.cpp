#include <immintrin.h>

#include "freevec/kernels.hpp"

namespace freevec::kernels::avx2 {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

std::complex<double> cauchy_sum(const double* w, const double* x, std::size_t n,
                                std::complex<double> z) {
  const __m256d zr = _mm256_set1_pd(z.real());
  const __m256d zi = _mm256_set1_pd(z.imag());
  const __m256d zi2 = _mm256_mul_pd(zi, zi);
  __m256d re = _mm256_setzero_pd();
  __m256d im = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + k), zr);
    const __m256d den = _mm256_fmadd_pd(d, d, zi2);
    const __m256d s = _mm256_div_pd(_mm256_loadu_pd(w + k), den);
    re = _mm256_fmadd_pd(s, d, re);
    im = _mm256_fmadd_pd(s, zi, im);
  }
  double sr = hsum(re);
  double si = hsum(im);
  const std::complex<double> tail = scalar::cauchy_sum(w + k, x + k, n - k, z);
  return {sr + tail.real(), si + tail.imag()};
}

CauchyPair cauchy_sum2(const double* w, const double* x, std::size_t n,
                       std::complex<double> z) {
  const __m256d zr = _mm256_set1_pd(z.real());
  const __m256d zi = _mm256_set1_pd(z.imag());
  const __m256d zi2 = _mm256_mul_pd(zi, zi);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  __m256d re1 = _mm256_setzero_pd(), im1 = _mm256_setzero_pd();
  __m256d re2 = _mm256_setzero_pd(), im2 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d wk = _mm256_loadu_pd(w + k);
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + k), zr);
    const __m256d inv = _mm256_div_pd(one, _mm256_fmadd_pd(d, d, zi2));
    const __m256d cr = _mm256_mul_pd(d, inv);
    const __m256d ci = _mm256_mul_pd(zi, inv);
    re1 = _mm256_fmadd_pd(wk, cr, re1);
    im1 = _mm256_fmadd_pd(wk, ci, im1);
    const __m256d sq_re = _mm256_fmsub_pd(cr, cr, _mm256_mul_pd(ci, ci));
    const __m256d sq_im = _mm256_mul_pd(two, _mm256_mul_pd(cr, ci));
    re2 = _mm256_fmadd_pd(wk, sq_re, re2);
    im2 = _mm256_fmadd_pd(wk, sq_im, im2);
  }
  CauchyPair out{{hsum(re1), hsum(im1)}, {hsum(re2), hsum(im2)}};
  const CauchyPair tail = scalar::cauchy_sum2(w + k, x + k, n - k, z);
  out.first += tail.first;
  out.second += tail.second;
  return out;
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4), acc1);
  }
  for (; k + 4 <= n; k += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
  }
  return hsum(_mm256_add_pd(acc0, acc1)) + scalar::dot(a + k, b + k, n - k);
}

void square(const double* in, double* out, std::size_t n) {
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d v = _mm256_loadu_pd(in + k);
    _mm256_storeu_pd(out + k, _mm256_mul_pd(v, v));
  }
  scalar::square(in + k, out + k, n - k);
}

double sum_squares(const double* a, std::size_t n) { return dot(a, a, n); }

}  // namespace freevec::kernels::avx2
