#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"

#include "freevec/kernels.hpp"

using namespace freevec;

namespace {

struct Inputs {
  std::vector<double> w, x;
};

Inputs random_inputs(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Inputs in{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    in.w[k] = std::abs(u(g));
    in.x[k] = u(g);
  }
  return in;
}

double rel(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

}  // namespace

TEST_CASE("scalar table is always available") {
  CHECK(kernels::supported(kernels::Isa::scalar));
  CHECK(kernels::table(kernels::Isa::scalar).isa == kernels::Isa::scalar);
  CHECK(std::string(kernels::isa_name(kernels::Isa::avx2)) == "avx2");
}

TEST_CASE("scalar reference against direct formulas") {
  const Inputs in = random_inputs(37, 1);
  const std::complex<double> z(0.3, 0.02);
  std::complex<double> s1, s2;
  double d = 0.0;
  for (std::size_t k = 0; k < in.w.size(); ++k) {
    s1 += in.w[k] / (in.x[k] - z);
    s2 += in.w[k] / ((in.x[k] - z) * (in.x[k] - z));
    d += in.w[k] * in.x[k];
  }
  const auto& t = kernels::table(kernels::Isa::scalar);
  CHECK(rel(t.cauchy_sum(in.w.data(), in.x.data(), in.w.size(), z), s1) < 1e-13);
  const kernels::CauchyPair p = t.cauchy_sum2(in.w.data(), in.x.data(), in.w.size(), z);
  CHECK(rel(p.first, s1) < 1e-13);
  CHECK(rel(p.second, s2) < 1e-12);
  CHECK(std::abs(t.dot(in.w.data(), in.x.data(), in.w.size()) - d) < 1e-13);
}

#if defined(FREEVEC_HAVE_AVX2)
TEST_CASE("avx2 kernels match the scalar reference") {
  if (!kernels::supported(kernels::Isa::avx2)) {
    MESSAGE("CPU lacks AVX2/FMA; equivalence test skipped");
    return;
  }
  const auto& s = kernels::table(kernels::Isa::scalar);
  const auto& v = kernels::table(kernels::Isa::avx2);
  for (std::size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 67, 400, 1001}) {
    CAPTURE(n);
    const Inputs in = random_inputs(n, 100 + n);
    for (std::complex<double> z : {std::complex<double>(0.1, 1e-3), std::complex<double>(-1.5, 0.7),
                                   std::complex<double>(0.0, -0.05)}) {
      CHECK(rel(v.cauchy_sum(in.w.data(), in.x.data(), n, z), s.cauchy_sum(in.w.data(), in.x.data(), n, z)) <
            1e-12);
      const auto a = v.cauchy_sum2(in.w.data(), in.x.data(), n, z);
      const auto b = s.cauchy_sum2(in.w.data(), in.x.data(), n, z);
      CHECK(rel(a.first, b.first) < 1e-12);
      CHECK(rel(a.second, b.second) < 1e-12);
    }
    CHECK(std::abs(v.dot(in.w.data(), in.x.data(), n) - s.dot(in.w.data(), in.x.data(), n)) < 1e-12);
    CHECK(std::abs(v.sum_squares(in.x.data(), n) - s.sum_squares(in.x.data(), n)) < 1e-12 * (1.0 + n));
    std::vector<double> o1(n), o2(n);
    v.square(in.x.data(), o1.data(), n);
    s.square(in.x.data(), o2.data(), n);
    CHECK(o1 == o2);  // a single rounded multiply either way
  }
}
#endif

TEST_CASE("active table is one of the supported ones") {
  const auto& a = kernels::active();
  CHECK(kernels::supported(a.isa));
}
