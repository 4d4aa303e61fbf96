#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "doctest.h"

#include "freevec/analytic.hpp"
#include "freevec/error.hpp"

using namespace freevec;
using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

namespace {

const SpectralProfile& goe() {
  static const SpectralProfile p = SpectralProfile::semicircle_quantile(2.0);
  return p;
}

// Semicircle of variance s: (-z + sqrt(z^2 - 4s)) / (2s) on the branch with Im > 0.
cplx quadratic_oracle(cplx z, double s) {
  const cplx r = std::sqrt(z * z - 4.0 * s);
  const cplx a = (-z + r) / (2.0 * s), b = (-z - r) / (2.0 * s);
  return a.imag() * z.imag() > 0 ? a : b;
}

}  // namespace

TEST_CASE("t = 0 reduces to quadrature") {
  const auto p = SpectralProfile::linear();
  for (cplx z : {cplx(0.5, 0.3), cplx(-1.0, 2.0), cplx(0.2, -0.1)}) {
    const cplx want = std::log(1.0 - z) - std::log(-z);
    CHECK(std::abs(solve_fixed_point(p, 0.0, z) - want) <= 1e-12);
  }
}

TEST_CASE("point mass at zero: quadratic oracle") {
  // The semicircle profile of vanishing radius is not admissible, so compare
  // the closed form with radius 0 to the quadratic formula directly, and the
  // solver with a small-radius profile to its own closed form.
  const cplx m = semicircle_stieltjes(1.0, cplx(0, 1), 0.0);
  CHECK(m.real() == doctest::Approx(0.0));
  CHECK(m.imag() == doctest::Approx((std::sqrt(5.0) - 1.0) / 2.0).epsilon(1e-14));
  CHECK(std::abs(m - quadratic_oracle(cplx(0, 1), 1.0)) < 1e-14);
  const auto tiny = SpectralProfile::semicircle_quantile(1e-3);
  CHECK(std::abs(solve_fixed_point(tiny, 1.0, cplx(0, 1)) - semicircle_stieltjes(1.0, cplx(0, 1), 1e-3)) < 1e-11);
}

TEST_CASE("GOE profile near the real axis at t = 1") {
  const cplx m = solve_fixed_point(goe(), 1.0, cplx(0.0, 1e-6));
  CHECK(std::abs(m.real()) < 1e-9);
  CHECK(std::abs(m.imag() - std::sqrt(2.0) / 2.0) < 1e-5);
}

TEST_CASE("solver contract: domain, Herglotz, residual, conjugation") {
  StieltjesSolver s(goe(), 1.0);
  CHECK_THROWS_AS(s.solve(cplx(0.3, 0.0)), Error);
  for (double lam : {-3.5, -1.0, 0.0, 0.4, 2.7, 6.0}) {
    for (double eta : {1.0, 1e-2, 1e-4}) {
      const FixedPointResult r = s.solve(cplx(lam, eta));
      CHECK(r.value.imag() > 0);
      CHECK(r.residual <= 1e-12);
      CHECK(std::abs(r.value - quadratic_oracle(cplx(lam, eta), 2.0)) < 1e-10);
      const cplx lo = s.solve(cplx(lam, -eta)).value;
      CHECK(std::abs(lo - std::conj(r.value)) < 1e-15);
    }
  }
  CHECK_THROWS_AS(StieltjesSolver(goe(), -1.0), Error);
}

TEST_CASE("far-field asymptotic |G + 1/z| <= 2/|z|^2") {
  const auto lin = SpectralProfile::linear();
  for (const SpectralProfile* p : {&goe(), &lin}) {
    for (double t : {0.0, 0.5, 2.0}) {
      const double radius = std::max(std::abs(p->lower()), std::abs(p->upper())) + 2 * std::sqrt(t);
      for (double arg : {0.3, 1.5, 2.8}) {
        const cplx z = std::polar(10.0 * radius + 1.0, arg);
        const cplx g = solve_fixed_point(*p, t, z);
        CHECK(std::abs(g + 1.0 / z) <= 2.0 / std::norm(z));
      }
    }
  }
}

TEST_CASE("density and Hilbert transform: examples") {
  const DensityLine d0 = density_and_hilbert(goe(), 1.0, 0.0);
  CHECK(d0.inside_support);
  CHECK(std::abs(d0.rho - std::sqrt(2.0) / (2 * kPi)) < 1e-8);
  CHECK(std::abs(d0.hilbert) < 1e-8);
  const DensityLine d1 = density_and_hilbert(goe(), 1.0, 1.0);
  CHECK(std::abs(d1.hilbert + 0.25) < 1e-8);
  const DensityLine out = density_and_hilbert(goe(), 1.0, 5.0);
  CHECK_FALSE(out.inside_support);
  CHECK(out.rho == 0.0);
  CHECK(std::abs(out.hilbert - semicircle_closed_forms(1.0, 5.0).hilbert) < 1e-8);
  CHECK_FALSE(density_and_hilbert(SpectralProfile::linear(), 0.5, -4.0).inside_support);
}

TEST_CASE("closed forms: examples") {
  CHECK(semicircle_closed_forms(0.0, 0.0).rho == doctest::Approx(1.0 / kPi));
  CHECK(semicircle_closed_forms(1.0, 2.0 * std::sqrt(2.0)).rho == 0.0);
  CHECK(semicircle_closed_forms(1.0, -2.0 * std::sqrt(2.0)).rho == 0.0);
  CHECK(semicircle_closed_forms(3.0, 2.0).hilbert == doctest::Approx(-0.25));
  CHECK(semicircle_support_radius(3.0) == doctest::Approx(4.0));
  for (double lam : {-1.5, 0.2, 1.9}) {
    const cplx g = semicircle_stieltjes(1.0, cplx(lam, 1e-12));
    const auto cf = semicircle_closed_forms(1.0, lam);
    CHECK(g.imag() / kPi == doctest::Approx(cf.rho).epsilon(1e-9));
    CHECK(g.real() == doctest::Approx(cf.hilbert).epsilon(1e-9));
  }
}

TEST_CASE("solver and closed forms agree on a bulk grid") {
  for (double t : {0.1, 1.0, 4.0}) {
    CAPTURE(t);
    const double e = semicircle_support_radius(t);
    std::vector<double> grid;
    for (int k = 0; k < 200; ++k) grid.push_back(-0.9 * e + 1.8 * e * k / 199.0);
    const StieltjesSolution sol = solve_grid(goe(), t, grid);
    CHECK(sol.worst_residual <= 1e-10);
    double dr = 0, dh = 0;
    for (const DensityLine& d : sol.lines) {
      const auto cf = semicircle_closed_forms(t, d.lambda);
      dr = std::max(dr, std::abs(d.rho - cf.rho));
      dh = std::max(dh, std::abs(d.hilbert - cf.hilbert));
    }
    CHECK(dr <= 1e-6);
    CHECK(dh <= 1e-6);
    for (const auto& row : sol.values) {
      for (const cplx& g : row) CHECK(g.imag() > 0);
    }
  }
}

TEST_CASE("density normalization over the support") {
  const auto lin = SpectralProfile::linear();
  const auto gap = SpectralProfile::uniform_gap(2.0);
  for (const SpectralProfile* p : {&goe(), &lin, &gap}) {
    for (double t : {0.25, 1.0}) {
      CAPTURE(p->describe());
      CAPTURE(t);
      const Support s = limiting_support(*p, t);
      std::vector<double> grid;
      const int m = 2000;
      for (int k = 0; k <= m; ++k) grid.push_back(s.lower + (s.upper - s.lower) * k / m);
      const StieltjesSolution sol = solve_grid(*p, t, grid);
      double mass = 0;
      for (int k = 0; k < m; ++k) {
        mass += 0.5 * (sol.lines[k].rho + sol.lines[k + 1].rho) * (grid[k + 1] - grid[k]);
      }
      CHECK(std::abs(mass - 1.0) <= 1e-4);
      for (const DensityLine& d : sol.lines) CHECK(d.rho >= 0.0);
    }
  }
}

TEST_CASE("limiting support") {
  const Support g = limiting_support(goe(), 1.0);
  CHECK(g.upper == doctest::Approx(2 * std::sqrt(2.0)));
  const Support z = limiting_support(SpectralProfile::linear(), 0.0);
  CHECK(z.lower == 0.0);
  CHECK(z.upper == 1.0);
  // A semicircle profile takes the search path when written as a table.
  std::vector<double> xs, as;
  for (int k = 0; k <= 400; ++k) {
    xs.push_back(k / 400.0);
    as.push_back(goe().eval(k / 400.0));
  }
  const Support tab = limiting_support(SpectralProfile::tabulated(xs, as), 1.0);
  CHECK(std::abs(tab.upper - 2 * std::sqrt(2.0)) < 1e-2);
  CHECK(std::abs(tab.lower + 2 * std::sqrt(2.0)) < 1e-2);
}

TEST_CASE("Theta: reductions and the indicator split") {
  StieltjesSolver s(goe(), 1.0);
  for (cplx z : {cplx(0, 0.05), cplx(-1, 0.05), cplx(1.3, 0.2)}) {
    const cplx g = s.solve(z).value;
    CHECK(std::abs(theta_limit(s, z, Weight::one()) - g) <= 1e-12);
    CHECK(theta_limit(s, z, Weight::none()) == cplx(0, 0));
    const cplx below = theta_limit(s, z, Weight::indicator_below(0.0));
    const cplx above = theta_limit(s, z, Weight::function([](double a) { return a > 0 ? 1.0 : 0.0; }, {0.0}));
    CHECK(std::abs(below + above - g) <= 1e-10);
  }
  // At z = i eta the indicator of a <= 0 carries half of Im G (mirror symmetry
  // a -> -a maps the two halves onto conjugate-negated integrands).
  for (double eta : {0.05, 0.5}) {
    const cplx z(0, eta);
    const cplx g = s.solve(z).value;
    const cplx below = theta_limit(s, z, Weight::indicator_below(0.0));
    CHECK(std::abs(below.imag() - 0.5 * g.imag()) <= 1e-10);
  }
  CHECK_THROWS_AS(theta_limit(goe(), 1.0, cplx(0.1, 0.0), Weight::one()), Error);
}

TEST_CASE("Theta with g = 1 at t = 0 is the initial Stieltjes transform") {
  const cplx z(0.3, 0.4);
  CHECK(std::abs(theta_limit(goe(), 0.0, z, Weight::one()) - semicircle_stieltjes(0.0, z)) < 1e-11);
}

TEST_CASE("CDF limit: limits, marginal and monotonicity") {
  CHECK(std::abs(cdf_limit(goe(), 1.0, 10.0, 10.0) - 1.0) <= 1e-3);
  CHECK(cdf_limit(goe(), 1.0, -10.0, 1.0) == 0.0);
  CHECK(cdf_limit(goe(), 1.0, 1.0, -10.0) == 0.0);
  CHECK(std::abs(cdf_limit(goe(), 1.0, 0.0, kInf) - 0.5) <= 1e-3);
  CHECK(cdf_limit(goe(), 0.0, 0.3, 0.1) == doctest::Approx(goe().cdf(0.1)));
  double prev = 0;
  for (double l : {-2.0, -1.0, 0.0, 0.5, 1.5, 2.5}) {
    const double v = cdf_limit(goe(), 1.0, l, 0.3);
    CHECK(v >= prev - 1e-9);
    prev = v;
  }
  prev = 0;
  for (double a : {-1.5, -0.5, 0.0, 0.7, 1.9}) {
    const double v = cdf_limit(goe(), 1.0, 0.4, a);
    CHECK(v >= prev - 1e-9);
    prev = v;
  }
}

TEST_CASE("CDF limit marginal against a quadrature of the closed-form density") {
  boost::math::quadrature::tanh_sinh<double> ts;
  const double e = semicircle_support_radius(1.0);
  for (double l : {-1.7, 0.6, 2.2}) {
    const double want = ts.integrate([](double x) { return semicircle_closed_forms(1.0, x).rho; }, -e, l);
    CHECK(std::abs(cdf_limit(goe(), 1.0, l, kInf) - want) <= 1e-7);
  }
}

TEST_CASE("numerical derivative of the CDF marginal recovers rho") {
  const double h = 0.05;
  for (double l : {-1.5, -0.5, 0.0, 1.0, 2.0}) {
    const double d = (cdf_limit(goe(), 1.0, l + h / 2, kInf) - cdf_limit(goe(), 1.0, l - h / 2, kInf)) / h;
    // Bin average of rho over [l - h/2, l + h/2] against the point value.
    CHECK(std::abs(d - semicircle_closed_forms(1.0, l).rho) <= 1e-3);
  }
}

TEST_CASE("limiting quantile") {
  CHECK(std::abs(limiting_quantile(goe(), 1.0, 0.5)) < 1e-12);
  const auto lin = SpectralProfile::linear();
  const double q = limiting_quantile(lin, 0.5, 0.3);
  CHECK(std::abs(cdf_limit(lin, 0.5, q, kInf) - 0.3) < 1e-8);
  CHECK(limiting_quantile(lin, 0.0, 0.25) == doctest::Approx(0.25));
  CHECK_THROWS_AS(limiting_quantile(lin, 0.5, 1.0), Error);
}
