#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "freevec/profile.hpp"

namespace freevec {

/// Bounded real weight g(alpha) on the initial spectrum, with the points where
/// it may jump. An empty function means g = 1.
struct Weight {
  std::function<double(double)> fn;
  std::vector<double> breakpoints;
  bool zero = false;

  static Weight one() { return {}; }
  static Weight none() { return {{}, {}, true}; }
  static Weight indicator_below(double alpha);
  static Weight function(std::function<double(double)> g, std::vector<double> breakpoints = {});

  bool is_one() const noexcept { return !zero && !fn; }
  double operator()(double alpha) const {
    if (zero) return 0.0;
    return fn ? fn(alpha) : 1.0;
  }
};

/// Adaptive Gauss-Kronrod (7/15) panel rule for
///
///     I(zeta) = int_0^1 g(a(x)) dx / (a(x) - zeta)
///
/// Profile values at the nodes are cached per panel, and the panel set only
/// grows: repeated calls at nearby zeta (fixed-point iterations, continuation
/// in eta) reuse the refinement already done. Not thread-safe; each solver owns
/// its rules.
class CauchyRule {
 public:
  struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    std::size_t initial_panels = 32;
    std::size_t max_panels = 20000;
  };

  struct Result {
    std::complex<double> value;       // I(zeta)
    std::complex<double> derivative;  // dI/dzeta = int g dx / (a - zeta)^2
    double error = 0.0;               // sum of |K15 - G7| over panels
  };

  CauchyRule(const SpectralProfile& profile, Weight g);
  CauchyRule(const SpectralProfile& profile, Weight g, Options options);

  Result integrate(std::complex<double> zeta);

  std::size_t panels() const noexcept { return panels_.size(); }
  const Options& options() const noexcept { return options_; }

 private:
  static constexpr std::size_t kNodes = 15;
  struct Panel {
    double lo, hi;
    std::array<double, kNodes> a;   // a(x) at the Kronrod nodes
    std::array<double, kNodes> wk;  // Kronrod weights * half-width * g
    std::array<double, kNodes> wg;  // Gauss weights (zero at Kronrod-only nodes)
  };

  Panel make_panel(double lo, double hi) const;

  SpectralProfile profile_;
  Weight g_;
  Options options_;
  std::vector<Panel> panels_;
};

/// Adaptive Gauss-Kronrod quadrature of a real integrand (relative tolerance).
template <class F>
double integrate_real(F&& f, double lo, double hi, double tol = 1e-10,
                      unsigned max_depth = 15, double* error = nullptr) {
  if (!(hi > lo)) return 0.0;
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      std::forward<F>(f), lo, hi, max_depth, tol, &err);
  if (error) *error = err;
  return v;
}

}  // namespace freevec
