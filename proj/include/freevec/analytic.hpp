#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "freevec/profile.hpp"
#include "freevec/quadrature.hpp"

namespace freevec {

// Conventions: G(z) = int mu(dx) / (x - z), so Im G > 0 for Im z > 0.

struct SolverOptions {
  double tol = 1e-12;           // fixed-point residual |m - I(z + t m)|
  int max_iterations = 400;     // per continuation level
  double initial_damping = 0.5;
  CauchyRule::Options quadrature{};
};

struct FixedPointResult {
  std::complex<double> value;
  double residual = 0.0;
  int iterations = 0;
};

/// Solver for m = int_0^1 dx / (a(x) - z - t m), the Stieltjes transform of
/// the limiting spectrum of A + H_t.
///
/// Damped fixed-point iteration with a Newton step tried first on every
/// iteration, continued in eta from far above the real axis down to the
/// requested point. Owns its quadrature rule, so one instance should not be
/// shared between threads.
class StieltjesSolver {
 public:
  StieltjesSolver(SpectralProfile profile, double t, SolverOptions options = {});

  /// Throws Error(domain) for Im z == 0, ConvergenceError when the residual
  /// does not reach options.tol.
  FixedPointResult solve(std::complex<double> z);

  /// Single continuation level started from `warm` (no eta ladder).
  FixedPointResult solve_from(std::complex<double> z, std::complex<double> warm);

  /// I(zeta) = int_0^1 dx / (a(x) - zeta) on the solver's own rule.
  std::complex<double> cauchy_integral(std::complex<double> zeta);

  const SpectralProfile& profile() const noexcept { return profile_; }
  double t() const noexcept { return t_; }
  const SolverOptions& options() const noexcept { return options_; }

 private:
  SpectralProfile profile_;
  double t_;
  SolverOptions options_;
  CauchyRule rule_;
};

std::complex<double> solve_fixed_point(const SpectralProfile& profile, double t,
                                       std::complex<double> z, const SolverOptions& options = {});

/// rho_t and H_{rho_t} at a real point, from G(lambda + i eta) extrapolated to eta = 0.
struct DensityLine {
  double lambda = 0.0;
  double rho = 0.0;
  double hilbert = 0.0;
  bool inside_support = false;
};

inline const std::vector<double>& default_eta_schedule() {
  static const std::vector<double> schedule{1e-2, 5e-3, 2.5e-3, 1.25e-3};
  return schedule;
}

/// Inside-support threshold on the extrapolated Im G / pi.
inline constexpr double kSupportThreshold = 1e-4;

struct BoundaryValue {
  DensityLine line;
  std::vector<std::complex<double>> raw;  // G(lambda + i eta_k) per schedule entry
};

/// Polynomial (Neville) extrapolation in eta over the schedule. Outside the
/// support rho is reported as 0 and hilbert as the real boundary value.
BoundaryValue boundary_value(StieltjesSolver& solver, double lambda,
                             std::span<const double> eta_schedule = default_eta_schedule());

DensityLine density_and_hilbert(const SpectralProfile& profile, double t, double lambda,
                                std::span<const double> eta_schedule = default_eta_schedule(),
                                const SolverOptions& options = {});

/// Grid solve exported as lambda, eta, reG, imG, rho, hilbert rows.
struct StieltjesSolution {
  double t = 0.0;
  std::string profile;
  std::vector<double> eta_schedule;
  std::vector<double> lambdas;
  std::vector<std::vector<std::complex<double>>> values;  // [lambda][eta]
  std::vector<DensityLine> lines;
  double worst_residual = 0.0;
};

StieltjesSolution solve_grid(const SpectralProfile& profile, double t, std::span<const double> lambdas,
                             std::span<const double> eta_schedule = default_eta_schedule(),
                             const SolverOptions& options = {});

struct Support {
  double lower;
  double upper;
};

/// Support of rho_t (single interval).
Support limiting_support(const SpectralProfile& profile, double t, const SolverOptions& options = {});

/// Theta^g(z) = int g(a(x)) dx / (a(x) - z - t G(z)).
std::complex<double> theta_limit(const SpectralProfile& profile, double t, std::complex<double> z,
                                 const Weight& g, const SolverOptions& options = {});

std::complex<double> theta_limit(StieltjesSolver& solver, std::complex<double> z, const Weight& g);

struct CdfOptions {
  double tol = 1e-8;        // relative tolerance of the outer integral
  unsigned max_depth = 12;
  SolverOptions solver{};
};

/// Limiting bivariate CDF Phi(lambda, alpha), computed by Stieltjes inversion
/// of Theta^g at the real axis with g = 1{a <= alpha}.
double cdf_limit(const SpectralProfile& profile, double t, double lambda, double alpha,
                 const CdfOptions& options = {});

/// lambda with Phi(lambda, +inf) = q: the location of level q of rho_t.
double limiting_quantile(const SpectralProfile& profile, double t, double q,
                         const SolverOptions& options = {});

// Semicircle closed forms. The initial semicircle has the given radius
// (variance radius^2 / 4); after time t its variance is radius^2/4 + t.

struct SemicircleValues {
  double rho;
  double hilbert;
};

SemicircleValues semicircle_closed_forms(double t, double lambda, double radius = 2.0);
/// Closed-form DensityLine; inside_support is false on and beyond the edges.
DensityLine semicircle_density(double t, double lambda, double radius = 2.0);
std::complex<double> semicircle_stieltjes(double t, std::complex<double> z, double radius = 2.0);
double semicircle_support_radius(double t, double radius = 2.0);

}  // namespace freevec
