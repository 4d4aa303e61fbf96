#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "freevec/analytic.hpp"
#include "freevec/matrix.hpp"
#include "freevec/profile.hpp"

namespace freevec {

enum class Regime { full, perturbative, cauchy, goe_closed_form };

/// "full", "perturbative", "cauchy", "goe-closed-form".
const char* regime_tag(Regime regime);
/// Inverse of regime_tag; "goe" is accepted for goe-closed-form.
Regime parse_regime(const std::string& tag);

/// Predicted N E[<psi_i^t | phi_j>^2] against a_j.
struct OverlapPrediction {
  double lambda_i = 0.0;
  std::vector<double> a_grid;
  std::vector<double> values;
  Regime regime = Regime::full;
};

/// First and second order coefficients of the perturbed eigenpair i of
/// A + sqrt(t) H_1. gamma has one entry per index, gamma[i] = 0.
struct PerturbationExpansion {
  double alpha_i = 0.0;
  double beta_i = 0.0;
  std::vector<double> gamma;
  double gamma_i = 0.0;
};

/// t / ((a_j - lambda_i - t H)^2 + t^2 pi^2 rho^2), with (rho, H) at lambda_i.
/// Throws Error(outside_support) when the density line has rho = 0.
double overlap_full(double t, double lambda_i, double a_j, const DensityLine& density);

/// Semicircle (GOE, radius 2) specialisation of overlap_full.
double overlap_goe(double t, double lambda_i, double a_j);

/// Lorentzian t / ((a_j - lambda)^2 + t^2).
double overlap_cauchy(double t, double lambda_i, double a_j);

/// nu_i(alpha) = rho_0(alpha) * overlap_full(t, lambda_i, alpha).
double ldos(const SpectralProfile& profile, double t, double lambda_i, double alpha,
            const DensityLine& density);

/// int nu_i(alpha) d alpha, computed as int_0^1 overlap_full(a(x)) dx.
double ldos_mass(const SpectralProfile& profile, double t, double lambda_i, const DensityLine& density,
                 double tol = 1e-10);

/// (t/n) / (a_i - a_j)^2. Throws Error(degenerate_gap) when a_i == a_j.
double perturbative_offdiag(double t, std::size_t n, double a_i, double a_j);

/// 1 - (t/n) sum_{j != i} 1/(a_i - a_j)^2. Indices are 1-based throughout.
double perturbative_diag(double t, std::size_t n, std::size_t i, std::span<const double> spectrum);

/// spectrum is the diagonal of A in its eigenbasis.
PerturbationExpansion perturbation_expansion(std::span<const double> spectrum, const SymmetricMatrix& h1,
                                             std::size_t i);

/// Location of index i (1-based) among n after time t: the level-(i-1/2)/n
/// quantile of rho_t.
double index_location(const SpectralProfile& profile, double t, std::size_t i, std::size_t n,
                      const SolverOptions& options = {});

/// Density line used by the full regime: closed form for the semicircle
/// profile, fixed-point solve otherwise.
DensityLine density_for(const SpectralProfile& profile, double t, double lambda,
                        const SolverOptions& options = {});

/// Evaluate one regime on a grid of a_j. Every regime reports N times the
/// expected overlap; the perturbative one is then t / (a_j - lambda_i)^2.
OverlapPrediction predict_curve(Regime regime, const SpectralProfile& profile, double t, double lambda_i,
                                std::span<const double> a_grid, const SolverOptions& options = {});

}  // namespace freevec
