#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "freevec/accumulator.hpp"
#include "freevec/matrix.hpp"
#include "freevec/montecarlo.hpp"
#include "freevec/profile.hpp"

namespace freevec {

/// Initial window [gamma_minus, gamma_plus]; perturbed window widened by delta
/// on both sides. Intervals are closed.
struct WindowSpec {
  double gamma_minus = -1.0;
  double gamma_plus = 1.0;
  double delta = 0.2;

  /// Throws Error(invalid_argument) unless gamma_minus < gamma_plus and delta >= 0.
  void validate() const;
  bool initial_contains(double a) const noexcept { return a >= gamma_minus && a <= gamma_plus; }
  bool perturbed_contains(double l) const noexcept {
    return l >= gamma_minus - delta && l <= gamma_plus + delta;
  }
};

/// Q x P block of <psi_k^t | phi_j>: rows are perturbed vectors with
/// eigenvalue in the widened window, columns initial vectors in the window.
struct OverlapBlock {
  Eigen::MatrixXd block;
  std::vector<std::size_t> rows;     // 0-based perturbed indices
  std::vector<std::size_t> columns;  // 0-based initial indices
};

/// Throws Error(empty_window) when either selection is empty.
OverlapBlock build_overlap_block(const EigenSystem& basis0, const EigenSystem& basist, const WindowSpec& window);

/// Same block for a Monte Carlo sample, whose initial basis is the identity.
OverlapBlock build_overlap_block(const Sample& sample, const WindowSpec& window);

struct SubspaceReport {
  std::size_t P = 0;
  std::size_t Q = 0;
  std::vector<double> singular_values;  // descending, P entries (zero padded when Q < P)
  double distance = 0.0;                // +inf when rank deficient
  bool rank_deficient = false;
};

/// Singular values below this count as zero.
inline constexpr double kSingularFloor = 1e-14;

SubspaceReport make_report(const OverlapBlock& block);

/// -(1/P) sum ln s_k over P values; +inf if any s_k <= kSingularFloor.
double distance(std::span<const double> singular_values, std::size_t P);

/// -ln det(G^T G) / (2P) through a Cholesky factor; +inf if G^T G is singular.
double distance_from_determinant(const Eigen::MatrixXd& block);

/// (t / (2 int_in rho_0)) int_{in} int_{out} rho_0(x) rho_0(y) / (x - y)^2,
/// integrated in quantile coordinates. Throws Error(divergent_integral) when
/// delta <= 0.
double predicted_distance(double t, const WindowSpec& window, const SpectralProfile& rho0,
                          double tol = 1e-8);

struct GramPrediction {
  double diagonal;      // prediction of (G^T G)_ii
  double offdiag_bound; // bound on |(G^T G)_ij|
};

/// Throws Error(domain) when a_i or a_j lies outside the initial window and
/// Error(divergent_integral) when delta <= 0.
GramPrediction gram_entry_predictions(double t, double a_i, double a_j, const WindowSpec& window,
                                      const SpectralProfile& rho0, double tol = 1e-10);

struct SubspaceExperiment {
  WindowSpec window;
  MomentAccumulator distance;  // finite samples only
  std::uint64_t samples = 0;
  std::uint64_t P_total = 0;
  std::uint64_t Q_total = 0;
  std::uint64_t rank_deficient = 0;

  double mean_P() const noexcept { return samples ? double(P_total) / double(samples) : 0.0; }
  double mean_Q() const noexcept { return samples ? double(Q_total) / double(samples) : 0.0; }
  void merge(const SubspaceExperiment& other);
};

SubspaceExperiment run_subspace_experiment(const ExperimentConfig& config, const WindowSpec& window);

}  // namespace freevec
