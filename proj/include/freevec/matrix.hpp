#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "freevec/profile.hpp"
#include "freevec/rng.hpp"

namespace freevec {

/// Dense real symmetric matrix. Symmetry is exact: entries(i,j) == entries(j,i).
class SymmetricMatrix {
 public:
  /// Throws Error(invalid_argument) if `entries` is not square, exactly
  /// symmetric, or smaller than 2x2.
  explicit SymmetricMatrix(Eigen::MatrixXd entries);

  static SymmetricMatrix diagonal(std::span<const double> values);

  std::size_t size() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXd& entries() const noexcept { return entries_; }

  SymmetricMatrix operator+(const SymmetricMatrix& other) const;
  SymmetricMatrix scaled(double factor) const;

 private:
  struct Unchecked {};
  SymmetricMatrix(Unchecked, Eigen::MatrixXd entries) : entries_(std::move(entries)) {}

  Eigen::MatrixXd entries_;
};

/// Ascending eigenvalues with the matching orthonormal eigenvectors as columns.
struct EigenSystem {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;

  std::size_t size() const noexcept { return static_cast<std::size_t>(values.size()); }

  /// Eigensystem of diag(values): identity vectors. `values` must be ascending.
  static EigenSystem diagonal(std::span<const double> values);
};

/// diag(a((i - 1/2)/n)) for i = 1..n.
SymmetricMatrix build_diagonal_from_profile(const SpectralProfile& profile, std::size_t n);

/// GOE sample: off-diagonal variance scale/n, diagonal variance 2*scale/n.
/// Draws the upper triangle row by row from `rng`.
SymmetricMatrix sample_goe(std::size_t n, double variance_scale, RngStream& rng);

/// Symmetric Brownian increment H_t: same law as sample_goe(n, t, rng).
SymmetricMatrix sample_brownian_increment(std::size_t n, double t, RngStream& rng);

EigenSystem eigen_decompose(const SymmetricMatrix& m);

/// Eigenvalues only (ascending); cheaper than a full decomposition.
Eigen::VectorXd eigenvalues(const SymmetricMatrix& m);

/// Entry (i, j) is <psi_i | phi_j>, psi from `basist`, phi from `basis0`.
/// Columns are defined up to sign.
Eigen::MatrixXd overlap_matrix(const EigenSystem& basis0, const EigenSystem& basist);

}  // namespace freevec
