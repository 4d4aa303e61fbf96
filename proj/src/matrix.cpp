#include "freevec/matrix.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <lapacke.h>

#include "freevec/error.hpp"

namespace freevec {

SymmetricMatrix::SymmetricMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw Error(ErrorKind::invalid_argument, "symmetric matrix must be square");
  }
  if (entries_.rows() < 2) {
    throw Error(ErrorKind::invalid_argument, "symmetric matrix needs n >= 2");
  }
  const Eigen::Index n = entries_.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      if (entries_(i, j) != entries_(j, i)) {
        throw Error(ErrorKind::invalid_argument,
                    "matrix is not symmetric at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
}

SymmetricMatrix SymmetricMatrix::diagonal(std::span<const double> values) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(values.size()),
                                            static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = values[i];
  }
  return SymmetricMatrix(std::move(m));
}

SymmetricMatrix SymmetricMatrix::operator+(const SymmetricMatrix& other) const {
  if (size() != other.size()) {
    throw Error(ErrorKind::dimension_mismatch, "matrix sizes differ");
  }
  return SymmetricMatrix(Unchecked{}, entries_ + other.entries_);
}

SymmetricMatrix SymmetricMatrix::scaled(double factor) const {
  return SymmetricMatrix(Unchecked{}, entries_ * factor);
}

EigenSystem EigenSystem::diagonal(std::span<const double> values) {
  EigenSystem es;
  es.values = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  es.vectors = Eigen::MatrixXd::Identity(es.values.size(), es.values.size());
  return es;
}

SymmetricMatrix build_diagonal_from_profile(const SpectralProfile& profile, std::size_t n) {
  if (n < 2) throw Error(ErrorKind::invalid_argument, "dimension must be >= 2");
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = profile.eval((static_cast<double>(i) + 0.5) / static_cast<double>(n));
  }
  return SymmetricMatrix::diagonal(diag);
}

SymmetricMatrix sample_goe(std::size_t n, double variance_scale, RngStream& rng) {
  if (n < 2) throw Error(ErrorKind::invalid_argument, "dimension must be >= 2");
  if (!(variance_scale > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "GOE variance scale must be positive");
  }
  const double off = std::sqrt(variance_scale / static_cast<double>(n));
  const double diag = std::sqrt(2.0 * variance_scale / static_cast<double>(n));
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd m(N, N);
  for (Eigen::Index i = 0; i < N; ++i) {
    m(i, i) = diag * rng.normal();
    for (Eigen::Index j = i + 1; j < N; ++j) {
      const double v = off * rng.normal();
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return SymmetricMatrix(std::move(m));
}

SymmetricMatrix sample_brownian_increment(std::size_t n, double t, RngStream& rng) {
  if (!(t > 0.0)) {
    throw Error(ErrorKind::invalid_time, "Brownian increment needs t > 0, got " + std::to_string(t));
  }
  return sample_goe(n, t, rng);
}

namespace {

Eigen::VectorXd run_syevd(Eigen::MatrixXd& a, char jobz) {
  const auto n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXd w(a.rows());
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, jobz, 'U', n, a.data(), n, w.data());
  if (info != 0) {
    throw Error(ErrorKind::decomposition_failed,
                "symmetric eigensolver failed (info = " + std::to_string(info) + ")");
  }
  return w;
}

}  // namespace

EigenSystem eigen_decompose(const SymmetricMatrix& m) {
  EigenSystem es;
  es.vectors = m.entries();
  es.values = run_syevd(es.vectors, 'V');
  return es;
}

Eigen::VectorXd eigenvalues(const SymmetricMatrix& m) {
  Eigen::MatrixXd work = m.entries();
  return run_syevd(work, 'N');
}

Eigen::MatrixXd overlap_matrix(const EigenSystem& basis0, const EigenSystem& basist) {
  if (basis0.size() != basist.size() || basis0.vectors.rows() != basist.vectors.rows()) {
    throw Error(ErrorKind::dimension_mismatch, "overlap_matrix: bases have different dimensions");
  }
  return basist.vectors.transpose() * basis0.vectors;
}

}  // namespace freevec
