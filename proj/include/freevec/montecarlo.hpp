#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <span>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "freevec/accumulator.hpp"
#include "freevec/error.hpp"
#include "freevec/matrix.hpp"
#include "freevec/profile.hpp"
#include "freevec/quadrature.hpp"

namespace freevec {

struct GoeInitial {
  double scale = 1.0;  // A is GOE with off-diagonal variance scale/n
};

struct ProfileInitial {
  SpectralProfile profile;  // A = diag(a((i - 1/2)/n))
};

struct ExperimentConfig {
  std::size_t n = 400;
  double t = 1.0;
  std::size_t samples = 1000;
  std::variant<GoeInitial, ProfileInitial> initial = GoeInitial{};
  std::vector<std::size_t> target_indices;  // 1-based
  std::uint64_t master_seed = 7;
  std::size_t binning = 1;  // odd window in index units
  std::size_t workers = 0;  // 0: available parallelism

  /// Throws Error(config) on inconsistent settings.
  void validate() const;
  std::string describe_initial() const;
};

/// One Monte Carlo draw, written in the eigenbasis of A: `a` holds the sorted
/// initial eigenvalues and `mt` the eigensystem of M_t in that basis, so
/// mt.vectors(j, i) = <phi_j | psi_i^t>.
///
/// For a GOE initial matrix A = O diag(a) O^T with O Haar and independent of
/// H_t, so O^T M_t O = diag(a) + H' with H' again GOE; the draw samples this
/// form directly.
struct Sample {
  std::size_t index = 0;
  Eigen::VectorXd a;
  EigenSystem mt;
};

/// Deterministic in (master_seed, index). With `vectors` false only
/// eigenvalues are computed and mt.vectors is empty.
Sample draw_sample(const ExperimentConfig& config, std::size_t index, bool vectors = true);

std::size_t resolve_workers(std::size_t requested);

/// Runs `fn(sample, acc)` over all samples. Samples are split into contiguous
/// blocks, one per worker, and block accumulators are merged in block order.
/// The accumulator type needs merge(const Acc&). Failures are rethrown for the
/// lowest failing sample index, with that index in the message.
template <class Acc, class Fn>
Acc run_samples(const ExperimentConfig& config, const Acc& empty, Fn fn, bool vectors = true) {
  config.validate();
  const std::size_t total = config.samples;
  const std::size_t workers = std::min(resolve_workers(config.workers), total);
  std::vector<Acc> parts(workers, empty);
  std::vector<std::size_t> failed_at(workers, total);
  std::vector<std::exception_ptr> failure(workers);

  const auto work = [&](std::size_t w) {
    const std::size_t lo = total * w / workers;
    const std::size_t hi = total * (w + 1) / workers;
    for (std::size_t s = lo; s < hi; ++s) {
      try {
        const Sample sample = draw_sample(config, s, vectors);
        fn(sample, parts[w]);
      } catch (...) {
        failed_at[w] = s;
        failure[w] = std::current_exception();
        return;
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& th : threads) th.join();
  }
  for (std::size_t w = 0; w < workers; ++w) {
    if (!failure[w]) continue;
    const std::string where = "sample " + std::to_string(failed_at[w]) + ": ";
    try {
      std::rethrow_exception(failure[w]);
    } catch (const Error& e) {
      throw Error(e.kind(), where + e.what());
    } catch (const std::exception& e) {
      throw Error(ErrorKind::decomposition_failed, where + e.what());
    }
  }
  Acc out = empty;
  for (const Acc& p : parts) out.merge(p);
  return out;
}

/// Squared overlaps |<psi_i | phi_j>|^2 for the target rows i, plus a_j.
class OverlapAccumulator {
 public:
  OverlapAccumulator(std::vector<std::size_t> targets, std::size_t n);

  /// Throws Error(domain) if a target row does not sum to 1 within 1e-10.
  void add(const Sample& sample);
  void merge(const OverlapAccumulator& other);

  const std::vector<std::size_t>& targets() const noexcept { return targets_; }
  std::size_t n() const noexcept { return n_; }
  std::uint64_t count() const noexcept { return locations_[0].count(); }
  const MomentAccumulator& cell(std::size_t row, std::size_t j) const { return cells_[row * n_ + j]; }
  const MomentAccumulator& location(std::size_t j) const { return locations_[j]; }

  bool operator==(const OverlapAccumulator& other) const noexcept = default;

  static constexpr double kRowTolerance = 1e-10;

 private:
  std::vector<std::size_t> targets_;
  std::size_t n_;
  MomentArray cells_;
  MomentArray locations_;
};

/// N E[<psi_i | phi_j>^2] against the mean a_j, one entry per rank j.
struct OverlapCurve {
  std::size_t index = 0;  // 1-based target i
  std::size_t n = 0;
  std::uint64_t samples = 0;
  std::vector<double> a;               // mean a_j
  std::vector<double> value;           // N * mean overlap
  std::vector<double> standard_error;  // N * standard error of the mean
};

OverlapCurve overlap_curve(const OverlapAccumulator& acc, std::size_t row);

/// One curve per target index, binned with config.binning.
std::vector<OverlapCurve> run_overlap_experiment(const ExperimentConfig& config);

/// Moving average over an odd window of ranks with reflection at both ends.
/// The averaging matrix is symmetric with unit row sums, so the total mass
/// sum_j value_j is preserved. Standard errors are combined as if
/// independent.
OverlapCurve bin_overlap_curve(const OverlapCurve& curve, std::size_t window);

struct ComplexEstimate {
  std::complex<double> z;
  std::complex<double> mean;
  std::complex<double> standard_error;  // per component
};

/// Per-sample Theta_N(z) = (1/N) sum_{i,j} <psi_i|phi_j>^2 g(a_j) / (lambda_i - z).
std::complex<double> theta_sample(const Sample& sample, std::complex<double> z, const Weight& g);

/// Same quantity through (1/N) Tr((M_t - z)^{-1} g(A)) with a dense complex LU solve.
std::complex<double> theta_via_resolvent(const Sample& sample, std::complex<double> z, const Weight& g);

/// Throws Error(domain) if any Im z == 0.
std::vector<ComplexEstimate> estimate_theta(const ExperimentConfig& config,
                                            std::span<const std::complex<double>> zs, const Weight& g);
ComplexEstimate estimate_theta(const ExperimentConfig& config, std::complex<double> z, const Weight& g);

/// Per-sample Phi_N(lambda, alpha) = (1/N) sum 1{lambda_i <= lambda} 1{a_j <= alpha} <psi_i|phi_j>^2.
double empirical_cdf_sample(const Sample& sample, double lambda, double alpha);

struct CdfEstimate {
  double lambda, alpha, mean, standard_error;
};

std::vector<CdfEstimate> empirical_cdf(const ExperimentConfig& config,
                                       std::span<const std::pair<double, double>> points);
CdfEstimate empirical_cdf(const ExperimentConfig& config, double lambda, double alpha);

/// Mean over samples of ((M_t - z)^{-1})_{jj} in the eigenbasis of A, with
/// mean a_j.
struct ResolventCurve {
  std::complex<double> z;
  std::vector<double> a;
  std::vector<std::complex<double>> mean;
  std::vector<std::complex<double>> standard_error;
};

std::vector<std::complex<double>> resolvent_diagonal_sample(const Sample& sample, std::complex<double> z);
ResolventCurve resolvent_diagonal(const ExperimentConfig& config, std::complex<double> z);

}  // namespace freevec
