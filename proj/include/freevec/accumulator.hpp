#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace freevec {

/// Fixed-point sum with quantum 2^-80, so addition and merging are exact
/// integer operations: any grouping of the same terms gives the same bits.
/// Terms are rounded to the quantum once, on entry. |x| <= 1024 per term.
class ExactSum {
 public:
  static constexpr int kFractionBits = 80;
  static constexpr double kMaxMagnitude = 1024.0;

  void add(double x);
  void merge(const ExactSum& other) noexcept { acc_ += other.acc_; }
  double value() const noexcept;

  bool operator==(const ExactSum& other) const noexcept { return acc_ == other.acc_; }

 private:
  __int128 acc_ = 0;
};

/// Count, sum and sum of squares of a scalar.
class MomentAccumulator {
 public:
  void add(double x);
  void merge(const MomentAccumulator& other) noexcept;

  std::uint64_t count() const noexcept { return count_; }
  double sum() const noexcept { return sum_.value(); }
  double mean() const noexcept;
  /// Unbiased sample variance; 0 for fewer than two samples.
  double variance() const noexcept;
  /// sqrt(variance / count), the 1-sigma error of the mean.
  double standard_error() const noexcept;

  bool operator==(const MomentAccumulator& other) const noexcept = default;

 private:
  std::uint64_t count_ = 0;
  ExactSum sum_;
  ExactSum sum_sq_;
};

/// Fixed-size array of moment accumulators.
class MomentArray {
 public:
  MomentArray() = default;
  explicit MomentArray(std::size_t size) : cells_(size) {}

  std::size_t size() const noexcept { return cells_.size(); }
  void add(std::size_t k, double x) { cells_[k].add(x); }
  const MomentAccumulator& operator[](std::size_t k) const { return cells_[k]; }
  /// Throws Error(dimension_mismatch) for arrays of different size.
  void merge(const MomentArray& other);

  bool operator==(const MomentArray& other) const noexcept = default;

 private:
  std::vector<MomentAccumulator> cells_;
};

}  // namespace freevec
