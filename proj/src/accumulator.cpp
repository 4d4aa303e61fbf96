#include "freevec/accumulator.hpp"

#include <cmath>
#include <string>

#include "freevec/error.hpp"

namespace freevec {

void ExactSum::add(double x) {
  if (!(std::abs(x) <= kMaxMagnitude)) {
    throw Error(ErrorKind::invalid_argument,
                "accumulated value out of range [-1024, 1024]: " + std::to_string(x));
  }
  acc_ += static_cast<__int128>(std::nearbyint(std::ldexp(x, kFractionBits)));
}

double ExactSum::value() const noexcept {
  return std::ldexp(static_cast<double>(acc_), -kFractionBits);
}

void MomentAccumulator::add(double x) {
  sum_.add(x);
  sum_sq_.add(x * x);
  ++count_;
}

void MomentAccumulator::merge(const MomentAccumulator& other) noexcept {
  count_ += other.count_;
  sum_.merge(other.sum_);
  sum_sq_.merge(other.sum_sq_);
}

double MomentAccumulator::mean() const noexcept {
  return count_ == 0 ? 0.0 : sum_.value() / static_cast<double>(count_);
}

double MomentAccumulator::variance() const noexcept {
  if (count_ < 2) return 0.0;
  const double n = static_cast<double>(count_);
  const double m = sum_.value() / n;
  const double v = (sum_sq_.value() - n * m * m) / (n - 1.0);
  return v > 0.0 ? v : 0.0;
}

double MomentAccumulator::standard_error() const noexcept {
  return count_ == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(count_));
}

void MomentArray::merge(const MomentArray& other) {
  if (other.cells_.size() != cells_.size()) {
    throw Error(ErrorKind::dimension_mismatch, "merging moment arrays of different size");
  }
  for (std::size_t k = 0; k < cells_.size(); ++k) cells_[k].merge(other.cells_[k]);
}

}  // namespace freevec
