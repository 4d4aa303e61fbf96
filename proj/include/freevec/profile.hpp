#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace freevec {

/// Limiting allocation a(x) of the initial spectrum on [0, 1]: a strictly
/// increasing quantile function with its inverse and derivative.
///
/// Immutable after construction. Strict monotonicity and the inverse identity
/// are validated on a probe grid when the profile is built.
class SpectralProfile {
 public:
  enum class Kind { linear, uniform_gap, semicircle_quantile, tabulated };

  /// a(x) = lo + (hi - lo) x.
  static SpectralProfile linear(double lo = 0.0, double hi = 1.0);
  /// Equispaced levels of the given width centred at zero: a(x) = width (x - 1/2).
  static SpectralProfile uniform_gap(double width);
  /// Quantile of the Wigner semicircle of the given radius (GOE limit for radius 2).
  static SpectralProfile semicircle_quantile(double radius = 2.0);
  /// Monotone piecewise-cubic interpolant through (x_k, a_k); x must start at 0
  /// and end at 1, a strictly increasing.
  static SpectralProfile tabulated(std::vector<double> x, std::vector<double> a);
  /// Two-column CSV (x, a) with a header row.
  static SpectralProfile from_csv(const std::filesystem::path& path);

  Kind kind() const noexcept { return kind_; }
  /// Human readable description, e.g. "semicircle-quantile(radius=2)".
  std::string describe() const;

  /// True when a'(x) diverges at x = 0 or 1.
  bool edge_singular() const noexcept { return kind_ == Kind::semicircle_quantile; }

  double lower() const noexcept { return lo_; }   // a(0)
  double upper() const noexcept { return hi_; }   // a(1)
  double radius() const noexcept { return radius_; }

  double eval(double x) const;
  double inverse(double alpha) const;
  double derivative(double x) const;
  /// rho_0(alpha) = 1 / a'(a^{-1}(alpha)).
  double induced_density(double alpha) const;

  /// Clamped inverse: 0 below a(0), 1 above a(1). The CDF of rho_0.
  double cdf(double alpha) const;

  const std::vector<double>& table_x() const noexcept { return tx_; }
  const std::vector<double>& table_a() const noexcept { return ta_; }

  /// Distance from {0, 1} inside which edge-singular profiles refuse a'(x).
  static constexpr double kEdgeGuard = 1e-6;

 private:
  SpectralProfile() = default;
  void validate() const;

  double eval_unchecked(double x) const;
  double derivative_unchecked(double x) const;
  double semicircle_inverse_cdf(double x) const;
  std::size_t segment(double x) const;

  Kind kind_ = Kind::linear;
  double lo_ = 0.0;
  double hi_ = 1.0;
  double radius_ = 0.0;
  std::vector<double> tx_, ta_, td_;  // tabulated nodes, values, derivatives
};

}  // namespace freevec
