#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "freevec/montecarlo.hpp"

namespace freevec {

/// Overlap-curve experiment against the GOE closed form: GOE initial matrix,
/// binned empirical curve compared on a band of a_j.
struct FigureSpec {
  std::size_t n = 400;
  double t = 1.0;
  std::size_t samples = 1000;
  std::vector<std::size_t> indices{200};  // 1-based
  std::uint64_t master_seed = 7;
  std::size_t binning = 5;
  std::size_t workers = 0;
  double band_lo = -1.8;
  double band_hi = 1.8;
  double rel_tol = 0.10;
  double peak_tol = 0.10;
  std::size_t min_samples = 200;  // below this the thresholds are not applied
};

struct FigureReport {
  std::size_t index = 0;
  double lambda = 0.0;          // predicted location of the index
  double peak_target = 0.0;
  OverlapCurve curve;           // binned empirical curve
  std::vector<double> predicted;
  double max_rel_error = 0.0;   // over the band
  double peak_location = 0.0;   // fitted empirical peak
  bool checked = false;         // thresholds applied
  bool pass = false;
};

/// Peak of a curve: argmax on a_j, refined by a least-squares parabola over
/// the points within `half_width` of it.
double fitted_peak(const std::vector<double>& a, const std::vector<double>& value, double half_width = 0.4);

/// `peak_targets` pairs with spec.indices.
std::vector<FigureReport> run_figure(const FigureSpec& spec, const std::vector<double>& peak_targets);

}  // namespace freevec
