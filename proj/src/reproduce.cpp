#include "freevec/reproduce.hpp"

#include <algorithm>
#include <cmath>

#include "freevec/predictions.hpp"

namespace freevec {

double fitted_peak(const std::vector<double>& a, const std::vector<double>& value, double half_width) {
  if (a.empty() || a.size() != value.size()) throw Error(ErrorKind::invalid_argument, "empty curve");
  const std::size_t k = static_cast<std::size_t>(std::max_element(value.begin(), value.end()) - value.begin());
  const double a0 = a[k];
  // Normal equations of v ~ c0 + c1 u + c2 u^2 with u = a - a0.
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  Eigen::Vector3d r = Eigen::Vector3d::Zero();
  std::size_t used = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double u = a[j] - a0;
    if (std::abs(u) > half_width) continue;
    const Eigen::Vector3d p(1.0, u, u * u);
    m += p * p.transpose();
    r += p * value[j];
    ++used;
  }
  if (used < 3) return a0;
  const Eigen::Vector3d c = m.ldlt().solve(r);
  if (!(c[2] < 0.0)) return a0;
  const double u = -c[1] / (2.0 * c[2]);
  return std::abs(u) <= half_width ? a0 + u : a0;
}

std::vector<FigureReport> run_figure(const FigureSpec& spec, const std::vector<double>& peak_targets) {
  if (peak_targets.size() != spec.indices.size()) {
    throw Error(ErrorKind::config, "one peak target per index is required");
  }
  ExperimentConfig cfg;
  cfg.n = spec.n;
  cfg.t = spec.t;
  cfg.samples = spec.samples;
  cfg.initial = GoeInitial{1.0};
  cfg.target_indices = spec.indices;
  cfg.master_seed = spec.master_seed;
  cfg.binning = spec.binning;
  cfg.workers = spec.workers;
  const std::vector<OverlapCurve> curves = run_overlap_experiment(cfg);
  const SpectralProfile goe = SpectralProfile::semicircle_quantile(2.0);

  std::vector<FigureReport> out;
  for (std::size_t k = 0; k < curves.size(); ++k) {
    FigureReport r;
    r.index = spec.indices[k];
    r.curve = curves[k];
    r.peak_target = peak_targets[k];
    r.lambda = index_location(goe, spec.t, r.index, spec.n);
    for (double a : r.curve.a) r.predicted.push_back(overlap_goe(spec.t, r.lambda, a));
    std::vector<double> band_a, band_v;
    for (std::size_t j = 0; j < r.curve.a.size(); ++j) {
      const double a = r.curve.a[j];
      if (a < spec.band_lo || a > spec.band_hi) continue;
      r.max_rel_error = std::max(r.max_rel_error, std::abs(r.curve.value[j] - r.predicted[j]) / r.predicted[j]);
      band_a.push_back(a);
      band_v.push_back(r.curve.value[j]);
    }
    r.peak_location = fitted_peak(band_a, band_v);
    r.checked = spec.samples >= spec.min_samples;
    r.pass = r.max_rel_error <= spec.rel_tol && std::abs(r.peak_location - r.peak_target) <= spec.peak_tol;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace freevec
