#include "freevec/predictions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "freevec/error.hpp"
#include "freevec/quadrature.hpp"

namespace freevec {
namespace {

constexpr double kPi = std::numbers::pi;

void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorKind::invalid_time, "time must be >= 0");
}

}  // namespace

const char* regime_tag(Regime regime) {
  switch (regime) {
    case Regime::full: return "full";
    case Regime::perturbative: return "perturbative";
    case Regime::cauchy: return "cauchy";
    case Regime::goe_closed_form: return "goe-closed-form";
  }
  return "?";
}

Regime parse_regime(const std::string& tag) {
  if (tag == "full") return Regime::full;
  if (tag == "perturbative") return Regime::perturbative;
  if (tag == "cauchy") return Regime::cauchy;
  if (tag == "goe" || tag == "goe-closed-form") return Regime::goe_closed_form;
  throw Error(ErrorKind::config, "unknown regime '" + tag + "'");
}

double overlap_full(double t, double lambda_i, double a_j, const DensityLine& density) {
  require_time(t);
  if (!(density.rho > 0.0)) {
    throw Error(ErrorKind::outside_support,
                "lambda = " + std::to_string(lambda_i) + " lies outside the support of rho_t");
  }
  const double d = a_j - lambda_i - t * density.hilbert;
  const double w = t * kPi * density.rho;
  return t / (d * d + w * w);
}

double overlap_goe(double t, double lambda_i, double a_j) {
  require_time(t);
  const double edge = 2.0 * std::sqrt(1.0 + t);
  if (!(std::abs(lambda_i) <= edge)) {
    throw Error(ErrorKind::outside_support,
                "lambda = " + std::to_string(lambda_i) + " lies outside [-2 sqrt(1+t), 2 sqrt(1+t)]");
  }
  const double d = a_j - lambda_i;
  const double denom = d * d + t / (1.0 + t) * lambda_i * d + t * t / (1.0 + t);
  if (!(denom > 0.0)) throw Error(ErrorKind::domain, "non-positive overlap denominator");
  return t / denom;
}

double overlap_cauchy(double t, double lambda_i, double a_j) {
  if (!(t > 0.0)) throw Error(ErrorKind::invalid_time, "Cauchy kernel needs t > 0");
  const double d = a_j - lambda_i;
  return t / (d * d + t * t);
}

double ldos(const SpectralProfile& profile, double t, double lambda_i, double alpha,
            const DensityLine& density) {
  if (!(alpha > profile.lower() && alpha < profile.upper())) {
    throw Error(ErrorKind::edge, "LDOS argument must lie strictly inside the initial spectrum");
  }
  return profile.induced_density(alpha) * overlap_full(t, lambda_i, alpha, density);
}

double ldos_mass(const SpectralProfile& profile, double t, double lambda_i, const DensityLine& density,
                 double tol) {
  const auto f = [&](double x) { return overlap_full(t, lambda_i, profile.eval(x), density); };
  // Split at the peak a(x) = lambda + t H; its width is t pi rho.
  const double peak = lambda_i + t * density.hilbert;
  std::vector<double> cuts{0.0};
  if (peak > profile.lower() && peak < profile.upper()) {
    const double xp = profile.inverse(peak);
    const double w = t * kPi * density.rho;
    for (double k : {-1.0, 0.0, 1.0}) {
      const double a = peak + k * w;
      if (a > profile.lower() && a < profile.upper()) cuts.push_back(profile.inverse(a));
    }
    cuts.push_back(xp);
  }
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) total += integrate_real(f, cuts[k], cuts[k + 1], tol);
  return total;
}

double perturbative_offdiag(double t, std::size_t n, double a_i, double a_j) {
  require_time(t);
  if (n == 0) throw Error(ErrorKind::invalid_argument, "n must be positive");
  if (a_i == a_j) throw Error(ErrorKind::degenerate_gap, "a_i == a_j in the perturbative overlap");
  const double g = a_i - a_j;
  return t / static_cast<double>(n) / (g * g);
}

double perturbative_diag(double t, std::size_t n, std::size_t i, std::span<const double> spectrum) {
  require_time(t);
  if (i < 1 || i > spectrum.size()) throw Error(ErrorKind::invalid_argument, "index outside [1, n]");
  --i;
  std::vector<double> sorted(spectrum.begin(), spectrum.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorKind::degenerate_gap, "spectrum has repeated entries");
  }
  double s = 0.0;
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    if (j == i) continue;
    const double g = spectrum[i] - spectrum[j];
    s += 1.0 / (g * g);
  }
  return 1.0 - t / static_cast<double>(n) * s;
}

PerturbationExpansion perturbation_expansion(std::span<const double> spectrum, const SymmetricMatrix& h1,
                                             std::size_t i) {
  const std::size_t n = spectrum.size();
  if (h1.size() != n) throw Error(ErrorKind::dimension_mismatch, "h1 and spectrum sizes differ");
  if (i < 1 || i > n) throw Error(ErrorKind::invalid_argument, "index outside [1, n]");
  --i;
  PerturbationExpansion e;
  e.alpha_i = h1(i, i);
  e.gamma.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    const double g = spectrum[i] - spectrum[j];
    if (g == 0.0) throw Error(ErrorKind::degenerate_gap, "repeated eigenvalue in the expansion");
    const double h = h1(j, i);
    e.gamma[j] = h / g;
    e.beta_i += h * h / g;
    e.gamma_i += 0.5 * e.gamma[j] * e.gamma[j];
  }
  return e;
}

double index_location(const SpectralProfile& profile, double t, std::size_t i, std::size_t n,
                      const SolverOptions& options) {
  if (i < 1 || i > n) throw Error(ErrorKind::invalid_argument, "index outside [1, n]");
  const double q = (static_cast<double>(i) - 0.5) / static_cast<double>(n);
  return limiting_quantile(profile, t, q, options);
}

DensityLine density_for(const SpectralProfile& profile, double t, double lambda, const SolverOptions& options) {
  if (profile.kind() == SpectralProfile::Kind::semicircle_quantile) {
    return semicircle_density(t, lambda, profile.radius());
  }
  return density_and_hilbert(profile, t, lambda, default_eta_schedule(), options);
}

OverlapPrediction predict_curve(Regime regime, const SpectralProfile& profile, double t, double lambda_i,
                                std::span<const double> a_grid, const SolverOptions& options) {
  OverlapPrediction out;
  out.lambda_i = lambda_i;
  out.regime = regime;
  out.a_grid.assign(a_grid.begin(), a_grid.end());
  out.values.reserve(a_grid.size());
  DensityLine density{};
  if (regime == Regime::full) density = density_for(profile, t, lambda_i, options);
  for (double a : a_grid) {
    switch (regime) {
      case Regime::full: out.values.push_back(overlap_full(t, lambda_i, a, density)); break;
      case Regime::goe_closed_form: out.values.push_back(overlap_goe(t, lambda_i, a)); break;
      case Regime::cauchy: out.values.push_back(overlap_cauchy(t, lambda_i, a)); break;
      case Regime::perturbative: out.values.push_back(perturbative_offdiag(t, 1, lambda_i, a)); break;
    }
  }
  return out;
}

}  // namespace freevec
