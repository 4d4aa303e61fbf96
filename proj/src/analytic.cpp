#include "freevec/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "freevec/error.hpp"

namespace freevec {
namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// Height from which the eta ladder starts: there |t I'| <= t / eta^2 < 1 and
// plain iteration contracts.
double ladder_start(double t) { return 2.0 * std::sqrt(t) + 1.0; }

// Neville evaluation at eta = 0 of the interpolant through (eta_k, v_k).
cplx extrapolate_to_zero(std::span<const double> eta, std::span<const cplx> v) {
  std::vector<cplx> p(v.begin(), v.end());
  const std::size_t n = p.size();
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t i = 0; i + m < n; ++i) {
      p[i] = (eta[i + m] * p[i] - eta[i] * p[i + 1]) / (eta[i + m] - eta[i]);
    }
  }
  return p[0];
}

// Height used for real-axis boundary values inside integrals over xi.
constexpr double kBoundaryEta = 1e-9;

}  // namespace

StieltjesSolver::StieltjesSolver(SpectralProfile profile, double t, SolverOptions options)
    : profile_(std::move(profile)), t_(t), options_(options),
      rule_(profile_, Weight::one(), options_.quadrature) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorKind::invalid_time, "time must be finite and >= 0");
  }
}

cplx StieltjesSolver::cauchy_integral(cplx zeta) { return rule_.integrate(zeta).value; }

FixedPointResult StieltjesSolver::solve_from(cplx z, cplx warm) {
  const double side = z.imag() > 0 ? 1.0 : -1.0;
  if (t_ == 0.0) return {rule_.integrate(z).value, 0.0, 1};

  cplx m = warm;
  if (!(m.imag() * side > 0.0) || !std::isfinite(std::abs(m))) m = rule_.integrate(z).value;
  CauchyRule::Result r = rule_.integrate(z + t_ * m);
  double res = std::abs(m - r.value);
  double omega = options_.initial_damping;

  for (int it = 1; it <= options_.max_iterations; ++it) {
    if (res <= options_.tol) return {m, res, it - 1};

    // Newton on F(m) = m - I(z + t m).
    const cplx f = m - r.value;
    const cplx df = 1.0 - t_ * r.derivative;
    if (std::abs(df) > 0.0) {
      const cplx cand = m - f / df;
      if (cand.imag() * side > 0.0 && std::isfinite(std::abs(cand))) {
        const CauchyRule::Result rc = rule_.integrate(z + t_ * cand);
        const double rc_res = std::abs(cand - rc.value);
        if (rc_res < res) {
          m = cand;
          r = rc;
          res = rc_res;
          continue;
        }
      }
    }

    // Damped fixed-point step.
    const cplx cand = (1.0 - omega) * m + omega * r.value;
    const CauchyRule::Result rc = rule_.integrate(z + t_ * cand);
    const double rc_res = std::abs(cand - rc.value);
    omega = rc_res < res ? std::min(1.0, 1.5 * omega) : std::max(0.05, 0.5 * omega);
    m = cand;
    r = rc;
    res = rc_res;
  }
  if (res <= options_.tol) return {m, res, options_.max_iterations};
  throw ConvergenceError("fixed point did not converge at z = (" + std::to_string(z.real()) + ", " +
                             std::to_string(z.imag()) + "), residual " + std::to_string(res),
                         res);
}

FixedPointResult StieltjesSolver::solve(cplx z) {
  if (z.imag() == 0.0) {
    throw Error(ErrorKind::domain, "Stieltjes transform requested on the real axis");
  }
  if (z.imag() < 0.0) {
    FixedPointResult r = solve(std::conj(z));
    r.value = std::conj(r.value);
    return r;
  }
  if (t_ == 0.0) return solve_from(z, {});

  const double target = z.imag();
  double eta = std::max(target, ladder_start(t_));
  cplx zl(z.real(), eta);
  FixedPointResult r = solve_from(zl, rule_.integrate(zl).value);
  int total = r.iterations;
  while (eta > target) {
    eta = std::max(target, eta / 4.0);
    r = solve_from(cplx(z.real(), eta), r.value);
    total += r.iterations;
  }
  r.iterations = total;
  return r;
}

cplx solve_fixed_point(const SpectralProfile& profile, double t, cplx z, const SolverOptions& options) {
  StieltjesSolver solver(profile, t, options);
  return solver.solve(z).value;
}

BoundaryValue boundary_value(StieltjesSolver& solver, double lambda, std::span<const double> eta_schedule) {
  if (eta_schedule.empty()) throw Error(ErrorKind::invalid_argument, "empty eta schedule");
  for (std::size_t k = 0; k < eta_schedule.size(); ++k) {
    if (!(eta_schedule[k] > 0.0) || (k > 0 && !(eta_schedule[k] < eta_schedule[k - 1]))) {
      throw Error(ErrorKind::invalid_argument, "eta schedule must be positive and decreasing");
    }
  }
  BoundaryValue out;
  out.raw.reserve(eta_schedule.size());
  FixedPointResult r = solver.solve(cplx(lambda, eta_schedule[0]));
  out.raw.push_back(r.value);
  for (std::size_t k = 1; k < eta_schedule.size(); ++k) {
    r = solver.solve_from(cplx(lambda, eta_schedule[k]), r.value);
    out.raw.push_back(r.value);
  }
  const cplx g0 = extrapolate_to_zero(eta_schedule, out.raw);
  out.line.lambda = lambda;
  out.line.hilbert = g0.real();
  const double rho = g0.imag() / kPi;
  out.line.inside_support = rho > kSupportThreshold;
  out.line.rho = out.line.inside_support ? rho : 0.0;
  return out;
}

DensityLine density_and_hilbert(const SpectralProfile& profile, double t, double lambda,
                                std::span<const double> eta_schedule, const SolverOptions& options) {
  StieltjesSolver solver(profile, t, options);
  return boundary_value(solver, lambda, eta_schedule).line;
}

StieltjesSolution solve_grid(const SpectralProfile& profile, double t, std::span<const double> lambdas,
                             std::span<const double> eta_schedule, const SolverOptions& options) {
  StieltjesSolver solver(profile, t, options);
  StieltjesSolution sol;
  sol.t = t;
  sol.profile = profile.describe();
  sol.eta_schedule.assign(eta_schedule.begin(), eta_schedule.end());
  sol.lambdas.assign(lambdas.begin(), lambdas.end());
  for (double lambda : lambdas) {
    BoundaryValue bv = boundary_value(solver, lambda, eta_schedule);
    for (std::size_t k = 0; k < bv.raw.size(); ++k) {
      const cplx z(lambda, eta_schedule[k]);
      const double res = std::abs(bv.raw[k] - solver.cauchy_integral(z + t * bv.raw[k]));
      sol.worst_residual = std::max(sol.worst_residual, res);
    }
    sol.values.push_back(std::move(bv.raw));
    sol.lines.push_back(bv.line);
  }
  return sol;
}

double semicircle_support_radius(double t, double radius) {
  return 2.0 * std::sqrt(0.25 * radius * radius + t);
}

SemicircleValues semicircle_closed_forms(double t, double lambda, double radius) {
  if (!(t >= 0.0)) throw Error(ErrorKind::invalid_time, "time must be >= 0");
  const double s = 0.25 * radius * radius + t;
  const double disc = 4.0 * s - lambda * lambda;
  if (disc > 0.0) return {std::sqrt(disc) / (2.0 * kPi * s), -lambda / (2.0 * s)};
  const double root = std::sqrt(-disc);
  return {0.0, (-lambda + std::copysign(root, lambda)) / (2.0 * s)};
}

DensityLine semicircle_density(double t, double lambda, double radius) {
  const SemicircleValues v = semicircle_closed_forms(t, lambda, radius);
  return {lambda, v.rho, v.hilbert, v.rho > 0.0};
}

cplx semicircle_stieltjes(double t, cplx z, double radius) {
  if (!(t >= 0.0)) throw Error(ErrorKind::invalid_time, "time must be >= 0");
  const double s = 0.25 * radius * radius + t;
  if (s == 0.0) return -1.0 / z;
  const double e = 2.0 * std::sqrt(s);
  // sqrt(z - e) sqrt(z + e) ~ z at infinity and is analytic off [-e, e].
  const cplx root = std::sqrt(z - e) * std::sqrt(z + e);
  return (-z + root) / (2.0 * s);
}

Support limiting_support(const SpectralProfile& profile, double t, const SolverOptions& options) {
  if (!(t >= 0.0)) throw Error(ErrorKind::invalid_time, "time must be >= 0");
  if (t == 0.0) return {profile.lower(), profile.upper()};
  if (profile.kind() == SpectralProfile::Kind::semicircle_quantile) {
    const double e = semicircle_support_radius(t, profile.radius());
    return {-e, e};
  }
  StieltjesSolver solver(profile, t, options);
  const auto inside = [&](double lambda) {
    return solver.solve(cplx(lambda, kBoundaryEta)).value.imag() / kPi > kSupportThreshold;
  };
  // The support lies within [a(0) - 2 sqrt t, a(1) + 2 sqrt t].
  const double lo = profile.lower() - 2.0 * std::sqrt(t);
  const double hi = profile.upper() + 2.0 * std::sqrt(t);
  constexpr int kScan = 64;
  int first = -1, last = -1;
  for (int k = 0; k <= kScan; ++k) {
    const double lambda = lo + (hi - lo) * k / kScan;
    if (inside(lambda)) {
      if (first < 0) first = k;
      last = k;
    }
  }
  if (first < 0) throw Error(ErrorKind::convergence, "no support found on the scan grid");
  const auto refine = [&](double in, double out) {
    for (int k = 0; k < 60 && std::abs(out - in) > 1e-12; ++k) {
      const double mid = 0.5 * (in + out);
      (inside(mid) ? in : out) = mid;
    }
    return 0.5 * (in + out);
  };
  const double step = (hi - lo) / kScan;
  return {refine(lo + first * step, lo + (first - 1) * step),
          refine(lo + last * step, lo + (last + 1) * step)};
}

cplx theta_limit(StieltjesSolver& solver, cplx z, const Weight& g) {
  if (g.zero) {
    if (z.imag() == 0.0) throw Error(ErrorKind::domain, "Theta requested on the real axis");
    return {0.0, 0.0};
  }
  const cplx m = solver.solve(z).value;
  const cplx zeta = z + solver.t() * m;
  if (g.is_one()) return solver.cauchy_integral(zeta);
  CauchyRule rule(solver.profile(), g, solver.options().quadrature);
  return rule.integrate(zeta).value;
}

cplx theta_limit(const SpectralProfile& profile, double t, cplx z, const Weight& g,
                 const SolverOptions& options) {
  StieltjesSolver solver(profile, t, options);
  return theta_limit(solver, z, g);
}

double cdf_limit(const SpectralProfile& profile, double t, double lambda, double alpha,
                 const CdfOptions& options) {
  if (!(t >= 0.0)) throw Error(ErrorKind::invalid_time, "time must be >= 0");
  if (std::isnan(lambda) || std::isnan(alpha)) throw Error(ErrorKind::domain, "NaN argument");
  if (alpha <= profile.lower()) return 0.0;
  if (t == 0.0) return profile.cdf(std::min(lambda, alpha));

  const Support sup = limiting_support(profile, t, options.solver);
  if (lambda <= sup.lower) return 0.0;
  const double top = std::min(lambda, sup.upper);

  StieltjesSolver solver(profile, t, options.solver);
  const bool all = alpha >= profile.upper();
  CauchyRule rule(profile, all ? Weight::one() : Weight::indicator_below(alpha),
                  options.solver.quadrature);

  // Im Theta(xi + i0) / pi. xi = c - h cos(theta) absorbs the square-root
  // edges of rho_t.
  const double c = 0.5 * (sup.lower + sup.upper);
  const double h = 0.5 * (sup.upper - sup.lower);
  const auto density = [&](double xi) {
    const cplx m = solver.solve(cplx(xi, kBoundaryEta)).value;
    if (all) return m.imag() / kPi;
    return rule.integrate(cplx(xi, kBoundaryEta) + t * m).value.imag() / kPi;
  };
  const double theta_max = std::acos(std::clamp((c - top) / h, -1.0, 1.0));
  const auto integrand = [&](double th) {
    const double xi = c - h * std::cos(th);
    return density(xi) * h * std::sin(th);
  };
  const double v = integrate_real(integrand, 0.0, theta_max, options.tol, options.max_depth);
  return std::clamp(v, 0.0, 1.0);
}

double limiting_quantile(const SpectralProfile& profile, double t, double q, const SolverOptions& options) {
  if (!(q > 0.0 && q < 1.0)) throw Error(ErrorKind::domain, "quantile level must lie in (0, 1)");
  if (t == 0.0) return profile.eval(q);
  if (profile.kind() == SpectralProfile::Kind::semicircle_quantile) {
    return SpectralProfile::semicircle_quantile(semicircle_support_radius(t, profile.radius())).eval(q);
  }
  const Support sup = limiting_support(profile, t, options);
  CdfOptions co;
  co.solver = options;
  const auto f = [&](double lambda) {
    return cdf_limit(profile, t, lambda, std::numeric_limits<double>::infinity(), co) - q;
  };
  std::uintmax_t iters = 100;
  const auto r = boost::math::tools::toms748_solve(
      f, sup.lower, sup.upper, -q, 1.0 - q, boost::math::tools::eps_tolerance<double>(40), iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace freevec
