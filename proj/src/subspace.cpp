#include "freevec/subspace.hpp"

#include <cmath>
#include <limits>

#include "freevec/error.hpp"
#include "freevec/quadrature.hpp"

namespace freevec {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::size_t> select(const Eigen::VectorXd& v, auto&& keep) {
  std::vector<std::size_t> out;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (keep(v[k])) out.push_back(static_cast<std::size_t>(k));
  }
  return out;
}

void require_nonempty(const OverlapBlock& b) {
  if (b.columns.empty()) throw Error(ErrorKind::empty_window, "no initial eigenvalue in the window");
  if (b.rows.empty()) throw Error(ErrorKind::empty_window, "no perturbed eigenvalue in the widened window");
}

// Quantile coordinates of the outer region: [0, y1] and [y2, 1].
struct Outer {
  double y1, y2;
};

Outer outer_region(const WindowSpec& w, const SpectralProfile& p) {
  return {p.cdf(w.gamma_minus - w.delta), p.cdf(w.gamma_plus + w.delta)};
}

template <class F>
double integrate_outer(F&& f, const Outer& o, double tol) {
  return integrate_real(f, 0.0, o.y1, tol) + integrate_real(f, o.y2, 1.0, tol);
}

}  // namespace

void WindowSpec::validate() const {
  if (!(gamma_minus < gamma_plus)) throw Error(ErrorKind::invalid_argument, "window needs gamma- < gamma+");
  if (!(delta >= 0.0)) throw Error(ErrorKind::invalid_argument, "window margin must be >= 0");
}

OverlapBlock build_overlap_block(const EigenSystem& basis0, const EigenSystem& basist, const WindowSpec& window) {
  window.validate();
  if (basis0.size() != basist.size()) throw Error(ErrorKind::dimension_mismatch, "bases differ in size");
  OverlapBlock b;
  b.columns = select(basis0.values, [&](double a) { return window.initial_contains(a); });
  b.rows = select(basist.values, [&](double l) { return window.perturbed_contains(l); });
  require_nonempty(b);
  b.block.resize(static_cast<Eigen::Index>(b.rows.size()), static_cast<Eigen::Index>(b.columns.size()));
  for (std::size_t r = 0; r < b.rows.size(); ++r) {
    for (std::size_t c = 0; c < b.columns.size(); ++c) {
      b.block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          basist.vectors.col(static_cast<Eigen::Index>(b.rows[r]))
              .dot(basis0.vectors.col(static_cast<Eigen::Index>(b.columns[c])));
    }
  }
  return b;
}

OverlapBlock build_overlap_block(const Sample& sample, const WindowSpec& window) {
  window.validate();
  OverlapBlock b;
  b.columns = select(sample.a, [&](double a) { return window.initial_contains(a); });
  b.rows = select(sample.mt.values, [&](double l) { return window.perturbed_contains(l); });
  require_nonempty(b);
  b.block.resize(static_cast<Eigen::Index>(b.rows.size()), static_cast<Eigen::Index>(b.columns.size()));
  for (std::size_t r = 0; r < b.rows.size(); ++r) {
    for (std::size_t c = 0; c < b.columns.size(); ++c) {
      b.block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          sample.mt.vectors(static_cast<Eigen::Index>(b.columns[c]), static_cast<Eigen::Index>(b.rows[r]));
    }
  }
  return b;
}

double distance(std::span<const double> singular_values, std::size_t P) {
  if (P == 0 || singular_values.size() < P) {
    throw Error(ErrorKind::invalid_argument, "need P singular values");
  }
  double s = 0.0;
  for (std::size_t k = 0; k < P; ++k) {
    if (!(singular_values[k] > kSingularFloor)) return kInf;
    s += std::log(singular_values[k]);
  }
  return s == 0.0 ? 0.0 : -s / static_cast<double>(P);
}

SubspaceReport make_report(const OverlapBlock& block) {
  SubspaceReport r;
  r.Q = static_cast<std::size_t>(block.block.rows());
  r.P = static_cast<std::size_t>(block.block.cols());
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(block.block);
  const Eigen::VectorXd& s = svd.singularValues();
  r.singular_values.assign(s.data(), s.data() + s.size());
  r.singular_values.resize(r.P, 0.0);
  r.distance = distance(r.singular_values, r.P);
  r.rank_deficient = std::isinf(r.distance);
  return r;
}

double distance_from_determinant(const Eigen::MatrixXd& block) {
  const Eigen::MatrixXd gram = block.transpose() * block;
  const Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) return kInf;
  const Eigen::MatrixXd l = llt.matrixL();
  double logdet = 0.0;
  for (Eigen::Index k = 0; k < l.rows(); ++k) {
    if (!(l(k, k) > 0.0)) return kInf;
    logdet += 2.0 * std::log(l(k, k));
  }
  return -logdet / (2.0 * static_cast<double>(block.cols()));
}

double predicted_distance(double t, const WindowSpec& window, const SpectralProfile& rho0, double tol) {
  window.validate();
  if (!(window.delta > 0.0)) {
    throw Error(ErrorKind::divergent_integral, "predicted distance needs a margin delta > 0");
  }
  if (!(t >= 0.0)) throw Error(ErrorKind::invalid_time, "time must be >= 0");
  const double x1 = rho0.cdf(window.gamma_minus);
  const double x2 = rho0.cdf(window.gamma_plus);
  const double mass = x2 - x1;
  if (!(mass > 0.0)) throw Error(ErrorKind::empty_window, "initial window carries no mass");
  const Outer o = outer_region(window, rho0);
  if (t == 0.0 || (o.y1 <= 0.0 && o.y2 >= 1.0)) return 0.0;
  const auto inner = [&](double x) {
    const double ax = rho0.eval(x);
    const auto k = [&](double y) {
      const double d = ax - rho0.eval(y);
      return 1.0 / (d * d);
    };
    return integrate_outer(k, o, 0.01 * tol);
  };
  const double j = integrate_real(inner, x1, x2, tol);
  return t * j / (2.0 * mass);
}

GramPrediction gram_entry_predictions(double t, double a_i, double a_j, const WindowSpec& window,
                                      const SpectralProfile& rho0, double tol) {
  window.validate();
  if (!window.initial_contains(a_i) || !window.initial_contains(a_j)) {
    throw Error(ErrorKind::domain, "a_i and a_j must lie in the initial window");
  }
  if (!(window.delta > 0.0)) throw Error(ErrorKind::divergent_integral, "Gram predictions need delta > 0");
  if (!(t >= 0.0)) throw Error(ErrorKind::invalid_time, "time must be >= 0");
  const Outer o = outer_region(window, rho0);
  const auto diag = [&](double y) {
    const double d = a_i - rho0.eval(y);
    return 1.0 / (d * d);
  };
  const auto off = [&](double y) {
    const double ay = rho0.eval(y);
    return 1.0 / std::abs((a_i - ay) * (a_j - ay));
  };
  return {1.0 - t * integrate_outer(diag, o, tol), t * integrate_outer(off, o, tol)};
}

void SubspaceExperiment::merge(const SubspaceExperiment& other) {
  distance.merge(other.distance);
  samples += other.samples;
  P_total += other.P_total;
  Q_total += other.Q_total;
  rank_deficient += other.rank_deficient;
}

SubspaceExperiment run_subspace_experiment(const ExperimentConfig& config, const WindowSpec& window) {
  window.validate();
  SubspaceExperiment empty;
  empty.window = window;
  return run_samples(config, empty, [&](const Sample& s, SubspaceExperiment& acc) {
    const SubspaceReport r = make_report(build_overlap_block(s, window));
    ++acc.samples;
    acc.P_total += r.P;
    acc.Q_total += r.Q;
    if (r.rank_deficient) {
      ++acc.rank_deficient;
    } else {
      acc.distance.add(r.distance);
    }
  });
}

}  // namespace freevec
