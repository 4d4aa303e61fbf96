#include "freevec/montecarlo.hpp"

#include <cmath>
#include <sstream>

#include "freevec/kernels.hpp"
#include "freevec/rng.hpp"

namespace freevec {
namespace {

using cplx = std::complex<double>;

void require_offaxis(cplx z) {
  if (z.imag() == 0.0) throw Error(ErrorKind::domain, "z must have a non-zero imaginary part");
}

// Squared eigenvector entries S(j, i) = mt.vectors(j, i)^2.
Eigen::MatrixXd squared_vectors(const Sample& s) {
  if (s.mt.vectors.size() == 0) {
    throw Error(ErrorKind::invalid_argument, "sample was drawn without eigenvectors");
  }
  return s.mt.vectors.array().square().matrix();
}

}  // namespace

void ExperimentConfig::validate() const {
  const auto fail = [](const std::string& m) { throw Error(ErrorKind::config, m); };
  if (n < 2) fail("n must be >= 2");
  if (!(t >= 0.0) || !std::isfinite(t)) fail("t must be finite and >= 0");
  if (samples < 1) fail("samples must be >= 1");
  for (std::size_t i : target_indices) {
    if (i < 1 || i > n) fail("target index " + std::to_string(i) + " outside [1, n]");
  }
  if (binning < 1 || binning % 2 == 0) fail("binning window must be odd and >= 1");
  if (binning > n) fail("binning window larger than n");
  if (const auto* g = std::get_if<GoeInitial>(&initial); g && !(g->scale > 0.0)) {
    fail("GOE scale must be positive");
  }
}

std::string ExperimentConfig::describe_initial() const {
  if (const auto* g = std::get_if<GoeInitial>(&initial)) {
    std::ostringstream os;
    os.precision(17);
    os << "goe(scale=" << g->scale << ")";
    return os.str();
  }
  return std::get<ProfileInitial>(initial).profile.describe();
}

std::size_t resolve_workers(std::size_t requested) {
  if (requested > 0) return requested;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

Sample draw_sample(const ExperimentConfig& config, std::size_t index, bool vectors) {
  RngStream rng(config.master_seed, index);
  Sample s;
  s.index = index;
  const std::size_t n = config.n;
  if (const auto* g = std::get_if<GoeInitial>(&config.initial)) {
    s.a = eigenvalues(sample_goe(n, g->scale, rng));
  } else {
    const SymmetricMatrix a = build_diagonal_from_profile(std::get<ProfileInitial>(config.initial).profile, n);
    s.a = a.entries().diagonal();
  }
  if (config.t == 0.0) {
    s.mt = EigenSystem::diagonal(std::span<const double>(s.a.data(), n));
    if (!vectors) s.mt.vectors.resize(0, 0);
    return s;
  }
  const SymmetricMatrix m =
      SymmetricMatrix::diagonal(std::span<const double>(s.a.data(), n)) + sample_brownian_increment(n, config.t, rng);
  if (vectors) {
    s.mt = eigen_decompose(m);
  } else {
    s.mt.values = eigenvalues(m);
  }
  return s;
}

OverlapAccumulator::OverlapAccumulator(std::vector<std::size_t> targets, std::size_t n)
    : targets_(std::move(targets)), n_(n), cells_(targets_.size() * n), locations_(n) {}

void OverlapAccumulator::add(const Sample& sample) {
  if (static_cast<std::size_t>(sample.a.size()) != n_) {
    throw Error(ErrorKind::dimension_mismatch, "sample dimension differs from the accumulator");
  }
  const kernels::KernelTable& kt = kernels::active();
  std::vector<double> sq(n_);
  for (std::size_t r = 0; r < targets_.size(); ++r) {
    const double* col = sample.mt.vectors.col(static_cast<Eigen::Index>(targets_[r] - 1)).data();
    kt.square(col, sq.data(), n_);
    double row_sum = 0.0;
    for (double v : sq) row_sum += v;
    if (std::abs(row_sum - 1.0) > kRowTolerance) {
      throw Error(ErrorKind::domain, "overlap row " + std::to_string(targets_[r]) + " sums to " +
                                         std::to_string(row_sum));
    }
    for (std::size_t j = 0; j < n_; ++j) cells_.add(r * n_ + j, sq[j]);
  }
  for (std::size_t j = 0; j < n_; ++j) locations_.add(j, sample.a[static_cast<Eigen::Index>(j)]);
}

void OverlapAccumulator::merge(const OverlapAccumulator& other) {
  if (other.targets_ != targets_ || other.n_ != n_) {
    throw Error(ErrorKind::dimension_mismatch, "merging overlap accumulators of different shape");
  }
  cells_.merge(other.cells_);
  locations_.merge(other.locations_);
}

OverlapCurve overlap_curve(const OverlapAccumulator& acc, std::size_t row) {
  OverlapCurve c;
  c.index = acc.targets().at(row);
  c.n = acc.n();
  c.samples = acc.count();
  const double scale = static_cast<double>(acc.n());
  for (std::size_t j = 0; j < acc.n(); ++j) {
    c.a.push_back(acc.location(j).mean());
    c.value.push_back(scale * acc.cell(row, j).mean());
    c.standard_error.push_back(scale * acc.cell(row, j).standard_error());
  }
  return c;
}

std::vector<OverlapCurve> run_overlap_experiment(const ExperimentConfig& config) {
  config.validate();
  if (config.target_indices.empty()) throw Error(ErrorKind::config, "no target indices");
  const OverlapAccumulator empty(config.target_indices, config.n);
  const OverlapAccumulator acc =
      run_samples(config, empty, [](const Sample& s, OverlapAccumulator& a) { a.add(s); });
  std::vector<OverlapCurve> out;
  for (std::size_t r = 0; r < config.target_indices.size(); ++r) {
    out.push_back(bin_overlap_curve(overlap_curve(acc, r), config.binning));
  }
  return out;
}

OverlapCurve bin_overlap_curve(const OverlapCurve& curve, std::size_t window) {
  const std::size_t n = curve.value.size();
  if (window < 1 || window % 2 == 0) {
    throw Error(ErrorKind::invalid_argument, "binning window must be odd and >= 1");
  }
  if (window > n) throw Error(ErrorKind::invalid_argument, "binning window larger than the curve");
  if (window == 1) return curve;
  const auto h = static_cast<std::ptrdiff_t>(window / 2);
  const auto len = static_cast<std::ptrdiff_t>(n);
  // Half-sample reflection: -1 -> 0, n -> n - 1.
  const auto reflect = [len](std::ptrdiff_t k) {
    if (k < 0) return -1 - k;
    if (k >= len) return 2 * len - 1 - k;
    return k;
  };
  OverlapCurve out = curve;
  const double w = static_cast<double>(window);
  for (std::ptrdiff_t j = 0; j < len; ++j) {
    double v = 0.0, e2 = 0.0;
    for (std::ptrdiff_t k = j - h; k <= j + h; ++k) {
      const auto m = static_cast<std::size_t>(reflect(k));
      v += curve.value[m];
      e2 += curve.standard_error[m] * curve.standard_error[m];
    }
    out.value[static_cast<std::size_t>(j)] = v / w;
    out.standard_error[static_cast<std::size_t>(j)] = std::sqrt(e2) / w;
  }
  return out;
}

cplx theta_sample(const Sample& sample, cplx z, const Weight& g) {
  require_offaxis(z);
  const auto n = static_cast<Eigen::Index>(sample.mt.values.size());
  const kernels::KernelTable& kt = kernels::active();
  cplx sum;
  if (g.is_one()) {
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    sum = kt.cauchy_sum(ones.data(), sample.mt.values.data(), static_cast<std::size_t>(n), z);
  } else {
    Eigen::VectorXd ga(n);
    for (Eigen::Index j = 0; j < n; ++j) ga[j] = g(sample.a[j]);
    // w_i = sum_j <psi_i|phi_j>^2 g(a_j)
    const Eigen::VectorXd w = squared_vectors(sample).transpose() * ga;
    sum = kt.cauchy_sum(w.data(), sample.mt.values.data(), static_cast<std::size_t>(n), z);
  }
  return sum / static_cast<double>(n);
}

cplx theta_via_resolvent(const Sample& sample, cplx z, const Weight& g) {
  require_offaxis(z);
  const auto n = static_cast<Eigen::Index>(sample.mt.values.size());
  const Eigen::MatrixXd& v = sample.mt.vectors;
  if (v.size() == 0) throw Error(ErrorKind::invalid_argument, "sample was drawn without eigenvectors");
  // M_t = V diag(lambda) V^T in the basis of A.
  const Eigen::MatrixXd m = v * sample.mt.values.asDiagonal() * v.transpose();
  Eigen::MatrixXcd shifted = m.cast<cplx>();
  shifted.diagonal().array() -= z;
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) rhs(j, j) = g(sample.a[j]);
  const Eigen::MatrixXcd x = shifted.partialPivLu().solve(rhs);
  return x.trace() / static_cast<double>(n);
}

std::vector<ComplexEstimate> estimate_theta(const ExperimentConfig& config, std::span<const cplx> zs,
                                            const Weight& g) {
  for (cplx z : zs) require_offaxis(z);
  const std::vector<cplx> zv(zs.begin(), zs.end());
  const MomentArray empty(2 * zv.size());
  const MomentArray acc = run_samples(
      config, empty,
      [&](const Sample& s, MomentArray& a) {
        for (std::size_t k = 0; k < zv.size(); ++k) {
          const cplx v = theta_sample(s, zv[k], g);
          a.add(2 * k, v.real());
          a.add(2 * k + 1, v.imag());
        }
      },
      !g.is_one());
  std::vector<ComplexEstimate> out;
  for (std::size_t k = 0; k < zv.size(); ++k) {
    out.push_back({zv[k], {acc[2 * k].mean(), acc[2 * k + 1].mean()},
                   {acc[2 * k].standard_error(), acc[2 * k + 1].standard_error()}});
  }
  return out;
}

ComplexEstimate estimate_theta(const ExperimentConfig& config, cplx z, const Weight& g) {
  return estimate_theta(config, std::span<const cplx>(&z, 1), g).front();
}

double empirical_cdf_sample(const Sample& sample, double lambda, double alpha) {
  const Eigen::Index n = sample.a.size();
  const auto count_le = [](const Eigen::VectorXd& v, double x) {
    return static_cast<Eigen::Index>(std::upper_bound(v.data(), v.data() + v.size(), x) - v.data());
  };
  const Eigen::Index ni = count_le(sample.mt.values, lambda);
  const Eigen::Index nj = count_le(sample.a, alpha);
  if (ni == 0 || nj == 0) return 0.0;
  if (ni == n && nj == n) return 1.0;
  const Eigen::MatrixXd& v = sample.mt.vectors;
  if (v.size() == 0) throw Error(ErrorKind::invalid_argument, "sample was drawn without eigenvectors");
  const double s = v.topLeftCorner(nj, ni).array().square().sum();
  return std::clamp(s / static_cast<double>(n), 0.0, 1.0);
}

std::vector<CdfEstimate> empirical_cdf(const ExperimentConfig& config,
                                       std::span<const std::pair<double, double>> points) {
  const std::vector<std::pair<double, double>> pts(points.begin(), points.end());
  const MomentArray empty(pts.size());
  const MomentArray acc = run_samples(config, empty, [&](const Sample& s, MomentArray& a) {
    for (std::size_t k = 0; k < pts.size(); ++k) a.add(k, empirical_cdf_sample(s, pts[k].first, pts[k].second));
  });
  std::vector<CdfEstimate> out;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    out.push_back({pts[k].first, pts[k].second, acc[k].mean(), acc[k].standard_error()});
  }
  return out;
}

CdfEstimate empirical_cdf(const ExperimentConfig& config, double lambda, double alpha) {
  const std::pair<double, double> p{lambda, alpha};
  return empirical_cdf(config, std::span<const std::pair<double, double>>(&p, 1)).front();
}

std::vector<cplx> resolvent_diagonal_sample(const Sample& sample, cplx z) {
  require_offaxis(z);
  const Eigen::Index n = sample.mt.values.size();
  Eigen::VectorXd re(n), im(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx u = 1.0 / (sample.mt.values[i] - z);
    re[i] = u.real();
    im[i] = u.imag();
  }
  const Eigen::MatrixXd sq = squared_vectors(sample);
  const Eigen::VectorXd r = sq * re;
  const Eigen::VectorXd m = sq * im;
  std::vector<cplx> out(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = {r[j], m[j]};
  return out;
}

ResolventCurve resolvent_diagonal(const ExperimentConfig& config, cplx z) {
  require_offaxis(z);
  const std::size_t n = config.n;
  const MomentArray empty(3 * n);
  const MomentArray acc = run_samples(config, empty, [&](const Sample& s, MomentArray& a) {
    const std::vector<cplx> d = resolvent_diagonal_sample(s, z);
    for (std::size_t j = 0; j < n; ++j) {
      a.add(3 * j, d[j].real());
      a.add(3 * j + 1, d[j].imag());
      a.add(3 * j + 2, s.a[static_cast<Eigen::Index>(j)]);
    }
  });
  ResolventCurve out;
  out.z = z;
  for (std::size_t j = 0; j < n; ++j) {
    out.a.push_back(acc[3 * j + 2].mean());
    out.mean.emplace_back(acc[3 * j].mean(), acc[3 * j + 1].mean());
    out.standard_error.emplace_back(acc[3 * j].standard_error(), acc[3 * j + 1].standard_error());
  }
  return out;
}

}  // namespace freevec
