#include "freevec/profile.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include <boost/math/tools/roots.hpp>

#include "freevec/error.hpp"

namespace freevec {
namespace {

constexpr double kPi = std::numbers::pi;

// Butland/Fritsch-Carlson slopes: weighted harmonic mean of adjacent secants,
// one-sided secants at the ends. Positive whenever the data increase strictly.
std::vector<double> monotone_slopes(const std::vector<double>& x, const std::vector<double>& a) {
  const std::size_t n = x.size();
  std::vector<double> d(n);
  std::vector<double> h(n - 1), s(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x[k + 1] - x[k];
    s[k] = (a[k + 1] - a[k]) / h[k];
  }
  d[0] = s[0];
  d[n - 1] = s[n - 2];
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    d[k] = (w1 + w2) / (w1 / s[k - 1] + w2 / s[k]);
  }
  return d;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

}  // namespace

SpectralProfile SpectralProfile::linear(double lo, double hi) {
  if (!(hi > lo)) {
    throw Error(ErrorKind::invalid_profile, "linear profile needs hi > lo");
  }
  SpectralProfile p;
  p.kind_ = Kind::linear;
  p.lo_ = lo;
  p.hi_ = hi;
  p.validate();
  return p;
}

SpectralProfile SpectralProfile::uniform_gap(double width) {
  if (!(width > 0.0)) {
    throw Error(ErrorKind::invalid_profile, "uniform-gap profile needs width > 0");
  }
  SpectralProfile p = linear(-0.5 * width, 0.5 * width);
  p.kind_ = Kind::uniform_gap;
  return p;
}

SpectralProfile SpectralProfile::semicircle_quantile(double radius) {
  if (!(radius > 0.0)) {
    throw Error(ErrorKind::invalid_profile, "semicircle radius must be positive");
  }
  SpectralProfile p;
  p.kind_ = Kind::semicircle_quantile;
  p.radius_ = radius;
  p.lo_ = -radius;
  p.hi_ = radius;
  p.validate();
  return p;
}

SpectralProfile SpectralProfile::tabulated(std::vector<double> x, std::vector<double> a) {
  if (x.size() != a.size() || x.size() < 2) {
    throw Error(ErrorKind::invalid_profile, "tabulated profile needs >= 2 (x, a) pairs");
  }
  if (x.front() != 0.0 || x.back() != 1.0) {
    throw Error(ErrorKind::invalid_profile, "tabulated profile must span x in [0, 1]");
  }
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    if (!(x[k + 1] > x[k])) {
      throw Error(ErrorKind::invalid_profile, "tabulated x values must increase strictly");
    }
    if (!(a[k + 1] > a[k])) {
      throw Error(ErrorKind::invalid_profile,
                  "tabulated profile is not strictly increasing at x = " + std::to_string(x[k + 1]));
    }
  }
  SpectralProfile p;
  p.kind_ = Kind::tabulated;
  p.lo_ = a.front();
  p.hi_ = a.back();
  p.td_ = monotone_slopes(x, a);
  p.tx_ = std::move(x);
  p.ta_ = std::move(a);
  p.validate();
  return p;
}

SpectralProfile SpectralProfile::from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open profile table " + path.string());
  std::vector<double> xs, as;
  std::string line;
  bool header = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorKind::io, path.string() + ":" + std::to_string(line_no) + ": expected 'x,a'");
    }
    try {
      xs.push_back(std::stod(trim(line.substr(0, comma))));
      as.push_back(std::stod(trim(line.substr(comma + 1))));
    } catch (const std::exception&) {
      throw Error(ErrorKind::io, path.string() + ":" + std::to_string(line_no) + ": bad number");
    }
  }
  return tabulated(std::move(xs), std::move(as));
}

std::string SpectralProfile::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::linear: os << "linear(lo=" << lo_ << ",hi=" << hi_ << ")"; break;
    case Kind::uniform_gap: os << "uniform-gap(width=" << (hi_ - lo_) << ")"; break;
    case Kind::semicircle_quantile: os << "semicircle-quantile(radius=" << radius_ << ")"; break;
    case Kind::tabulated: os << "tabulated(points=" << tx_.size() << ")"; break;
  }
  return os.str();
}

void SpectralProfile::validate() const {
  constexpr int kProbes = 1000;  // spacing 1e-3
  double prev = eval_unchecked(0.0);
  for (int k = 1; k <= kProbes; ++k) {
    const double x = static_cast<double>(k) / kProbes;
    const double v = eval_unchecked(x);
    if (!(v > prev)) {
      throw Error(ErrorKind::invalid_profile,
                  "profile is not strictly increasing near x = " + std::to_string(x));
    }
    if (std::abs(inverse(v) - x) > 1e-9) {
      throw Error(ErrorKind::invalid_profile,
                  "profile inverse check failed near x = " + std::to_string(x));
    }
    prev = v;
  }
}

std::size_t SpectralProfile::segment(double x) const {
  const auto it = std::upper_bound(tx_.begin(), tx_.end(), x);
  const auto k = static_cast<std::size_t>(std::distance(tx_.begin(), it));
  return std::clamp<std::size_t>(k == 0 ? 0 : k - 1, 0, tx_.size() - 2);
}

double SpectralProfile::semicircle_inverse_cdf(double x) const {
  // a = R sin(theta) with 2 theta + sin(2 theta) = 2 pi (x - 1/2).
  if (x <= 0.0) return -radius_;
  if (x >= 1.0) return radius_;
  const double c = 2.0 * kPi * (x - 0.5);
  const auto f = [c](double th) {
    return std::make_pair(2.0 * th + std::sin(2.0 * th) - c, 4.0 * std::cos(th) * std::cos(th));
  };
  std::uintmax_t iters = 200;
  const double th = boost::math::tools::newton_raphson_iterate(
      f, std::clamp(c / 4.0, -kPi / 2, kPi / 2), -kPi / 2, kPi / 2,
      std::numeric_limits<double>::digits - 2, iters);
  return radius_ * std::sin(th);
}

double SpectralProfile::eval_unchecked(double x) const {
  switch (kind_) {
    case Kind::linear:
    case Kind::uniform_gap: return lo_ + (hi_ - lo_) * x;
    case Kind::semicircle_quantile: return semicircle_inverse_cdf(x);
    case Kind::tabulated: {
      const std::size_t k = segment(x);
      const double h = tx_[k + 1] - tx_[k];
      const double s = (x - tx_[k]) / h;
      const double s2 = s * s, s3 = s2 * s;
      const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
      const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
      return h00 * ta_[k] + h10 * h * td_[k] + h01 * ta_[k + 1] + h11 * h * td_[k + 1];
    }
  }
  return 0.0;
}

double SpectralProfile::derivative_unchecked(double x) const {
  switch (kind_) {
    case Kind::linear:
    case Kind::uniform_gap: return hi_ - lo_;
    case Kind::semicircle_quantile: {
      const double a = semicircle_inverse_cdf(x);
      const double r2 = radius_ * radius_;
      return kPi * r2 / (2.0 * std::sqrt(std::max(r2 - a * a, 0.0)));
    }
    case Kind::tabulated: {
      const std::size_t k = segment(x);
      const double h = tx_[k + 1] - tx_[k];
      const double s = (x - tx_[k]) / h;
      const double s2 = s * s;
      const double d00 = (6 * s2 - 6 * s) / h, d10 = 3 * s2 - 4 * s + 1;
      const double d01 = (-6 * s2 + 6 * s) / h, d11 = 3 * s2 - 2 * s;
      return d00 * ta_[k] + d10 * td_[k] + d01 * ta_[k + 1] + d11 * td_[k + 1];
    }
  }
  return 0.0;
}

double SpectralProfile::eval(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorKind::domain, "profile argument outside [0, 1]: " + std::to_string(x));
  }
  return eval_unchecked(x);
}

double SpectralProfile::inverse(double alpha) const {
  if (!(alpha >= lo_ && alpha <= hi_)) {
    throw Error(ErrorKind::domain, "value outside the profile range: " + std::to_string(alpha));
  }
  switch (kind_) {
    case Kind::linear:
    case Kind::uniform_gap: return (alpha - lo_) / (hi_ - lo_);
    case Kind::semicircle_quantile: {
      const double r2 = radius_ * radius_;
      const double u = std::clamp(alpha / radius_, -1.0, 1.0);
      const double x = 0.5 + (alpha * std::sqrt(std::max(r2 - alpha * alpha, 0.0)) / r2 +
                              std::asin(u)) / kPi;
      return std::clamp(x, 0.0, 1.0);
    }
    case Kind::tabulated: {
      const auto it = std::upper_bound(ta_.begin(), ta_.end(), alpha);
      std::size_t k = static_cast<std::size_t>(std::distance(ta_.begin(), it));
      k = std::clamp<std::size_t>(k == 0 ? 0 : k - 1, 0, ta_.size() - 2);
      if (alpha == ta_[k]) return tx_[k];
      if (alpha == ta_[k + 1]) return tx_[k + 1];
      const auto f = [&](double x) {
        return std::make_pair(eval_unchecked(x) - alpha, derivative_unchecked(x));
      };
      const double guess =
          tx_[k] + (alpha - ta_[k]) / (ta_[k + 1] - ta_[k]) * (tx_[k + 1] - tx_[k]);
      std::uintmax_t iters = 200;
      return boost::math::tools::newton_raphson_iterate(
          f, guess, tx_[k], tx_[k + 1], std::numeric_limits<double>::digits - 4, iters);
    }
  }
  return 0.0;
}

double SpectralProfile::derivative(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorKind::domain, "profile argument outside [0, 1]: " + std::to_string(x));
  }
  if (edge_singular() && (x < kEdgeGuard || x > 1.0 - kEdgeGuard)) {
    throw Error(ErrorKind::edge, "a'(x) diverges at the support edge; x = " + std::to_string(x));
  }
  return derivative_unchecked(x);
}

double SpectralProfile::induced_density(double alpha) const {
  const double x = inverse(alpha);
  if (edge_singular()) {
    if (x < kEdgeGuard || x > 1.0 - kEdgeGuard) {
      throw Error(ErrorKind::edge, "density requested at the support edge: " + std::to_string(alpha));
    }
    const double r2 = radius_ * radius_;
    return 2.0 * std::sqrt(r2 - alpha * alpha) / (kPi * r2);
  }
  return 1.0 / derivative_unchecked(x);
}

double SpectralProfile::cdf(double alpha) const {
  if (alpha <= lo_) return 0.0;
  if (alpha >= hi_) return 1.0;
  return inverse(alpha);
}

}  // namespace freevec
