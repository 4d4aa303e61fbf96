#include "freevec/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "freevec/kernels.hpp"

namespace freevec {
namespace {

// Kronrod abscissae on [0, 1) (positive half, descending) and weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// 7-point Gauss weights live on the odd Kronrod indices 1, 3, 5, 7.
constexpr std::array<double, 8> kWg = {0.0, 0.129484966168869693270611432679082,
                                       0.0, 0.279705391489276667901467771423780,
                                       0.0, 0.381830050505118944950369775488975,
                                       0.0, 0.417959183673469387755102040816327};

}  // namespace

Weight Weight::indicator_below(double alpha) {
  return {[alpha](double a) { return a <= alpha ? 1.0 : 0.0; }, {alpha}, false};
}

Weight Weight::function(std::function<double(double)> g, std::vector<double> breakpoints) {
  return {std::move(g), std::move(breakpoints), false};
}

CauchyRule::CauchyRule(const SpectralProfile& profile, Weight g)
    : CauchyRule(profile, std::move(g), Options{}) {}

CauchyRule::CauchyRule(const SpectralProfile& profile, Weight g, Options options)
    : profile_(profile), g_(std::move(g)), options_(options) {
  // Panel boundaries: a uniform split of [0, 1] plus the images of the
  // weight's jump points.
  std::vector<double> cuts;
  const std::size_t m = std::max<std::size_t>(options_.initial_panels, 1);
  for (std::size_t k = 0; k <= m; ++k) cuts.push_back(static_cast<double>(k) / static_cast<double>(m));
  for (double alpha : g_.breakpoints) {
    if (alpha > profile.lower() && alpha < profile.upper()) cuts.push_back(profile.inverse(alpha));
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  if (g_.zero) return;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (cuts[k + 1] > cuts[k]) panels_.push_back(make_panel(cuts[k], cuts[k + 1]));
  }
}

CauchyRule::Panel CauchyRule::make_panel(double lo, double hi) const {
  Panel p{lo, hi, {}, {}, {}};
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  for (std::size_t k = 0; k < kNodes; ++k) {
    // k = 0..6 negative side, 7 centre, 8..14 positive side.
    const std::size_t s = k < 7 ? k : (k == 7 ? 7 : 14 - k);
    const double xi = k < 7 ? -kXgk[s] : kXgk[s];
    const double x = std::clamp(c + h * xi, 0.0, 1.0);
    const double a = profile_.eval(x);
    const double g = g_(a);
    p.a[k] = a;
    p.wk[k] = h * kWgk[s] * g;
    p.wg[k] = h * kWg[s] * g;
  }
  return p;
}

CauchyRule::Result CauchyRule::integrate(std::complex<double> zeta) {
  const kernels::KernelTable& kt = kernels::active();
  std::vector<double> errs;
  for (;;) {
    Result r{};
    errs.assign(panels_.size(), 0.0);
    for (std::size_t k = 0; k < panels_.size(); ++k) {
      const Panel& p = panels_[k];
      const kernels::CauchyPair kr = kt.cauchy_sum2(p.wk.data(), p.a.data(), kNodes, zeta);
      const std::complex<double> gr = kt.cauchy_sum(p.wg.data(), p.a.data(), kNodes, zeta);
      r.value += kr.first;
      r.derivative += kr.second;
      errs[k] = std::abs(kr.first - gr);
      r.error += errs[k];
    }
    const double tol = std::max(options_.abs_tol, options_.rel_tol * std::abs(r.value));
    if (r.error <= tol || panels_.size() >= options_.max_panels) return r;

    // Split every panel carrying more than its share of the budget.
    const double share = tol / static_cast<double>(panels_.size());
    std::vector<Panel> next;
    next.reserve(panels_.size() * 2);
    bool split = false;
    for (std::size_t k = 0; k < panels_.size(); ++k) {
      const Panel& p = panels_[k];
      if (errs[k] > share && p.hi - p.lo > 1e-14 &&
          next.size() + (panels_.size() - k) < options_.max_panels) {
        split = true;
        const double mid = 0.5 * (p.lo + p.hi);
        next.push_back(make_panel(p.lo, mid));
        next.push_back(make_panel(mid, p.hi));
      } else {
        next.push_back(p);
      }
    }
    panels_ = std::move(next);
    if (!split) return r;
  }
}

}  // namespace freevec
