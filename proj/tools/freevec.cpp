// freevec command line driver: analytic predictions, Monte Carlo runs and
// figure reproduction. Output is CSV/JSON data plus a run manifest.

#include <chrono>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "freevec/analytic.hpp"
#include "freevec/error.hpp"
#include "freevec/io.hpp"
#include "freevec/kernels.hpp"
#include "freevec/montecarlo.hpp"
#include "freevec/predictions.hpp"
#include "freevec/reproduce.hpp"
#include "freevec/subspace.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace freevec;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDomain = 3;
constexpr int kExitAcceptance = 4;
constexpr int kExitSolver = 5;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain:
    case ErrorKind::edge:
    case ErrorKind::outside_support:
    case ErrorKind::degenerate_gap:
    case ErrorKind::empty_window: return kExitDomain;
    case ErrorKind::convergence:
    case ErrorKind::decomposition_failed: return kExitSolver;
    default: return kExitConfig;
  }
}

struct Common {
  std::uint64_t seed = 7;
  std::size_t workers = 0;
  std::string out_dir = "out";
  double tol = 1e-12;
};

struct ProfileArgs {
  std::string name = "goe";
  double radius = 2.0;
  double lo = 0.0;
  double hi = 1.0;
  double width = 1.0;

  void add(CLI::App* app) {
    app->add_option("--profile", name,
                    "goe | semicircle | linear | uniform-gap | table:<csv path>")->capture_default_str();
    app->add_option("--radius", radius, "semicircle radius")->capture_default_str();
    app->add_option("--lo", lo, "linear profile a(0)")->capture_default_str();
    app->add_option("--hi", hi, "linear profile a(1)")->capture_default_str();
    app->add_option("--width", width, "uniform-gap width")->capture_default_str();
  }

  SpectralProfile build() const {
    if (name == "goe" || name == "semicircle") return SpectralProfile::semicircle_quantile(radius);
    if (name == "linear") return SpectralProfile::linear(lo, hi);
    if (name == "uniform-gap") return SpectralProfile::uniform_gap(width);
    if (name.rfind("table:", 0) == 0) return SpectralProfile::from_csv(name.substr(6));
    throw Error(ErrorKind::config, "unknown profile '" + name + "'");
  }
};

// "lo:hi:step" inclusive grid.
std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      parts.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorKind::config, "bad grid '" + spec + "', expected lo:hi:step");
    }
  }
  if (parts.size() != 3 || !(parts[2] > 0.0) || !(parts[1] >= parts[0])) {
    throw Error(ErrorKind::config, "bad grid '" + spec + "', expected lo:hi:step with step > 0");
  }
  const auto count = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9)) + 1;
  std::vector<double> g(count);
  for (std::size_t k = 0; k < count; ++k) g[k] = parts[0] + static_cast<double>(k) * parts[2];
  return g;
}

Weight parse_weight(const std::string& spec) {
  if (spec == "one") return Weight::one();
  if (spec == "zero") return Weight::none();
  if (spec.rfind("below:", 0) == 0) {
    try {
      return Weight::indicator_below(std::stod(spec.substr(6)));
    } catch (const std::invalid_argument&) {
    }
  }
  throw Error(ErrorKind::config, "unknown weight '" + spec + "' (one | zero | below:<alpha>)");
}

class Run {
 public:
  Run(CLI::App& app, const Common& common, std::string name)
      : app_(app), common_(common), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {
    fs::create_directories(dir());
  }

  fs::path dir() const { return fs::path(common_.out_dir); }
  fs::path file(const std::string& leaf) {
    outputs_.push_back(leaf);
    return dir() / leaf;
  }
  json& tolerances() { return tolerances_; }

  // Config echo limited to the global options and the subcommand that ran.
  std::string config_echo() const {
    std::istringstream in(app_.config_to_str(true, false));
    std::string out, line;
    while (std::getline(in, line)) {
      bool other = false;
      for (const CLI::App* sub : app_.get_subcommands({})) {
        if (sub->get_name() != name_ && line.rfind(sub->get_name() + ".", 0) == 0) other = true;
      }
      if (!other) out += line + "\n";
    }
    return out;
  }

  void finish() {
    const std::string ini = config_echo();
    std::ofstream(dir() / "run.ini") << ini;
    io::RunManifest m;
    m.subcommand = name_;
    m.config = json::object({{"ini", ini}});
    m.master_seed = common_.seed;
    m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    m.outputs = outputs_;
    m.outputs.push_back("run.ini");
    m.tolerances = tolerances_;
    m.kernel_isa = kernels::isa_name(kernels::active().isa);
    io::write_json(dir() / "manifest.json", io::to_json(m));
  }

 private:
  CLI::App& app_;
  const Common& common_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> outputs_;
  json tolerances_ = json::object();
};

SolverOptions solver_options(const Common& c) {
  SolverOptions o;
  o.tol = c.tol;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"freevec: eigenvector overlaps of A + H_t, limiting laws and Monte Carlo"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI configuration file (sections per subcommand)");
  Common common;
  app.add_option("--seed", common.seed, "master seed")->capture_default_str();
  app.add_option("--workers", common.workers, "worker threads (0: available parallelism)")->capture_default_str();
  app.add_option("--out-dir", common.out_dir, "output directory")->capture_default_str();
  app.add_option("--tol", common.tol, "fixed-point residual tolerance")->capture_default_str();
  app.fallthrough();

  std::function<int()> action;

  // predict
  auto* predict = app.add_subcommand("predict", "predicted overlap curve N E[<psi_i|phi_j>^2] vs a_j")->configurable();
  ProfileArgs p_profile;
  p_profile.add(predict);
  double p_t = 1.0;
  std::optional<double> p_lambda;
  std::optional<std::size_t> p_index;
  std::size_t p_n = 400;
  std::string p_regime = "full", p_grid;
  predict->add_option("--t", p_t, "time")->capture_default_str();
  predict->add_option("--lambda", p_lambda, "perturbed eigenvalue location");
  predict->add_option("--index", p_index, "1-based index i (location from the t-quantile)");
  predict->add_option("--n", p_n, "dimension used with --index")->capture_default_str();
  predict->add_option("--regime", p_regime, "full | goe | cauchy | perturbative")->capture_default_str();
  predict->add_option("--grid", p_grid, "a_j grid lo:hi:step (default: initial spectrum, 401 points)");
  predict->callback([&] {
    action = [&] {
      Run run(app, common, "predict");
      const SpectralProfile prof = p_profile.build();
      const Regime regime = parse_regime(p_regime);
      if (p_lambda.has_value() == p_index.has_value()) {
        throw Error(ErrorKind::config, "give exactly one of --lambda and --index");
      }
      const double lambda = p_lambda ? *p_lambda : index_location(prof, p_t, *p_index, p_n, solver_options(common));
      std::vector<double> grid;
      if (p_grid.empty()) {
        for (int k = 0; k <= 400; ++k) grid.push_back(prof.lower() + (prof.upper() - prof.lower()) * k / 400.0);
      } else {
        grid = parse_grid(p_grid);
      }
      const OverlapPrediction pred = predict_curve(regime, prof, p_t, lambda, grid, solver_options(common));
      io::write_prediction_csv(run.file("prediction.csv"), pred);
      run.tolerances()["solver_residual"] = common.tol;
      run.finish();
      std::cout << "lambda_i = " << io::format_double(lambda) << ", " << grid.size() << " points, regime "
                << regime_tag(regime) << "\n";
      return kExitOk;
    };
  });

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo overlap curves")->configurable();
  ExperimentConfig s_cfg;
  std::string s_initial = "goe";
  ProfileArgs s_profile;
  s_profile.name = "goe";
  simulate->add_option("--n", s_cfg.n, "dimension")->capture_default_str();
  simulate->add_option("--t", s_cfg.t, "time")->capture_default_str();
  simulate->add_option("--samples", s_cfg.samples, "number of samples")->capture_default_str();
  simulate->add_option("--index", s_cfg.target_indices, "1-based target indices")->required();
  simulate->add_option("--binning", s_cfg.binning, "odd moving-average window in ranks")->capture_default_str();
  simulate->add_option("--initial", s_initial, "goe (random GOE A) | profile (A = diag of --profile)")
      ->capture_default_str();
  s_profile.add(simulate);
  simulate->callback([&] {
    action = [&] {
      Run run(app, common, "simulate");
      s_cfg.master_seed = common.seed;
      s_cfg.workers = common.workers;
      if (s_initial == "goe") {
        s_cfg.initial = GoeInitial{1.0};
      } else if (s_initial == "profile") {
        s_cfg.initial = ProfileInitial{s_profile.build()};
      } else {
        throw Error(ErrorKind::config, "unknown initial '" + s_initial + "'");
      }
      const std::vector<OverlapCurve> curves = run_overlap_experiment(s_cfg);
      for (const OverlapCurve& c : curves) {
        io::write_overlap_csv(run.file("overlap_i" + std::to_string(c.index) + ".csv"), c);
      }
      run.tolerances()["row_normalization"] = OverlapAccumulator::kRowTolerance;
      run.finish();
      std::cout << curves.size() << " curve(s), " << s_cfg.samples << " samples\n";
      return kExitOk;
    };
  });

  // reproduce
  auto* reproduce = app.add_subcommand("reproduce", "reproduce the overlap figures (fig1: i=200, fig2: i=320)")->configurable();
  std::string r_fig;
  FigureSpec r_spec;
  reproduce->add_option("figure", r_fig, "fig1 | fig2")->required()->check(CLI::IsMember({"fig1", "fig2"}));
  reproduce->add_option("--samples", r_spec.samples, "number of samples")->capture_default_str();
  reproduce->add_option("--min-samples", r_spec.min_samples, "threshold check skipped below this")
      ->capture_default_str();
  reproduce->callback([&] {
    action = [&] {
      Run run(app, common, "reproduce");
      r_spec.master_seed = common.seed;
      r_spec.workers = common.workers;
      const bool fig1 = r_fig == "fig1";
      r_spec.indices = {fig1 ? std::size_t{200} : std::size_t{320}};
      const FigureReport rep = run_figure(r_spec, {fig1 ? 0.0 : 0.983}).front();
      io::write_overlap_csv(run.file(r_fig + "_empirical.csv"), rep.curve);
      OverlapPrediction pred;
      pred.lambda_i = rep.lambda;
      pred.regime = Regime::goe_closed_form;
      pred.a_grid = rep.curve.a;
      pred.values = rep.predicted;
      io::write_prediction_csv(run.file(r_fig + "_predicted.csv"), pred);
      json report = {{"figure", r_fig},
                     {"index", rep.index},
                     {"lambda_i", rep.lambda},
                     {"samples", r_spec.samples},
                     {"band", {r_spec.band_lo, r_spec.band_hi}},
                     {"max_rel_error", rep.max_rel_error},
                     {"rel_tol", r_spec.rel_tol},
                     {"peak_location", rep.peak_location},
                     {"peak_target", rep.peak_target},
                     {"peak_tol", r_spec.peak_tol},
                     {"checked", rep.checked},
                     {"pass", rep.pass}};
      io::write_json(run.file(r_fig + "_report.json"), report);
      run.tolerances()["rel_tol"] = r_spec.rel_tol;
      run.tolerances()["peak_tol"] = r_spec.peak_tol;
      run.finish();
      std::cout << r_fig << ": max relative error " << rep.max_rel_error << " on [" << r_spec.band_lo << ", "
                << r_spec.band_hi << "], peak " << rep.peak_location << " (target " << rep.peak_target << ")\n";
      if (!rep.checked) {
        std::cout << "report only: " << r_spec.samples << " < " << r_spec.min_samples << " samples\n";
        return kExitOk;
      }
      std::cout << (rep.pass ? "PASS" : "FAIL") << "\n";
      return rep.pass ? kExitOk : kExitAcceptance;
    };
  });

  // subspace
  auto* subspace = app.add_subcommand("subspace", "overlap distance D between spectral windows")->configurable();
  ExperimentConfig u_cfg;
  u_cfg.t = 0.02;
  u_cfg.samples = 200;
  std::vector<double> u_gamma{-1.0, 1.0};
  double u_delta = 0.2;
  subspace->add_option("--n", u_cfg.n, "dimension")->capture_default_str();
  subspace->add_option("--t", u_cfg.t, "time")->capture_default_str();
  subspace->add_option("--samples", u_cfg.samples, "number of samples")->capture_default_str();
  subspace->add_option("--gamma", u_gamma, "window gamma- gamma+")->expected(2)->capture_default_str();
  subspace->add_option("--delta", u_delta, "margin delta > 0")->capture_default_str();
  subspace->callback([&] {
    action = [&] {
      Run run(app, common, "subspace");
      u_cfg.master_seed = common.seed;
      u_cfg.workers = common.workers;
      u_cfg.initial = GoeInitial{1.0};
      const WindowSpec w{u_gamma[0], u_gamma[1], u_delta};
      const SpectralProfile goe = SpectralProfile::semicircle_quantile(2.0);
      const double predicted = predicted_distance(u_cfg.t, w, goe);
      const SubspaceExperiment e = run_subspace_experiment(u_cfg, w);
      const SubspaceReport first = make_report(build_overlap_block(draw_sample(u_cfg, 0), w));
      const double mean = e.distance.mean();
      json report = {{"window", io::to_json(w)},
                     {"n", u_cfg.n},
                     {"t", u_cfg.t},
                     {"samples", u_cfg.samples},
                     {"mean_P", e.mean_P()},
                     {"mean_Q", e.mean_Q()},
                     {"distance_mean", mean},
                     {"distance_stderr", e.distance.standard_error()},
                     {"rank_deficient_samples", e.rank_deficient},
                     {"predicted_distance", predicted},
                     {"first_sample", io::to_json(first)}};
      report["ratio"] = predicted > 0.0 ? json(mean / predicted) : json(nullptr);
      io::write_json(run.file("subspace.json"), report);
      run.tolerances()["singular_floor"] = kSingularFloor;
      run.finish();
      std::cout << "D = " << mean << " +- " << e.distance.standard_error() << ", predicted " << predicted << "\n";
      return kExitOk;
    };
  });

  // stieltjes
  auto* stieltjes = app.add_subcommand("stieltjes", "solve the fixed point on a lambda grid")->configurable();
  ProfileArgs t_profile;
  t_profile.add(stieltjes);
  double t_t = 1.0;
  std::string t_grid = "-3:3:0.01";
  std::vector<double> t_eta = default_eta_schedule();
  stieltjes->add_option("--t", t_t, "time")->capture_default_str();
  stieltjes->add_option("--grid", t_grid, "lambda grid lo:hi:step")->capture_default_str();
  stieltjes->add_option("--eta", t_eta, "decreasing eta schedule")->capture_default_str();
  stieltjes->callback([&] {
    action = [&] {
      Run run(app, common, "stieltjes");
      const std::vector<double> grid = parse_grid(t_grid);
      const StieltjesSolution sol = solve_grid(t_profile.build(), t_t, grid, t_eta, solver_options(common));
      io::write_stieltjes_csv(run.file("stieltjes.csv"), sol);
      run.tolerances()["solver_residual"] = common.tol;
      run.tolerances()["support_threshold"] = kSupportThreshold;
      run.finish();
      std::cout << grid.size() << " points, worst residual " << sol.worst_residual << "\n";
      if (!(sol.worst_residual <= 1e-10)) {
        std::cerr << "solver residual above 1e-10: " << sol.worst_residual << "\n";
        return kExitSolver;
      }
      return kExitOk;
    };
  });

  // theta
  auto* theta = app.add_subcommand("theta", "limiting Theta^g(z), optionally with a Monte Carlo estimate")->configurable();
  ProfileArgs h_profile;
  h_profile.add(theta);
  double h_t = 1.0;
  std::vector<double> h_z{0.0, 0.05};
  std::string h_weight = "one";
  std::size_t h_samples = 0, h_n = 400;
  theta->add_option("--t", h_t, "time")->capture_default_str();
  theta->add_option("--z", h_z, "Re z, Im z")->expected(2)->capture_default_str();
  theta->add_option("--weight", h_weight, "one | zero | below:<alpha>")->capture_default_str();
  theta->add_option("--samples", h_samples, "Monte Carlo samples (0: none)")->capture_default_str();
  theta->add_option("--n", h_n, "Monte Carlo dimension")->capture_default_str();
  theta->callback([&] {
    action = [&] {
      Run run(app, common, "theta");
      const SpectralProfile prof = h_profile.build();
      const std::complex<double> z(h_z[0], h_z[1]);
      const Weight g = parse_weight(h_weight);
      const std::complex<double> v = theta_limit(prof, h_t, z, g, solver_options(common));
      json out = {{"z", {z.real(), z.imag()}}, {"t", h_t}, {"weight", h_weight}, {"limit", {v.real(), v.imag()}}};
      if (h_samples > 0) {
        ExperimentConfig cfg;
        cfg.n = h_n;
        cfg.t = h_t;
        cfg.samples = h_samples;
        cfg.master_seed = common.seed;
        cfg.workers = common.workers;
        cfg.initial = ProfileInitial{prof};
        if (h_profile.name == "goe") cfg.initial = GoeInitial{1.0};
        const ComplexEstimate e = estimate_theta(cfg, z, g);
        out["monte_carlo"] = {{"mean", {e.mean.real(), e.mean.imag()}},
                              {"stderr", {e.standard_error.real(), e.standard_error.imag()}},
                              {"samples", h_samples},
                              {"n", h_n}};
      }
      io::write_json(run.file("theta.json"), out);
      run.finish();
      std::cout << out.dump() << "\n";
      return kExitOk;
    };
  });

  // cdf
  auto* cdf = app.add_subcommand("cdf", "limiting bivariate CDF Phi(lambda, alpha)")->configurable();
  ProfileArgs c_profile;
  c_profile.add(cdf);
  double c_t = 1.0, c_lambda = 0.0, c_alpha = 0.0;
  std::size_t c_samples = 0, c_n = 400;
  cdf->add_option("--t", c_t, "time")->capture_default_str();
  cdf->add_option("--lambda", c_lambda, "lambda")->capture_default_str();
  cdf->add_option("--alpha", c_alpha, "alpha")->capture_default_str();
  cdf->add_option("--samples", c_samples, "Monte Carlo samples (0: none)")->capture_default_str();
  cdf->add_option("--n", c_n, "Monte Carlo dimension")->capture_default_str();
  cdf->callback([&] {
    action = [&] {
      Run run(app, common, "cdf");
      const SpectralProfile prof = c_profile.build();
      CdfOptions co;
      co.solver = solver_options(common);
      const double v = cdf_limit(prof, c_t, c_lambda, c_alpha, co);
      json out = {{"t", c_t}, {"lambda", c_lambda}, {"alpha", c_alpha}, {"limit", v}};
      if (c_samples > 0) {
        ExperimentConfig cfg;
        cfg.n = c_n;
        cfg.t = c_t;
        cfg.samples = c_samples;
        cfg.master_seed = common.seed;
        cfg.workers = common.workers;
        cfg.initial = ProfileInitial{prof};
        if (c_profile.name == "goe") cfg.initial = GoeInitial{1.0};
        const CdfEstimate e = empirical_cdf(cfg, c_lambda, c_alpha);
        out["monte_carlo"] = {{"mean", e.mean}, {"stderr", e.standard_error}, {"samples", c_samples}, {"n", c_n}};
      }
      io::write_json(run.file("cdf.json"), out);
      run.tolerances()["outer_quadrature"] = co.tol;
      run.finish();
      std::cout << out.dump() << "\n";
      return kExitOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  try {
    return action();
  } catch (const ConvergenceError& e) {
    std::cerr << "solver failure: " << e.what() << " (worst residual " << e.residual() << ")\n";
    return kExitSolver;
  } catch (const Error& e) {
    std::cerr << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
