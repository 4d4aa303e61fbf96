#include "freevec/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>

#include "freevec/error.hpp"

namespace freevec::io {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_stieltjes_csv(const std::filesystem::path& path, const StieltjesSolution& sol) {
  std::ofstream out = open_out(path);
  out << "lambda,eta,reG,imG,rho,hilbert\n";
  for (std::size_t k = 0; k < sol.lambdas.size(); ++k) {
    const std::string lam = format_double(sol.lambdas[k]);
    for (std::size_t e = 0; e < sol.eta_schedule.size(); ++e) {
      const std::complex<double> g = sol.values[k][e];
      out << lam << ',' << format_double(sol.eta_schedule[e]) << ',' << format_double(g.real()) << ','
          << format_double(g.imag()) << ',' << format_double(g.imag() / std::numbers::pi) << ','
          << format_double(g.real()) << '\n';
    }
    const DensityLine& d = sol.lines[k];
    out << lam << ",0," << format_double(d.hilbert) << ',' << format_double(std::numbers::pi * d.rho) << ','
        << format_double(d.rho) << ',' << format_double(d.hilbert) << '\n';
  }
  finish(out, path);
}

void write_prediction_csv(const std::filesystem::path& path, const OverlapPrediction& pred) {
  std::ofstream out = open_out(path);
  out << "a_j,predicted_overlap,regime_tag\n";
  for (std::size_t k = 0; k < pred.a_grid.size(); ++k) {
    out << format_double(pred.a_grid[k]) << ',' << format_double(pred.values[k]) << ','
        << regime_tag(pred.regime) << '\n';
  }
  finish(out, path);
}

void write_overlap_csv(const std::filesystem::path& path, const OverlapCurve& curve) {
  std::ofstream out = open_out(path);
  out << "j,a_j_mean,overlap_mean_timesN,stderr_timesN\n";
  for (std::size_t j = 0; j < curve.value.size(); ++j) {
    out << (j + 1) << ',' << format_double(curve.a[j]) << ',' << format_double(curve.value[j]) << ','
        << format_double(curve.standard_error[j]) << '\n';
  }
  finish(out, path);
}

nlohmann::json to_json(const SubspaceReport& report) {
  nlohmann::json j;
  j["P"] = report.P;
  j["Q"] = report.Q;
  j["singular_values"] = report.singular_values;
  if (std::isinf(report.distance)) {
    j["distance"] = "inf";
  } else {
    j["distance"] = report.distance;
  }
  j["rank_deficient"] = report.rank_deficient;
  return j;
}

nlohmann::json to_json(const WindowSpec& window) {
  return {{"gamma_minus", window.gamma_minus}, {"gamma_plus", window.gamma_plus}, {"delta", window.delta}};
}

nlohmann::json to_json(const RunManifest& m) {
  return {{"subcommand", m.subcommand},
          {"config", m.config},
          {"master_seed", m.master_seed},
          {"version", kVersion},
          {"kernel_isa", m.kernel_isa},
          {"wall_seconds", m.wall_seconds},
          {"outputs", m.outputs},
          {"tolerances", m.tolerances}};
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
  std::ofstream out = open_out(path);
  out << value.dump(2) << '\n';
  finish(out, path);
}

}  // namespace freevec::io
