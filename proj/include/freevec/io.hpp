#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "freevec/analytic.hpp"
#include "freevec/montecarlo.hpp"
#include "freevec/predictions.hpp"
#include "freevec/subspace.hpp"

namespace freevec::io {

/// Shortest round-trip decimal form of a double ('.' separator).
std::string format_double(double v);

/// Columns lambda, eta, reG, imG, rho, hilbert. One row per schedule entry
/// (rho = imG/pi, hilbert = reG at that eta) followed by the extrapolated
/// eta = 0 row.
void write_stieltjes_csv(const std::filesystem::path& path, const StieltjesSolution& sol);

/// Columns a_j, predicted_overlap, regime_tag.
void write_prediction_csv(const std::filesystem::path& path, const OverlapPrediction& pred);

/// Columns j (1-based), a_j_mean, overlap_mean_timesN, stderr_timesN.
void write_overlap_csv(const std::filesystem::path& path, const OverlapCurve& curve);

nlohmann::json to_json(const SubspaceReport& report);
nlohmann::json to_json(const WindowSpec& window);

void write_json(const std::filesystem::path& path, const nlohmann::json& value);

/// Run manifest: subcommand, config echo, seed, version, wall time, outputs,
/// tolerances.
struct RunManifest {
  std::string subcommand;
  nlohmann::json config = nlohmann::json::object();
  std::uint64_t master_seed = 0;
  double wall_seconds = 0.0;
  std::vector<std::string> outputs;
  nlohmann::json tolerances = nlohmann::json::object();
  std::string kernel_isa;
};

nlohmann::json to_json(const RunManifest& manifest);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace freevec::io
