#pragma once

#include <cstdint>
#include <random>

namespace freevec {

/// Deterministic random stream keyed by (master seed, substream index).
///
/// Each Monte Carlo sample owns one substream, so a sample's draws do not
/// depend on which worker produced it or in what order samples ran.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t substream_index);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t substream_index() const noexcept { return substream_index_; }

  /// Standard normal draw.
  double normal();

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::uint64_t master_seed_;
  std::uint64_t substream_index_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace freevec
