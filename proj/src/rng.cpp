#include "freevec/rng.hpp"

namespace freevec {
namespace {

std::mt19937_64 make_engine(std::uint64_t master, std::uint64_t index) {
  // The constant word separates these streams from any other use of the seed.
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x6a09e667u};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t substream_index)
    : master_seed_(master_seed),
      substream_index_(substream_index),
      engine_(make_engine(master_seed, substream_index)) {}

double RngStream::normal() { return normal_(engine_); }

}  // namespace freevec
