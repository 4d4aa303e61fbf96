#include <cstdlib>
#include <stdexcept>
#include <string>

#include "freevec/kernels.hpp"

namespace freevec::kernels {
namespace {

constexpr KernelTable kScalarTable{Isa::scalar,      scalar::cauchy_sum, scalar::cauchy_sum2,
                                   scalar::dot,      scalar::square,     scalar::sum_squares};

#if defined(FREEVEC_HAVE_AVX2)
constexpr KernelTable kAvx2Table{Isa::avx2,      avx2::cauchy_sum, avx2::cauchy_sum2,
                                 avx2::dot,      avx2::square,     avx2::sum_squares};
#endif

const KernelTable& select_active() {
  if (const char* env = std::getenv("FREEVEC_ISA")) {
    const std::string_view name(env);
    if (name == "scalar") return kScalarTable;
    if (name == "avx2") return table(Isa::avx2);
    throw std::runtime_error("FREEVEC_ISA: unknown instruction set '" + std::string(name) + "'");
  }
  if (supported(Isa::avx2)) return table(Isa::avx2);
  return kScalarTable;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

bool supported(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(FREEVEC_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!supported(isa)) {
    throw std::runtime_error("kernel ISA not available: " + std::string(isa_name(isa)));
  }
#if defined(FREEVEC_HAVE_AVX2)
  if (isa == Isa::avx2) return kAvx2Table;
#endif
  return kScalarTable;
}

const KernelTable& active() {
  static const KernelTable& selected = select_active();
  return selected;
}

}  // namespace freevec::kernels
