#include <cstdlib>
#include <string>

#include "wdn/simd/kernels.hpp"

namespace wdn::simd {

namespace {

constexpr KernelTable kScalar{&scalar::gemv_bias, &scalar::axpy, &scalar::offset,
                              &scalar::dot};
constexpr KernelTable kAvx2{&avx2::gemv_bias, &avx2::axpy, &avx2::offset, &avx2::dot};

Isa resolve() {
  if (const char* env = std::getenv("WDN_SIMD"); env && std::string(env) == "scalar")
    return Isa::Scalar;
  return cpu_supports(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

}  // namespace

bool cpu_supports(Isa isa) {
  if (isa == Isa::Scalar) return true;
#if defined(__x86_64__) || defined(_M_X64)
  return avx2::compiled() && __builtin_cpu_supports("avx2") &&
         __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active_isa() {
  static const Isa isa = resolve();
  return isa;
}

std::string_view isa_name(Isa isa) {
  return isa == Isa::Avx2 ? "avx2" : "scalar";
}

const KernelTable& table(Isa isa) { return isa == Isa::Avx2 ? kAvx2 : kScalar; }

const KernelTable& kernels() { return table(active_isa()); }

}  // namespace wdn::simd
