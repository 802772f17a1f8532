#pragma once
// Dense double-precision kernels used by the policy network and the
// zeroth-order optimizer. Each kernel has a scalar reference and, on x86-64,
// an AVX2+FMA variant. The active variant is chosen once per process.

#include <cstddef>
#include <span>
#include <string_view>

namespace wdn::simd {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  // y = A x + b, A row-major with y.size() rows and x.size() columns.
  void (*gemv_bias)(std::span<const double> a, std::span<const double> x,
                    std::span<const double> b, std::span<double> y);
  // y += alpha * x
  void (*axpy)(double alpha, std::span<const double> x, std::span<double> y);
  // out = base + alpha * dir
  void (*offset)(std::span<const double> base, double alpha,
                 std::span<const double> dir, std::span<double> out);
  double (*dot)(std::span<const double> x, std::span<const double> y);
};

namespace scalar {
void gemv_bias(std::span<const double> a, std::span<const double> x,
               std::span<const double> b, std::span<double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void offset(std::span<const double> base, double alpha,
            std::span<const double> dir, std::span<double> out);
double dot(std::span<const double> x, std::span<const double> y);
}  // namespace scalar

namespace avx2 {
// True when this build carries the AVX2 variants at all.
bool compiled();
void gemv_bias(std::span<const double> a, std::span<const double> x,
               std::span<const double> b, std::span<double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void offset(std::span<const double> base, double alpha,
            std::span<const double> dir, std::span<double> out);
double dot(std::span<const double> x, std::span<const double> y);
}  // namespace avx2

// CPU support check (cpuid), independent of the WDN_SIMD override.
bool cpu_supports(Isa isa);

// Variant in use. Resolved on first call: AVX2 when compiled and supported,
// unless the environment variable WDN_SIMD=scalar forces the reference path.
Isa active_isa();
std::string_view isa_name(Isa isa);

const KernelTable& table(Isa isa);
const KernelTable& kernels();

}  // namespace wdn::simd
