#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "wdn/simd/kernels.hpp"

using namespace wdn::simd;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& eng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(eng);
  return v;
}

// Different summation orders agree to a few ulps of the absolute sum.
double tolerance(std::span<const double> x, std::span<const double> y) {
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] * y[i]);
  return 1e-14 * (1.0 + s);
}

}  // namespace

TEST_CASE("scalar kernels against hand values") {
  const std::vector<double> a = {1, 2, 3, 4, 5, 6};  // 2 x 3
  const std::vector<double> x = {1, 0, -1};
  const std::vector<double> b = {0.5, -0.5};
  std::vector<double> y(2);
  scalar::gemv_bias(a, x, b, y);
  CHECK(y == std::vector<double>{-1.5, -2.5});
  std::vector<double> acc = {1, 1, 1};
  scalar::axpy(2.0, x, acc);
  CHECK(acc == std::vector<double>{3, 1, -1});
  std::vector<double> out(3);
  scalar::offset(acc, -1.0, x, out);
  CHECK(out == std::vector<double>{2, 1, 0});
  CHECK(scalar::dot(x, acc) == 4.0);
}

TEST_CASE("vector kernels match the scalar reference") {
  CHECK(table(Isa::Scalar).dot == &scalar::dot);
  CHECK(!isa_name(active_isa()).empty());
  if (!avx2::compiled() || !cpu_supports(Isa::Avx2)) {
    MESSAGE("AVX2 path unavailable on this machine; only the scalar path was checked");
    return;
  }
  const KernelTable& v = table(Isa::Avx2);
  std::mt19937_64 eng(5);
  // Lengths straddle the 4-wide lanes and the unrolled blocks.
  for (std::size_t n : {1u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 17u, 31u, 64u, 65u, 129u}) {
    const auto x = random_vector(n, eng);
    const auto y = random_vector(n, eng);
    CHECK(std::abs(v.dot(x, y) - scalar::dot(x, y)) <= tolerance(x, y));

    auto ys = y, yv = y;
    scalar::axpy(0.7, x, ys);
    v.axpy(0.7, x, yv);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ys[i] - yv[i]) <= 1e-15 * (1 + std::abs(ys[i])));

    std::vector<double> os(n), ov(n);
    scalar::offset(x, -0.3, y, os);
    v.offset(x, -0.3, y, ov);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(os[i] - ov[i]) <= 1e-15 * (1 + std::abs(os[i])));

    for (std::size_t rows : {1u, 2u, 5u, 64u}) {
      const auto a = random_vector(rows * n, eng);
      const auto b = random_vector(rows, eng);
      std::vector<double> gs(rows), gv(rows);
      scalar::gemv_bias(a, x, b, gs);
      v.gemv_bias(a, x, b, gv);
      for (std::size_t r = 0; r < rows; ++r)
        CHECK(std::abs(gs[r] - gv[r]) <=
              tolerance(std::span<const double>(a).subspan(r * n, n), x) + 1e-15 * std::abs(b[r]));
    }
  }
}
