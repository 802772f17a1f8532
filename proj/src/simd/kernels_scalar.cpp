#include "wdn/simd/kernels.hpp"

namespace wdn::simd::scalar {

void gemv_bias(std::span<const double> a, std::span<const double> x,
               std::span<const double> b, std::span<double> y) {
  const std::size_t cols = x.size();
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double* row = a.data() + i * cols;
    double acc = 0.0;
    for (std::size_t j = 0; j < cols; ++j) acc += row[j] * x[j];
    y[i] = acc + b[i];
  }
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

void offset(std::span<const double> base, double alpha,
            std::span<const double> dir, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = base[i] + alpha * dir[i];
}

double dot(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

}  // namespace wdn::simd::scalar
