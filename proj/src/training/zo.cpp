#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "wdn/rng.hpp"
#include "wdn/simd/kernels.hpp"
#include "wdn/training.hpp"

namespace wdn {

void ZoConfig::validate() const {
  if (num_samples < 1) throw std::invalid_argument("num_samples must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
  if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (!(lr >= 0.0) || !(lr_scale >= 0.0)) throw std::invalid_argument("lr must be >= 0");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
}

double ZoConfig::default_lr(int window) {
  switch (window) {
    case 0: return 2e-5;
    case 2: return 5e-5;
    case 4: return 2e-4;
    case 6: return 5e-4;
  }
  throw std::invalid_argument("no default learning rate for window " + std::to_string(window));
}

ZoEstimate zo_gradient_along(const LossFn& loss, std::span<const double> theta,
                             std::span<const std::vector<double>> directions, double delta,
                             int threads) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
  if (directions.empty()) throw std::invalid_argument("need at least one direction");
  const auto& k = simd::kernels();
  const std::size_t n = directions.size();
  std::vector<double> coef(n, 0.0);
  std::vector<char> ok(n, 0);
  std::vector<std::string> errors(n);

  auto work = [&](std::size_t i) {
    const auto& u = directions[i];
    if (u.size() != theta.size()) {
      errors[i] = "direction length mismatch";
      return;
    }
    std::vector<double> probe(theta.size());
    try {
      k.offset(theta, delta, u, probe);
      const double up = loss(probe);
      k.offset(theta, -delta, u, probe);
      const double down = loss(probe);
      if (!std::isfinite(up) || !std::isfinite(down)) {
        errors[i] = "non-finite loss";
        return;
      }
      coef[i] = (up - down) / (2.0 * delta);
      ok[i] = 1;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  };

  if (threads <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) work(i);
      });
    for (auto& t : pool) t.join();
  }

  // Accumulate in sample order so the result is independent of threading.
  ZoEstimate est;
  est.gradient.assign(theta.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!ok[i]) {
      ++est.dropped;
      std::fprintf(stderr, "zo: dropped sample %zu: %s\n", i, errors[i].c_str());
      continue;
    }
    k.axpy(coef[i], directions[i], est.gradient);
    ++est.used;
  }
  if (est.used == 0) throw std::runtime_error("every zeroth-order sample failed");
  const double inv = 1.0 / est.used;
  for (double& g : est.gradient) g *= inv;
  return est;
}

ZoEstimate zo_gradient(const LossFn& loss, std::span<const double> theta, const ZoConfig& cfg,
                       std::uint64_t rng_seed) {
  cfg.validate();
  std::vector<std::vector<double>> dirs(static_cast<std::size_t>(cfg.num_samples));
  for (int i = 0; i < cfg.num_samples; ++i) {
    Engine eng = make_engine({rng_seed, static_cast<std::uint64_t>(i)});
    std::normal_distribution<double> normal;
    auto& u = dirs[static_cast<std::size_t>(i)];
    u.resize(theta.size());
    for (double& x : u) x = normal(eng);
  }
  return zo_gradient_along(loss, theta, dirs, cfg.delta, cfg.threads);
}

}  // namespace wdn
