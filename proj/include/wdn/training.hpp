#pragma once
// Operational loss with barrier terms and zeroth-order SGD over episodes.

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "wdn/controller.hpp"
#include "wdn/episode.hpp"

namespace wdn {

struct LossConfig {
  double gamma1 = 1.0;       // pressure deviation weight
  double gamma2 = 1e-3;      // per kWh
  double lambda_max = 10.0;
  double lambda_min = 10.0;
  double h_star = 60.0;      // psi
  double h_max = 100.0;
  double h_min = 20.0;
  double nonconvergence_surcharge = 1.0;  // per non-converged step
  bool pool_all_junctions = false;        // else interest nodes only

  void validate() const;
};

struct LossBreakdown {
  double total = 0.0;
  double pressure = 0.0;     // gamma1 * mean squared relative deviation
  double energy = 0.0;       // gamma2 * kWh
  double max_barrier = 0.0;  // lambda_max * mean squared hinge above h_max
  double min_barrier = 0.0;  // lambda_min * mean squared hinge below h_min
  double surcharge = 0.0;
};

// Node indices the pressure terms average over.
std::vector<std::size_t> evaluation_nodes(const Network& net, bool pool_all_junctions);

LossBreakdown episode_loss(const EpisodeResult& result, const Network& net,
                           const LossConfig& cfg);

struct ZoConfig {
  int num_samples = 10;
  double delta = 0.05;
  int epochs = 10;
  double lr = 2e-5;
  double lr_scale = 1.0;  // multiplies lr
  std::uint64_t seed = 0;
  int threads = 1;

  double step_size() const { return lr * lr_scale; }
  void validate() const;
  // Per-window defaults: 0 -> 2e-5, 2 -> 5e-5, 4 -> 2e-4, 6 -> 5e-4.
  static double default_lr(int window);
};

using LossFn = std::function<double(std::span<const double>)>;

struct ZoEstimate {
  std::vector<double> gradient;
  int used = 0;
  int dropped = 0;
};

// Mean over directions u of (L(theta + delta u) - L(theta - delta u)) / (2 delta) * u.
// A direction whose evaluation throws is dropped; all dropped is an error.
ZoEstimate zo_gradient_along(const LossFn& loss, std::span<const double> theta,
                             std::span<const std::vector<double>> directions, double delta,
                             int threads = 1);

// Draws cfg.num_samples standard-normal directions, sample i from the stream
// (rng_seed, i).
ZoEstimate zo_gradient(const LossFn& loss, std::span<const double> theta, const ZoConfig& cfg,
                       std::uint64_t rng_seed);

struct TrainSetup {
  const HydraulicSolver* solver = nullptr;
  const DemandDataset* demand = nullptr;
  std::shared_ptr<const ForecastData> forecast_data;
  std::vector<int> days;  // episodes, visited in order every epoch
  int window = 0;
  PdaParams pda;
  RuleConfig rule;
};

struct HistoryRow {
  int epoch = 0;
  int day = 0;
  LossBreakdown loss;  // at the parameters before the update
  double grad_norm = 0.0;
  int dropped = 0;
};

struct TrainResult {
  PolicyParams params;
  std::vector<HistoryRow> history;
};

// Loss of `params` on one day with the oracle forecaster.
LossBreakdown day_loss(const TrainSetup& setup, const PolicyParams& params, int day,
                       const LossConfig& loss);

using EpochCallback = std::function<void(int epoch, const PolicyParams& params)>;

TrainResult train(const TrainSetup& setup, PolicyParams initial, const ZoConfig& zo,
                  const LossConfig& loss, const EpochCallback& on_epoch = {});

void write_history_csv(const std::string& path, const std::vector<HistoryRow>& history,
                       const std::string& metadata_json);

}  // namespace wdn
