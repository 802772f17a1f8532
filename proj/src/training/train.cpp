#include <cmath>
#include <fstream>
#include <stdexcept>

#include "wdn/format.hpp"
#include "wdn/rng.hpp"
#include "wdn/simd/kernels.hpp"
#include "wdn/training.hpp"

namespace wdn {

LossBreakdown day_loss(const TrainSetup& setup, const PolicyParams& params, int day,
                       const LossConfig& loss) {
  PolicyController controller(params, setup.rule);
  OracleForecaster forecaster(setup.forecast_data, setup.window);
  const EpisodeResult ep = simulate_episode(*setup.solver, *setup.demand, day * kHoursPerDay,
                                            kHoursPerDay, controller, forecaster, setup.pda);
  return episode_loss(ep, setup.solver->network(), loss);
}

TrainResult train(const TrainSetup& setup, PolicyParams initial, const ZoConfig& zo,
                  const LossConfig& loss, const EpochCallback& on_epoch) {
  zo.validate();
  loss.validate();
  if (!setup.solver || !setup.demand || !setup.forecast_data)
    throw std::invalid_argument("training setup is incomplete");
  const PolicyDims dims = initial.dims();
  if (dims != policy_dims(setup.solver->network(), setup.window, dims.hidden))
    throw std::invalid_argument("policy dimensions do not match the network and window");

  TrainResult out{std::move(initial), {}};
  const auto& k = simd::kernels();
  const double step = zo.step_size();
  for (int epoch = 0; epoch < zo.epochs; ++epoch) {
    for (int day : setup.days) {
      HistoryRow row;
      row.epoch = epoch;
      row.day = day;
      row.loss = day_loss(setup, out.params, day, loss);

      const LossFn fn = [&](std::span<const double> theta) {
        return day_loss(setup, PolicyParams::unflatten(dims, theta), day, loss).total;
      };
      const ZoEstimate g =
          zo_gradient(fn, out.params.flatten(), zo,
                      stream_seed({zo.seed, static_cast<std::uint64_t>(epoch),
                                   static_cast<std::uint64_t>(day)}));
      row.grad_norm = std::sqrt(k.dot(g.gradient, g.gradient));
      row.dropped = g.dropped;
      k.axpy(-step, g.gradient, out.params.mutable_theta());
      out.history.push_back(row);
    }
    if (on_epoch) on_epoch(epoch, out.params);
  }
  return out;
}

void write_history_csv(const std::string& path, const std::vector<HistoryRow>& history,
                       const std::string& metadata_json) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (!metadata_json.empty()) out << "# " << metadata_json << '\n';
  out << "epoch,day,loss,pressure_term,energy_term,max_barrier_term,min_barrier_term,"
         "surcharge_term,grad_norm,dropped_samples\n";
  for (const auto& r : history)
    out << r.epoch << ',' << r.day << ',' << format_number(r.loss.total) << ','
        << format_number(r.loss.pressure) << ',' << format_number(r.loss.energy) << ','
        << format_number(r.loss.max_barrier) << ',' << format_number(r.loss.min_barrier) << ','
        << format_number(r.loss.surcharge) << ',' << format_number(r.grad_norm) << ','
        << r.dropped << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace wdn
