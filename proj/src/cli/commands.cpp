#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "wdn/cli.hpp"
#include "wdn/format.hpp"
#include "wdn/metrics.hpp"
#include "wdn/training.hpp"

namespace wdn {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Thrown for flag combinations CLI11 cannot express; exits like a parse error.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NetFlags {
  std::string net;
  std::string flow_unit = "cms";
};

void add_net_flags(CLI::App* cmd, NetFlags& f) {
  cmd->add_option("--net", f.net, "INP-subset file, or 'mininet' for the built-in benchmark")
      ->required();
  cmd->add_option("--flow-unit", f.flow_unit, "flow unit of the INP file")
      ->check(CLI::IsMember({"cms", "gpm"}));
}

Network load_network(const NetFlags& f) {
  if (f.net == "mininet") return build_mininet();
  const FlowUnit unit =
      f.flow_unit == "gpm" ? FlowUnit::GallonsPerMinute : FlowUnit::CubicMetersPerSecond;
  ParsedNetwork parsed = load_inp_file(f.net, unit);
  for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << '\n';
  return std::move(parsed.network);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory " + dir + ": " + ec.message());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

json generator_json(const GeneratorConfig& c) {
  return {{"days", c.days},
          {"noise_sigma", c.noise_sigma},
          {"day_sigma", c.day_sigma},
          {"scale_min", c.scale_min},
          {"scale_max", c.scale_max}};
}

json metrics_json(const Metrics& m) {
  json per_node = json::object();
  for (const auto& [id, n] : m.per_node)
    per_node[id] = {{"p_mse", n.p_mse},
                    {"max_viol_rate", n.max_viol_rate},
                    {"min_viol_rate", n.min_viol_rate},
                    {"energy_kwh_per_hour", n.energy_kwh_per_hour},
                    {"node_hours", n.node_hours}};
  return {{"p_mse", m.p_mse},
          {"max_viol_rate", m.max_viol_rate},
          {"min_viol_rate", m.min_viol_rate},
          {"energy_kwh_per_hour", m.energy_kwh_per_hour},
          {"node_hours", m.node_hours},
          {"hours", m.hours},
          {"nonconverged_steps", m.nonconverged_steps},
          {"per_node", per_node}};
}

// ---- shared data loading ----------------------------------------------------

struct Inputs {
  Network net;
  DemandDataset dataset;
  std::shared_ptr<const ForecastData> data;
  std::vector<EventRecord> events;
  DatasetSplit split;
};

Inputs load_inputs(const NetFlags& nf, const std::string& demands, const std::string& events) {
  Network net = load_network(nf);
  auto [values, days] = read_demand_csv(demands, net);
  DemandDataset ds = dataset_from_values(net, GeneratorConfig::defaults(), std::move(values), days);
  std::vector<EventRecord> ev;
  if (!events.empty()) ev = read_events_jsonl(events);
  auto data = std::make_shared<const ForecastData>(ForecastData::from_dataset(ds, ev));
  const DatasetSplit split = split_dataset(ds);
  return Inputs{std::move(net), std::move(ds), std::move(data), std::move(ev), split};
}

struct LlmFlags {
  std::string base_url;
  std::string model = LlmClientConfig{}.model;
};

void add_llm_flags(CLI::App* cmd, LlmFlags& f) {
  cmd->add_option("--llm-base-url", f.base_url, "chat-completions base URL (e.g. a local stub)");
  cmd->add_option("--llm-model", f.model, "model name sent to the chat endpoint");
}

std::shared_ptr<ChatClient> make_chat_client(const LlmFlags& f) {
  LlmClientConfig cfg = LlmClientConfig::from_env();
  if (cfg.api_key.empty() && f.base_url.empty())
    throw UsageError(std::string("the llm forecaster needs ") + kApiKeyEnv +
                     " in the environment or --llm-base-url");
  if (!f.base_url.empty()) cfg.base_url = f.base_url;
  cfg.model = f.model;
  cfg.validate();
  return std::make_shared<ChatClient>(cfg);
}

std::vector<EventRecord> training_events(const Inputs& in) {
  std::vector<EventRecord> out;
  for (const auto& e : in.events)
    if (e.day < in.split.train_days) out.push_back(e);
  return out;
}

// Test-split episodes: whole days, the last one cut short when `hours` says so.
std::vector<std::pair<int, int>> test_episodes(const DatasetSplit& split, int hours) {
  const int available = split.test_days * kHoursPerDay;
  if (hours <= 0 || hours > available) hours = available;
  std::vector<std::pair<int, int>> eps;
  for (int done = 0; done < hours; done += kHoursPerDay)
    eps.emplace_back(split.first_test_day() * kHoursPerDay + done,
                     std::min(kHoursPerDay, hours - done));
  return eps;
}

struct ForecasterChoice {
  std::unique_ptr<Forecaster> forecaster;
  LlmForecaster* llm = nullptr;
};

ForecasterChoice make_forecaster(const std::string& kind, int window, const Inputs& in,
                                 const LlmFlags& llm, std::uint64_t seed) {
  ForecasterChoice c;
  if (kind == "none" || kind == "oracle") {
    c.forecaster = std::make_unique<OracleForecaster>(in.data, kind == "none" ? 0 : window);
  } else if (kind == "persistence") {
    c.forecaster = std::make_unique<PersistenceForecaster>(in.data, window);
  } else {
    if (in.events.empty()) throw UsageError("the llm forecaster needs --events");
    LlmForecasterOptions opt;
    opt.seed = seed;
    auto f = std::make_unique<LlmForecaster>(in.data, make_chat_client(llm), training_events(in),
                                             window, opt);
    c.llm = f.get();
    c.forecaster = std::move(f);
  }
  return c;
}

std::vector<EpisodeResult> run_episodes(const Inputs& in, const HydraulicSolver& solver,
                                        Controller& controller, Forecaster& forecaster,
                                        const std::vector<std::pair<int, int>>& episodes) {
  std::vector<EpisodeResult> out;
  out.reserve(episodes.size());
  for (const auto& [first, hours] : episodes)
    out.push_back(simulate_episode(solver, in.dataset, first, hours, controller, forecaster,
                                   PdaParams{}));
  return out;
}

int resolve_window(std::optional<int> flag, const std::string& forecaster,
                   std::optional<int> policy_window) {
  if (forecaster == "none") {
    if (flag && *flag != 0) throw UsageError("--forecaster none requires --window 0");
    if (policy_window && *policy_window != 0)
      throw UsageError("policy was trained with window " + std::to_string(*policy_window) +
                       " and needs a forecaster");
    return 0;
  }
  const int w = flag ? *flag : policy_window.value_or(0);
  if (policy_window && *policy_window != w)
    throw UsageError("--window " + std::to_string(w) + " does not match the policy's window " +
                     std::to_string(*policy_window));
  return w;
}

const auto kWindowCheck = CLI::IsMember({0, 2, 4, 6});
const auto kForecasterCheck = CLI::IsMember({"none", "oracle", "persistence", "llm"});

// ---- gen-data ---------------------------------------------------------------

struct GenDataFlags {
  NetFlags net;
  std::uint64_t seed = 1;
  std::string out;
  int days = kDatasetDays;
  bool llm_events = false;
  LlmFlags llm;
};

int cmd_gen_data(const GenDataFlags& f) {
  const Network net = load_network(f.net);
  GeneratorConfig cfg = GeneratorConfig::defaults();
  cfg.days = f.days;
  const DemandDataset ds = generate_dataset(net, cfg, f.seed);
  const std::vector<int> levels = region_levels(ds, discretize(ds));

  std::vector<EventRecord> events;
  if (f.llm_events) {
    auto client = make_chat_client(f.llm);
    const std::string rules = default_level_rules();
    for (int r = 1; r <= ds.region_count(); ++r)
      for (int t = 0; t < ds.hours(); ++t)
        events.push_back(llm_event_text(
            *client, "generate/region-" + std::to_string(r), r, ds.region_archetype(r),
            t / kHoursPerDay, t % kHoursPerDay,
            levels[static_cast<std::size_t>(r - 1) * static_cast<std::size_t>(ds.hours()) +
                   static_cast<std::size_t>(t)],
            f.seed, rules));
  } else {
    events = render_events(ds, levels, f.seed);
  }

  ensure_dir(f.out);
  const json meta = {{"command", "gen-data"},
                     {"net", f.net.net},
                     {"seed", f.seed},
                     {"generator", generator_json(cfg)},
                     {"llm_events", f.llm_events}};
  const std::string csv = (fs::path(f.out) / "demands.csv").string();
  const std::string jsonl = (fs::path(f.out) / "events.jsonl").string();
  write_demand_csv(csv, ds, meta.dump());
  write_events_jsonl(jsonl, events);
  std::cout << csv << ": " << ds.values.size() << " rows\n";
  std::cout << jsonl << ": " << events.size() << " records\n";
  return 0;
}

// ---- simulate ---------------------------------------------------------------

struct SimulateFlags {
  NetFlags net;
  std::string demands;
  std::string events;
  std::string controller = "rule";
  std::string forecaster = "none";
  std::optional<int> window;
  int hours = 0;
  std::uint64_t seed = 1;
  std::string out;
  bool pool_all = false;
  LlmFlags llm;
};

struct ControllerChoice {
  std::unique_ptr<Controller> controller;
  std::optional<int> window;
  std::string checkpoint;
};

ControllerChoice parse_controller(const std::string& arg) {
  ControllerChoice c;
  if (arg == "rule") {
    c.controller = std::make_unique<RuleController>();
    return c;
  }
  if (arg.rfind("policy@", 0) != 0 || arg.size() == 7)
    throw UsageError("--controller must be 'rule' or 'policy@<checkpoint>'");
  c.checkpoint = arg.substr(7);
  CheckpointInfo info = load_checkpoint(c.checkpoint);
  c.window = info.window;
  c.controller = std::make_unique<PolicyController>(std::move(info.params));
  return c;
}

int cmd_simulate(const SimulateFlags& f) {
  ControllerChoice ctl = parse_controller(f.controller);
  const int window = resolve_window(f.window, f.forecaster, ctl.window);
  const Inputs in = load_inputs(f.net, f.demands, f.events);
  if (ctl.checkpoint.size()) {
    const auto* pc = static_cast<const PolicyController*>(ctl.controller.get());
    if (pc->params().dims() != policy_dims(in.net, window))
      throw std::runtime_error("checkpoint dimensions do not match the network");
  }
  ForecasterChoice fc = make_forecaster(f.forecaster, window, in, f.llm, f.seed);
  const HydraulicSolver solver(in.net);
  const auto eps = test_episodes(in.split, f.hours);
  const auto results = run_episodes(in, solver, *ctl.controller, *fc.forecaster, eps);

  LossConfig lc;
  lc.pool_all_junctions = f.pool_all;
  const Metrics m = compute_metrics(results, in.net, lc);

  const json config = {{"command", "simulate"},
                       {"net", f.net.net},
                       {"demands", f.demands},
                       {"events", f.events},
                       {"controller", f.controller},
                       {"forecaster", f.forecaster},
                       {"window", window},
                       {"hours", f.hours},
                       {"seed", f.seed},
                       {"pool_all_junctions", f.pool_all}};
  json doc = metrics_json(m);
  doc["metadata"] = {{"timestamp", utc_timestamp()}};
  doc["config"] = config;
  json episodes = json::array();
  for (const auto& [first, hours] : eps)
    episodes.push_back({{"first_hour", first},
                        {"hours", hours},
                        {"demand_hash", hex64(episode_demand_hash(in.dataset, first, hours))}});
  doc["episodes"] = episodes;
  if (fc.llm) {
    json fb = json::array();
    for (const auto& e : fc.llm->fallbacks())
      fb.push_back({{"issue_hour", e.issue_hour}, {"region", e.region}, {"reason", e.reason}});
    doc["llm"] = {{"calls", fc.llm->calls()}, {"fallbacks", fb}};
  }

  ensure_dir(f.out);
  write_text((fs::path(f.out) / "metrics.json").string(), doc.dump(2) + "\n");
  write_node_trace((fs::path(f.out) / "trace_nodes.csv").string(), in.net, results, config.dump());
  write_pump_trace((fs::path(f.out) / "trace_pumps.csv").string(), in.net, results, config.dump());
  if (m.nonconverged_steps > 0)
    std::cerr << "warning: " << m.nonconverged_steps << " non-converged steps\n";
  std::cout << std::setprecision(6) << "p_mse " << m.p_mse << "  max_viol " << m.max_viol_rate
            << "  min_viol " << m.min_viol_rate << "  energy_kwh_per_hour "
            << m.energy_kwh_per_hour << '\n';
  return 0;
}

// ---- train ------------------------------------------------------------------

struct TrainFlags {
  NetFlags net;
  std::string demands;
  int window = 0;
  std::optional<double> lr;
  double lr_scale = 1.0;
  int epochs = 10;
  int samples = 10;
  double delta = 0.05;
  std::uint64_t seed = 1;
  int threads = 1;
  int train_days = 0;
  std::string out_checkpoint;
  std::string history;
  bool epoch_checkpoints = false;
};

int cmd_train(const TrainFlags& f) {
  const Inputs in = load_inputs(f.net, f.demands, "");
  const HydraulicSolver solver(in.net);

  ZoConfig zo;
  zo.num_samples = f.samples;
  zo.delta = f.delta;
  zo.epochs = f.epochs;
  zo.lr = f.lr ? *f.lr : ZoConfig::default_lr(f.window);
  zo.lr_scale = f.lr_scale;
  zo.seed = f.seed;
  zo.threads = f.threads;
  zo.validate();
  std::cerr << "lr " << zo.lr << (f.lr ? " (from --lr)" : " (default for window " +
                                                             std::to_string(f.window) + ")")
            << ", step " << zo.step_size() << '\n';

  TrainSetup setup;
  setup.solver = &solver;
  setup.demand = &in.dataset;
  setup.forecast_data = in.data;
  setup.window = f.window;
  const int days = f.train_days > 0 ? std::min(f.train_days, in.split.train_days)
                                    : in.split.train_days;
  for (int d = 0; d < days; ++d) setup.days.push_back(d);

  const json config = {{"command", "train"},
                       {"net", f.net.net},
                       {"demands", f.demands},
                       {"window", f.window},
                       {"lr", zo.lr},
                       {"lr_scale", zo.lr_scale},
                       {"epochs", zo.epochs},
                       {"samples", zo.num_samples},
                       {"delta", zo.delta},
                       {"seed", zo.seed},
                       {"train_days", days}};

  const PolicyParams initial = init_policy(policy_dims(in.net, f.window), f.seed);
  const LossConfig lc;
  auto save = [&](const std::string& path, const PolicyParams& p) {
    save_checkpoint(path, CheckpointInfo{p, f.window, f.seed, config.dump()});
  };
  const TrainResult result = train(setup, initial, zo, lc, [&](int epoch, const PolicyParams& p) {
    std::cerr << "epoch " << epoch + 1 << "/" << zo.epochs;
    if (f.epoch_checkpoints) {
      const std::string path = f.out_checkpoint + ".epoch" + std::to_string(epoch + 1);
      save(path, p);
      std::cerr << " -> " << path;
    }
    std::cerr << '\n';
  });

  save(f.out_checkpoint, result.params);
  const std::string history = f.history.empty() ? f.out_checkpoint + ".history.csv" : f.history;
  write_history_csv(history, result.history, config.dump());
  std::cout << "checkpoint " << f.out_checkpoint << "\nhistory " << history << " ("
            << result.history.size() << " rows)\n";
  return 0;
}

// ---- compare ----------------------------------------------------------------

struct CompareFlags {
  NetFlags net;
  std::string demands;
  std::string events;
  std::vector<std::string> checkpoints;
  std::string forecaster = "oracle";
  int hours = 0;
  std::uint64_t seed = 1;
  std::string out;
  bool pool_all = false;
  LlmFlags llm;
};

std::string format_row(const std::vector<std::string>& cells, const std::vector<std::size_t>& w) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::string c = cells[i];
    if (i == 0) c.resize(w[i], ' ');
    else c.insert(0, w[i] - std::min(w[i], c.size()), ' ');
    line += (i ? "  " : "") + c;
  }
  return line + '\n';
}

int cmd_compare(const CompareFlags& f) {
  const Inputs in = load_inputs(f.net, f.demands, f.events);
  const HydraulicSolver solver(in.net);
  const auto eps = test_episodes(in.split, f.hours);
  LossConfig lc;
  lc.pool_all_junctions = f.pool_all;

  std::uint64_t split_hash = 0xcbf29ce484222325ULL;
  for (const auto& [first, hours] : eps) {
    const std::uint64_t h = episode_demand_hash(in.dataset, first, hours);
    split_hash = (split_hash ^ h) * 0x100000001b3ULL;
  }

  struct Row {
    std::string method;
    Metrics m;
  };
  std::vector<Row> rows;
  auto evaluate = [&](const std::string& name, Controller& ctl, Forecaster& fc) {
    const auto results = run_episodes(in, solver, ctl, fc, eps);
    std::cerr << "method " << name << ": " << eps.size() << " test episodes, demand hash "
              << hex64(split_hash) << '\n';
    rows.push_back({name, compute_metrics(results, in.net, lc)});
  };

  {
    RuleController rule;
    OracleForecaster none(in.data, 0);
    evaluate("rule", rule, none);
  }
  for (const auto& path : f.checkpoints) {
    CheckpointInfo info = load_checkpoint(path);
    const int w = info.window;
    if (info.params.dims() != policy_dims(in.net, w))
      throw std::runtime_error(path + ": checkpoint dimensions do not match the network");
    const std::string kind = w == 0 ? "none" : f.forecaster;
    if (w > 0 && kind == "none") throw UsageError(path + " needs a forecaster (window " +
                                                  std::to_string(w) + ")");
    ForecasterChoice fc = make_forecaster(kind, w, in, f.llm, f.seed);
    PolicyController ctl(std::move(info.params));
    evaluate("policy-W" + std::to_string(w) + (w > 0 ? "-" + kind : "") + ":" +
                 fs::path(path).filename().string(),
             ctl, *fc.forecaster);
  }

  const json config = {{"command", "compare"},
                       {"net", f.net.net},
                       {"demands", f.demands},
                       {"checkpoints", f.checkpoints},
                       {"forecaster", f.forecaster},
                       {"hours", f.hours},
                       {"seed", f.seed},
                       {"pool_all_junctions", f.pool_all},
                       {"test_demand_hash", hex64(split_hash)}};

  std::ostringstream csv;
  csv << "# " << config.dump() << '\n'
      << "method,p_mse,max_viol_rate,min_viol_rate,energy_kwh_per_hour\n";
  const std::vector<std::string> header = {"Method", "P-MSE", "Max Viol.", "Min Viol.",
                                           "Energy (kWh/h)"};
  std::vector<std::vector<std::string>> cells = {header};
  for (const auto& r : rows) {
    csv << r.method << ',' << format_number(r.m.p_mse) << ',' << format_number(r.m.max_viol_rate)
        << ',' << format_number(r.m.min_viol_rate) << ','
        << format_number(r.m.energy_kwh_per_hour) << '\n';
    auto fixed = [](double v, int prec) {
      std::ostringstream os;
      os << std::fixed << std::setprecision(prec) << v;
      return os.str();
    };
    cells.push_back({r.method, fixed(r.m.p_mse, 5), fixed(r.m.max_viol_rate * 100.0, 2) + "%",
                     fixed(r.m.min_viol_rate * 100.0, 2) + "%",
                     fixed(r.m.energy_kwh_per_hour, 3)});
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : cells)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  std::string table;
  for (const auto& row : cells) table += format_row(row, width);

  ensure_dir(f.out);
  write_text((fs::path(f.out) / "comparison.csv").string(), csv.str());
  write_text((fs::path(f.out) / "comparison.txt").string(), table);
  std::cout << table;
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Water distribution network control toolkit"};
  app.require_subcommand(1);

  GenDataFlags gen;
  auto* g = app.add_subcommand("gen-data", "generate a synthetic demand dataset and events");
  add_net_flags(g, gen.net);
  g->add_option("--seed", gen.seed, "generator seed");
  g->add_option("--out", gen.out, "output directory")->required();
  g->add_option("--days", gen.days, "days to generate")->check(CLI::PositiveNumber);
  g->add_flag("--llm-events", gen.llm_events, "write event texts with the chat client");
  add_llm_flags(g, gen.llm);

  SimulateFlags sim;
  auto* s = app.add_subcommand("simulate", "run a controller over the test split");
  add_net_flags(s, sim.net);
  s->add_option("--demands", sim.demands, "demand CSV")->required();
  s->add_option("--events", sim.events, "events JSONL (needed by the llm forecaster)");
  s->add_option("--controller", sim.controller, "rule | policy@<checkpoint>");
  s->add_option("--forecaster", sim.forecaster)->check(kForecasterCheck);
  s->add_option("--window", sim.window, "forecast window in hours")->check(kWindowCheck);
  s->add_option("--hours", sim.hours, "simulate only the first N test hours")
      ->check(CLI::PositiveNumber);
  s->add_option("--seed", sim.seed, "seed for in-context example selection");
  s->add_option("--out", sim.out, "output directory")->required();
  s->add_flag("--pool-all-junctions", sim.pool_all, "metrics over every junction");
  add_llm_flags(s, sim.llm);

  TrainFlags tr;
  auto* t = app.add_subcommand("train", "train a policy with the oracle forecaster");
  add_net_flags(t, tr.net);
  t->add_option("--demands", tr.demands, "demand CSV")->required();
  t->add_option("--window", tr.window, "forecast window in hours")->check(kWindowCheck);
  t->add_option("--lr", tr.lr, "learning rate (default depends on --window)")
      ->check(CLI::PositiveNumber);
  t->add_option("--lr-scale", tr.lr_scale, "multiplier on the learning rate")
      ->check(CLI::PositiveNumber);
  t->add_option("--epochs", tr.epochs)->check(CLI::NonNegativeNumber);
  t->add_option("--samples", tr.samples, "directions per gradient estimate")
      ->check(CLI::PositiveNumber);
  t->add_option("--delta", tr.delta, "perturbation scale")->check(CLI::PositiveNumber);
  t->add_option("--seed", tr.seed);
  t->add_option("--threads", tr.threads)->check(CLI::PositiveNumber);
  t->add_option("--train-days", tr.train_days, "use only the first N training days")
      ->check(CLI::PositiveNumber);
  t->add_option("--out-checkpoint", tr.out_checkpoint)->required();
  t->add_option("--history", tr.history, "history CSV (default <checkpoint>.history.csv)");
  t->add_flag("--epoch-checkpoints", tr.epoch_checkpoints,
              "also write <checkpoint>.epochN after every epoch");

  CompareFlags cmp;
  auto* c = app.add_subcommand("compare", "evaluate rule and policies on the same test split");
  add_net_flags(c, cmp.net);
  c->add_option("--demands", cmp.demands, "demand CSV")->required();
  c->add_option("--events", cmp.events, "events JSONL (needed by the llm forecaster)");
  c->add_option("--checkpoints", cmp.checkpoints, "policy checkpoints");
  c->add_option("--forecaster", cmp.forecaster, "forecaster for policies with a window")
      ->check(kForecasterCheck);
  c->add_option("--hours", cmp.hours, "evaluate only the first N test hours")
      ->check(CLI::PositiveNumber);
  c->add_option("--seed", cmp.seed);
  c->add_option("--out", cmp.out, "output directory")->required();
  c->add_flag("--pool-all-junctions", cmp.pool_all, "metrics over every junction");
  add_llm_flags(c, cmp.llm);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (g->parsed()) return cmd_gen_data(gen);
    if (s->parsed()) return cmd_simulate(sim);
    if (t->parsed()) return cmd_train(tr);
    if (c->parsed()) return cmd_compare(cmp);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("wdn");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : storage) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace wdn
