#include <doctest.h>

#include <iostream>
#include <sstream>

#include <json.hpp>

#include "support.hpp"
#include "wdn/cli.hpp"
#include "wdn/controller.hpp"

using namespace wdn;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

// Runs the CLI in-process with stdout and stderr captured.
Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  auto* old_out = std::cout.rdbuf(out.rdbuf());
  auto* old_err = std::cerr.rdbuf(err.rdbuf());
  Run r;
  r.code = run_cli(args);
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// Data rows: lines that are neither the header nor a metadata comment.
std::size_t data_rows(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.starts_with("#")) continue;
    if (header) {
      header = false;
      continue;
    }
    ++n;
  }
  return n;
}

nlohmann::json without_metadata(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  j.erase("metadata");
  return j;
}

// One generated dataset shared by the tests below.
const fs::path& dataset_dir() {
  static const fs::path dir = [] {
    auto d = test::scratch_dir("cli-data");
    REQUIRE(cli({"gen-data", "--net", "mininet", "--seed", "1", "--out", d.string()}).code == 0);
    return d;
  }();
  return dir;
}

std::string demands() { return (dataset_dir() / "demands.csv").string(); }

}  // namespace

TEST_CASE("gen-data") {
  const std::string csv = test::slurp(dataset_dir() / "demands.csv");
  CHECK(data_rows(csv) == 8u * 2952u);
  CHECK(data_rows("header\n" + test::slurp(dataset_dir() / "events.jsonl")) == 2u * 2952u);

  const auto again = test::scratch_dir("cli-data-again");
  const Run r = cli({"gen-data", "--net", "mininet", "--seed", "1", "--out", again.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("23616 rows") != std::string::npos);
  CHECK(test::slurp(again / "demands.csv") == csv);
  CHECK(test::slurp(again / "events.jsonl") == test::slurp(dataset_dir() / "events.jsonl"));

  CHECK(cli({"gen-data", "--seed", "1", "--out", again.string()}).code != 0);
  CHECK(cli({"gen-data", "--net", "missing.inp", "--out", again.string()}).code != 0);
  CHECK(cli({}).code != 0);
}

TEST_CASE("gen-data from an INP file matches the built-in network") {
  const auto dir = test::scratch_dir("cli-inp");
  {
    std::ofstream(dir / "mininet.inp") << write_inp(build_mininet());
  }
  const Run r = cli({"gen-data", "--net", (dir / "mininet.inp").string(), "--days", "2", "--out",
                     (dir / "a").string()});
  CHECK(r.code == 0);
  CHECK(cli({"gen-data", "--net", "mininet", "--days", "2", "--out", (dir / "b").string()}).code ==
        0);
  const auto a = test::slurp(dir / "a" / "demands.csv");
  const auto b = test::slurp(dir / "b" / "demands.csv");
  // Only the metadata line (which names the network) differs.
  CHECK(a.substr(a.find('\n')) == b.substr(b.find('\n')));
}

TEST_CASE("simulate") {
  const auto dir = test::scratch_dir("cli-sim");
  const std::vector<std::string> args = {"simulate", "--net", "mininet", "--demands", demands(),
                                         "--hours", "24", "--out", (dir / "a").string()};
  const Run r = cli(args);
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(test::slurp(dir / "a" / "metrics.json"));
  for (const char* key : {"p_mse", "max_viol_rate", "min_viol_rate", "energy_kwh_per_hour"})
    CHECK(doc.at(key).is_number());
  CHECK(doc.at("hours") == 24);
  CHECK(doc.at("nonconverged_steps") == 0);
  CHECK(doc.at("metadata").contains("timestamp"));
  CHECK(doc.at("episodes").size() == 1);
  CHECK(doc.at("episodes")[0].at("first_hour") == 86 * 24);
  CHECK(data_rows(test::slurp(dir / "a" / "trace_nodes.csv")) == 8u * 24u);
  CHECK(data_rows(test::slurp(dir / "a" / "trace_pumps.csv")) == 2u * 24u);

  auto rerun = args;
  rerun.back() = (dir / "b").string();
  REQUIRE(cli(rerun).code == 0);
  CHECK(without_metadata(test::slurp(dir / "a" / "metrics.json")) ==
        without_metadata(test::slurp(dir / "b" / "metrics.json")));
  for (const char* f : {"trace_nodes.csv", "trace_pumps.csv"})
    CHECK(test::slurp(dir / "a" / f) == test::slurp(dir / "b" / f));

  SUBCASE("flag conflicts are usage errors") {
    auto bad = args;
    bad.insert(bad.end(), {"--forecaster", "none", "--window", "2"});
    const Run u = cli(bad);
    CHECK(u.code == 2);
    CHECK(u.err.find("--window 0") != std::string::npos);
    auto odd = args;
    odd.insert(odd.end(), {"--window", "3"});
    CHECK(cli(odd).code != 0);
    auto policy = args;
    policy.insert(policy.end(), {"--controller", "policy@"});
    CHECK(cli(policy).code == 2);
  }
  SUBCASE("llm forecaster without a key or endpoint") {
    auto llm = args;
    llm.insert(llm.end(), {"--forecaster", "llm", "--window", "2", "--events",
                           (dataset_dir() / "events.jsonl").string()});
    if (!std::getenv("WDN_LLM_API_KEY")) CHECK(cli(llm).code == 2);
  }
}

TEST_CASE("train and compare") {
  const auto dir = test::scratch_dir("cli-train");
  const std::string ckpt = (dir / "w6.json").string();
  const Run r = cli({"train", "--net", "mininet", "--demands", demands(), "--window", "6",
                     "--epochs", "1", "--train-days", "2", "--samples", "2", "--out-checkpoint",
                     ckpt});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("lr 0.0005 (default for window 6)") != std::string::npos);
  CHECK(data_rows(test::slurp(ckpt + ".history.csv")) == 2);
  const CheckpointInfo info = load_checkpoint(ckpt);
  CHECK(info.window == 6);
  CHECK(nlohmann::json::parse(info.config_json).at("lr") == 5e-4);

  SUBCASE("zero epochs writes the initialization") {
    const std::string zero = (dir / "zero.json").string();
    REQUIRE(cli({"train", "--net", "mininet", "--demands", demands(), "--epochs", "0", "--seed",
                 "4", "--out-checkpoint", zero})
                .code == 0);
    const Network net = build_mininet();
    CHECK(load_checkpoint(zero).params == init_policy(policy_dims(net, 0), 4));
    CHECK(data_rows(test::slurp(zero + ".history.csv")) == 0);
  }
  SUBCASE("epoch checkpoints and history row count") {
    const std::string two = (dir / "two.json").string();
    REQUIRE(cli({"train", "--net", "mininet", "--demands", demands(), "--epochs", "2",
                 "--train-days", "3", "--samples", "2", "--epoch-checkpoints",
                 "--out-checkpoint", two})
                .code == 0);
    CHECK(data_rows(test::slurp(two + ".history.csv")) == 6);
    CHECK(fs::exists(two + ".epoch1"));
    CHECK(load_checkpoint(two + ".epoch2").params == load_checkpoint(two).params);
  }
  SUBCASE("rule only gives a single row") {
    const auto out = dir / "cmp-rule";
    REQUIRE(cli({"compare", "--net", "mininet", "--demands", demands(), "--hours", "24", "--out",
                 out.string()})
                .code == 0);
    CHECK(data_rows(test::slurp(out / "comparison.csv")) == 1);
    const std::string table = test::slurp(out / "comparison.txt");
    CHECK(table.starts_with("Method"));
    CHECK(table.find("P-MSE") < table.find("Max Viol."));
    CHECK(table.find("Min Viol.") < table.find("Energy"));
  }
  SUBCASE("rule and policy share the test episodes") {
    const auto out = dir / "cmp-both";
    const Run c = cli({"compare", "--net", "mininet", "--demands", demands(), "--hours", "24",
                       "--checkpoints", ckpt, "--out", out.string()});
    REQUIRE(c.code == 0);
    CHECK(data_rows(test::slurp(out / "comparison.csv")) == 2);
    CHECK(test::slurp(out / "comparison.csv").find("policy-W6-oracle:w6.json") !=
          std::string::npos);
    // Both methods log the same demand hash.
    const auto first = c.err.find("demand hash ");
    REQUIRE(first != std::string::npos);
    const std::string hash = c.err.substr(first + 12, 16);
    CHECK(c.err.find("demand hash " + hash, first + 1) != std::string::npos);
  }
  SUBCASE("policy simulate checks the window against the checkpoint") {
    const auto out = (dir / "sim").string();
    CHECK(cli({"simulate", "--net", "mininet", "--demands", demands(), "--hours", "24",
               "--controller", "policy@" + ckpt, "--forecaster", "oracle", "--out", out})
              .code == 0);
    CHECK(cli({"simulate", "--net", "mininet", "--demands", demands(), "--hours", "24",
               "--controller", "policy@" + ckpt, "--forecaster", "oracle", "--window", "2",
               "--out", out})
              .code == 2);
    CHECK(cli({"simulate", "--net", "mininet", "--demands", demands(), "--hours", "24",
               "--controller", "policy@" + ckpt, "--out", out})
              .code == 2);
  }
}

TEST_CASE("reruns produce identical files") {
  const auto dir = test::scratch_dir("cli-determinism");
  auto train_into = [&](const std::string& name) {
    const std::string path = (dir / name).string();
    REQUIRE(cli({"train", "--net", "mininet", "--demands", demands(), "--window", "2",
                 "--epochs", "1", "--train-days", "2", "--samples", "3", "--threads", "2",
                 "--seed", "5", "--out-checkpoint", path})
                .code == 0);
    return path;
  };
  const std::string a = train_into("a.json"), b = train_into("b.json");
  CHECK(test::slurp(a) == test::slurp(b));
  CHECK(test::slurp(a + ".history.csv") == test::slurp(b + ".history.csv"));
}
